from fractions import Fraction as F
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lvaci import balances as bl
from lvaci import classify as cl
from lvaci.lv_core import LVSystem

q = st.fractions(min_value=-9, max_value=9, max_denominator=9)
nonzero_q = q.filter(lambda v: v != 0)
systems = st.tuples(q, q, q).filter(any).map(lambda t: LVSystem(*t))
elements = st.builds(cl.GroupElement, st.sampled_from(list(cl.PERMUTATIONS.values())), nonzero_q)


def pap_t(sigma, s):
    """Independent route: conjugate A by the permutation matrix P[i][s(i)] = 1."""
    P = np.zeros((3, 3), dtype=object)
    for i, si in enumerate(sigma):
        P[i][si - 1] = 1
    A = np.array(s.matrix, dtype=object)
    B = P.dot(A).dot(P.T)
    return (B[0][1], B[0][2], B[1][2])


TABLE = {
    "id": lambda a, b, c: (a, b, c),
    "(1 2)": lambda a, b, c: (-a, c, b),
    "(1 3)": lambda a, b, c: (-c, -b, -a),
    "(2 3)": lambda a, b, c: (b, a, -c),
    "(1 2 3)": lambda a, b, c: (c, -a, -b),
    "(1 3 2)": lambda a, b, c: (-b, -c, a),
}


@given(systems)
def test_action_table_matches_conjugation(s):
    for name, sigma in cl.PERMUTATIONS.items():
        img = cl.apply_group(cl.GroupElement(sigma), s).triple
        assert img == pap_t(sigma, s) == TABLE[name](*s.triple)


@given(elements, elements, systems)
def test_action_is_compatible_with_compose(g1, g2, s):
    assert cl.apply_group(cl.compose(g1, g2), s) == cl.apply_group(g1, cl.apply_group(g2, s))
    assert cl.apply_group(cl.inverse(g1), cl.apply_group(g1, s)) == s
    assert cl.apply_group(g1.then(g2), s) == cl.apply_group(g2, cl.apply_group(g1, s))


@given(elements, systems)
def test_casimir_degree_transforms_with_sign_of_permutation(g, s):
    odd = g.cycle in ("(1 2)", "(1 3)", "(2 3)")
    img = cl.apply_group(g, s)
    d, d2 = s.a - s.b + s.c, img.a - img.b + img.c
    assert d2 == (-d if odd else d) / g.scale


def test_apply_group_examples():
    assert cl.apply_group(cl.GroupElement.named("(1 3 2)"), LVSystem(3, -1, 2)) == LVSystem(1, -2, 3)
    assert cl.apply_group(cl.GroupElement.named("id", 2), LVSystem(2, 0, 2)) == LVSystem(1, 0, 1)
    g = cl.GroupElement.named("(2 3)")
    s = LVSystem(F(2, 3), -5, 7)
    assert cl.apply_group(g, cl.apply_group(g, s)) == s
    with pytest.raises(cl.ZeroScale):
        cl.apply_group(cl.GroupElement((1, 2, 3), 0), s)
    with pytest.raises(ValueError):
        cl.GroupElement((1, 1, 2))


def test_normalize_examples():
    # lexicographic minimum of the scaled images (1,0,1), (1,-1,0), (0,1,-1)
    assert cl.normalize(LVSystem(2, 0, 2))[0] == LVSystem(0, 1, -1)
    assert cl.is_isomorphic(LVSystem(2, 0, 2), LVSystem(1, 0, 1))
    assert cl.is_isomorphic(LVSystem(3, -1, 2), LVSystem(1, -2, 3))
    assert cl.is_isomorphic(LVSystem(-1, 1, -1), LVSystem(1, -1, 1))
    assert not cl.is_isomorphic(LVSystem(1, 0, 1), LVSystem(1, -1, 1))


@given(systems)
def test_normalize_witness_and_canonicity(s):
    rep, g = cl.normalize(s)
    assert cl.apply_group(g, s) == rep
    for _, img in cl.permutation_images(s):
        assert cl.normalize(img.scaled(3))[0] == rep
    assert rep.triple == min(cl.orbit(s))


def test_lemma_examples():
    assert cl.lemma1_solutions(6) == {(1, k) for k in range(1, 7)} | {(2, 3), (2, 4), (2, 6), (3, 3), (3, 6), (4, 4)}
    assert not cl.lemma1_holds(2, 5)
    assert not cl.lemma1_holds(2, 2)
    assert cl.lemma2_solutions(5) == {(k, 1) for k in range(1, 6)} | {(k, k) for k in range(2, 6)}
    assert not cl.lemma2_holds(3, 2)
    assert cl.lemma2_holds(4, 4)
    assert cl.lemma1_solutions(1) == {(1, 1)} == cl.lemma2_solutions(1)
    with pytest.raises(ValueError):
        cl.lemma1_solutions(0)


def test_lemmas_to_200():
    assert cl.lemma1_solutions(200) == cl.lemma1_closed_form(200)
    assert cl.lemma2_solutions(200) == cl.lemma2_closed_form(200)


def test_family_from_exponents():
    fam = cl.family_from_exponents(2, 6)
    assert fam.k3 == 3
    assert cl.is_isomorphic(fam.at(1), LVSystem(1, -2, 3))
    fam = cl.family_from_exponents(2, 2)
    assert fam.k3 is None and fam.at(5) == LVSystem(5, 0, 5)
    with pytest.raises(cl.NonIntegralK3):
        cl.family_from_exponents(3, 4)
    assert cl.family_from_exponents(1, 1).k3 == -1
    with pytest.raises(ValueError):
        cl.family_from_exponents(0, 3)


@pytest.mark.parametrize("k1, k2", [(x, y) for x, y in product(range(1, 8), repeat=2) if x * y - x - y != 0])
def test_family_exponents_are_realized(k1, k2):
    try:
        fam = cl.family_from_exponents(k1, k2)
    except cl.NonIntegralK3:
        return
    s = fam.at(1)
    got = {c.label: bl.component_spectrum(s, c).exponents for c in bl.nontrivial_components(s)}
    assert got["x12"] == tuple(sorted((-1, 1, k1)))
    assert got["x23"] == tuple(sorted((-1, 1, k2)))
    assert got["x13"] == tuple(sorted((-1, 1, fam.k3)))


def test_classify_examples():
    assert cl.classify(LVSystem(1, -1, 1)).kind == cl.L3
    lab = cl.classify(LVSystem(5, 5, -15))
    assert (lab.kind, lab.lam) == (cl.LLAMBDA, -3)
    lab = cl.classify(LVSystem(1, 3, 2))
    assert (lab.kind, lab.mu) == (cl.LZERO, 2)
    assert cl.classify(LVSystem(2, 3, 7)).kind == cl.NOT_ACI
    assert cl.classify(LVSystem(1, 0, 0)).kind == cl.DEGENERATE


def test_witness_reproduces_representative():
    for triple in [(3, -1, 2), (-2, 0, -2), (1, -2, 1), (5, 5, -15), (2, 6, 4), (1, 1, 0), (-1, 1, -1)]:
        lab = cl.classify(LVSystem(*triple))
        assert cl.apply_group(lab.witness, LVSystem(*triple)) == lab.representative


def test_mu_zero_boundary_flag():
    lab = cl.classify(LVSystem(1, 1, 0))
    assert lab.kind == cl.LZERO and lab.mu == -1
    assert any("mu = 0" in n for n in lab.notes)
    assert lab.mu_orbit == (-1,)


def test_mu_orbit_members():
    lab = cl.classify(LVSystem(1, 3, 2))
    mu = F(2)
    assert set(lab.mu_orbit) == {mu, -1 - mu, 1 / mu, -mu / (1 + mu), -(1 + mu) / mu, -1 / (1 + mu)}


@given(systems, elements)
def test_classification_is_orbit_invariant(s, g):
    a, b = cl.classify(s), cl.classify(cl.apply_group(g, s))
    assert a.invariant_key() == b.invariant_key()
    ea = sorted(bl.component_spectrum(s, c).exponents for c in bl.nontrivial_components(s))
    img = cl.apply_group(g, s)
    eb = sorted(bl.component_spectrum(img, c).exponents for c in bl.nontrivial_components(img))
    assert ea == eb


def test_lambda_sign_symmetry():
    assert cl.is_isomorphic(LVSystem(1, 1, 4), LVSystem(1, 1, -4))
    assert cl.classify(LVSystem(1, 1, -4)).canonical_param == 4


def test_no_lambda_coincides_with_exceptional_classes():
    reps = {k: cl.normalize(LVSystem(*v))[0] for k, v in cl.EXCEPTIONAL.items()}
    for lam in [l for l in range(-12, 13) if l]:
        assert cl.normalize(LVSystem(1, 1, lam))[0] not in reps.values()


def test_casimir_degree_separates_classes():
    # integer-normalized degree of x1^c x2^-b x3^a
    def degree(s):
        e = [s.c, -s.b, s.a]
        den = 1
        for v in e:
            den = den * v.denominator
        e = [v * den for v in e]
        from math import gcd

        g = 0
        for v in e:
            g = gcd(g, int(v))
        return abs(sum(e) / g)

    reps = cl.class_representatives(lam=5)
    degs = {k: degree(s) for k, s in reps.items()}
    assert degs == {cl.L2: 2, cl.L3: 3, cl.L4: 4, cl.L6: 6, cl.LLAMBDA: 5, cl.LZERO: 0}


def test_degree_relation_check():
    assert cl.degree_relation_check([1, 3], 3) == (0, 1)
    assert cl.degree_relation_check([1, 2], 2) in {(0, 1), (2, 0)}
    assert cl.degree_relation_check([1, 1], 0) == (0, 0)
    assert cl.degree_relation_check([4], 3) is None
    with pytest.raises(ValueError):
        cl.degree_relation_check([1], -1)


def test_integer_box_size():
    assert sum(1 for _ in cl.integer_box(1)) == 26
