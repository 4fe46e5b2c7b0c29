"""Print every a.c.i. class representative with its exponents and balance data.

    python3 scripts/class_table.py [--lam 2] [--mu 1]
"""
import argparse

from lvaci import balances as bl
from lvaci import classify as cl
from lvaci import laurent as lr
from lvaci.exactmath import to_fraction


def fmt(xs):
    return "(" + ", ".join(str(x) for x in xs) + ")"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lam", type=int, default=2)
    ap.add_argument("--mu", default="1")
    args = ap.parse_args()
    reps = cl.class_representatives(args.lam, to_fraction(args.mu))
    print(f"{'class':<10} {'system':<16} {'component':<10} {'exponents':<16} steps  free")
    for kind, s in reps.items():
        for comp in bl.nontrivial_components(s):
            sp = bl.component_spectrum(s, comp)
            bal = lr.expand(s, comp)
            steps = fmt(bal.free_steps) if bal.unobstructed else "obstructed"
            print(f"{kind:<10} {fmt(s.triple):<16} {comp.label:<10} {fmt(sp.exponents):<16} {steps:<6} {bal.free_param_total}")


if __name__ == "__main__":
    main()
