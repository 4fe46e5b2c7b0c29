"""Drift of H and F under RK4 for the class representatives, as a function
of step size, plus a sweep over the l0 parameter mu.

    python3 scripts/conservation_study.py [--t 10] [--x0 1,2,3]
"""
import argparse
from fractions import Fraction

from lvaci import classify as cl
from lvaci import dynamics as dy
from lvaci.config import Tolerances, VerifyConfig

STEPS = (2e-3, 1e-3, 5e-4, 2.5e-4)
MUS = (Fraction(-1), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3))


def fmt(xs):
    return "(" + ", ".join(str(x) for x in xs) + ")"


def drift_row(s, x0, t_end):
    out = []
    for h in STEPS:
        try:
            out.append(dy.drift_report(s, dy.integrate(s, x0, t_end, h)))
        except dy.BlowUp:
            out.append(None)
    return out


def show(label, rows, tol):
    cells = []
    for r in rows:
        if r is None:
            cells.append(f"{'blowup':>9}")
        else:
            f = r.f_drift if r.f_drift is not None else float("nan")
            mark = "*" if not r.within(tol) else " "
            cells.append(f"{f:9.2e}{mark}")
    f = [r.f_drift for r in rows if r is not None and r.f_drift]
    ratios = " ".join(f"{p / q:5.1f}" for p, q in zip(f, f[1:]))
    print(f"{label:<28} {' '.join(cells)}   ratios {ratios}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t", type=float, default=VerifyConfig.t_end)
    ap.add_argument("--x0", default="1,2,3")
    args = ap.parse_args()
    x0 = tuple(float(v) for v in args.x0.split(","))
    tol = Tolerances().drift
    head = " ".join(f"h={h:<8.1e}" for h in STEPS)
    print(f"relative F drift on [0, {args.t}], '*' marks drift above {tol:.0e}")
    print(f"{'system':<28} {head}")
    for kind, s in cl.class_representatives().items():
        show(f"{kind} {fmt(s.triple)}", drift_row(s, x0, args.t), tol)
    print()
    for mu in MUS:
        s = cl.class_representatives(mu=mu)[cl.LZERO]
        show(f"l0 mu={mu} {fmt(s.triple)}", drift_row(s, x0, args.t), tol)


if __name__ == "__main__":
    main()
