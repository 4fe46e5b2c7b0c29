"""Command-line entry point: ``lvaci {analyze,scan,verify,lemmas,normalize}``.

Exit codes
    0  success (analyze: the system is a.c.i.)
    1  a check failed (scan disagreement, verify threshold, lemma mismatch)
    2  argument parse error
    3  analyze: not a.c.i.
    4  analyze: degenerate system (a decoupled species)
    5  verify: blow-up inside the integration window
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from collections import Counter
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import classify as cl
from .config import ScanConfig, VerifyConfig
from .balances import LINE, indicial_locus, integrality_report
from .dynamics import (
    KM_PERIODIC,
    BlowUp,
    closed_form_constants,
    closed_form_solution,
    drift_report,
    h3_km,
    integrate,
    invariant_drift,
    laurent_vs_numeric,
    lax_residual_km,
)
from .exactmath import fmt, fmt_vec
from .laurent import aci_test, expand
from .lv_core import LVSystem, casimir_degree

log = logging.getLogger("lvaci")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NOT_ACI, EXIT_DEGENERATE, EXIT_BLOWUP = 0, 1, 2, 3, 4, 5



class UsageError(Exception):
    pass


def parse_rational(text: str) -> Fraction:
    try:
        if any(ch in text for ch in ".eE") and "/" not in text:
            raise ValueError
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse {text!r} as a rational (use an integer or p/q)") from None


def parse_system(a: str, b: str, c: str) -> LVSystem:
    try:
        return LVSystem(parse_rational(a), parse_rational(b), parse_rational(c))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(text: str, out: Optional[str] = None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# analyze
# --------------------------------------------------------------------------

def analyze_report(s: LVSystem, order: Optional[int] = None) -> dict:
    comps = indicial_locus(s)
    integ = integrality_report(s)
    label = cl.classify(s)
    verdict = aci_test(s, order)
    rep, g = cl.normalize(s)
    agree = None if label.kind == cl.DEGENERATE else (label.is_aci == verdict.is_aci)
    return {
        "input": fmt_vec(s.triple),
        "casimir_degree": fmt(casimir_degree(s)),
        "indicial_locus": [
            {
                "kind": c.kind,
                "label": c.label,
                "point": fmt_vec(c.point.coords),
                "direction": None if c.direction is None else fmt_vec(c.direction),
            }
            for c in comps
        ],
        "spectra": [
            {
                "component": comp.label,
                "point": fmt_vec(sp.point.coords),
                "exponents": [fmt(r) for r in sp.exponents],
                "all_rational": sp.all_rational,
                "all_integer": sp.all_integer,
            }
            for comp, sp in integ.spectra
        ],
        "integrality": {
            "all_integer": integ.all_integer,
            "offending": sorted({fmt(r) for _, r in integ.offending() if r is not None}),
            "line_spectrum_constant": integ.line_constant,
        },
        "balances": verdict.report,
        "aci": {
            "is_aci": verdict.is_aci,
            "free_param_total": verdict.free_param_total,
            "witness": None if verdict.witness is None else verdict.witness.component.label,
            "reason": verdict.reason,
        },
        "class": label.to_dict(),
        "normal_form": {"representative": fmt_vec(rep.triple), "sigma": g.cycle, "scale": fmt(g.scale)},
        "classifier_agrees": agree,
    }


def _analyze_text(r: dict) -> str:
    lines = [f"system (a, b, c) = ({', '.join(r['input'])})", f"casimir degree a-b+c = {r['casimir_degree']}"]
    for sp in r["spectra"]:
        lines.append(f"  {sp['component']:>6} at ({', '.join(sp['point'])}): exponents {', '.join(sp['exponents'])}")
    if not r["integrality"]["all_integer"]:
        lines.append(f"  non-integer exponents: {', '.join(r['integrality']['offending'])}")
    for b in r["balances"]:
        steps = ", ".join(f"{p['name']}@{p['step']}" for p in b["free_parameters"]) or "none"
        obs = f", obstructed at step {b['obstructed_at']}" if b["obstructed_at"] is not None else ""
        lines.append(f"  balance {b['component']}: {b['free_param_total']} free parameter(s) [{steps}]{obs}")
    lines.append(f"class: {r['class']['name']}")
    lines.append(f"a.c.i.: {'yes' if r['aci']['is_aci'] else 'no'} ({r['aci']['reason']})")
    for note in r["class"]["notes"]:
        lines.append(f"note: {note}")
    if r["classifier_agrees"] is False:
        lines.append("WARNING: classifier and Laurent test disagree")
    return "\n".join(lines) + "\n"


def cmd_analyze(args) -> int:
    s = parse_system(args.a, args.b, args.c)
    r = analyze_report(s, args.order)
    _emit(dumps(r) if args.json else _analyze_text(r))
    if r["class"]["kind"] == cl.DEGENERATE:
        return EXIT_DEGENERATE
    return EXIT_OK if r["aci"]["is_aci"] else EXIT_NOT_ACI


# --------------------------------------------------------------------------
# scan
# --------------------------------------------------------------------------

def scan_orbit(rep: LVSystem) -> dict:
    label = cl.classify(rep)
    verdict = aci_test(rep)
    integ = integrality_report(rep)
    agree = True if label.kind == cl.DEGENERATE else (label.is_aci == verdict.is_aci)
    return {
        "representative": fmt_vec(rep.triple),
        "class": label.name,
        "class_representative": None if label.representative is None else fmt_vec(label.representative.triple),
        "kind": label.kind,
        "exponents": {comp.label: [fmt(r) for r in sp.exponents] for comp, sp in integ.spectra},
        "is_aci": verdict.is_aci,
        "free_param_total": verdict.free_param_total,
        "agree": agree,
    }


def scan(max_abs: int, jobs: int = 1) -> dict:
    reps = sorted({cl.normalize(s)[0] for s in cl.integer_box(max_abs)}, key=lambda s: s.triple)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as pool:
            rows = list(pool.map(scan_orbit, reps, chunksize=8))
    else:
        rows = [scan_orbit(r) for r in reps]
    hist = Counter(row["kind"] for row in rows)
    return {
        "max": max_abs,
        "orbits": len(rows),
        "histogram": dict(sorted(hist.items())),
        "disagreements": [row["representative"] for row in rows if not row["agree"]],
        "rows": rows,
    }


def _scan_text(res: dict) -> str:
    lines = [f"orbits of integer triples with |a|,|b|,|c| <= {res['max']}: {res['orbits']}"]
    for kind, n in res["histogram"].items():
        lines.append(f"  {kind:>10}: {n}")
    for row in res["rows"]:
        if row["kind"] != cl.NOT_ACI:
            rep = row["class_representative"]
            via = f"  ~ ({', '.join(rep)})" if rep and rep != row["representative"] else ""
            lines.append(f"  ({', '.join(row['representative'])})  {row['class']}{via}")
    if res["disagreements"]:
        lines.append("DISAGREEMENTS: " + "; ".join(str(d) for d in res["disagreements"]))
    return "\n".join(lines) + "\n"


def cmd_scan(args) -> int:
    try:
        cfg = ScanConfig(args.max, args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = scan(cfg.max_abs, cfg.jobs)
    text = dumps(res) if args.json else _scan_text(res)
    try:
        _emit(text, args.out)
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_FAIL if res["disagreements"] else EXIT_OK


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------

def verify_report(s: LVSystem, cfg: VerifyConfig = VerifyConfig()) -> dict:
    x0, tol = cfg.x0, cfg.tol
    traj = integrate(s, x0, cfg.t_end, cfg.h, ceiling=cfg.ceiling)
    drift = drift_report(s, traj)
    out: dict = {
        "input": fmt_vec(s.triple),
        "x0": list(map(float, x0)),
        "t": cfg.t_end,
        "h": cfg.h,
        "drift": drift.to_dict(),
        "checks": {"drift": drift.within(tol.drift)},
    }
    if s == KM_PERIODIC:
        rng = np.random.default_rng(0)
        lax_zero = all(
            all(v == 0 for row in lax_residual_km(tuple(Fraction(int(n), int(d)) for n, d in zip(nums, dens))) for v in row)
            for nums, dens in zip(rng.integers(-20, 21, (10, 3)), rng.integers(1, 10, (10, 3)))
        )
        h3 = invariant_drift(traj, h3_km)
        out["km"] = {"h3_drift": h3, "lax_residual_zero": lax_zero}
        out["checks"]["h3"] = h3 < tol.drift
        out["checks"]["lax"] = lax_zero
    if s.a - s.b + s.c == 0 and s.c != 0 and x0[2] != 0:
        a, c = float(s.a), float(s.c)
        k, C1, C2 = closed_form_constants(a, c, x0)
        errs = []
        for t, x in zip(traj.times, traj.states):
            ref = np.array(closed_form_solution(a, c, k, C1, C2, float(t)))
            errs.append(float(np.max(np.abs(x - ref)) / max(float(np.max(np.abs(ref))), 1e-300)))
        out["closed_form"] = {"k": k, "C1": C1, "C2": C2, "max_relative_error": max(errs)}
        out["checks"]["closed_form"] = max(errs) < tol.closed_form
    verdict = aci_test(s)
    if verdict.is_aci:
        bal = expand(s, verdict.witness.component, max(cfg.laurent_order, verdict.witness.truncation_order))
        err = laurent_vs_numeric(s, bal, cfg.laurent_offsets)
        out["laurent"] = {"component": bal.component.label, "order": bal.truncation_order, "relative_error": err}
        out["checks"]["laurent"] = err < tol.laurent
    out["ok"] = all(out["checks"].values())
    return out


def _parse_x0(text: str) -> tuple[float, float, float]:
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"cannot parse --x0 {text!r}") from None
    if len(vals) != 3 or not all(np.isfinite(vals)):
        raise UsageError("--x0 needs three finite numbers")
    return vals


def cmd_verify(args) -> int:
    s = parse_system(args.a, args.b, args.c)
    x0 = _parse_x0(args.x0)
    if not (np.isfinite(args.t) and np.isfinite(args.h)) or args.t <= 0 or args.h <= 0:
        raise UsageError("--t and --h must be positive and finite")
    try:
        r = verify_report(s, VerifyConfig(x0=x0, t_end=args.t, h=args.h))
    except BlowUp as exc:
        r = {"input": fmt_vec(s.triple), "blowup_time": exc.t_last, "ok": False}
        _emit(dumps(r) if args.json else f"blow-up after t = {exc.t_last:.6g}\n")
        return EXIT_BLOWUP
    if args.json:
        _emit(dumps(r))
    else:
        f = r["drift"]["f_drift"]
        f_txt = f"{f:.3e}" if f is not None else "n/a (left the positive octant)"
        lines = [f"H drift {r['drift']['h_drift']:.3e}, F drift {f_txt}"]
        for key in ("km", "closed_form", "laurent"):
            if key in r:
                body = ", ".join(f"{k} {v:.3e}" if isinstance(v, float) else f"{k} {v}" for k, v in r[key].items())
                lines.append(f"{key}: {body}")
        failed = [k for k, v in r["checks"].items() if not v]
        lines.append("all checks passed" if r["ok"] else "failed: " + ", ".join(failed))
        _emit("\n".join(lines) + "\n")
    return EXIT_OK if r["ok"] else EXIT_FAIL


# --------------------------------------------------------------------------
# lemmas, normalize
# --------------------------------------------------------------------------

def cmd_lemmas(args) -> int:
    if args.bound < 1:
        raise UsageError("--bound must be at least 1")
    l1, l2 = cl.lemma1_solutions(args.bound), cl.lemma2_solutions(args.bound)
    ok1 = l1 == cl.lemma1_closed_form(args.bound)
    ok2 = l2 == cl.lemma2_closed_form(args.bound)
    res = {
        "bound": args.bound,
        "lemma1": sorted(list(p) for p in l1),
        "lemma2": sorted(list(p) for p in l2),
        "lemma1_matches": ok1,
        "lemma2_matches": ok2,
    }
    if args.json:
        _emit(dumps(res))
    else:
        _emit(
            f"lemma 1 (x+y)/(xy-x-y): {sorted(l1)}\n  closed form {'matches' if ok1 else 'MISMATCH'}\n"
            f"lemma 2 (x-y)/(xy+y-x): {sorted(l2)}\n  closed form {'matches' if ok2 else 'MISMATCH'}\n"
        )
    return EXIT_OK if ok1 and ok2 else EXIT_FAIL


def cmd_normalize(args) -> int:
    s = parse_system(args.a, args.b, args.c)
    rep, g = cl.normalize(s)
    res = {"input": fmt_vec(s.triple), "representative": fmt_vec(rep.triple), "sigma": g.cycle, "scale": fmt(g.scale)}
    _emit(dumps(res) if args.json else f"({', '.join(res['representative'])})  via sigma={g.cycle}, scale={fmt(g.scale)}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lvaci", description="Algebraic integrability of 3D skew Lotka-Volterra systems.")
    sub = p.add_subparsers(dest="command", required=True)

    def triple(sp):
        for name in ("a", "b", "c"):
            sp.add_argument(name)

    sp = sub.add_parser("analyze", help="exact pipeline for one system")
    triple(sp)
    sp.add_argument("--order", type=int, default=None, help="Laurent truncation order")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("scan", help="classify every orbit of integer triples in a box")
    sp.add_argument("--max", type=int, default=ScanConfig.max_abs)
    sp.add_argument("--jobs", type=int, default=ScanConfig.jobs)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("verify", help="numeric conservation and series checks")
    triple(sp)
    sp.add_argument("--x0", default=",".join(str(int(v)) for v in VerifyConfig.x0))
    sp.add_argument("--t", type=float, default=VerifyConfig.t_end)
    sp.add_argument("--h", type=float, default=VerifyConfig.h)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("lemmas", help="brute-force the two Diophantine lemmas")
    sp.add_argument("--bound", type=int, default=200)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_lemmas)

    sp = sub.add_parser("normalize", help="canonical orbit representative")
    triple(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_normalize)

    # let "-1/2" through as a positional rather than an unknown option
    negative = re.compile(r"^-\d+(/\d+)?$|^-\d*\.\d+$")
    for parser in [p, *sub.choices.values()]:
        parser._negative_number_matcher = negative
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=os.environ.get("LV_LOG", "WARNING").upper(), format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    log.debug("command %s", args.command)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
