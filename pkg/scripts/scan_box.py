"""Classify every integer system in a box, up to isomorphism, and compare
the Kowalevski-Painleve verdict with the class list.

    python3 scripts/scan_box.py --max 6 --jobs 4 --out scan.json
"""
import argparse
import sys
import time

from lvaci.cli import dumps, scan
from lvaci.config import ScanConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max", type=int, default=ScanConfig.max_abs)
    ap.add_argument("--jobs", type=int, default=ScanConfig.jobs)
    ap.add_argument("--out")
    args = ap.parse_args()
    cfg = ScanConfig(args.max, args.jobs)
    start = time.perf_counter()
    res = scan(cfg.max_abs, cfg.jobs)
    elapsed = time.perf_counter() - start
    print(f"box |a|,|b|,|c| <= {cfg.max_abs}: {res['orbits']} orbits in {elapsed:.1f} s")
    for kind, n in sorted(res["histogram"].items()):
        print(f"  {kind:<12} {n}")
    print(f"disagreements: {len(res['disagreements'])}")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dumps(res))
    return 1 if res["disagreements"] else 0


if __name__ == "__main__":
    sys.exit(main())
