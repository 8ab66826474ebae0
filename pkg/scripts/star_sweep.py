"""Exhaustive star-relator sweep over F_2 with word-level decisions, written to a JSON report.

    python3 scripts/star_sweep.py --out star_report.json
"""

import argparse

from stortho import suites
from stortho.config import parse_inline


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="star_report.json")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--f-direction", action="store_true")
    args = ap.parse_args()
    cfg = parse_inline(f"ring=Z/2;ell=3;r=0;seed={args.seed}")
    rep = suites.verify_star(cfg, with_tc=True, f_direction=args.f_direction)
    with open(args.out, "w") as fh:
        fh.write(suites.report_json(rep) + "\n")
    print(f"passed={rep['passed']} timings={rep['timings']}")


if __name__ == "__main__":
    main()
