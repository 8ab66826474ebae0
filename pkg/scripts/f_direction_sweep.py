"""Coset-enumerate the Steinberg-alphabet image of St* for several relator budgets.

    python3 scripts/f_direction_sweep.py --totals 2000 10000 --seed 0
"""

import argparse
import json
import time

from stortho.orthogroup import orbit
from stortho.quadmod import QuadSpace
from stortho.ring import RingSpec
from stortho.starpres import StarImages, f_direction_tc


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--totals", type=int, nargs="+", default=[2_000, 10_000])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-cosets", type=int, default=500_000)
    args = ap.parse_args()

    space = QuadSpace(RingSpec.modular(2), 3)
    table = orbit(space, space.basis(1))
    images = StarImages(space, table)
    for total in args.totals:
        t = time.perf_counter()
        rep = f_direction_tc(space, table, total, args.seed, args.max_cosets, images)
        rep["seconds"] = round(time.perf_counter() - t, 2)
        print(json.dumps(rep, sort_keys=True))


if __name__ == "__main__":
    main()
