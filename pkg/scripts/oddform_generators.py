"""Compare Delta cut out on basis vectors with Delta cut out on every vector, over several instances.

    python3 scripts/oddform_generators.py
"""

import argparse
import json
import time

from stortho.oddform import generators_experiment
from stortho.quadmod import QuadSpace
from stortho.ring import RingSpec

INSTANCES = [(2, 1, 0, ()), (4, 1, 0, ()), (2, 1, 1, (1,)), (3, 1, 1, (1,)), (4, 1, 1, (1,)), (4, 1, 1, (2,))]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ring", type=int, default=None, help="run only this modulus")
    args = ap.parse_args()
    for n, ell, r, q0 in INSTANCES:
        if args.ring and n != args.ring:
            continue
        t = time.perf_counter()
        rep = generators_experiment(QuadSpace(RingSpec.modular(n), ell, r, q0))
        rep["seconds"] = round(time.perf_counter() - t, 2)
        print(json.dumps(rep, sort_keys=True))


if __name__ == "__main__":
    main()
