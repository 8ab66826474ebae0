"""Command-line driver: `stortho <subcommand> [--config ...] [--seed S] [--sample N] [--json out]`."""

from __future__ import annotations

import argparse
import sys

from . import suites
from .config import ConfigError, InstanceConfig, load_config
from .orthogroup import PreconditionError
from .ring import RingError
from .tc import Overflow


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", "--space", dest="config", default=None,
                   help="config file of `key = value` lines, or an inline 'ring=Z/2;ell=3;r=0'")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--sample", type=int, default=None, help="sampling cap per schema or suite")
    p.add_argument("--json", dest="json_out", default=None, help="write the JSON report here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stortho", description="Orthogonal Steinberg group verifier.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-relations", help="phi of every relation instance is the identity")
    p.add_argument("--schema", action="append", choices=list(suites.SCHEMAS))

    sub.add_parser("verify-lemma1", help="ESD-transvection identities")

    p = sub.add_parser("orbit", help="orbit of a vector with shortest witnesses")
    p.add_argument("--start", default="e1")
    p.add_argument("--dump", action="store_true", help="include the full witness table")

    p = sub.add_parser("esd-lift", help="lift one ESD-transvection to a Steinberg word")
    p.add_argument("--u", required=True, help="'e1' style basis label or comma-separated coordinates")
    p.add_argument("--v", required=True)

    p = sub.add_parser("verify-esd", help="lifted transvection properties")
    p.add_argument("--with-tc", action="store_true", help="also check at word level through the coset table")

    p = sub.add_parser("tc", help="coset enumeration")
    p.add_argument("--presentation", default=None, help="relator file; default is the Steinberg presentation")
    p.add_argument("--dump", default=None, help="binary coset table output path")
    p.add_argument("--strategy", choices=["hlt", "felsch"], default=None)
    p.add_argument("--max-cosets", type=int, default=None)

    p = sub.add_parser("verify-star", help="star presentation against the Steinberg presentation")
    p.add_argument("--with-tc", action="store_true")
    p.add_argument("--f-direction", action="store_true", help="coset-enumerate the substituted star presentation")

    p = sub.add_parser("homotope-suite", help="homotope relations and tower transitions")
    p.add_argument("--levels", default="1,2,4")

    p = sub.add_parser("action-suite", help="localized action against exact conjugation")
    p.add_argument("--f", type=int, default=2)
    p.add_argument("--samples", type=int, default=None)

    p = sub.add_parser("oddform-suite", help="odd form algebra sets and comparisons")
    p.add_argument("--localize", type=int, default=None)

    sub.add_parser("all", help="selected suites (config key `suites`) in dependency order")

    for name, sp in sub.choices.items():
        _common(sp)
    return parser


def _config(args) -> InstanceConfig:
    cfg = load_config(args.config)
    extra = {"seed": args.seed, "sample": args.sample}
    if getattr(args, "samples", None) is not None:
        extra["samples"] = args.samples
    if getattr(args, "max_cosets", None) is not None:
        extra["max_cosets"] = args.max_cosets
    if getattr(args, "strategy", None) is not None:
        extra["strategy"] = args.strategy
    return cfg.with_overrides(**extra)


def dispatch(args) -> dict:
    cfg = _config(args)
    cmd = args.command
    if cmd == "verify-relations":
        return suites.verify_relations(cfg, tuple(args.schema) if args.schema else suites.SCHEMAS)
    if cmd == "verify-lemma1":
        return suites.verify_lemma1(cfg)
    if cmd == "orbit":
        return suites.orbit_suite(cfg, args.start, args.dump)
    if cmd == "esd-lift":
        return suites.esd_lift(cfg, args.u, args.v)
    if cmd == "verify-esd":
        return suites.verify_esd(cfg, args.with_tc)
    if cmd == "tc":
        return suites.tc_suite(cfg, args.presentation, args.dump)
    if cmd == "verify-star":
        return suites.verify_star(cfg, args.with_tc, args.f_direction)
    if cmd == "homotope-suite":
        levels = tuple(int(x) for x in args.levels.split(",") if x.strip())
        return suites.homotope_suite(cfg, levels)
    if cmd == "action-suite":
        return suites.action_suite(cfg, args.f)
    if cmd == "oddform-suite":
        return suites.oddform_suite(cfg, args.localize)
    if cmd == "all":
        return suites.run_all(cfg)
    raise ConfigError(f"unknown command {cmd!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = dispatch(args)
    except (ConfigError, RingError, PreconditionError) as exc:
        parser.exit(2, f"stortho: error: {exc}\n")
    except (Overflow, MemoryError) as exc:
        report = {"suite": args.command, "error": f"{type(exc).__name__}: {exc}", "passed": False}
    text = suites.report_json(report)
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(text + "\n")
        print(f"{args.command}: {'PASS' if report['passed'] else 'FAIL'} -> {args.json_out}")
    else:
        print(text)
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
