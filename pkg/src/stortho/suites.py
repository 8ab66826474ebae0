"""Suite runners shared by the command line, the experiment scripts and the acceptance tests.

Every runner returns a JSON-ready dict with a boolean "passed". Wall-clock timings live under
"timings" and are the only field that may differ between runs with the same seed.
"""

from __future__ import annotations

import json
import time
from typing import Callable

import numpy as np

from . import esdfacts, esdlift, homotower, oddform, starpres
from .config import InstanceConfig
from .orthogroup import enumerate_group, esd_matrix, label_to_json, orbit, word_matrix
from .quadmod import QuadSpace
from .steinberg import SCHEMAS, WordOracle, relation_suite
from .tc import Presentation, todd_coxeter


def report_json(report: dict, with_timings: bool = True) -> str:
    body = report if with_timings else {k: v for k, v in report.items() if k != "timings"}
    return json.dumps(body, sort_keys=True, indent=1, default=_plain)


def _plain(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"not serializable: {type(x)}")


class _Clock:
    def __init__(self):
        self.timings: dict[str, float] = {}

    def run(self, name: str, fn: Callable, *a, **kw):
        t = time.perf_counter()
        try:
            return fn(*a, **kw)
        finally:
            self.timings[name] = round(time.perf_counter() - t, 3)


def _finish(name: str, cfg: InstanceConfig, parts: dict, clock: _Clock) -> dict:
    return {"suite": name, "space": str(cfg.space), "seed": cfg.seed, "results": parts,
            "passed": all(p.get("passed", True) for p in parts.values()), "timings": clock.timings}


def build_oracle(space: QuadSpace, cfg: InstanceConfig) -> WordOracle:
    return WordOracle.build(space, cfg.max_cosets, cfg.strategy)


def verify_relations(cfg: InstanceConfig, schemas: tuple[str, ...] = SCHEMAS) -> dict:
    clock = _Clock()
    sample = cfg.sample or 10**5
    res = clock.run("relations", relation_suite, cfg.space, sample=sample, seed=cfg.seed, schemas=schemas)
    return _finish("verify-relations", cfg, {"relations": res}, clock)


def verify_lemma1(cfg: InstanceConfig) -> dict:
    clock = _Clock()
    samples = cfg.sample or 10_000
    res = clock.run("lemma1", esdfacts.esd_identity_suite, cfg.space, samples=samples, seed=cfg.seed)
    return _finish("verify-lemma1", cfg, {"lemma1": res}, clock)


def orbit_suite(cfg: InstanceConfig, start: str = "e1", dump: bool = False) -> dict:
    clock = _Clock()
    space = cfg.space
    v = _parse_vector(space, start)
    table = clock.run("orbit", orbit, space, v)
    u = max(table.witnesses, key=lambda k: (len(table.witnesses[k]), k))
    sample = {"vector": list(u), "witness": [label_to_json(g.label, g.exp, space.n) for g in table.witness(u)]}
    verified = clock.run("verify", table.verify)
    res = {"start": list(v), "size": len(table), "sample": sample, "witnesses_verified": verified,
           "passed": verified}
    if dump:
        res["table"] = sorted(table.to_json(), key=lambda e: e["vector"])
    return _finish("orbit", cfg, {"orbit": res}, clock)


def _parse_vector(space: QuadSpace, text: str) -> tuple[int, ...]:
    text = text.strip()
    if text.startswith("e"):
        return space.basis(int(text[1:]))
    if text.startswith("f"):
        return space.basis(text)
    return space.vec([int(x) for x in text.replace(",", " ").split()])


def esd_lift(cfg: InstanceConfig, u: str, v: str) -> dict:
    cfg.require_min_rank("esd-lift")
    space = cfg.space
    table = orbit(space, space.basis(1))
    uu, vv = _parse_vector(space, u), _parse_vector(space, v)
    lifted = esdlift.x_lift(space, uu, vv, table)
    M = word_matrix(space, lifted.word)
    res = {"u": list(uu), "v": list(vv),
           "word": [label_to_json(g.label, g.exp, space.n) for g in lifted.word],
           "witness": [label_to_json(g.label, g.exp, space.n) for g in lifted.witness],
           "phi": M.tolist(), "passed": bool(np.array_equal(M, esd_matrix(space, uu, vv)))}
    return _finish("esd-lift", cfg, {"esd_lift": res}, _Clock())


def verify_esd(cfg: InstanceConfig, with_tc: bool = False) -> dict:
    cfg.require_min_rank("verify-esd")
    clock = _Clock()
    space = cfg.space
    table = clock.run("orbit", orbit, space, space.basis(1))
    oracle = clock.run("tc", build_oracle, space, cfg) if with_tc else None
    samples = cfg.sample or 10_000
    parts = {
        "properties": clock.run("properties", esdlift.verify_esd_properties, space, table, oracle,
                                samples=samples, seed=cfg.seed),
        "witness_independence": clock.run("witnesses", esdlift.witness_independence, space,
                                          min(samples, 1000), cfg.seed, oracle),
    }
    return _finish("verify-esd", cfg, parts, clock)


def tc_suite(cfg: InstanceConfig, presentation: str | None = None, dump: str | None = None) -> dict:
    clock = _Clock()
    space = cfg.space
    if presentation:
        with open(presentation) as fh:
            pres = Presentation.parse(fh.read())
        res: dict = {"source": "file", "generators": pres.ngens, "relators": len(pres.relators)}
        table = clock.run("tc", todd_coxeter, pres, cfg.max_cosets, cfg.strategy)
        res.update(order=table.order, stats=table.stats, passed=True)
    else:
        cfg.require_min_rank("tc")
        oracle = clock.run("tc", build_oracle, space, cfg)
        table = oracle.table
        res = {"source": "steinberg", "generators": oracle.presentation.ngens,
               "relators": len(oracle.presentation.relators), "order": table.order,
               "stats": table.stats}
        try:
            eo = len(clock.run("closure", enumerate_group, space))
        except MemoryError as exc:
            res.update(eo_order=None, note=str(exc), passed=True)
        else:
            res.update(eo_order=eo, kernel_order=table.order // eo if table.order % eo == 0 else None,
                       passed=table.order % eo == 0)
    if dump:
        table.dump(dump)
        res["dump"] = dump
    return _finish("tc", cfg, {"tc": res}, clock)


def verify_star(cfg: InstanceConfig, with_tc: bool = False, f_direction: bool = False) -> dict:
    cfg.require_min_rank("verify-star")
    clock = _Clock()
    space = cfg.space
    table = clock.run("orbit", orbit, space, space.basis(1))
    oracle = clock.run("tc", build_oracle, space, cfg) if with_tc else None
    images = clock.run("images", starpres.StarImages, space, table, oracle)
    parts = {
        "relators": clock.run("relators", starpres.verify_star_relators_in_st, space, table, oracle,
                              cfg.sample, cfg.seed, images),
        "g_of_f": clock.run("g_of_f", starpres.g_of_f_check, space, table),
        "crossed_module": clock.run("crossed_module", starpres.crossed_module_checks, space, table,
                                    oracle, cfg.samples, cfg.seed),
        "abelianization": clock.run("abelianization", starpres.abelianization_report, space, table,
                                    seed=cfg.seed),
    }
    if oracle is not None:
        parts["generation"] = clock.run("generation", starpres.generation_shadow, space, table, oracle, cfg.seed)
    if f_direction:
        parts["f_direction"] = clock.run("f_direction", starpres.f_direction_tc, space, table,
                                         seed=cfg.seed, images=images)
    return _finish("verify-star", cfg, parts, clock)


def homotope_suite(cfg: InstanceConfig, levels: tuple[int, ...] = (1, 2, 4)) -> dict:
    cfg.require_min_rank("homotope-suite")
    clock = _Clock()
    space = cfg.space
    parts = {}
    for s in levels:
        parts[f"relations_level_{s}"] = clock.run(f"level_{s}", homotower.verify_homotope_relations,
                                                  space, s, seed=cfg.seed)
    parts["transitions"] = clock.run("transitions", homotower.verify_transitions, space, levels,
                                     seed=cfg.seed)
    parts["algebra"] = clock.run("algebra", homotower.homotope_algebra_axioms, space.n)
    return _finish("homotope-suite", cfg, parts, clock)


def action_suite(cfg: InstanceConfig, f: int = 2) -> dict:
    cfg.require_min_rank("action-suite")
    clock = _Clock()
    space = cfg.space
    tower = homotower.Tower(space.n, f, space.ell, space.r, space.q0)
    parts = {
        "conjugation": clock.run("conjugation", homotower.verify_action_conjugation, tower, cfg.samples,
                                 cfg.seed),
        "extranaturality": clock.run("extranaturality", homotower.verify_extranaturality, tower,
                                     cfg.samples, cfg.seed),
    }
    if space.n ** 4 <= 10**6:
        parts["costalks"] = clock.run("costalks", homotower.costalk_generation, space.n, f)
    return _finish("action-suite", cfg, parts, clock)


def oddform_suite(cfg: InstanceConfig, localize: int | None = None) -> dict:
    clock = _Clock()
    space = cfg.space
    R = clock.run("R", oddform.compute_R, space)
    parts: dict = {"closure": clock.run("closure", oddform.r_closure, space, R)} if len(R) <= 5000 else {}
    parts["generators"] = clock.run("generators", oddform.generators_experiment, space)
    parts["generators"]["passed"] = parts["generators"]["full_subset_of_generators"]
    if localize:
        parts["localization"] = clock.run("localization", oddform.localization_commutes, space.n, localize,
                                          space.ell, space.r, space.q0)
    return _finish("oddform-suite", cfg, parts, clock)


# dependency order; each entry maps a suite name to a runner taking only the config
PIPELINE: dict[str, Callable[[InstanceConfig], dict]] = {
    "verify-relations": verify_relations,
    "verify-lemma1": verify_lemma1,
    "orbit": orbit_suite,
    "tc": tc_suite,
    "verify-esd": lambda cfg: verify_esd(cfg, with_tc=True),
    "verify-star": lambda cfg: verify_star(cfg, with_tc=True),
    "homotope-suite": homotope_suite,
    "action-suite": action_suite,
    "oddform-suite": oddform_suite,
}
DEFAULT_ALL = ("verify-relations", "verify-lemma1", "orbit", "tc", "verify-esd", "verify-star", "homotope-suite")


def run_all(cfg: InstanceConfig) -> dict:
    """Selected suites (cfg.suites, or a default set) in dependency order; failures are recorded, not raised."""
    from .config import ConfigError

    chosen = cfg.suites or DEFAULT_ALL
    unknown = [s for s in chosen if s not in PIPELINE]
    if unknown:
        raise ConfigError(f"unknown suites {unknown}; choose from {sorted(PIPELINE)}")
    clock = _Clock()
    parts: dict = {}
    for name in PIPELINE:
        if name not in chosen:
            continue
        try:
            rep = clock.run(name, PIPELINE[name], cfg)
            rep.pop("timings", None)
        except (MemoryError, RuntimeError) as exc:
            rep = {"suite": name, "error": f"{type(exc).__name__}: {exc}", "passed": False}
        parts[name] = rep
    report = _finish("all", cfg, parts, clock)
    report["order"] = list(parts)
    return report
