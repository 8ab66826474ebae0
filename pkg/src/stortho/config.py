"""Instance configuration: flat `key = value` files or inline `key=value;key=value` strings."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace

from .quadmod import QuadSpace
from .ring import RingSpec


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class InstanceConfig:
    ring: str = "Z/2"
    ell: int = 3
    r: int = 0
    q0: tuple[int, ...] = ()
    seed: int = 0
    sample: int | None = None
    samples: int = 1000
    max_cosets: int = 2_000_000
    strategy: str = "hlt"
    suites: tuple[str, ...] = field(default_factory=tuple)

    @property
    def space(self) -> QuadSpace:
        try:
            return QuadSpace(RingSpec.parse(self.ring), self.ell, self.r, self.q0)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def require_min_rank(self, suite: str) -> None:
        if self.ell < 3:
            raise ConfigError(f"{suite} needs ell >= 3, got ell = {self.ell}")

    def with_overrides(self, **kw) -> InstanceConfig:
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


_INT_KEYS = {"ell", "r", "seed", "sample", "samples", "max_cosets"}


def _parse_pairs(pairs: list[tuple[str, str]]) -> InstanceConfig:
    known = {f.name for f in fields(InstanceConfig)}
    kw: dict = {}
    for key, value in pairs:
        key = key.strip().replace("-", "_")
        value = value.strip()
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        if key in _INT_KEYS:
            try:
                kw[key] = int(value)
            except ValueError:
                raise ConfigError(f"{key} must be an integer, got {value!r}") from None
        elif key == "q0":
            kw[key] = tuple(int(x) for x in value.replace("[", " ").replace("]", " ").replace(",", " ").split())
        elif key == "suites":
            kw[key] = tuple(s.strip() for s in value.split(",") if s.strip())
        else:
            kw[key] = value
    cfg = InstanceConfig(**kw)
    cfg.space  # validate early
    return cfg


def parse_config_text(text: str) -> InstanceConfig:
    """One `key = value` per line; '#' starts a comment."""
    pairs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = line.split("=", 1)
        pairs.append((key, value))
    return _parse_pairs(pairs)


def parse_inline(spec: str) -> InstanceConfig:
    pairs = []
    for part in spec.split(";"):
        if not part.strip():
            continue
        if "=" not in part:
            raise ConfigError(f"expected key=value, got {part!r}")
        pairs.append(tuple(part.split("=", 1)))
    return _parse_pairs(pairs)


def load_config(source: str | None) -> InstanceConfig:
    """A path to a config file, an inline spec, or None for the default flagship instance."""
    if source is None:
        return InstanceConfig()
    if os.path.exists(source):
        with open(source) as fh:
            return parse_config_text(fh.read())
    return parse_inline(source)
