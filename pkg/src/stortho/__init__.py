"""Orthogonal Steinberg groups over finite commutative rings: presentations, lifts and checks.

Modules follow the dependency order ring -> quadmod -> orthogroup -> steinberg -> tc -> esdlift
-> starpres -> homotower -> oddform, with `suites` and `cli` on top.
"""

from .config import ConfigError, InstanceConfig, load_config
from .quadmod import QuadSpace
from .ring import RingSpec

__all__ = ["ConfigError", "InstanceConfig", "QuadSpace", "RingSpec", "load_config"]
__version__ = "0.1.0"
