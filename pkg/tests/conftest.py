import pytest
from hypothesis import HealthCheck, settings

from stortho.orthogroup import orbit
from stortho.quadmod import QuadSpace
from stortho.ring import RingSpec
from stortho.steinberg import WordOracle

settings.register_profile("repo", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


def space_of(n: int, ell: int = 3, r: int = 0, q0=()) -> QuadSpace:
    return QuadSpace(RingSpec.modular(n), ell, r, q0)


@pytest.fixture(scope="session")
def f2():
    return space_of(2)


@pytest.fixture(scope="session")
def f2_orbit(f2):
    return orbit(f2, f2.basis(1))


@pytest.fixture(scope="session")
def f2_oracle(f2):
    return WordOracle.build(f2)


@pytest.fixture(scope="session")
def z4r1():
    return space_of(4, 3, 1, (1,))


# -- acceptance criteria log, printed once at the end of the run ------------------

CRITERIA: dict[int, str] = {}


@pytest.fixture(scope="session")
def criterion_log():
    def record(number: int, passed: bool, detail: str, seconds: float, limit: float | None = None):
        within = limit is None or seconds < limit
        verdict = "PASS" if passed and within else "FAIL"
        budget = f" (limit {limit:g} s)" if limit is not None else ""
        line = f"criterion {number:>2}: {verdict}  {detail}; {seconds:.1f} s{budget}"
        CRITERIA[number] = line
        print(line)
        return passed and within
    return record


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[k])
