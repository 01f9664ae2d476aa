import pytest

from rpkit.algebra import Algebra, AlgebraConfig

_CACHE = {}
acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)


def make_algebra(d, m):
    """Algebras are immutable; share one context per (d, m) across tests."""
    key = (d, m)
    if key not in _CACHE:
        _CACHE[key] = Algebra(AlgebraConfig(d, m))
    return _CACHE[key]


@pytest.fixture
def algebra_factory():
    return make_algebra


def random_element(algebra, rng, terms=4):
    H = algebra.zero()
    cfg = algebra.cfg
    for _ in range(terms):
        k = tuple(int(x) for x in rng.integers(0, cfg.d, cfg.m))
        H = H + complex(rng.normal(), rng.normal()) * algebra.monomial(k)
    return H


def random_plus_element(algebra, rng, terms=3):
    cfg = algebra.cfg
    w = cfg.m // 2
    H = algebra.zero()
    for _ in range(terms):
        k = tuple([0] * w + [int(x) for x in rng.integers(0, cfg.d, w)])
        H = H + complex(rng.normal(), rng.normal()) * algebra.monomial(k)
    return H
