import random
from functools import lru_cache

import pytest

from isoparam import linalg as la
from isoparam.geometry import Subspace
from isoparam.rootsys import build_root_datum, hyperbolic_planes, single


@lru_cache(maxsize=None)
def datum_of(family, rank, mult=1):
    return build_root_datum(single(family, rank, mult))


@lru_cache(maxsize=None)
def planes(k, scales=None):
    return build_root_datum(hyperbolic_planes(k, list(scales) if scales else None))


def random_in_a(datum, rng, bound=5):
    return la.lin_comb([rng.randint(-bound, bound) for _ in datum.span_basis], datum.span_basis)


def random_subspace(datum, rng, dim, with_hdelta=False, bound=5):
    if with_hdelta and dim < 1:
        raise ValueError("a subspace containing H_delta has dimension >= 1")
    while True:
        vecs = ([datum.hdelta] if with_hdelta else []) + [random_in_a(datum, rng, bound)
                                                        for _ in range(dim - with_hdelta)]
        if la.rank(vecs) == dim:
            return Subspace(datum, vecs)


def random_normal(b, rng, bound=5):
    while True:
        xi = la.lin_comb([rng.randint(-bound, bound) for _ in b.complement], b.complement)
        if not la.is_zero(xi):
            return xi


@pytest.fixture
def rng():
    return random.Random(12345)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
