import random

from hypothesis import given
from hypothesis import strategies as st

import pytest

from liecoh.errors import SingularFormError
from liecoh.linalg import (
    Mat,
    choose_prime,
    guarded_rank,
    inverse,
    modular_rank,
    nullspace,
    rank,
    solve,
    span_coefficients,
)
from liecoh.scalar import ZERO, Scalar


def random_rows(rng, nrows, ncols, density=0.4):
    rows = []
    for _ in range(nrows):
        rows.append({c: Scalar(rng.randint(-3, 3), rng.randint(-1, 1)) for c in range(ncols) if rng.random() < density})
    return rows


def apply(rows, x):
    return [sum((v * x.get(c, ZERO) for c, v in r.items()), ZERO) for r in rows]


@given(st.integers(0, 10_000))
def test_rank_nullity(seed):
    rng = random.Random(seed)
    rows = random_rows(rng, rng.randint(1, 6), 6)
    ns = nullspace(rows, 6)
    assert rank(rows) + len(ns) == 6
    for v in ns:
        assert all(not y for y in apply(rows, v))


@given(st.integers(0, 10_000))
def test_modular_rank_agrees_on_small_integers(seed):
    rng = random.Random(seed)
    rows = random_rows(rng, 5, 5)
    assert modular_rank(rows) == rank(rows)


def test_choose_prime_is_deterministic():
    p, r = choose_prime()
    assert p % 4 == 1 and (r * r) % p == p - 1
    assert choose_prime() == (p, r)


def test_guarded_rank_switches_to_modular():
    rows = [{0: Scalar(1)}, {1: Scalar(1)}]
    assert guarded_rank(rows, 2) == (2, "exact")
    r, how = guarded_rank(rows, 2, limit=1, allow_modular=True)
    assert r == 2 and how.startswith("modular")


def test_solve_and_span():
    rows = [{0: Scalar(1), 1: Scalar(1)}, {1: Scalar(2)}]
    x = solve(rows, [Scalar(3), Scalar(4)], 2)
    assert apply(rows, x) == [Scalar(3), Scalar(4)]
    assert solve([{0: Scalar(1)}, {0: Scalar(2)}], [Scalar(1), Scalar(1)], 1) is None
    assert span_coefficients([{0: Scalar(1)}, {1: Scalar(1)}], {0: Scalar(2), 1: Scalar(5)}) == [Scalar(2), Scalar(5)]


def test_inverse():
    m = Mat([[Scalar(2), Scalar(1)], [Scalar(0, 1), Scalar(1)]])
    assert (m @ inverse(m)) == Mat.identity(2)
    with pytest.raises(SingularFormError):
        inverse(Mat([[Scalar(1), Scalar(2)], [Scalar(2), Scalar(4)]]))
