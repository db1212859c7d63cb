import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from liecoh.cohomology import cocycle_from_polynomial
from liecoh.errors import ResourceGuardError
from liecoh.invariants import (
    InvariantPolynomial,
    casimir_matrix,
    check_invariance,
    commutant_residual,
    dd_polynomial,
    is_primitive,
    killing_polynomial,
    polynomial_from_cocycle,
    primitive_orders,
    standard_invariants,
    symmetrize_full,
    symmetrized_product,
    symmetrized_trace,
    symmetrized_trace_bruteforce,
)
from liecoh.scalar import Scalar
from liecoh.tensor import SymTensor, proportionality

from conftest import algebra


@pytest.mark.parametrize("label,m", [("A1", 2), ("A1", 3), ("A2", 3), ("B2", 2), ("A2", 4)])
def test_symmetrized_trace_matches_bruteforce(label, m):
    g = algebra(label)
    assert symmetrized_trace(g, m).tensor == symmetrized_trace_bruteforce(g, m)


@pytest.mark.parametrize("label,m", [("A1", 2), ("A2", 2), ("A2", 3), ("A3", 4), ("B2", 4), ("C2", 2), ("D3", 3)])
def test_symmetrized_traces_are_invariant(label, m):
    g = algebra(label)
    assert check_invariance(symmetrized_trace(g, m), g).zero


def test_su2_cubic_trace_vanishes():
    assert symmetrized_trace(algebra("A1"), 3).is_zero()


def test_killing_is_multiple_of_trace_form():
    g = algebra("A1")
    assert proportionality(killing_polynomial(g).tensor, symmetrized_trace(g, 2).tensor) == Scalar(4)


def test_non_invariant_tensor_has_witness():
    g = algebra("A2")
    k = SymTensor(2, 8, {(0, 0): 1})
    rep = check_invariance(k, g)
    assert not rep.zero and rep.witness


def test_guard_on_large_orders():
    with pytest.raises(ResourceGuardError):
        symmetrized_trace(algebra("A2"), 7)
    with pytest.raises(ResourceGuardError):
        symmetrized_trace(algebra("C3"), 2)


def _sym_oracle(a, b, dim):
    p = a.degree
    return symmetrize_full(lambda idx: a[idx[:p]] * b[idx[p:]], a.degree + b.degree, dim)


@given(st.integers(0, 10_000))
def test_symmetrized_product_matches_full_average(seed):
    rng = random.Random(seed)
    dim = 3

    def rand(deg):
        from liecoh.invariants import sorted_multisets

        return SymTensor(deg, dim, {I: rng.randint(-2, 2) for I in sorted_multisets(dim, deg) if rng.random() < 0.5})

    a, b = rand(rng.randint(1, 2)), rand(rng.randint(1, 2))
    assert symmetrized_product(a, b) == _sym_oracle(a, b, dim)


@pytest.mark.parametrize("label,top,expected", [("A1", 3, [2]), ("A2", 4, [2, 3]), ("B2", 4, [2, 4])])
def test_primitive_orders(label, top, expected):
    assert primitive_orders(algebra(label), top) == expected


@pytest.mark.slow
def test_primitive_orders_su4():
    assert primitive_orders(algebra("A3"), 4) == [2, 3, 4]


def test_dd_polynomial_is_not_primitive():
    g = algebra("A2")
    dd = dd_polynomial(g)
    assert check_invariance(dd, g).zero
    res = is_primitive(dd, standard_invariants(g, 3))
    assert not res.primitive
    assert [str(c) for c in res.coefficients if c] == ["1/36"]


def test_zero_polynomial_is_not_primitive():
    g = algebra("A1")
    k3 = symmetrized_trace(g, 3)
    assert not is_primitive(k3, standard_invariants(g, 2)).primitive


@pytest.mark.parametrize("m", [2, 3])
def test_casimirs_commute_with_algebra(m):
    g = algebra("A2")
    M = casimir_matrix(symmetrized_trace(g, m), g)
    assert commutant_residual(M, g) is None
    assert M.is_scalar()


def test_cocycle_polynomial_round_trip():
    # fixed normalizations: degree 3 returns -k, degree 5 returns 2k
    for label, m, lam in [("A1", 2, -1), ("A2", 2, -1), ("A2", 3, 2)]:
        g = algebra(label)
        k = symmetrized_trace(g, m)
        back = polynomial_from_cocycle(cocycle_from_polynomial(k, g), g)
        assert proportionality(back.tensor, k.tensor) == Scalar(lam)
