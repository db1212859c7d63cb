import random

import pytest
from hypothesis import given, strategies as st

from conftest import algebra, structure
from liecoh.algebras import build_algebra
from liecoh.brst import (
    GhostElement,
    basis_monomials,
    brst_rho,
    brst_trivial,
    cochain_image,
    complete_brst,
    ghost_image,
    higher_brst,
    leibniz_residual,
    nilpotency_check,
)
from liecoh.cli import mutate_tensor, parse_mutation
from liecoh.cohomology import Cochain, Coboundary, Representation
from liecoh.errors import AnticommutatorError, ResourceGuardError
from liecoh.multibrackets import from_cocycle
from liecoh.scalar import Scalar
from liecoh.tensor import AltTensor


def test_su2_ghost_of_first_generator(su2):
    s = brst_trivial(su2)
    out = s(GhostElement.generator(0, 3))
    assert out.terms == {(0, (1, 2)): Scalar.coerce(-1)}


def test_abelian_operator_vanishes():
    g = build_algebra("abelian:3")
    s = brst_trivial(g)
    for A, S in basis_monomials(3):
        assert s(GhostElement.monomial(S, 3)).is_zero()


@pytest.mark.parametrize("rep", ["trivial", "defining", "adjoint"])
def test_nilpotent_with_representation(su2, rep):
    rho = getattr(Representation, rep)(su2)
    s = brst_rho(su2, rho)
    assert nilpotency_check(s, rho.dim_V).zero


def test_su3_nilpotent_all_monomials(su3):
    chk = nilpotency_check(brst_trivial(su3))
    assert chk.zero and chk.checked == 256


def _random_cochain(dim, degree, dim_V, rng):
    from itertools import combinations

    keys = list(combinations(range(dim), degree))
    comps = []
    for _ in range(dim_V):
        d = {k: Scalar.coerce(rng.randint(-3, 3)) for k in rng.sample(keys, min(4, len(keys)))}
        comps.append(AltTensor(degree, dim, d))
    return Cochain(degree, dim, tuple(comps))


@pytest.mark.parametrize("label", ["A1", "A2"])
@pytest.mark.parametrize("rep", ["trivial", "defining", "adjoint"])
def test_ghost_dictionary_matches_coboundary(label, rep):
    g = algebra(label)
    rho = getattr(Representation, rep)(g)
    s = brst_rho(g, rho)
    d = Coboundary(g, rho)
    rng = random.Random(7)
    for degree in range(4):
        omega = _random_cochain(g.dim, degree, rho.dim_V, rng)
        assert s(ghost_image(omega)) == ghost_image(d.apply(omega))


def test_cochain_image_round_trip(su3):
    omega = _random_cochain(8, 3, 1, random.Random(1))
    assert cochain_image(ghost_image(omega), 3) == omega


monomial = st.lists(st.integers(0, 7), max_size=4, unique=True)


@given(monomial, monomial, st.integers(-3, 3))
def test_leibniz_on_products(S, T, c):
    g = algebra("A2")
    s = brst_trivial(g)
    a = GhostElement.monomial(tuple(S), 8, coeff=c)
    b = GhostElement.monomial(tuple(T), 8) + GhostElement.generator(5, 8)
    if a.is_zero():
        return
    assert leibniz_residual(s, a, b).is_zero()


def test_higher_operator_shift(su3):
    assert higher_brst(structure("A2", 4)).shift == 3
    assert brst_trivial(su3).shift == 1


def test_complete_su3_exhaustive(su3):
    _, report = complete_brst(su3, [structure("A2", 4)])
    assert report.mode == "all monomials"
    assert report.terms == [2, 4]
    assert report.nilpotent
    assert all(p.checked == 256 for p in report.pairs)


@pytest.mark.slow
def test_complete_su4_three_terms(su4):
    _, report = complete_brst(su4, [structure("A3", 4), structure("A3", 6)])
    assert report.terms == [2, 4, 6]
    assert report.nilpotent


def test_strict_mode_raises_on_mutated_omega(su3):
    st4 = structure("A2", 4)
    bad = mutate_tensor(st4.structure, [parse_mutation("Omega:0,1,2,3,4:+1")])
    with pytest.raises(AnticommutatorError):
        complete_brst(su3, [from_cocycle(su3, bad)], strict=True)
    _, report = complete_brst(su3, [from_cocycle(su3, bad)])
    assert not report.nilpotent
    assert report.first_failure().witness


def test_ghost_guard():
    g = build_algebra("abelian:16")
    with pytest.raises(ResourceGuardError):
        brst_trivial(g)
