import random
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from conftest import algebra, structure
from liecoh.errors import DegreeError, StructureError
from liecoh.poisson import (
    Multivector,
    PolyFunction,
    alt_nested_bracket,
    bracket_eval,
    coderivation,
    coderivation_square_check,
    dual_derivation,
    duality_check,
    duality_factor,
    fi_residual,
    gps_check,
    gpsl_residual,
    higher_poisson,
    lie_poisson,
    np_check,
    snb,
    snb_gpsl_constant,
    vector_field_apply,
)
from liecoh.scalar import Scalar
from liecoh.tensor import AltTensor


def x(i, dim):
    return PolyFunction.var(i, dim)


def test_poly_arithmetic_and_diff():
    f = x(0, 3) * x(0, 3) * x(1, 3) + 2
    assert f.degree == 3
    assert f.diff(0) == (x(0, 3) * x(1, 3)).scale(2)
    assert f.diff(2).is_zero()
    assert f.evaluate((2, 3, 5)) == Scalar.coerce(14)
    assert (f - f).is_zero()


def test_snb_of_vector_fields_is_commutator():
    dim = 3
    X = Multivector(1, dim, {(1,): x(2, dim)})
    Y = Multivector(1, dim, {(2,): x(1, dim)})
    Z = snb(X, Y)
    for k in range(dim):
        f = x(k, dim)
        want = vector_field_apply(X, vector_field_apply(Y, f)) - vector_field_apply(Y, vector_field_apply(X, f))
        assert vector_field_apply(Z, f) == want


# random polynomial multivectors on a small space
DIM = 3


@st.composite
def polys(draw):
    terms = {}
    for _ in range(draw(st.integers(0, 3))):
        e = tuple(draw(st.integers(0, 1)) for _ in range(DIM))
        terms[e] = Scalar.coerce(draw(st.integers(-2, 2)))
    return PolyFunction(DIM, terms)


@st.composite
def multivectors(draw, degree=None):
    q = draw(st.integers(0, 2)) if degree is None else degree
    keys = list(combinations(range(DIM), q))
    return Multivector(q, DIM, {k: draw(polys()) for k in keys})


def _sign(n):
    return -1 if n % 2 else 1


@given(multivectors(), multivectors())
def test_snb_graded_antisymmetry(P, Q):
    p, q = P.degree, Q.degree
    swapped = snb(Q, P).scale(-_sign((p - 1) * (q - 1)))
    assert (snb(P, Q) - swapped).is_zero()


@given(multivectors(), multivectors(), multivectors())
def test_snb_graded_jacobi(P, Q, R):
    p, q, r = P.degree, Q.degree, R.degree
    t1 = snb(P, snb(Q, R)).scale(_sign((p - 1) * (r - 1)))
    t2 = snb(Q, snb(R, P)).scale(_sign((q - 1) * (p - 1)))
    t3 = snb(R, snb(P, Q)).scale(_sign((r - 1) * (q - 1)))
    assert (t1 + t2 + t3).is_zero()


@given(multivectors(), multivectors(), multivectors())
def test_snb_leibniz(P, Q, R):
    p, q = P.degree, Q.degree
    lhs = snb(P, Q.wedge(R))
    rhs = snb(P, Q).wedge(R) + Q.wedge(snb(P, R)).scale(_sign((p - 1) * q))
    assert (lhs - rhs).is_zero()


def test_lie_poisson_bracket_su2(su2):
    Lam = lie_poisson(su2)
    assert bracket_eval(Lam, [x(0, 3), x(1, 3)]) == x(2, 3)
    assert bracket_eval(Lam, [x(0, 3), x(0, 3)]).is_zero()


@pytest.mark.parametrize("label,order", [("A1", 2), ("A2", 2), ("A2", 4)])
def test_gps_zero_for_lie_and_higher(label, order):
    Lam = lie_poisson(algebra(label)) if order == 2 else higher_poisson(structure(label, order))
    rep = gps_check(Lam)
    assert rep.zero and rep.agree and rep.proportional


def test_gps_random_bivector_nonzero():
    rng = random.Random(3)
    coeffs = {}
    for k in combinations(range(4), 2):
        f = PolyFunction(4)
        for i in range(4):
            f = f + x(i, 4).scale(rng.randint(-2, 2))
        coeffs[k] = f * x(rng.randrange(4), 4)
    rep = gps_check(Multivector(2, 4, coeffs))
    assert not rep.zero and rep.agree and rep.proportional
    assert rep.witness() is not None


def test_snb_constant_values():
    assert snb_gpsl_constant(2) == Scalar.coerce(1)
    assert snb_gpsl_constant(4) == Scalar.parse("1/72")


def test_odd_degree_rejected(su2):
    Lam = Multivector.constant(AltTensor.basis((0, 1, 2), 3))
    with pytest.raises(DegreeError):
        gps_check(Lam)


def test_nested_bracket_matches_contraction(su2):
    Lam = lie_poisson(su2)
    fs = [x(0, 3), x(1, 3), x(2, 3)]
    res = gpsl_residual(Lam)
    assert alt_nested_bracket(Lam, fs) == res[(0, 1, 2)]


def test_nested_bracket_random_bivector():
    rng = random.Random(11)
    coeffs = {k: x(rng.randrange(4), 4) * x(rng.randrange(4), 4) for k in combinations(range(4), 2)}
    Lam = Multivector(2, 4, coeffs)
    res = gpsl_residual(Lam)
    for L in combinations(range(4), 3):
        assert alt_nested_bracket(Lam, [x(i, 4) for i in L]) == res[L]


def test_generalized_bracket_uses_extracted_structure(su3):
    st4 = structure("A2", 4)
    Lam = higher_poisson(st4)
    for I, row in list(st4.mixed.items())[:10]:
        want = PolyFunction(8)
        for s, w in row.items():
            want = want + x(s, 8).scale(w)
        assert bracket_eval(Lam, [x(i, 8) for i in I]) == want


def test_np_su3_quartic_fails():
    Lam = higher_poisson(structure("A2", 4))
    rep = np_check(Lam)
    assert not rep.differential_zero and not rep.algebraic_zero
    doc = rep.to_json()
    assert doc["differential_witness"] == {"i": [0, 1, 2], "j": [0, 1, 3, 4], "value": "(3/8)*x5"}
    assert doc["algebraic_witness"]["i"] == [0, 1, 2, 3]
    assert doc["algebraic_witness"]["j"] == [0, 1, 4, 5]
    assert doc["algebraic_witness"]["value"] == "11"


def test_fi_fails_on_witness_tuple():
    Lam = higher_poisson(structure("A2", 4))
    D = np_check(Lam).differential[((0, 1, 2), (0, 1, 3, 4))]
    fi = fi_residual(Lam, [x(0, 8), x(1, 8), x(2, 8)], [x(i, 8) for i in (0, 1, 3, 4)])
    assert fi == D and not fi.is_zero()


def test_decomposable_passes_everything():
    Lam = Multivector.constant(AltTensor.basis((0, 1, 2), 4))
    rep = np_check(Lam, symbolic=True, full=True)
    assert rep.zero
    assert rep.to_json()["decomposable_hint"] is True


@given(st.lists(polys(), min_size=5, max_size=5))
def test_fi_holds_for_decomposable(fs):
    Lam = Multivector.constant(AltTensor.basis((0, 1, 2), 3))
    assert fi_residual(Lam, fs[:2], fs[2:]).is_zero()


def test_lie_poisson_is_nambu_poisson_of_order_two(su2):
    assert np_check(lie_poisson(su2)).differential_zero


def test_coderivation_basics(su2):
    v = AltTensor.basis((0, 1), 3)
    assert coderivation(2, su2, v) == AltTensor.basis((2,), 3)
    assert coderivation(2, su2, AltTensor.basis((0,), 3)).is_zero()
    with pytest.raises(DegreeError):
        coderivation(3, su2, v)
    with pytest.raises(StructureError):
        coderivation(4, su2, v)


def test_coderivation_squares_vanish(su3):
    ok, wit, count = coderivation_square_check(2, su3, 8)
    assert ok and count == 256
    ok, wit, _ = coderivation_square_check(4, structure("A2", 4), 8)
    assert ok


@pytest.mark.parametrize("n,expected", [(1, 24), (2, 60), (3, 120)])
def test_duality_factor_su3(su3, n, expected):
    st4 = structure("A2", 4)
    assert duality_factor(n, 3) == Scalar.coerce(expected)
    rng = random.Random(n)
    keys = list(combinations(range(8), n))
    alpha = AltTensor(n, 8, {k: Scalar.coerce(rng.randint(-3, 3)) for k in rng.sample(keys, min(5, len(keys)))})
    vkeys = list(combinations(range(8), n + 3))
    V = AltTensor(n + 3, 8, {k: Scalar.coerce(rng.randint(-3, 3)) for k in rng.sample(vkeys, 6)})
    chk = duality_check(3, st4, alpha, V)
    assert chk.holds and chk.rhs != 0


def test_dual_of_bracket_is_minus_coboundary(su3):
    from liecoh.cohomology import coboundary

    rng = random.Random(5)
    for n in (1, 2, 3):
        keys = list(combinations(range(8), n))
        alpha = AltTensor(n, 8, {k: Scalar.coerce(rng.randint(-3, 3)) for k in rng.sample(keys, 4)})
        assert dual_derivation(2, su3, alpha) == coboundary(alpha, su3).components[0].scale(-1)
