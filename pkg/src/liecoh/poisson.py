"""Polynomial multivectors on g*, coderivations, the Schouten-Nijenhuis bracket
and checkers for generalized and Nambu-Poisson structures."""

from dataclasses import dataclass
from itertools import combinations, permutations
from math import factorial

from .errors import DegreeError, DimensionMismatch, StructureError
from .scalar import ONE, ZERO, Scalar
from .tensor import AltTensor, merge_sorted, sort_with_parity, unshuffles


# ---------------------------------------------------------------------------
# polynomials


class PolyFunction:
    """Polynomial in x_0..x_{dim-1}; terms map exponent tuples to Scalars."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim, terms=None):
        self.dim = dim
        self.terms = {e: v for e, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, dim, value=1):
        v = Scalar.coerce(value)
        return cls(dim, {(0,) * dim: v})

    @classmethod
    def var(cls, i, dim):
        e = [0] * dim
        e[i] = 1
        return cls(dim, {tuple(e): ONE})

    @classmethod
    def zero(cls, dim):
        return cls(dim)

    @classmethod
    def monomial(cls, exps, coeff=1):
        return cls(len(exps), {tuple(exps): Scalar.coerce(coeff)})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def _lift(self, other):
        if isinstance(other, PolyFunction):
            return other
        return PolyFunction.const(self.dim, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, v in other.terms.items():
            out[e] = out.get(e, ZERO) + v
        return PolyFunction(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return PolyFunction(self.dim, {e: -v for e, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, s):
        s = Scalar.coerce(s)
        return PolyFunction(self.dim, {e: s * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, PolyFunction):
            return self.scale(other)
        out = {}
        for e1, a in self.terms.items():
            for e2, b in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, ZERO) + a * b
        return PolyFunction(self.dim, out)

    def __rmul__(self, other):
        return self.scale(other)

    def diff(self, i):
        out = {}
        for e, v in self.terms.items():
            k = e[i]
            if k:
                f = list(e)
                f[i] = k - 1
                f = tuple(f)
                out[f] = out.get(f, ZERO) + v * k
        return PolyFunction(self.dim, out)

    def evaluate(self, point):
        if len(point) != self.dim:
            raise DimensionMismatch("point has the wrong length", point=len(point), dim=self.dim)
        pts = [Scalar.coerce(p) for p in point]
        total = ZERO
        for e, v in self.terms.items():
            t = v
            for x, k in zip(pts, e):
                for _ in range(k):
                    t = t * x
            total = total + t
        return total

    @property
    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def __eq__(self, other):
        if isinstance(other, PolyFunction):
            return self.dim == other.dim and self.terms == other.terms
        return self == self._lift(other)

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            mono = "*".join(f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            c = str(self.terms[e])
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)

    __repr__ = __str__

    def to_json(self):
        return [{"exp": list(e), **self.terms[e].to_json()} for e in sorted(self.terms)]


# ---------------------------------------------------------------------------
# multivectors


class Multivector:
    """sum over increasing I of eta_I d^{i1}^...^d^{iq}, eta_I polynomial.

    Canonical-index storage, so eta_I is also the full antisymmetric
    component and the bracket it generates is sum_I eta_I det(d^{i_a} f_b).
    """

    __slots__ = ("degree", "dim", "coeffs")

    def __init__(self, degree, dim, coeffs=None):
        self.degree = degree
        self.dim = dim
        clean = {}
        for idx, f in (coeffs or {}).items():
            if len(idx) != degree:
                raise DimensionMismatch("index length differs from degree", degree=degree, index=list(idx))
            if f:
                clean[tuple(idx)] = f
        self.coeffs = clean

    @classmethod
    def from_items(cls, degree, dim, items):
        acc = {}
        for idx, f in items:
            key, sgn = sort_with_parity(idx)
            if not sgn:
                continue
            acc[key] = acc.get(key, PolyFunction(dim)) + (f if sgn > 0 else -f)
        return cls(degree, dim, acc)

    @classmethod
    def constant(cls, tensor):
        return cls(tensor.degree, tensor.dim,
                   {I: PolyFunction.const(tensor.dim, v) for I, v in tensor.items()})

    def __getitem__(self, idx):
        key, sgn = sort_with_parity(tuple(idx))
        if not sgn:
            return PolyFunction(self.dim)
        f = self.coeffs.get(key)
        if f is None:
            return PolyFunction(self.dim)
        return f if sgn > 0 else -f

    def items(self):
        return self.coeffs.items()

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        self._same(other)
        out = dict(self.coeffs)
        for I, f in other.coeffs.items():
            out[I] = out[I] + f if I in out else f
        return Multivector(self.degree, self.dim, out)

    def __neg__(self):
        return Multivector(self.degree, self.dim, {I: -f for I, f in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        if isinstance(s, PolyFunction):
            return Multivector(self.degree, self.dim, {I: s * f for I, f in self.coeffs.items()})
        return Multivector(self.degree, self.dim, {I: f.scale(s) for I, f in self.coeffs.items()})

    def wedge(self, other):
        out = {}
        for I, f in self.coeffs.items():
            for J, h in other.coeffs.items():
                K, sgn = merge_sorted(I, J)
                if not sgn:
                    continue
                v = f * h
                v = v if sgn > 0 else -v
                out[K] = out[K] + v if K in out else v
        return Multivector(self.degree + other.degree, self.dim, out)

    def evaluate(self, point):
        """Constant tensor eta(point)."""
        return AltTensor(self.degree, self.dim,
                         {I: f.evaluate(point) for I, f in self.coeffs.items()}, check=False)

    def _same(self, other):
        if self.dim != other.dim or self.degree != other.degree:
            raise DimensionMismatch("multivector shapes differ",
                                    left=[self.degree, self.dim], right=[other.degree, other.dim])

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return (self.degree, self.dim, self.coeffs) == (other.degree, other.dim, other.coeffs)

    def __repr__(self):
        return f"Multivector(degree={self.degree}, dim={self.dim}, nnz={len(self.coeffs)})"

    def to_json(self):
        return {
            "degree": self.degree,
            "dim": self.dim,
            "coeffs": [{"idx": list(I), "poly": self.coeffs[I].to_json()} for I in sorted(self.coeffs)],
        }


def linear_multivector(mixed, dim, degree):
    """eta_I = W_I^sigma x_sigma from a mixed structure {I: {sigma: W}}."""
    coeffs = {}
    for I, row in mixed.items():
        if len(I) != degree:
            raise DimensionMismatch("structure index length differs from degree", degree=degree, index=list(I))
        f = PolyFunction(dim, {})
        for sigma, w in row.items():
            f = f + PolyFunction.var(sigma, dim).scale(w)
        coeffs[I] = f
    return Multivector(degree, dim, coeffs)


def lie_poisson(g):
    """Bivector with {x_i, x_j} = C_ij^k x_k."""
    return linear_multivector(g.structure, g.dim, 2)


def higher_poisson(structure):
    """Linear 2p-vector built from a MultiBracketAlgebra."""
    return linear_multivector(structure.mixed, structure.base.dim, structure.order)


# ---------------------------------------------------------------------------
# Schouten-Nijenhuis bracket
#
# d^i is treated as an odd variable xi_i; then
#   [P, Q] = sum_i (dR P/d xi_i)(d Q/d x_i) - (d P/d x_i)(dL Q/d xi_i).


def snb(a, b):
    if a.dim != b.dim:
        raise DimensionMismatch("multivectors live on different spaces", left=a.dim, right=b.dim)
    dim = a.dim
    out = {}

    def put(K, v):
        out[K] = out[K] + v if K in out else v

    p = a.degree
    for I, f in a.coeffs.items():
        for pos, i in enumerate(I):
            sR = -1 if (p - 1 - pos) % 2 else 1
            rest = I[:pos] + I[pos + 1:]
            for J, h in b.coeffs.items():
                dh = h.diff(i)
                if not dh:
                    continue
                K, sgn = merge_sorted(rest, J)
                if not sgn:
                    continue
                v = f * dh
                put(K, v if sR * sgn > 0 else -v)
    for J, h in b.coeffs.items():
        for pos, i in enumerate(J):
            sL = -1 if pos % 2 else 1
            rest = J[:pos] + J[pos + 1:]
            for I, f in a.coeffs.items():
                df = f.diff(i)
                if not df:
                    continue
                K, sgn = merge_sorted(I, rest)
                if not sgn:
                    continue
                v = df * h
                put(K, -v if sL * sgn > 0 else v)
    return Multivector(a.degree + b.degree - 1, dim, out)


def vector_field_apply(X, f):
    """X(f) for a degree-1 multivector."""
    if X.degree != 1:
        raise DegreeError("expected a vector field", degree=X.degree)
    total = PolyFunction(f.dim)
    for (i,), c in X.coeffs.items():
        total = total + c * f.diff(i)
    return total


# ---------------------------------------------------------------------------
# bracket evaluation


def _det(rows):
    n = len(rows)
    if n == 0:
        return None
    total = None
    for perm in permutations(range(n)):
        _, sgn = sort_with_parity(perm)
        term = rows[0][perm[0]]
        for r in range(1, n):
            term = term * rows[r][perm[r]]
        term = term if sgn > 0 else -term
        total = term if total is None else total + term
    return total


def bracket_eval(Lam, fs):
    """{f_1, ..., f_n} = Lambda(df_1, ..., df_n)."""
    if len(fs) != Lam.degree:
        raise DegreeError("bracket arity differs from multivector degree", degree=Lam.degree, given=len(fs))
    grads = [[f.diff(i) for i in range(Lam.dim)] for f in fs]
    total = PolyFunction(Lam.dim)
    for I, eta in Lam.coeffs.items():
        rows = [[grads[b][i] for b in range(len(fs))] for i in I]
        d = _det(rows)
        if d:
            total = total + eta * d
    return total


def alt_nested_bracket(Lam, fs):
    """sum over S_{2n-1} of sign * {f_.., {f_.., ...}} (even n = degree)."""
    n = Lam.degree
    if len(fs) != 2 * n - 1:
        raise DegreeError("need 2n-1 arguments", degree=n, given=len(fs))
    total = PolyFunction(Lam.dim)
    inner_cache = {}
    for head, tail, sgn in unshuffles(tuple(range(2 * n - 1)), n - 1):
        inner = inner_cache.get(tail)
        if inner is None:
            inner = inner_cache[tail] = bracket_eval(Lam, [fs[t] for t in tail])
        v = bracket_eval(Lam, [fs[h] for h in head] + [inner])
        total = total + (v if sgn > 0 else -v)
    # each unshuffle stands for (n-1)! n! orderings of equal value
    return total.scale(factorial(n - 1) * factorial(n))


# ---------------------------------------------------------------------------
# generalized Poisson structures


def gpsl_residual(Lam):
    """Full-epsilon contraction eps eta_{J sigma} d^sigma eta_K over (4p-1)-tuples."""
    q = Lam.degree
    dim = Lam.dim
    out = {}
    derivs = {K: [h.diff(s) for s in range(dim)] for K, h in Lam.coeffs.items()}
    for L in combinations(range(dim), 2 * q - 1):
        acc = PolyFunction(dim)
        for A, B, sgn in unshuffles(L, q - 1):
            dB = derivs.get(B)
            if dB is None:
                continue
            part = PolyFunction(dim)
            for s in range(dim):
                if dB[s]:
                    f = Lam[A + (s,)]
                    if f:
                        part = part + f * dB[s]
            acc = acc + (part if sgn > 0 else -part)
        if acc:
            out[L] = acc
    weight = factorial(q - 1) * factorial(q)
    return Multivector(2 * q - 1, dim, {L: f.scale(weight) for L, f in out.items()})


def snb_gpsl_constant(degree):
    """[Lambda, Lambda] = constant * (GPSl contraction) for even degree."""
    return Scalar.coerce(2) / Scalar.coerce(factorial(degree - 1) * factorial(degree))


def _first(mv):
    if mv.is_zero():
        return None
    I = min(mv.coeffs)
    return {"index": list(I), "value": str(mv.coeffs[I])}


@dataclass
class GPSReport:
    degree: int
    snb_residual: Multivector
    coordinate_residual: Multivector

    @property
    def zero(self):
        return self.snb_residual.is_zero()

    @property
    def agree(self):
        return self.snb_residual.is_zero() == self.coordinate_residual.is_zero()

    @property
    def proportional(self):
        c = snb_gpsl_constant(self.degree)
        return self.snb_residual == self.coordinate_residual.scale(c)

    def witness(self):
        return _first(self.snb_residual)

    def to_json(self):
        doc = {
            "degree": self.degree,
            "gps_residual": "0" if self.zero else "nonzero",
            "coordinate_residual": "0" if self.coordinate_residual.is_zero() else "nonzero",
            "verdicts_agree": self.agree,
        }
        if not self.zero:
            doc["witness"] = self.witness()
        return doc


def gps_check(Lam):
    if Lam.degree % 2:
        raise DegreeError("[Lambda, Lambda] vanishes identically for odd degree; the condition is empty",
                          degree=Lam.degree)
    return GPSReport(Lam.degree, snb(Lam, Lam), gpsl_residual(Lam))


# ---------------------------------------------------------------------------
# Nambu-Poisson conditions


def differential_residual(Lam):
    """D_{I,J} for I an (n-1)-set and J an n-set; all polynomials.

    D = eta_{I rho} d^rho eta_J - sum_a (-1)^a (d^rho eta_{I j_a}) eta_{rho, J minus j_a}.
    """
    n = Lam.degree
    dim = Lam.dim
    out = {}
    for I in combinations(range(dim), n - 1):
        row = [Lam[I + (r,)] for r in range(dim)]
        for J in combinations(range(dim), n):
            acc = PolyFunction(dim)
            eJ = Lam[J]
            for r in range(dim):
                if row[r] and eJ:
                    acc = acc + row[r] * eJ.diff(r)
            for a, ja in enumerate(J):
                eIa = Lam[I + (ja,)]
                if not eIa:
                    continue
                rest = J[:a] + J[a + 1:]
                for r in range(dim):
                    d = eIa.diff(r)
                    if not d:
                        continue
                    e = Lam[(r,) + rest]
                    if e:
                        v = d * e
                        acc = acc - v if a % 2 == 0 else acc + v
            if acc:
                out[(I, J)] = acc
    return out


def _sigma(eta, I, J):
    """Sigma_{I J} with eta a callable on index tuples."""
    n = len(I)
    val = eta(I) * eta(J)
    head = I[:-1]
    for a in range(n):
        swapped = J[:a] + (I[-1],) + J[a + 1:]
        val = val - eta(head + (J[a],)) * eta(swapped)
    return val


def algebraic_residual(eta, dim, n, zero, stop_at_first=False):
    """Sigma + P(Sigma), P the i-block/j-block swap.

    The sum is antisymmetric in i_1..i_{n-1} and in j_1..j_{n-1}, so those
    are enumerated as increasing sets with i_n, j_n free.
    """
    out = {}
    for Ih in combinations(range(dim), n - 1):
        for i_n in range(dim):
            if i_n in Ih:
                continue
            I = Ih + (i_n,)
            for Jh in combinations(range(dim), n - 1):
                for j_n in range(dim):
                    if j_n in Jh:
                        continue
                    J = Jh + (j_n,)
                    v = _sigma(eta, I, J) + _sigma(eta, J, I)
                    if v != zero:
                        out[(I, J)] = v
                        if stop_at_first:
                            return out
    return out


def _eta_at(Lam, point):
    t = Lam.evaluate(point)
    return lambda idx: t[idx]


def _eta_poly(Lam):
    return lambda idx: Lam[idx]


def default_sample(dim):
    return tuple(range(1, dim + 1))


@dataclass
class NPReport:
    degree: int
    differential: dict
    algebraic_sample: dict
    sample: tuple
    algebraic_symbolic: dict = None

    @property
    def differential_zero(self):
        return not self.differential

    @property
    def algebraic_zero(self):
        if self.algebraic_symbolic is not None:
            return not self.algebraic_symbolic
        return not self.algebraic_sample

    @property
    def zero(self):
        return self.differential_zero and self.algebraic_zero

    def _wit(self, d):
        if not d:
            return None
        (I, J) = min(d)
        return {"i": list(I), "j": list(J), "value": str(d[(I, J)])}

    def to_json(self):
        doc = {
            "degree": self.degree,
            "np_differential": "0" if self.differential_zero else "nonzero",
            "np_algebraic_at_sample": "0" if not self.algebraic_sample else "nonzero",
            "sample": list(self.sample),
            "decomposable_hint": self.zero,
        }
        if self.algebraic_symbolic is not None:
            doc["np_algebraic_symbolic"] = "0" if not self.algebraic_symbolic else "nonzero"
        if self.differential:
            doc["differential_witness"] = self._wit(self.differential)
        if self.algebraic_sample:
            doc["algebraic_witness"] = self._wit(self.algebraic_sample)
        return doc


def np_check(Lam, sample=None, symbolic=False, full=False):
    """Differential condition as polynomials, algebraic at a sample point.

    With ``full=False`` the algebraic scan stops at the first nonzero entry.
    """
    n = Lam.degree
    if n < 2:
        raise DegreeError("Nambu-Poisson conditions need degree >= 2", degree=n)
    sample = tuple(sample) if sample is not None else default_sample(Lam.dim)
    diff = differential_residual(Lam)
    alg = algebraic_residual(_eta_at(Lam, sample), Lam.dim, n, ZERO, stop_at_first=not full)
    sym = None
    if symbolic:
        sym = algebraic_residual(_eta_poly(Lam), Lam.dim, n, PolyFunction(Lam.dim), stop_at_first=not full)
    return NPReport(n, diff, alg, sample, sym)


def fi_residual(Lam, fs, gs):
    """{f, {g}} - sum_k {g_1, .., {f, g_k}, .., g_n} as a polynomial."""
    n = Lam.degree
    if len(fs) != n - 1 or len(gs) != n:
        raise DegreeError("fundamental identity needs n-1 and n arguments", degree=n,
                          given=[len(fs), len(gs)])
    fs = list(fs)
    lhs = bracket_eval(Lam, fs + [bracket_eval(Lam, list(gs))])
    for k in range(n):
        args = list(gs)
        args[k] = bracket_eval(Lam, fs + [gs[k]])
        lhs = lhs - bracket_eval(Lam, args)
    return lhs


# ---------------------------------------------------------------------------
# coderivations and dual derivations on constant tensors


def structure_of(source):
    """(order, mixed) from a LieAlgebra or a MultiBracketAlgebra."""
    if hasattr(source, "mixed"):
        return source.order, source.mixed
    return 2, source.structure


def coderivation(s, source, v):
    """d_s on a constant n-vector: sum over unshuffles of [X_A] ^ X_B."""
    if s % 2:
        raise DegreeError("coderivation order must be even", s=s)
    order, W = structure_of(source)
    if order != s:
        raise StructureError("structure order does not match s", s=s, order=order)
    n = v.degree
    dim = v.dim
    if s > n:
        return AltTensor.zero(max(n - s + 1, 0), dim)
    out = {}
    for I, c in v.items():
        for A, B, sgn in unshuffles(I, s):
            row = W.get(A)
            if not row:
                continue
            for sigma, w in row.items():
                K, s2 = merge_sorted((sigma,), B)
                if not s2:
                    continue
                val = c * w
                out[K] = out.get(K, ZERO) + (val if sgn * s2 > 0 else -val)
    return AltTensor(n - s + 1, dim, out)


def dual_derivation(m, source, alpha):
    """(d_m alpha)_L = sum over unshuffles A|B of L of W_A^rho alpha_{rho B}."""
    s = 2 * m - 2
    order, W = structure_of(source)
    if order != s:
        raise StructureError("structure order does not match 2m-2", m=m, order=order)
    if isinstance(alpha, AltTensor):
        comps = [alpha]
    else:
        comps = list(alpha.components)
    n = comps[0].degree
    dim = comps[0].dim
    q = n + s - 1
    res = []
    for a in comps:
        out = {}
        if n >= 1 and q <= dim:
            for L in combinations(range(dim), q):
                acc = ZERO
                for A, B, sgn in unshuffles(L, s):
                    row = W.get(A)
                    if not row:
                        continue
                    for rho, w in row.items():
                        x = a[(rho,) + B]
                        if x:
                            acc = acc + (w * x if sgn > 0 else -(w * x))
                if acc:
                    out[L] = acc
        res.append(AltTensor(q, dim, out, check=False))
    return res[0] if isinstance(alpha, AltTensor) else res


def pairing(alpha, V):
    """<alpha, V> = n! sum over increasing I of alpha_I V_I."""
    if alpha.degree != V.degree:
        raise DegreeError("pairing needs equal degrees", left=alpha.degree, right=V.degree)
    total = ZERO
    for I, a in alpha.items():
        b = V.get_canonical(I)
        if b:
            total = total + a * b
    return total * factorial(alpha.degree)


def duality_factor(n, m):
    return Scalar.coerce(factorial(n + 2 * m - 3)) / Scalar.coerce(factorial(n))


@dataclass
class DualityCheck:
    n: int
    m: int
    lhs: Scalar
    rhs: Scalar

    @property
    def holds(self):
        return self.lhs == duality_factor(self.n, self.m) * self.rhs


def duality_check(m, source, alpha, V):
    """<d_m alpha, V> against ((n+2m-3)!/n!) <alpha, d_{2m-2} V>."""
    lhs = pairing(dual_derivation(m, source, alpha), V)
    rhs = pairing(alpha, coderivation(2 * m - 2, source, V))
    return DualityCheck(alpha.degree, m, lhs, rhs)


def coderivation_square_check(s, source, dim, degrees=None):
    """d_s d_s on every basis n-vector; returns (ok, witness or None, count)."""
    degrees = range(dim + 1) if degrees is None else degrees
    count = 0
    for n in degrees:
        for I in combinations(range(dim), n):
            v = AltTensor.basis(I, dim)
            w = coderivation(s, source, coderivation(s, source, v))
            count += 1
            if not w.is_zero():
                J = min(w.keys())
                return False, {"input": list(I), "index": list(J), "value": str(w.get_canonical(J))}, count
    return True, None, count
