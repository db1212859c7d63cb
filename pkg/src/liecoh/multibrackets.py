"""Matrix multibrackets, higher-order structure constants, generalized Jacobi checks."""

from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import factorial

from .errors import DegreeError, DimensionMismatch, ResourceGuardError, SingularFormError, StructureError
from .linalg import Mat, inverse, span_coefficients
from .scalar import ONE, ZERO, Scalar, qsum
from .tensor import AltTensor, proportionality, shuffle_sign, sort_with_parity, unshuffles

MAX_ARGS = 8


def _check_shapes(mats):
    if not mats:
        raise DegreeError("multibracket needs at least one argument")
    shape = mats[0].shape
    if shape[0] != shape[1]:
        raise DimensionMismatch("multibracket arguments must be square")
    for m in mats:
        if m.shape != shape:
            raise DimensionMismatch("multibracket arguments differ in shape", shape=list(m.shape), expected=list(shape))


def multibracket(mats):
    """sum_sigma sign(sigma) X_sigma(1) ... X_sigma(n), by first-factor expansion."""
    mats = list(mats)
    _check_shapes(mats)
    if len(mats) > MAX_ARGS:
        raise ResourceGuardError("too many multibracket arguments", n=len(mats), limit=MAX_ARGS)
    cache = {}

    def rec(pos):
        if len(pos) == 1:
            return mats[pos[0]]
        hit = cache.get(pos)
        if hit is not None:
            return hit
        acc = None
        for k, p in enumerate(pos):
            term = mats[p] @ rec(pos[:k] + pos[k + 1:])
            if k % 2:
                term = -term
            acc = term if acc is None else acc + term
        cache[pos] = acc
        return acc

    return rec(tuple(range(len(mats))))


def multibracket_bruteforce(mats):
    """Reference sum over all n! orderings."""
    mats = list(mats)
    _check_shapes(mats)
    acc = Mat.zeros(mats[0].nrows)
    for perm in permutations(range(len(mats))):
        _, sgn = sort_with_parity(perm)
        M = mats[perm[0]]
        for p in perm[1:]:
            M = M @ mats[p]
        acc = acc + M if sgn > 0 else acc - M
    return acc


# ---------------------------------------------------------------------------
# structure extraction


@dataclass
class MultiBracketAlgebra:
    """Order-n bracket [X_I] = U_I^sigma X_sigma with lowered tensor Omega_{I tau}."""

    base: object
    order: int
    mixed: dict
    structure: AltTensor
    checked_tuples: int = 0

    def is_empty(self):
        return not self.mixed


class _Decomposer:
    """Write a matrix as sum_s a_s X_s + lam * 1 + remainder."""

    def __init__(self, gens):
        self.gens = list(gens)
        size = self.gens[0].nrows
        self.basis = self.gens + [Mat.identity(size)]
        k = len(self.basis)
        gram = [[(self.basis[a] @ self.basis[b]).trace() for b in range(k)] for a in range(k)]
        try:
            self.ginv = inverse(Mat(gram))
        except SingularFormError:
            self.ginv = None
            self.flat = [{p: a for p, a in enumerate(b.flat()) if a} for b in self.basis]

    def __call__(self, M):
        k = len(self.basis)
        if self.ginv is not None:
            t = [(M @ b).trace() for b in self.basis]
            coeffs = [qsum(t[a] * self.ginv.get(a, c) for a in range(k) if t[a]) for c in range(k)]
        else:
            coeffs = span_coefficients(self.flat, {p: a for p, a in enumerate(M.flat()) if a})
            if coeffs is None:
                return None, None, M
        rem = M
        for c, b in zip(coeffs, self.basis):
            if c:
                rem = rem - b.scale(c)
        return coeffs[:-1], coeffs[-1], rem


def lower_last(mixed, g, degree):
    """Omega_{I tau} = U_I^sigma k_{sigma tau} assembled as an AltTensor.

    Raises StructureError when the lowered tensor is not fully antisymmetric.
    """
    k = g.killing_form
    n = g.dim
    canon = {}
    zero_needed = []
    for I, row in mixed.items():
        for tau in range(n):
            v = qsum(c * k.get(s, tau) for s, c in row.items())
            key, sgn = sort_with_parity(I + (tau,))
            if not sgn:
                if v:
                    raise StructureError("lowered structure has a repeated index", index=list(I), tau=tau)
                continue
            val = v if sgn > 0 else -v
            prev = canon.get(key)
            if prev is None:
                canon[key] = val
            elif prev != val:
                raise StructureError("lowered structure is not fully antisymmetric", index=list(key))
    # every canonical key must be reached from each choice of the last slot
    for key, v in canon.items():
        if not v:
            continue
        for pos in range(len(key)):
            I = key[:pos] + key[pos + 1:]
            if I not in mixed:
                raise StructureError("lowered structure is not fully antisymmetric", index=list(key))
    return AltTensor(degree, n, {key: v for key, v in canon.items() if v}, check=False)


def raise_last(omega, g):
    """U_I^sigma = Omega_{I tau} g^{tau sigma} for canonical I."""
    ginv = g.killing_inverse
    n = g.dim
    out = {}
    for key, v in omega.items():
        for pos, tau in enumerate(key):
            I = key[:pos] + key[pos + 1:]
            sv = v if (len(key) - 1 - pos) % 2 == 0 else -v
            row = out.setdefault(I, {})
            for s in range(n):
                w = ginv.get(tau, s)
                if w:
                    row[s] = row.get(s, ZERO) + sv * w
    return {I: {s: v for s, v in row.items() if v} for I, row in out.items() if any(row.values())}


def extract_structure(g, n):
    """Decompose [X_i1, ..., X_in] in span{X} + span{1} for every canonical tuple."""
    if n % 2:
        raise DegreeError("extract_structure needs an even order", order=n)
    if g.generators is None:
        raise StructureError("algebra has no matrix realization", algebra=g.name)
    if n + 1 > g.dim:
        return MultiBracketAlgebra(g, n, {}, AltTensor(n + 1, g.dim), 0)
    dec = _Decomposer(g.generators)
    X = g.generators
    mixed = {}
    count = 0
    for I in combinations(range(g.dim), n):
        M = multibracket([X[i] for i in I])
        coeffs, lam, rem = dec(M)
        count += 1
        if coeffs is None or not rem.is_zero():
            raise StructureError("multibracket leaves the algebra span", index=list(I))
        if lam:
            raise StructureError("identity component of the multibracket is nonzero", index=list(I), value=str(lam))
        row = {s: c for s, c in enumerate(coeffs) if c}
        if row:
            mixed[I] = row
    lowered = lower_last(mixed, g, n + 1)
    return MultiBracketAlgebra(g, n, mixed, lowered, count)


def algebra_structure(g):
    """The ordinary bracket viewed as an order-2 structure."""
    mixed = {key: dict(row) for key, row in g.structure.items()}
    return MultiBracketAlgebra(g, 2, mixed, g.lowered_structure(), len(mixed))


def from_cocycle(g, omega):
    """Order-(q-1) structure whose lowered tensor is the q-form ``omega``."""
    return MultiBracketAlgebra(g, omega.degree - 1, raise_last(omega, g), omega, 0)


def cocycle_ratio(extracted, omega):
    """Exact scalar lambda with extracted.structure == lambda * omega, or None."""
    return proportionality(extracted.structure, omega)


def proportionality_witness(a, b):
    """First canonical index where a deviates from lambda * b, lambda fixed by
    the smallest index on which b is nonzero; None when a == lambda * b."""
    keys = sorted(set(a.keys()) | set(b.keys()))
    lam = None
    for k in keys:
        y = b.get_canonical(k)
        if y:
            lam = a.get_canonical(k) / y
            break
    for k in keys:
        x, y = a.get_canonical(k), b.get_canonical(k)
        if lam is None or x != lam * y:
            return {"index": list(k), "value": str(x), "expected": str(ZERO if lam is None else lam * y)}
    return None


# ---------------------------------------------------------------------------
# generalized Jacobi identities


@dataclass
class GJIReport:
    zero: bool
    nonzero_count: int = 0
    witness: dict = field(default_factory=dict)
    terms: int = 0

    def to_json(self):
        doc = {"residual": "0" if self.zero else "nonzero", "nonzero_components": self.nonzero_count}
        if not self.zero:
            doc["witness"] = self.witness
        return doc


def _mask(t):
    m = 0
    for i in t:
        m |= 1 << i
    return m


def _placements(omega, drop_last):
    """For each sigma: list of (K, rho, value) with Omega_{sigma K rho} (or Omega_{sigma K})."""
    by_sigma = {}
    for key, v in omega.items():
        q = len(key)
        for sp, sigma in enumerate(key):
            rest = key[:sp] + key[sp + 1:]
            # moving sigma to the front
            s_front = v if sp % 2 == 0 else -v
            if drop_last:
                by_sigma.setdefault(sigma, []).append((rest, _mask(rest), None, s_front))
                continue
            for rp, rho in enumerate(rest):
                K = rest[:rp] + rest[rp + 1:]
                # moving rho to the end of rest
                w = s_front if (len(rest) - 1 - rp) % 2 == 0 else -s_front
                by_sigma.setdefault(sigma, []).append((K, _mask(K), rho, w))
    return by_sigma


def gji_residual(U, omega, antisymmetrize_rho=False):
    """R_{L, rho} = sum_{J u K = L} sign U_J^sigma Omega_{sigma K rho}.

    U is a mixed structure {J: {sigma: value}}; omega a lowered AltTensor.
    This is the unshuffle form of the unit-weight epsilon contraction; it
    differs from it by the constant |J|! |K|!.  With ``antisymmetrize_rho``
    rho joins the antisymmetrized block: R_L = sum sign U_J^sigma Omega_{sigma K}.
    """
    by_sigma = _placements(omega, antisymmetrize_rho)
    R = {}
    terms = 0
    for J, row in U.items():
        jm = _mask(J)
        for sigma, u in row.items():
            for K, km, rho, w in by_sigma.get(sigma, ()):
                if jm & km:
                    continue
                terms += 1
                L = tuple(sorted(J + K))
                val = u * w
                if shuffle_sign(J, K) < 0:
                    val = -val
                key = (L, rho)
                R[key] = R.get(key, ZERO) + val
    return {key: v for key, v in R.items() if v}, terms


def gji_check(g, first, second=None, antisymmetrize_rho=False):
    """GJI residual for (first, second) higher-order structures.

    ``first`` supplies the inner bracket, ``second`` (default: first) the
    outer one through its lowered tensor.  Structures may be
    MultiBracketAlgebra or lowered AltTensors of odd degree.
    """
    if second is None:
        second = first
    U = first.mixed if isinstance(first, MultiBracketAlgebra) else raise_last(first, g)
    omega = second.structure if isinstance(second, MultiBracketAlgebra) else second
    R, terms = gji_residual(U, omega, antisymmetrize_rho)
    if not R:
        return GJIReport(True, 0, {}, terms)
    key = min(R)
    L, rho = key
    wit = {"index": list(L), "value": str(R[key])}
    if rho is not None:
        wit["rho"] = rho
    return GJIReport(False, len(R), wit, terms)


# ---------------------------------------------------------------------------
# odd-order witness (sum over S_{2n-1} of nested n-brackets)


def nested_unshuffle_sum(mats, n):
    """sum over unshuffles (n | n-1) of sign [[X_A], X_B]."""
    mats = list(mats)
    size = mats[0].nrows
    acc = Mat.zeros(size)
    for A, B, sgn in unshuffles(tuple(range(len(mats))), n):
        inner = multibracket([mats[a] for a in A])
        outer = multibracket([inner] + [mats[b] for b in B])
        acc = acc + outer if sgn > 0 else acc - outer
    return acc


def nested_full_sum(mats, n):
    """Literal sum over S_{2n-1} (slow oracle)."""
    mats = list(mats)
    acc = Mat.zeros(mats[0].nrows)
    for perm in permutations(range(len(mats))):
        _, sgn = sort_with_parity(perm)
        inner = multibracket([mats[p] for p in perm[:n]])
        outer = multibracket([inner] + [mats[p] for p in perm[n:]])
        acc = acc + outer if sgn > 0 else acc - outer
    return acc


@dataclass
class OddWitness:
    n: int
    predicted: int
    ratio: Scalar
    zero: bool

    @property
    def matches(self):
        if self.predicted == 0:
            return self.zero
        return self.ratio is not None and self.ratio == self.predicted

    def to_json(self):
        return {
            "n": self.n,
            "predicted_factor": self.predicted,
            "ratio": None if self.ratio is None else str(self.ratio),
            "lhs_zero": self.zero,
            "matches": self.matches,
        }


def predicted_odd_factor(n):
    """n! (n-1)! sum_{s<n} (-1)^{s(n+1)}: n! (n-1)! n for odd n, 0 for even n."""
    return factorial(n) * factorial(n - 1) * sum((-1) ** (s * (n + 1)) for s in range(n))


def odd_gji_witness(mats, n, full=False):
    """Compare the S_{2n-1} nested sum with [X_1, ..., X_{2n-1}]."""
    mats = list(mats)
    if len(mats) != 2 * n - 1:
        raise DegreeError("need 2n-1 matrices", n=n, given=len(mats))
    if full:
        lhs = nested_full_sum(mats, n)
    else:
        lhs = nested_unshuffle_sum(mats, n).scale(factorial(n) * factorial(n - 1))
    rhs = multibracket(mats)
    ratio = None
    if not rhs.is_zero():
        ent_l = {p: a for p, a in enumerate(lhs.flat()) if a}
        ent_r = {p: a for p, a in enumerate(rhs.flat()) if a}
        ratio = proportionality(_Flat(ent_l), _Flat(ent_r))
    return OddWitness(n, predicted_odd_factor(n), ratio, lhs.is_zero())


class _Flat:
    def __init__(self, d):
        self.entries = d

    def keys(self):
        return self.entries.keys()


# ---------------------------------------------------------------------------
# ungraded SH identity


def _apply_map(lmap, args):
    """l_k on basis vectors; args is a tuple of basis indices."""
    key, sgn = sort_with_parity(args)
    if not sgn:
        return {}
    row = lmap.get(key)
    if not row:
        return {}
    return row if sgn > 0 else {o: -v for o, v in row.items()}


def _apply_vec(lmap, vec, rest):
    """l_k(vec, rest...) with vec a coefficient dict."""
    out = {}
    for u, a in vec.items():
        for o, v in _apply_map(lmap, (u,) + rest).items():
            out[o] = out.get(o, ZERO) + a * v
    return out


def sh_residual(maps, n, dim_V):
    """Residual of the degree-n SH identity on every canonical n-tuple.

    ``maps`` is {k: {canonical k-tuple: {out: value}}} for skew l_k.
    """
    R = {}
    for T in combinations(range(dim_V), n):
        acc = {}
        for j in range(1, n + 1):
            i = n + 1 - j
            li, lj = maps.get(i), maps.get(j)
            if not li or not lj:
                continue
            outer = -1 if (i * (j - 1)) % 2 else 1
            for A, B, sgn in unshuffles(T, j):
                inner = _apply_map(lj, A)
                if not inner:
                    continue
                res = _apply_vec(li, inner, B)
                f = outer * sgn
                for o, v in res.items():
                    acc[o] = acc.get(o, ZERO) + (v if f > 0 else -v)
        acc = {o: v for o, v in acc.items() if v}
        if acc:
            R[T] = acc
    return R


@dataclass
class SHReport:
    n: int
    zero: bool
    nonzero_count: int = 0
    witness: dict = field(default_factory=dict)

    def to_json(self):
        doc = {"n": self.n, "residual": "0" if self.zero else "nonzero"}
        if not self.zero:
            doc["witness"] = self.witness
        return doc


def sh_identity_check(maps, n, dim_V):
    R = sh_residual(maps, n, dim_V)
    if not R:
        return SHReport(n, True)
    T = min(R)
    o = min(R[T])
    return SHReport(n, False, len(R), {"inputs": list(T), "output": o, "value": str(R[T][o])})


def lowered_sh_residual(R, g):
    """Lower the output index with the Killing form: {(T, rho): value}."""
    k = g.killing_form
    out = {}
    for T, vec in R.items():
        for rho in range(g.dim):
            v = qsum(a * k.get(o, rho) for o, a in vec.items())
            if v:
                out[(T, rho)] = v
    return out
