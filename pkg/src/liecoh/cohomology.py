"""Chevalley-Eilenberg cochains, coboundary, cohomology and related checks."""

from dataclasses import dataclass, field
from itertools import combinations
from math import comb, factorial

from .errors import (
    DegreeError,
    DimensionMismatch,
    NotACocycleError,
    NotASubalgebraError,
    NotInvariantError,
    RepresentationError,
    StructureError,
)
from .invariants import InvariantPolynomial, invariance_residual, multiplicity, sorted_multisets
from .linalg import Mat, guarded_rank, nullspace, span_coefficients
from .scalar import ONE, ZERO, Scalar, qsum
from .tensor import AltTensor, merge_sorted, sort_with_parity, wedge


# ---------------------------------------------------------------------------
# representations and cochains


class Representation:
    """rho(X_i) as dim_V x dim_V matrices."""

    def __init__(self, algebra, matrices, name="rho", check=True):
        self.algebra = algebra
        self.matrices = tuple(matrices)
        if len(self.matrices) != algebra.dim:
            raise RepresentationError("need one matrix per basis element", given=len(self.matrices), dim=algebra.dim)
        self.dim_V = self.matrices[0].nrows if self.matrices else 1
        self.name = name
        if check:
            bad = self.homomorphism_residual()
            if bad is not None:
                raise RepresentationError("rho is not a representation", **bad)

    @classmethod
    def trivial(cls, g):
        return cls(g, [Mat.zeros(1)] * g.dim, name="trivial", check=False)

    @classmethod
    def defining(cls, g):
        if g.generators is None:
            raise RepresentationError("algebra has no matrix realization", algebra=g.name)
        return cls(g, g.generators, name="defining", check=False)

    @classmethod
    def adjoint(cls, g):
        return cls(g, g.ad, name="adjoint", check=False)

    def is_trivial(self):
        return all(m.is_zero() for m in self.matrices)

    def homomorphism_residual(self):
        R = self.matrices
        g = self.algebra
        for i in range(g.dim):
            for j in range(i + 1, g.dim):
                res = R[i] @ R[j] - R[j] @ R[i]
                for k, v in g.bracket(i, j).items():
                    res = res - R[k].scale(v)
                if not res.is_zero():
                    return {"pair": [i, j]}
        return None

    def casimir(self):
        """I_2 = g^{ij} rho(X_i) rho(X_j)."""
        g = self.algebra
        ginv = g.killing_inverse
        out = Mat.zeros(self.dim_V)
        for i in range(g.dim):
            for j in range(g.dim):
                c = ginv.get(i, j)
                if c:
                    out = out + (self.matrices[i] @ self.matrices[j]).scale(c)
        return out


@dataclass(frozen=True)
class Cochain:
    """V-valued n-cochain: one AltTensor per V-basis vector."""

    degree: int
    dim: int
    components: tuple

    @classmethod
    def scalar(cls, alt):
        return cls(alt.degree, alt.dim, (alt,))

    @classmethod
    def zero(cls, degree, dim, dim_V=1):
        return cls(degree, dim, tuple(AltTensor(degree, dim) for _ in range(dim_V)))

    @classmethod
    def basis(cls, degree, dim, A, idx, dim_V=1):
        comps = [AltTensor(degree, dim) for _ in range(dim_V)]
        comps[A] = AltTensor.basis(idx, dim)
        return cls(degree, dim, tuple(comps))

    @property
    def dim_V(self):
        return len(self.components)

    def is_zero(self):
        return all(c.is_zero() for c in self.components)

    def __add__(self, other):
        return Cochain(self.degree, self.dim, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other):
        return Cochain(self.degree, self.dim, tuple(a - b for a, b in zip(self.components, other.components)))

    def scale(self, s):
        return Cochain(self.degree, self.dim, tuple(a.scale(s) for a in self.components))

    def apply_matrix(self, M):
        """Act on the value index: (M Omega)^A = M^A_B Omega^B."""
        out = []
        for A in range(self.dim_V):
            acc = AltTensor(self.degree, self.dim)
            for B, c in enumerate(self.components):
                m = M.get(A, B)
                if m and c:
                    acc = acc + c.scale(m)
            out.append(acc)
        return Cochain(self.degree, self.dim, tuple(out))

    def items(self):
        for A, c in enumerate(self.components):
            for key, v in c.items():
                yield (A, key), v

    def to_json(self):
        return {"degree": self.degree, "dim": self.dim, "components": [c.to_json() for c in self.components]}


# ---------------------------------------------------------------------------
# coboundary


class Coboundary:
    """Chevalley-Eilenberg coboundary on rho-valued cochains, built once per (algebra, rho)."""

    def __init__(self, g, rho=None):
        self.g = g
        self.rho = rho if rho is not None else Representation.trivial(g)
        if self.rho.algebra.dim != g.dim:
            raise RepresentationError("representation belongs to a different algebra")
        self.trivial = self.rho.is_trivial()
        # for each k: all (a, b, C_ab^k) with a < b
        self.by_target = {}
        for (a, b), row in g.structure.items():
            for k, v in row.items():
                self.by_target.setdefault(k, []).append((a, b, v))

    def push(self, B, I):
        """Image of the basis cochain Omega^B = w^I (I increasing): {(A, J): value}."""
        g = self.g
        n = g.dim
        out = {}
        sI = set(I)
        if not self.trivial:
            for j in range(n):
                if j in sI:
                    continue
                J, sgn = merge_sorted((j,), I)
                p = J.index(j)
                col = self.rho.matrices[j]
                for A in range(self.rho.dim_V):
                    r = col.get(A, B)
                    if r:
                        v = r if p % 2 == 0 else -r
                        key = (A, J)
                        out[key] = out.get(key, ZERO) + v
        for pos, k in enumerate(I):
            R = I[:pos] + I[pos + 1:]
            sR = set(R)
            base_sign = -1 if pos % 2 else 1
            for a, b, c in self.by_target.get(k, ()):
                if a in sR or b in sR:
                    continue
                J = tuple(sorted(R + (a, b)))
                p, q = J.index(a), J.index(b)
                sign = base_sign * (-1 if (p + q) % 2 else 1)
                key = (B, J)
                v = c if sign > 0 else -c
                out[key] = out.get(key, ZERO) + v
        return {key: v for key, v in out.items() if v}

    def apply(self, omega):
        if isinstance(omega, AltTensor):
            omega = Cochain.scalar(omega)
        if omega.dim != self.g.dim:
            raise DimensionMismatch("cochain and algebra dimensions differ", cochain=omega.dim, algebra=self.g.dim)
        if omega.dim_V != self.rho.dim_V:
            raise RepresentationError("cochain values do not match the representation", cochain=omega.dim_V, rho=self.rho.dim_V)
        q = omega.degree + 1
        acc = [{} for _ in range(omega.dim_V)]
        if q <= self.g.dim:
            for (B, I), v in omega.items():
                for (A, J), w in self.push(B, I).items():
                    d = acc[A]
                    d[J] = d.get(J, ZERO) + v * w
        return Cochain(q, self.g.dim, tuple(AltTensor(q, self.g.dim, d, check=False) for d in acc))

    def basis(self, n):
        """Ordered basis (A, I) of C^n."""
        return [(A, I) for I in combinations(range(self.g.dim), n) for A in range(self.rho.dim_V)]

    def matrix_rows(self, n):
        """Images of the C^n basis as sparse rows over the C^{n+1} basis."""
        target = {b: idx for idx, b in enumerate(self.basis(n + 1))}
        rows = []
        for B, I in self.basis(n):
            img = self.push(B, I) if n < self.g.dim else {}
            rows.append({target[key]: v for key, v in img.items()})
        return rows, len(target)


def coboundary(omega, g, rho=None):
    return Coboundary(g, rho).apply(omega)


def square_residual(g, rho=None, max_degree=None):
    """s(s(basis cochain)) for every basis cochain up to max_degree.

    Returns (checked, witness) with witness None when every image vanishes.
    """
    s = Coboundary(g, rho)
    top = g.dim - 2 if max_degree is None else min(max_degree, g.dim - 2)
    checked = 0
    for n in range(top + 1):
        for B, I in s.basis(n):
            acc = {}
            for (A, J), v in s.push(B, I).items():
                for key, w in s.push(A, J).items():
                    acc[key] = acc.get(key, ZERO) + v * w
            checked += 1
            for (A, K), v in sorted(acc.items()):
                if v:
                    return checked, {"input": list(I), "input_value_index": B,
                                     "index": list(K), "value_index": A, "value": str(v)}
    return checked, None


def first_nonzero(cochain):
    for (A, key), v in sorted(cochain.items()):
        if v:
            return {"value_index": A, "index": list(key), "value": str(v)}
    return None


# ---------------------------------------------------------------------------
# cohomology


@dataclass
class CohomologyReport:
    degrees: list
    dim_C: list
    rank_s: list
    dim_Z: list
    dim_B: list
    betti: list
    method: str = "exact"
    notes: list = field(default_factory=list)

    def euler_ok(self):
        ec = sum((-1) ** n * c for n, c in zip(self.degrees, self.dim_C))
        eh = sum((-1) ** n * h for n, h in zip(self.degrees, self.betti))
        return ec == eh

    def to_json(self):
        return {
            "degrees": self.degrees,
            "dim_C": self.dim_C,
            "rank_s": self.rank_s,
            "dim_Z": self.dim_Z,
            "dim_B": self.dim_B,
            "betti": self.betti,
            "method": self.method,
        }


def cohomology(g, rho=None, max_degree=None, allow_modular=True, limit=10_000):
    s = Coboundary(g, rho)
    top = g.dim if max_degree is None else min(max_degree, g.dim)
    dV = s.rho.dim_V
    ranks = []
    methods = set()
    # rank s_n for n = 0 .. top (s_top is needed for Z^top)
    for n in range(top + 1):
        if n >= g.dim:
            ranks.append(0)
            continue
        rows, ncols = s.matrix_rows(n)
        r, how = guarded_rank(rows, max(ncols, len(rows)), limit=limit, allow_modular=allow_modular)
        methods.add(how)
        ranks.append(r)
    degrees = list(range(top + 1))
    dim_C = [comb(g.dim, n) * dV for n in degrees]
    dim_Z = [dim_C[n] - ranks[n] for n in degrees]
    dim_B = [ranks[n - 1] if n > 0 else 0 for n in degrees]
    betti = [dim_Z[n] - dim_B[n] for n in degrees]
    method = "exact" if methods <= {"exact"} else sorted(m for m in methods if m != "exact")[0]
    return CohomologyReport(degrees, dim_C, ranks, dim_Z, dim_B, betti, method)


# ---------------------------------------------------------------------------
# Whitehead homotopy


def homotopy(omega, rho):
    """(tau Omega)^A_I = g^{ij} rho(X_i)^A_B Omega^B_{j I}."""
    g = rho.algebra
    ginv = g.killing_inverse
    q = omega.degree
    if q == 0:
        return None
    # raised rho: R^j = g^{ij} rho(X_i)
    raised = []
    for j in range(g.dim):
        acc = Mat.zeros(rho.dim_V)
        for i in range(g.dim):
            c = ginv.get(i, j)
            if c:
                acc = acc + rho.matrices[i].scale(c)
        raised.append(acc)
    out = [{} for _ in range(rho.dim_V)]
    for (B, key), v in omega.items():
        for pos, j in enumerate(key):
            rest = key[:pos] + key[pos + 1:]
            sv = v if pos % 2 == 0 else -v
            R = raised[j]
            for A in range(rho.dim_V):
                r = R.get(A, B)
                if r:
                    d = out[A]
                    d[rest] = d.get(rest, ZERO) + r * sv
    return Cochain(q - 1, g.dim, tuple(AltTensor(q - 1, g.dim, d, check=False) for d in out))


@dataclass
class WhiteheadVerdict:
    holds: bool
    degree: int
    casimir: Scalar
    checked: int
    witness: dict = None

    def to_json(self):
        doc = {"degree": self.degree, "holds": self.holds, "I2": str(self.casimir), "checked": self.checked}
        if self.witness:
            doc["witness"] = self.witness
        return doc


def whitehead_homotopy_check(g, rho, degree, cochains=None):
    """Verify (s tau + tau s) Omega = I_2 Omega on every basis cochain."""
    if rho.is_trivial():
        raise RepresentationError("homotopy undefined for trivial coefficients; I_2 may vanish", rho=rho.name)
    I2 = rho.casimir()
    c = I2.is_scalar()
    if c is None or not c:
        raise StructureError("I_2 is not an invertible scalar matrix", I2=I2.to_json())
    s = Coboundary(g, rho)
    if cochains is None:
        cochains = [Cochain.basis(degree, g.dim, A, I, rho.dim_V) for A, I in s.basis(degree)]
    checked = 0
    for om in cochains:
        lhs = Cochain.zero(degree, g.dim, rho.dim_V)
        if degree > 0:
            lhs = lhs + s.apply(homotopy(om, rho))
        if degree < g.dim:
            lhs = lhs + homotopy(s.apply(om), rho)
        diff = lhs - om.apply_matrix(I2)
        checked += 1
        if not diff.is_zero():
            return WhiteheadVerdict(False, degree, c, checked, {"input": first_nonzero(om), "residual": first_nonzero(diff)})
    return WhiteheadVerdict(True, degree, c, checked)


# ---------------------------------------------------------------------------
# cocycles from invariant polynomials


def _wedge_powers(g, m2):
    """W_L = C^{l1} ^ ... ^ C^{l_m2} for sorted multisets L."""
    forms = [g.structure_2form(l) for l in range(g.dim)]
    level = {(): AltTensor(0, g.dim, {(): ONE})}
    for _ in range(m2):
        nxt = {}
        for L, W in level.items():
            start = L[-1] if L else 0
            for l in range(start, g.dim):
                if forms[l].is_zero():
                    continue
                P = wedge(W, forms[l])
                if P:
                    nxt[L + (l,)] = P
        level = nxt
    return level


def cocycle_from_polynomial(k, g=None, verify=True):
    """(2m-1)-form Omega_{rho I sigma} from an invariant polynomial of order m.

    Omega_{rho I sigma} = 2^{m-2} sum_l k_{rho l1 .. l_{m-1}}
        (C^{l1} ^ .. ^ C^{l_{m-2}} ^ gamma^{l_{m-1}, sigma})_I
    with gamma^{l, sigma}_a = C^l_{a sigma}; this is the unit-weight
    permutation sum of the defining contraction.
    """
    if isinstance(k, InvariantPolynomial):
        g = g or k.algebra
        t = k.tensor
    else:
        t = k
    m = t.degree
    n = g.dim
    q = 2 * m - 1
    if m < 2:
        raise DegreeError("polynomial order must be at least 2", order=m)
    if verify and invariance_residual(t, g):
        raise NotInvariantError("polynomial is not ad-invariant")
    if q > n:
        return AltTensor(q, n)
    W = _wedge_powers(g, m - 2)
    weight_l = {L: factorial(m - 2) // multiplicity(L) for L in W}
    # P[rho][l] = sum_L k_{rho L l} * weight * W_L
    gamma = {}
    for l in range(n):
        for s in range(n):
            ent = {}
            for a in range(n):
                v = g.C(a, s, l)
                if v:
                    ent[(a,)] = v
            if ent:
                gamma[(l, s)] = AltTensor(1, n, ent, check=False)
    factor = Scalar(2 ** (m - 2))
    full = {}
    for rho in range(n):
        P = {}
        for L, WL in W.items():
            for l in range(n):
                kv = t[(rho,) + L + (l,)]
                if not kv:
                    continue
                coeff = kv * weight_l[L]
                P[l] = P[l] + WL.scale(coeff) if l in P else WL.scale(coeff)
        for sigma in range(n):
            acc = None
            for l, Pl in P.items():
                gm = gamma.get((l, sigma))
                if gm is None:
                    continue
                term = wedge(Pl, gm)
                acc = term if acc is None else acc + term
            if acc is None or acc.is_zero():
                continue
            for I, v in acc.items():
                full[(rho, I, sigma)] = factor * v
    # assemble and check full antisymmetry
    canon = {}
    for (rho, I, sigma), v in full.items():
        key, sgn = _place(rho, I, sigma)
        if not sgn:
            raise StructureError("contraction is not antisymmetric (repeated index survives)", rho=rho, index=list(I), sigma=sigma)
        val = v if sgn > 0 else -v
        prev = canon.get(key)
        if prev is None:
            canon[key] = val
        elif prev != val:
            raise StructureError("contraction is not antisymmetric", index=list(key))
    omega = AltTensor(q, n, canon, check=False)
    if verify:
        # every canonical component must have been produced from each (rho, sigma) placement
        expected = q * (q - 1)
        counts = {}
        for (rho, I, sigma) in full:
            key = tuple(sorted((rho, sigma) + I))
            counts[key] = counts.get(key, 0) + 1
        for key in canon:
            if counts.get(key, 0) != expected:
                raise StructureError("contraction is not antisymmetric (missing placements)", index=list(key))
        ds = Coboundary(g).apply(omega)
        if not ds.is_zero():
            raise NotACocycleError("constructed form is not closed", **first_nonzero(ds))
    return omega


def _place(rho, I, sigma):
    return sort_with_parity((rho,) + tuple(I) + (sigma,))


# ---------------------------------------------------------------------------
# relative cohomology


def _as_vectors(g, h_basis):
    vecs = []
    for h in h_basis:
        if isinstance(h, int):
            vecs.append({h: ONE})
        else:
            vecs.append({k: Scalar.coerce(v) for k, v in dict(h).items() if v})
    return vecs


def relative_constraints(g, vecs, q):
    """Rows (over the canonical q-set basis) cutting out C^q(g, H)."""
    n = g.dim
    cols = {I: idx for idx, I in enumerate(combinations(range(n), q))}
    rows = []
    if q == 0:
        return rows, cols
    for h in vecs:
        # horizontality: sum_a h_a Omega(a, R) = 0
        for R in combinations(range(n), q - 1):
            row = {}
            sR = set(R)
            for a, ha in h.items():
                if a in sR:
                    continue
                key, sgn = merge_sorted((a,), R)
                c = cols[key]
                row[c] = row.get(c, ZERO) + (ha if sgn > 0 else -ha)
            row = {c: v for c, v in row.items() if v}
            if row:
                rows.append(row)
        # invariance: sum_r Omega(.., [h, X_jr], ..) = 0
        adh = {}
        for a, ha in h.items():
            for j in range(n):
                for k, v in g.bracket(a, j).items():
                    adh.setdefault(j, {})
                    adh[j][k] = adh[j].get(k, ZERO) + ha * v
        for J in combinations(range(n), q):
            row = {}
            for pos, j in enumerate(J):
                for k, v in adh.get(j, {}).items():
                    if not v:
                        continue
                    key, sgn = sort_with_parity(J[:pos] + (k,) + J[pos + 1:])
                    if not sgn:
                        continue
                    c = cols[key]
                    row[c] = row.get(c, ZERO) + (v if sgn > 0 else -v)
            row = {c: v for c, v in row.items() if v}
            if row:
                rows.append(row)
    return rows, cols


def check_subalgebra(g, vecs):
    for a in range(len(vecs)):
        for b in range(a + 1, len(vecs)):
            br = g.bracket_vectors(vecs[a], vecs[b])
            if br and span_coefficients(vecs, br) is None:
                raise NotASubalgebraError("h is not closed under the bracket", pair=[a, b])


@dataclass
class RelativeReport(CohomologyReport):
    closure_verified: bool = True


def relative_cohomology(g, h_basis, max_degree=None):
    vecs = _as_vectors(g, h_basis)
    check_subalgebra(g, vecs)
    n = g.dim
    top = n if max_degree is None else min(max_degree, n)
    s = Coboundary(g)
    spaces = []
    for q in range(top + 2):
        if q > n:
            spaces.append(([], {}))
            continue
        rows, cols = relative_constraints(g, vecs, q)
        basis = nullspace(rows, len(cols))
        keys = list(cols)
        spaces.append(([{keys[c]: v for c, v in vec.items()} for vec in basis], rows))
    ranks = []
    for q in range(top + 1):
        basis, _ = spaces[q]
        images = []
        for vec in basis:
            om = AltTensor(q, n, vec, check=False)
            images.append(s.apply(om).components[0] if q < n else AltTensor(q + 1, n))
        # containment of s C^q(g,H) in C^{q+1}(g,H)
        if q + 1 <= n:
            _, next_rows = spaces[q + 1]
            cols = {I: idx for idx, I in enumerate(combinations(range(n), q + 1))}
            for img in images:
                vec = {cols[I]: v for I, v in img.items()}
                for row in next_rows:
                    if qsum(row[c] * v for c, v in vec.items() if c in row):
                        raise StructureError("s does not preserve the relative subcomplex", degree=q)
        keyidx = {}
        rows = []
        for img in images:
            rows.append({keyidx.setdefault(I, len(keyidx)): v for I, v in img.items()})
        r, _ = guarded_rank(rows, max(len(keyidx), 1))
        ranks.append(r)
    degrees = list(range(top + 1))
    dim_C = [len(spaces[q][0]) for q in degrees]
    dim_Z = [dim_C[q] - ranks[q] for q in degrees]
    dim_B = [ranks[q - 1] if q > 0 else 0 for q in degrees]
    betti = [dim_Z[q] - dim_B[q] for q in degrees]
    return RelativeReport(degrees, dim_C, ranks, dim_Z, dim_B, betti, "exact", closure_verified=True)
