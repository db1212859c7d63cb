"""Matrix Lie algebras over Q(i), structure constants, invariant forms, catalog."""

import re
from dataclasses import dataclass
from functools import cached_property

from .errors import (
    CatalogOnlyError,
    NotACocycleError,
    NotSimpleError,
    StructureError,
    UnsupportedAlgebra,
)
from .linalg import Mat, SingularFormError, commutator, inverse, span_coefficients
from .scalar import I, ONE, ZERO, Scalar, qsum
from .tensor import AltTensor

EXCEPTIONAL = {
    # name: (dim, invariant orders, cocycle orders)
    "G2": (14, (2, 6), (3, 11)),
    "F4": (52, (2, 6, 8, 12), (3, 11, 15, 23)),
    "E6": (78, (2, 5, 6, 8, 9, 12), (3, 9, 11, 15, 17, 23)),
    "E7": (133, (2, 6, 8, 10, 12, 14, 18), (3, 11, 15, 19, 23, 27, 35)),
    "E8": (248, (2, 8, 12, 14, 18, 20, 24, 30), (3, 15, 23, 27, 35, 39, 47, 59)),
}

CLASSICAL = ("A", "B", "C", "D")
_MIN_RANK = {"A": 1, "B": 1, "C": 1, "D": 2}


@dataclass(frozen=True)
class AlgebraLabel:
    series: str
    rank_or_dim: int

    def __str__(self):
        if self.series in ("abelian",):
            return f"abelian:{self.rank_or_dim}"
        if self.series == "heisenberg":
            return "heisenberg"
        if self.series == "custom":
            return f"custom:{self.rank_or_dim}"
        return f"{self.series}{self.rank_or_dim}"

    @property
    def is_exceptional(self):
        return self.series in ("G", "F", "E")

    @property
    def is_classical(self):
        return self.series in CLASSICAL


def parse_label(text):
    """Parse 'A2', 'D4', 'G2', 'abelian:3', 'heisenberg'."""
    if isinstance(text, AlgebraLabel):
        return text
    t = text.strip()
    low = t.lower()
    if low == "heisenberg":
        return AlgebraLabel("heisenberg", 3)
    m = re.fullmatch(r"abelian:(\d+)", low)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise UnsupportedAlgebra("abelian dimension must be positive", label=t)
        return AlgebraLabel("abelian", n)
    m = re.fullmatch(r"([ABCDEFG])(\d+)", t.upper())
    if not m:
        raise UnsupportedAlgebra(f"unrecognised algebra label {t!r}", label=t)
    series, rank = m.group(1), int(m.group(2))
    if series in CLASSICAL:
        if rank < _MIN_RANK[series]:
            raise UnsupportedAlgebra(f"{series}{rank} is outside the supported range", label=t)
    elif f"{series}{rank}" not in EXCEPTIONAL:
        raise UnsupportedAlgebra(f"no exceptional algebra {series}{rank}", label=t)
    return AlgebraLabel(series, rank)


def expected_dim(label):
    s, l = label.series, label.rank_or_dim
    if s == "A":
        return (l + 1) ** 2 - 1
    if s in ("B", "C"):
        return l * (2 * l + 1)
    if s == "D":
        return l * (2 * l - 1)
    if label.is_exceptional:
        return EXCEPTIONAL[str(label)][0]
    if s == "heisenberg":
        return 3
    return l


# ---------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class CatalogEntry:
    label: AlgebraLabel
    dim: int
    invariant_orders: tuple
    cocycle_orders: tuple

    def to_json(self):
        return {
            "label": str(self.label),
            "dim": self.dim,
            "invariant_orders": list(self.invariant_orders),
            "cocycle_orders": list(self.cocycle_orders),
        }


def catalog(label):
    label = parse_label(label)
    s, l = label.series, label.rank_or_dim
    if label.is_exceptional:
        dim, inv, coc = EXCEPTIONAL[str(label)]
        return CatalogEntry(label, dim, inv, coc)
    if s == "A":
        inv = tuple(range(2, l + 2))
    elif s in ("B", "C"):
        inv = tuple(range(2, 2 * l + 1, 2))
    elif s == "D":
        if l < 3:
            raise NotSimpleError(f"D{l} is not simple", label=str(label))
        # table order: 2, 4, ..., 2l-2, then l
        inv = tuple(range(2, 2 * l - 1, 2)) + (l,)
    else:
        raise NotSimpleError(f"{label} is not a simple algebra; no catalog row", label=str(label))
    return CatalogEntry(label, expected_dim(label), inv, tuple(2 * m - 1 for m in inv))


def poincare_polynomial(entry):
    """Integer coefficients (index = power of t) of prod_j (1 + t^{c_j})."""
    coeffs = [1]
    for c in entry.cocycle_orders:
        out = coeffs + [0] * c
        for k, a in enumerate(coeffs):
            out[k + c] += a
        coeffs = out
    return coeffs


def eval_poly(coeffs, t):
    return sum(a * t**k for k, a in enumerate(coeffs))


# ---------------------------------------------------------------------------
# matrix bases


def _E(n, j, k, v=ONE):
    return Mat.unit(n, j, k, v)


def su_basis(n):
    """Anti-hermitian basis of su(n); for n = 2 it is X_a = -(i/2) sigma_a."""
    half = Scalar(1) / 2
    mi2 = -I * half
    out = []
    for j in range(n):
        for k in range(j + 1, n):
            out.append((_E(n, j, k) + _E(n, k, j)).scale(mi2))
            out.append((_E(n, j, k) - _E(n, k, j)).scale(-half))
    for j in range(n - 1):
        out.append((_E(n, j, j) - _E(n, j + 1, j + 1)).scale(mi2))
    return out


def so_basis(n):
    return [_E(n, j, k) - _E(n, k, j) for j in range(n) for k in range(j + 1, n)]


def sp_basis(l):
    """Compact sp(l) as 2l x 2l matrices [[A, B], [-conj B, conj A]]."""
    n = 2 * l

    def block(A, B):
        rows = [[ZERO] * n for _ in range(n)]
        for r in range(l):
            for c in range(l):
                rows[r][c] = A[r][c]
                rows[r][c + l] = B[r][c]
                rows[r + l][c] = -B[r][c].conjugate()
                rows[r + l][c + l] = A[r][c].conjugate()
        return Mat(rows)

    def small(entries):
        rows = [[ZERO] * l for _ in range(l)]
        for (r, c), v in entries.items():
            rows[r][c] = v
        return rows

    zero = small({})
    out = []
    for j in range(l):
        for k in range(j + 1, l):
            out.append(block(small({(j, k): ONE, (k, j): -ONE}), zero))
            out.append(block(small({(j, k): I, (k, j): I}), zero))
    for j in range(l):
        out.append(block(small({(j, j): I}), zero))
    for j in range(l):
        for k in range(j, l):
            sym = {(j, k): ONE, (k, j): ONE}
            out.append(block(zero, small(sym)))
            out.append(block(zero, small({key: I for key in sym})))
    return out


def symplectic_form(l):
    n = 2 * l
    rows = [[ZERO] * n for _ in range(n)]
    for r in range(l):
        rows[r][r + l] = ONE
        rows[r + l][r] = -ONE
    return Mat(rows)


def heisenberg_basis():
    # X_0 = E_01, X_1 = E_12, central Xi = E_02
    return [_E(3, 0, 1), _E(3, 1, 2), _E(3, 0, 2)]


def abelian_basis(n):
    return [_E(n, j, j) for j in range(n)]


# ---------------------------------------------------------------------------
# the algebra object


class LieAlgebra:
    """Finite-dimensional Lie algebra with sparse structure constants.

    ``structure`` maps ``(i, j)`` with ``i < j`` to ``{k: C_ij^k}``.
    """

    def __init__(self, label, dim, structure, generators=None, name=None):
        self.label = label
        self.dim = dim
        self.generators = tuple(generators) if generators is not None else None
        clean = {}
        for (i, j), row in structure.items():
            if i == j:
                if any(row.values()):
                    raise StructureError("C_ii^k must vanish", index=[i, i])
                continue
            sign = ONE
            if i > j:
                i, j, sign = j, i, -ONE
            acc = clean.setdefault((i, j), {})
            for k, v in row.items():
                v = Scalar.coerce(v) * sign
                acc[k] = acc.get(k, ZERO) + v
        self.structure = {key: {k: v for k, v in row.items() if v} for key, row in clean.items()}
        self.structure = {key: row for key, row in self.structure.items() if row}
        self.name = name or str(label)

    # structure constants ----------------------------------------------
    def bracket(self, i, j):
        """``{k: C_ij^k}`` for any ordered pair."""
        if i == j:
            return {}
        if i < j:
            return self.structure.get((i, j), {})
        return {k: -v for k, v in self.structure.get((j, i), {}).items()}

    def C(self, i, j, k):
        return self.bracket(i, j).get(k, ZERO)

    def bracket_vectors(self, u, v):
        """Bracket of two coefficient dicts."""
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                if i == j:
                    continue
                ab = a * b
                for k, c in self.bracket(i, j).items():
                    out[k] = out.get(k, ZERO) + ab * c
        return {k: x for k, x in out.items() if x}

    def structure_2form(self, k):
        """The 2-form C^k with components ``(a, b) -> C_ab^k``."""
        ent = {}
        for (i, j), row in self.structure.items():
            v = row.get(k)
            if v:
                ent[(i, j)] = v
        return AltTensor(2, self.dim, ent, check=False)

    @cached_property
    def ad(self):
        """Adjoint matrices: ad(X_i)[k][j] = C_ij^k."""
        mats = []
        n = self.dim
        for i in range(n):
            rows = [[ZERO] * n for _ in range(n)]
            for j in range(n):
                for k, v in self.bracket(i, j).items():
                    rows[k][j] = v
            mats.append(Mat(rows))
        return mats

    @cached_property
    def killing_form(self):
        n = self.dim
        ad = self.ad
        rows = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                v = (ad[i] @ ad[j]).trace()
                rows[i][j] = v
                rows[j][i] = v
        return Mat(rows)

    @cached_property
    def trace_form(self):
        if self.generators is None:
            return None
        return trace_form(self.generators)

    @cached_property
    def killing_inverse(self):
        try:
            return inverse(self.killing_form)
        except SingularFormError as exc:
            raise SingularFormError("Killing form is degenerate", algebra=self.name, **exc.details) from None

    def has_invertible_killing(self):
        try:
            self.killing_inverse
        except SingularFormError:
            return False
        return True

    def lowered_structure(self):
        """The 3-form ``w_{ij rho} = k_{rho sigma} C_ij^sigma`` (canonical entries)."""
        k = self.killing_form
        ent = {}
        for (i, j), row in self.structure.items():
            for rho in range(j + 1, self.dim):
                v = qsum(k.get(rho, s) * c for s, c in row.items())
                if v:
                    ent[(i, j, rho)] = v
        return AltTensor(3, self.dim, ent, check=False)

    # residual checks ---------------------------------------------------
    def closure_residual(self):
        """First pair (i, j) whose matrix commutator is not C_ij^k X_k, or None."""
        if self.generators is None:
            return None
        X = self.generators
        n = self.dim
        for i in range(n):
            for j in range(i + 1, n):
                res = commutator(X[i], X[j])
                for k, v in self.bracket(i, j).items():
                    res = res - X[k].scale(v)
                if not res.is_zero():
                    return {"pair": [i, j], "residual": res.to_json()}
        return None

    def jacobi_residual(self):
        """First (i, j, l, sigma) with nonzero cyclic Jacobi sum, or None."""
        n = self.dim
        for i in range(n):
            for j in range(i + 1, n):
                for l in range(j + 1, n):
                    acc = {}
                    for a, b, c in ((i, j, l), (j, l, i), (l, i, j)):
                        for rho, v in self.bracket(a, b).items():
                            for s, w in self.bracket(rho, c).items():
                                acc[s] = acc.get(s, ZERO) + v * w
                    for s, v in sorted(acc.items()):
                        if v:
                            return {"index": [i, j, l, s], "value": str(v)}
        return None

    def is_abelian(self):
        return not self.structure

    # mutation (fault injection) ----------------------------------------
    def mutated(self, i, j, k, delta):
        """Copy with C_ij^k shifted by delta (C_ji^k follows by antisymmetry)."""
        st = {key: dict(row) for key, row in self.structure.items()}
        delta = Scalar.coerce(delta)
        if i > j:
            i, j, delta = j, i, -delta
        row = st.setdefault((i, j), {})
        row[k] = row.get(k, ZERO) + delta
        return LieAlgebra(self.label, self.dim, st, self.generators, name=self.name + "*")

    # serialization -----------------------------------------------------
    def structure_triplets(self):
        out = []
        for (i, j), row in sorted(self.structure.items()):
            for k, v in sorted(row.items()):
                out.append({"i": i, "j": j, "k": k, **v.to_json()})
        return out

    def to_json(self):
        doc = {
            "label": self.name,
            "dim": self.dim,
            "structure": self.structure_triplets(),
            "killing_form": self.killing_form.to_json(),
        }
        if self.generators is not None:
            doc["generators"] = [g.to_json() for g in self.generators]
            doc["trace_form"] = self.trace_form.to_json()
        return doc

    def __repr__(self):
        return f"LieAlgebra({self.name}, dim={self.dim})"


def trace_form(generators):
    n = len(generators)
    rows = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = (generators[i] @ generators[j]).trace()
            rows[i][j] = v
            rows[j][i] = v
    return Mat(rows)


def structure_from_matrices(generators):
    """Solve [X_i, X_j] = C_ij^k X_k exactly.

    Uses the trace form when it is non-degenerate, otherwise a direct
    solve on flattened matrices.  Raises StructureError if the span is
    not closed.
    """
    X = list(generators)
    n = len(X)
    B = trace_form(X)
    try:
        Binv = inverse(B)
    except SingularFormError:
        Binv = None
    flat = [{p: a for p, a in enumerate(x.flat()) if a} for x in X]
    st = {}
    for i in range(n):
        for j in range(i + 1, n):
            M = commutator(X[i], X[j])
            if M.is_zero():
                continue
            if Binv is not None:
                t = [(M @ X[m]).trace() for m in range(n)]
                coeffs = [qsum(t[m] * Binv.get(m, k) for m in range(n) if t[m]) for k in range(n)]
            else:
                coeffs = span_coefficients(flat, {p: a for p, a in enumerate(M.flat()) if a})
                if coeffs is None:
                    raise StructureError("generators do not close under the commutator", pair=[i, j])
            res = M
            for k, c in enumerate(coeffs):
                if c:
                    res = res - X[k].scale(c)
            if not res.is_zero():
                raise StructureError("generators do not close under the commutator", pair=[i, j])
            row = {k: c for k, c in enumerate(coeffs) if c}
            if row:
                st[(i, j)] = row
    return st


def from_matrices(label, generators, name=None):
    return LieAlgebra(label, len(generators), structure_from_matrices(generators), generators, name=name)


def from_structure(dim, structure, name="custom"):
    return LieAlgebra(AlgebraLabel("custom", dim), dim, structure, None, name=name)


def build_algebra(label):
    label = parse_label(label)
    s, l = label.series, label.rank_or_dim
    if label.is_exceptional:
        raise CatalogOnlyError(
            f"{label} is available in the catalog only; no matrix construction",
            label=str(label),
        )
    if s == "A":
        gens = su_basis(l + 1)
    elif s == "B":
        gens = so_basis(2 * l + 1)
    elif s == "D":
        gens = so_basis(2 * l)
    elif s == "C":
        gens = sp_basis(l)
    elif s == "heisenberg":
        gens = heisenberg_basis()
    elif s == "abelian":
        gens = abelian_basis(l)
    else:
        raise UnsupportedAlgebra(f"cannot build {label}", label=str(label))
    return from_matrices(label, gens)


# ---------------------------------------------------------------------------
# central extensions


def two_cocycle_residual(g, omega2):
    """First violated component of the 2-cocycle condition, or None.

    The condition is the trivial-coefficient coboundary
    ``w([X_i, X_j], X_l) + cyclic = 0``.
    """
    n = g.dim
    for i in range(n):
        for j in range(i + 1, n):
            for l in range(j + 1, n):
                acc = ZERO
                for a, b, c in ((i, j, l), (j, l, i), (l, i, j)):
                    for k, v in g.bracket(a, b).items():
                        acc = acc + v * omega2[(k, c)]
                if acc:
                    return {"index": [i, j, l], "value": str(acc)}
    return None


def central_extend(g, omega2, name=None):
    """Extension by a central element Xi (index g.dim): [X_i, X_j] += w_ij Xi."""
    if omega2.degree != 2 or omega2.dim != g.dim:
        raise NotACocycleError("expected a 2-form on the algebra", degree=omega2.degree, dim=omega2.dim)
    bad = two_cocycle_residual(g, omega2)
    if bad is not None:
        raise NotACocycleError("omega is not a 2-cocycle", **bad)
    xi = g.dim
    st = {key: dict(row) for key, row in g.structure.items()}
    for (i, j), v in omega2.items():
        st.setdefault((i, j), {})[xi] = v
    return LieAlgebra(AlgebraLabel("custom", g.dim + 1), g.dim + 1, st, None, name=name or f"{g.name}+central")


def trivializing_shift(g, omega2):
    """alpha with -C_ij^k alpha_k = w_ij (so w = s alpha), or None.

    When it exists the basis Y_k = X_k - alpha_k Xi of the extension closes
    without the central term.
    """
    rows, rhs = [], []
    n = g.dim
    for i in range(n):
        for j in range(i + 1, n):
            rows.append({k: -v for k, v in g.bracket(i, j).items()})
            rhs.append(omega2[(i, j)])
    from .linalg import solve

    sol = solve(rows, rhs, n)
    if sol is None:
        return None
    return [sol.get(k, ZERO) for k in range(n)]


def shifted_brackets(ext, alpha):
    """Structure of ``ext`` in the basis Y_k = X_k - alpha_k Xi, Xi unchanged.

    Returns ``{(i, j): {k: coeff}}`` over the new basis.
    """
    n = ext.dim - 1
    xi = n

    def to_y(vec):
        # X_k = Y_k + alpha_k Xi
        out = dict(vec)
        for k, a in vec.items():
            if k != xi and alpha[k]:
                out[xi] = out.get(xi, ZERO) + a * alpha[k]
        return {k: v for k, v in out.items() if v}

    st = {}
    for i in range(ext.dim):
        for j in range(i + 1, ext.dim):
            # Xi is central so the shift only matters through the bracket
            row = to_y(ext.bracket(i, j))
            if row:
                st[(i, j)] = row
    return st
