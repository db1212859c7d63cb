"""Exact linear algebra over Q(i): small dense matrices and sparse elimination."""

import random

import gmpy2

from .errors import DimensionMismatch, ResourceGuardError, SingularFormError
from .scalar import ONE, ZERO, Scalar, qsum


class Mat:
    """Immutable dense matrix of Scalars."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows):
        rows = tuple(tuple(Scalar.coerce(x) for x in r) for r in rows)
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0
        if any(len(r) != self.ncols for r in rows):
            raise DimensionMismatch("ragged matrix rows")

    @classmethod
    def _wrap(cls, rows):
        m = object.__new__(cls)
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = len(rows[0]) if rows else 0
        return m

    @classmethod
    def zeros(cls, n, m=None):
        m = n if m is None else m
        return cls._wrap(tuple((ZERO,) * m for _ in range(n)))

    @classmethod
    def identity(cls, n):
        return cls._wrap(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def unit(cls, n, i, j, value=ONE):
        """``value * E_ij``."""
        rows = [[ZERO] * n for _ in range(n)]
        rows[i][j] = Scalar.coerce(value)
        return cls._wrap(tuple(tuple(r) for r in rows))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def get(self, i, j):
        return self.rows[i][j]

    def __getitem__(self, ij):
        if isinstance(ij, tuple):
            return self.rows[ij[0]][ij[1]]
        return self.rows[ij]

    def __add__(self, other):
        self._same_shape(other)
        return Mat._wrap(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other):
        self._same_shape(other)
        return Mat._wrap(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self):
        return Mat._wrap(tuple(tuple(-a for a in r) for r in self.rows))

    def scale(self, s):
        s = Scalar.coerce(s)
        return Mat._wrap(tuple(tuple(s * a for a in r) for r in self.rows))

    def __rmul__(self, s):
        return self.scale(s)

    def __mul__(self, s):
        if isinstance(s, Mat):
            return self @ s
        return self.scale(s)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise DimensionMismatch("matrix product shape mismatch", left=list(self.shape), right=list(other.shape))
        cols = list(zip(*other.rows)) if other.rows else []
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            row = []
            for c in cols:
                acc = ZERO
                for k, a in nz:
                    b = c[k]
                    if b:
                        acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return Mat._wrap(tuple(out))

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch("matrix shapes differ", left=list(self.shape), right=list(other.shape))

    def transpose(self):
        return Mat._wrap(tuple(zip(*self.rows)))

    def conjugate(self):
        return Mat._wrap(tuple(tuple(a.conjugate() for a in r) for r in self.rows))

    def trace(self):
        return qsum(self.rows[i][i] for i in range(min(self.nrows, self.ncols)))

    def is_zero(self):
        return not any(a for r in self.rows for a in r)

    def is_scalar(self):
        """Return c if the matrix is c * identity, else None."""
        if self.nrows != self.ncols:
            return None
        c = self.rows[0][0] if self.nrows else ZERO
        for i, r in enumerate(self.rows):
            for j, a in enumerate(r):
                if a != (c if i == j else ZERO):
                    return None
        return c

    def flat(self):
        return [a for r in self.rows for a in r]

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "Mat(" + "; ".join(" ".join(str(a) for a in r) for r in self.rows) + ")"

    def to_json(self):
        return [[str(a) for a in r] for r in self.rows]


def commutator(a, b):
    return a @ b - b @ a


def inverse(m):
    """Exact Gauss-Jordan inverse; SingularFormError if singular."""
    n = m.nrows
    if n != m.ncols:
        raise DimensionMismatch("inverse of non-square matrix")
    aug = [list(m.rows[i]) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise SingularFormError("bilinear form is degenerate", column=col)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = ONE / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return Mat._wrap(tuple(tuple(r[n:]) for r in aug))


# ---------------------------------------------------------------------------
# sparse elimination; a row is a dict {column: Scalar}


def _axpy(target, factor, src):
    """target -= factor * src, in place, dropping zeros."""
    for c, v in src.items():
        t = target.get(c)
        nv = (-(factor * v)) if t is None else t - factor * v
        if nv:
            target[c] = nv
        elif t is not None:
            del target[c]


def echelon(rows, reduce=False):
    """Row echelon form of sparse rows.

    Returns ``(pivot_rows, pivot_cols)`` where each pivot row is normalized
    to 1 at its pivot column.  With ``reduce`` the pivot columns are also
    cleared above each pivot.
    """
    work = [{c: v for c, v in r.items() if v} for r in rows]
    pivots = []
    pcols = []
    # process columns in increasing order via a pivot map
    by_col = {}
    for row in work:
        while row:
            c = min(row)
            prow = by_col.get(c)
            if prow is None:
                inv = ONE / row[c]
                if row[c] != ONE:
                    for k in row:
                        row[k] = row[k] * inv
                by_col[c] = row
                break
            _axpy(row, row[c], prow)
    pcols = sorted(by_col)
    pivots = [by_col[c] for c in pcols]
    if reduce:
        for i in range(len(pcols) - 1, -1, -1):
            c = pcols[i]
            prow = pivots[i]
            for j in range(i):
                f = pivots[j].get(c)
                if f:
                    _axpy(pivots[j], f, prow)
    return pivots, pcols


def rank(rows):
    return len(echelon(rows)[1])


def nullspace(rows, ncols):
    """Basis of ``{x : A x = 0}`` as a list of sparse column vectors."""
    pivots, pcols = echelon(rows, reduce=True)
    pset = set(pcols)
    basis = []
    for free in range(ncols):
        if free in pset:
            continue
        vec = {free: ONE}
        for prow, pc in zip(pivots, pcols):
            v = prow.get(free)
            if v:
                vec[pc] = -v
        basis.append(vec)
    return basis


def solve(rows, rhs, ncols):
    """One solution x of A x = rhs (sparse dicts), or None if inconsistent."""
    aug = []
    for r, b in zip(rows, rhs):
        row = dict(r)
        if b:
            row[ncols] = Scalar.coerce(b)
        aug.append(row)
    pivots, pcols = echelon(aug, reduce=True)
    if pcols and pcols[-1] == ncols:
        return None
    x = {}
    for prow, pc in zip(pivots, pcols):
        v = prow.get(ncols)
        if v:
            x[pc] = v
    return x


def span_coefficients(vectors, target):
    """Coefficients c with ``sum_j c_j vectors[j] == target`` or None.

    Vectors and target are sparse dicts over any hashable coordinate keys.
    """
    coords = {}
    for v in list(vectors) + [target]:
        for k in v:
            coords.setdefault(k, len(coords))
    rows = [dict() for _ in coords]
    for j, v in enumerate(vectors):
        for k, a in v.items():
            if a:
                rows[coords[k]][j] = a
    rhs = [ZERO] * len(coords)
    for k, a in target.items():
        rhs[coords[k]] = a
    sol = solve(rows, rhs, len(vectors))
    if sol is None:
        return None
    return [sol.get(j, ZERO) for j in range(len(vectors))]


def mat_rows(m):
    """Sparse rows of a dense Mat."""
    return [{j: a for j, a in enumerate(r) if a} for r in m.rows]


# ---------------------------------------------------------------------------
# modular rank for large complexes


def choose_prime(seed=20240601, bits=62):
    """Deterministic pseudo-random prime p = 1 mod 4 and a square root of -1."""
    rng = random.Random(seed)
    while True:
        p = int(gmpy2.next_prime(rng.getrandbits(bits) | (1 << (bits - 1))))
        if p % 4 == 1:
            break
    g = 2
    while pow(g, (p - 1) // 2, p) != p - 1:
        g += 1
    return p, pow(g, (p - 1) // 4, p)


def _to_mod(x, p, sqrtm1):
    re = int(x.re.numerator) * pow(int(x.re.denominator), -1, p)
    if not x.im:
        return re % p
    im = int(x.im.numerator) * pow(int(x.im.denominator), -1, p)
    return (re + im * sqrtm1) % p


def modular_rank(rows, p=None, sqrtm1=None):
    """Rank of the image of the rows in F_p; never exceeds the exact rank."""
    if p is None:
        p, sqrtm1 = choose_prime()
    by_col = {}
    for r in rows:
        row = {}
        for c, v in r.items():
            m = _to_mod(v, p, sqrtm1)
            if m:
                row[c] = m
        while row:
            c = min(row)
            prow = by_col.get(c)
            if prow is None:
                inv = pow(row[c], -1, p)
                by_col[c] = {k: (v * inv) % p for k, v in row.items()}
                break
            f = row[c]
            for k, v in prow.items():
                nv = (row.get(k, 0) - f * v) % p
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return len(by_col)


def guarded_rank(rows, ncols, limit=10_000, allow_modular=True):
    """``(rank, method)``; above ``limit`` columns switch to a modular rank."""
    if ncols <= limit:
        return rank(rows), "exact"
    if not allow_modular:
        raise ResourceGuardError("matrix too large for exact elimination", columns=ncols, limit=limit)
    p, r = choose_prime()
    return modular_rank(rows, p, r), f"modular (probabilistic), p={p}"
