"""Symmetrized-trace invariant polynomials, invariance, primitivity, Casimirs."""

from dataclasses import dataclass, field
from itertools import combinations_with_replacement, permutations
from math import comb, factorial

from .errors import DegreeError, RepresentationError, ResourceGuardError, StructureError
from .linalg import Mat, inverse, span_coefficients
from .scalar import ONE, ZERO, Scalar, qsum
from .tensor import SymTensor, unshuffles

MAX_ORDER = 6
MAX_DIM = 15


@dataclass
class InvariantPolynomial:
    algebra: object
    order: int
    tensor: SymTensor
    name: str = ""

    def is_zero(self):
        return self.tensor.is_zero()


def multiplicity(idx):
    """prod_j (count of j)! for a multi-index."""
    out = 1
    run = 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            run += 1
            out *= run
        else:
            run = 1
    return out


def sorted_multisets(dim, m):
    return combinations_with_replacement(range(dim), m)


def _ordered_sums(mats, m):
    """S_J = sum over distinct orderings of multiset J of the matrix words.

    Returns a dict from every sorted multiset J of size m to S_J.  Built by
    S_J = sum_{distinct j in J} X_j S_{J - j}.
    """
    n = len(mats)
    size = mats[0].nrows
    level = {(): Mat.identity(size)}
    for q in range(1, m + 1):
        nxt = {}
        for J in sorted_multisets(n, q):
            acc = None
            prev = None
            for pos, j in enumerate(J):
                if j == prev:
                    continue
                prev = j
                rest = J[:pos] + J[pos + 1:]
                sub = level.get(rest)
                if sub is None:
                    continue
                term = mats[j] @ sub
                acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero():
                nxt[J] = acc
        level = nxt
    return level


def _guard(g, m):
    if m < 2:
        raise DegreeError("order must be at least 2", order=m)
    if g.generators is None:
        raise RepresentationError("algebra has no matrix realization", algebra=g.name)
    if m > MAX_ORDER or g.dim > MAX_DIM:
        raise ResourceGuardError(
            "symmetrized trace too large; use a smaller order", order=m, dim=g.dim, max_order=MAX_ORDER, max_dim=MAX_DIM
        )


def symmetrized_trace(g, m):
    """k_{i1..im} = sTr(X_i1 ... X_im) in the defining representation."""
    _guard(g, m)
    sums = _ordered_sums(list(g.generators), m)
    fm = factorial(m)
    ent = {}
    for J, S in sums.items():
        t = S.trace()
        if t:
            # S_J sums m!/mult(J) distinct words
            ent[J] = t * Scalar(multiplicity(J)) / fm
    return InvariantPolynomial(g, m, SymTensor(m, g.dim, ent, check=False), name=f"sTr{m}")


def symmetrized_trace_bruteforce(g, m):
    """Reference: average Tr over all m! orderings for every sorted multi-index."""
    _guard(g, m)
    X = g.generators
    fm = factorial(m)
    ent = {}
    for J in sorted_multisets(g.dim, m):
        acc = ZERO
        for perm in permutations(J):
            M = X[perm[0]]
            for p in perm[1:]:
                M = M @ X[p]
            acc = acc + M.trace()
        if acc:
            ent[J] = acc / fm
    return SymTensor(m, g.dim, ent, check=False)


def killing_polynomial(g):
    k = g.killing_form
    ent = {(i, j): k.get(i, j) for i in range(g.dim) for j in range(i, g.dim) if k.get(i, j)}
    return InvariantPolynomial(g, 2, SymTensor(2, g.dim, ent, check=False), name="killing")


# ---------------------------------------------------------------------------
# invariance


@dataclass
class InvarianceReport:
    zero: bool
    nonzero_count: int = 0
    witness: dict = field(default_factory=dict)

    def to_json(self):
        doc = {"invariance_residual": "0" if self.zero else "nonzero", "nonzero_components": self.nonzero_count}
        if not self.zero:
            doc["witness"] = self.witness
        return doc


def invariance_residual(k, g):
    """R_{l, I} = sum_r sum_s C_{l i_r}^s k_{i_1 .. s .. i_m} over sorted I."""
    if isinstance(k, InvariantPolynomial):
        k = k.tensor
    if k.dim != g.dim:
        raise DegreeError("tensor and algebra dimensions differ", tensor=k.dim, algebra=g.dim)
    # preimages: for fixed l and s, all a with C_{l a}^s != 0
    pre = {}
    for l in range(g.dim):
        for a in range(g.dim):
            for s, c in g.bracket(l, a).items():
                pre.setdefault((l, s), []).append((a, c))
    R = {}
    for J, v in k.items():
        prev = None
        for pos, s in enumerate(J):
            if s == prev:
                continue
            prev = s
            rest = J[:pos] + J[pos + 1:]
            for l in range(g.dim):
                for a, c in pre.get((l, s), ()):
                    I = tuple(sorted(rest + (a,)))
                    w = c * v * I.count(a)
                    key = (l, I)
                    R[key] = R.get(key, ZERO) + w
    return {key: val for key, val in R.items() if val}


def check_invariance(k, g):
    R = invariance_residual(k, g)
    if not R:
        return InvarianceReport(True)
    key = max(sorted(R), key=lambda kk: R[kk].norm2())
    l, I = key
    return InvarianceReport(False, len(R), {"l": l, "index": list(I), "value": str(R[key])})


# ---------------------------------------------------------------------------
# products and primitivity


def symmetrized_product(a, b):
    """Full symmetrization of the tensor product a (x) b."""
    if isinstance(a, InvariantPolynomial):
        a = a.tensor
    if isinstance(b, InvariantPolynomial):
        b = b.tensor
    if a.dim != b.dim:
        raise DegreeError("dimension mismatch")
    p, q = a.degree, b.degree
    m = p + q
    inv_binom = Scalar(1) / comb(m, p)
    acc = {}
    for A, va in a.items():
        ma = multiplicity(A)
        for B, vb in b.items():
            I = tuple(sorted(A + B))
            w = inv_binom * va * vb * Scalar(multiplicity(I)) / (ma * multiplicity(B))
            acc[I] = acc.get(I, ZERO) + w
    return SymTensor(m, a.dim, acc)


def symmetrize_full(fn, m, dim):
    """SymTensor from an arbitrary function of m indices by averaging over S_m."""
    fm = factorial(m)
    ent = {}
    for J in sorted_multisets(dim, m):
        acc = qsum(fn(p) for p in permutations(J))
        if acc:
            ent[J] = acc / fm
    return SymTensor(m, dim, ent, check=False)


def _order_partitions(m, orders):
    """Multisets of available orders (each >= 2) summing to m, length >= 2."""
    orders = sorted(set(orders))
    out = []

    def rec(rest, start, acc):
        if rest == 0:
            if len(acc) >= 2:
                out.append(tuple(acc))
            return
        for idx in range(start, len(orders)):
            o = orders[idx]
            if o > rest:
                break
            rec(rest - o, idx, acc + [o])

    rec(m, 0, [])
    return out


@dataclass
class PrimitivityResult:
    primitive: bool
    products: list
    coefficients: list

    def to_json(self):
        doc = {"primitive": self.primitive}
        if not self.primitive:
            doc["decomposition"] = [
                {"factors": list(names), "coefficient": str(c)} for names, c in zip(self.products, self.coefficients) if c
            ]
        return doc


def is_primitive(k, lower):
    """Decide whether k lies outside the span of symmetrized lower products.

    ``lower`` is a collection of InvariantPolynomial of orders below k.order.
    Products of any number (>= 2) of factors with orders summing to the
    order of k are used.  A zero k is reported as not primitive.
    """
    m = k.order
    by_order = {}
    for poly in lower:
        if poly.order < m:
            by_order.setdefault(poly.order, []).append(poly)
    products = []
    tensors = []
    for parts in _order_partitions(m, by_order):
        # choose factors with repetition inside each order class
        choices = [[]]
        counts = {}
        for o in parts:
            counts[o] = counts.get(o, 0) + 1
        for o, c in sorted(counts.items()):
            pool = by_order[o]
            picks = list(combinations_with_replacement(range(len(pool)), c))
            choices = [prev + [pool[i] for i in pick] for prev in choices for pick in picks]
        for factors in choices:
            t = factors[0].tensor
            for f in factors[1:]:
                t = symmetrized_product(t, f.tensor)
            products.append(tuple(f.name or f"k{f.order}" for f in factors))
            tensors.append(t)
    if k.tensor.is_zero():
        return PrimitivityResult(False, products, [ZERO] * len(products))
    coeffs = span_coefficients([t.entries for t in tensors], k.tensor.entries) if tensors else None
    if coeffs is None:
        return PrimitivityResult(True, products, [])
    return PrimitivityResult(False, products, coeffs)


def standard_invariants(g, max_order):
    """Symmetrized traces of orders 2..max_order."""
    return [symmetrized_trace(g, m) for m in range(2, max_order + 1)]


def primitive_orders(g, max_order):
    """Orders in 2..max_order whose symmetrized trace is primitive."""
    polys = standard_invariants(g, max_order)
    out = []
    for idx, k in enumerate(polys):
        if is_primitive(k, polys[:idx]).primitive:
            out.append(k.order)
    return out


def dd_polynomial(g, d=None):
    """sym(d_{i1 i2 l} g^{l m} d_{m i3 i4}) with g^{lm} the inverse Killing form."""
    if d is None:
        d = symmetrized_trace(g, 3)
    dt = d.tensor if isinstance(d, InvariantPolynomial) else d
    ginv = g.killing_inverse
    n = g.dim
    # raised last slot: (d g^{-1})_{ab}^{m}
    dup = {}
    for a in range(n):
        for b in range(a, n):
            row = {}
            for l in range(n):
                v = dt[(a, b, l)]
                if not v:
                    continue
                for mm in range(n):
                    w = ginv.get(l, mm)
                    if w:
                        row[mm] = row.get(mm, ZERO) + v * w
            row = {mm: v for mm, v in row.items() if v}
            if row:
                dup[(a, b)] = row

    def T(i1, i2, i3, i4):
        row = dup.get((min(i1, i2), max(i1, i2)))
        if not row:
            return ZERO
        return qsum(v * dt[(mm, i3, i4)] for mm, v in row.items())

    ent = {}
    for J in sorted_multisets(n, 4):
        a, b, c, e = J
        v = (T(a, b, c, e) + T(a, c, b, e) + T(a, e, b, c)) / 3
        if v:
            ent[J] = v
    return InvariantPolynomial(g, 4, SymTensor(4, n, ent, check=False), name="dd")


# ---------------------------------------------------------------------------
# Casimir operators


def casimir_matrix(k, g, metric=None):
    """k^{i1..im} X_i1 .. X_im with indices raised by the inverse form.

    ``metric`` defaults to the Killing form; pass another non-degenerate
    symmetric form (e.g. the trace form) when the Killing form degenerates.
    """
    if g.generators is None:
        raise RepresentationError("algebra has no matrix realization", algebra=g.name)
    t = k.tensor if isinstance(k, InvariantPolynomial) else k
    ginv = g.killing_inverse if metric is None else inverse(metric)
    n = g.dim
    # Y^j = g^{ij} X_i, so that k_J Y^{j1}..Y^{jm} raises every index
    Y = []
    for j in range(n):
        acc = Mat.zeros(g.generators[0].nrows)
        for i in range(n):
            c = ginv.get(i, j)
            if c:
                acc = acc + g.generators[i].scale(c)
        Y.append(acc)
    size = g.generators[0].nrows
    if t.is_zero():
        return Mat.zeros(size)
    sums = _ordered_sums(Y, t.degree)
    out = Mat.zeros(size)
    for J, v in t.items():
        S = sums.get(J)
        if S is not None:
            out = out + S.scale(v)
    return out


def commutant_residual(M, g):
    """First generator index not commuting with M, or None."""
    for i, X in enumerate(g.generators):
        if not (M @ X - X @ M).is_zero():
            return i
    return None


# ---------------------------------------------------------------------------
# cocycle -> polynomial


def _raised_pair_forms(g):
    """E_c^{ab} = w_{jkc} g^{ja} g^{kb} for a < b, as {(a, b): {c: value}}."""
    n = g.dim
    ginv = g.killing_inverse
    k = g.killing_form
    out = {}
    for c in range(n):
        rows = [[ZERO] * n for _ in range(n)]
        nz = False
        for (j, l), row in g.structure.items():
            v = qsum(k.get(c, i) * w for i, w in row.items())
            if v:
                rows[j][l] = v
                rows[l][j] = -v
                nz = True
        if not nz:
            continue
        E = ginv @ Mat(rows) @ ginv
        for a in range(n):
            for b in range(a + 1, n):
                v = E.get(a, b)
                if v:
                    out.setdefault((a, b), {})[c] = v
    return out


def polynomial_from_cocycle(omega, g):
    """Order-m symmetric tensor from a (2m-1)-cocycle, indices lowered again.

    t_{c1..cm} = Omega_{a1..a_{2m-2} cm} E_{c1}^{a1 a2} .. E_{c_{m-1}}^{a_{2m-3} a_{2m-2}}
    """
    q = omega.degree
    if q < 3 or q % 2 == 0:
        raise DegreeError("cocycle degree must be odd and at least 3", degree=q)
    m = (q + 1) // 2
    E = _raised_pair_forms(g)
    two = Scalar(2)
    state = {((), key): v for key, v in omega.items()}
    for _ in range(m - 1):
        nxt = {}
        for (prefix, rest), v in state.items():
            for pair, remainder, sgn in unshuffles(rest, 2):
                row = E.get(pair)
                if not row:
                    continue
                base = two * v if sgn > 0 else -(two * v)
                for c, e in row.items():
                    key = (prefix + (c,), remainder)
                    nxt[key] = nxt.get(key, ZERO) + base * e
        state = {key: v for key, v in nxt.items() if v}
    full = {}
    for (prefix, rest), v in state.items():
        idx = prefix + rest
        full[idx] = full.get(idx, ZERO) + v
    ent = {}
    for idx, v in full.items():
        if not v:
            continue
        key = tuple(sorted(idx))
        if key in ent:
            continue
        for perm in set(permutations(idx)):
            if full.get(perm, ZERO) != v:
                raise StructureError("contracted tensor is not symmetric", index=list(idx))
        ent[key] = v
    return InvariantPolynomial(g, m, SymTensor(m, g.dim, ent, check=False), name=f"from_cocycle{q}")
