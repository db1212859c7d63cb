"""Sparse symmetric / antisymmetric multi-index tensors over Q(i).

Storage convention: an :class:`AltTensor` of degree q stores, for each
strictly increasing multi-index ``i1 < ... < iq``, the coefficient of the
basis element ``w^i1 ^ ... ^ w^iq``.  That coefficient equals the value of
the multilinear map on ``(X_i1, ..., X_iq)``.  The wedge product carries no
combinatorial prefactor; ``(w^0 ^ w^1) ^ w^2`` has component ``(0,1,2) -> 1``.
"""

from itertools import combinations, permutations
from math import factorial

from .errors import DimensionMismatch, DegreeError
from .scalar import ONE, ZERO, Scalar, qsum


def sort_with_parity(idx):
    """Sort ``idx``; return ``(sorted_tuple, sign)``.  sign is 0 on a repeat."""
    idx = tuple(idx)
    n = len(idx)
    if n < 2:
        return idx, 1
    arr = list(idx)
    sign = 1
    # insertion sort counts transpositions; q is small everywhere
    for i in range(1, n):
        x = arr[i]
        j = i - 1
        while j >= 0 and arr[j] > x:
            arr[j + 1] = arr[j]
            j -= 1
            sign = -sign
        if j >= 0 and arr[j] == x:
            return tuple(arr), 0
        arr[j + 1] = x
    return tuple(arr), sign


def shuffle_sign(a, b):
    """For disjoint increasing tuples, sign of the permutation sorting a+b."""
    inv = 0
    j = 0
    nb = len(b)
    for x in a:
        while j < nb and b[j] < x:
            j += 1
        inv += j
    return -1 if inv & 1 else 1


def merge_sorted(a, b):
    """``(sorted union, sign)`` for increasing tuples; sign 0 if they meet."""
    if not a:
        return b, 1
    if not b:
        return a, 1
    sb = set(b)
    for x in a:
        if x in sb:
            return None, 0
    return tuple(sorted(a + b)), shuffle_sign(a, b)


def unshuffles(seq, k):
    """Yield ``(head, tail, sign)`` over unshuffles of ``seq`` into k | rest.

    ``seq`` is an increasing tuple; head and tail are increasing; sign is
    the parity of ``head + tail`` relative to ``seq``.
    """
    n = len(seq)
    for pos in combinations(range(n), k):
        inv = 0
        for r, p in enumerate(pos):
            inv += p - r
        ps = set(pos)
        head = tuple(seq[p] for p in pos)
        tail = tuple(seq[p] for p in range(n) if p not in ps)
        yield head, tail, (-1 if inv & 1 else 1)


def _check_index(idx, dim):
    for i in idx:
        if not 0 <= i < dim:
            raise DimensionMismatch(f"index {i} out of range for dim {dim}", index=list(idx), dim=dim)


class AltTensor:
    """Sparse fully antisymmetric covariant tensor."""

    __slots__ = ("degree", "dim", "_entries")

    def __init__(self, degree, dim, entries=None, *, check=True):
        if degree < 0:
            raise DegreeError("negative degree", degree=degree)
        self.degree = degree
        self.dim = dim
        ent = {}
        if entries:
            for k, v in entries.items():
                k = tuple(k)
                if check:
                    if len(k) != degree:
                        raise DegreeError("multi-index length does not match degree", index=list(k), degree=degree)
                    _check_index(k, dim)
                    if any(k[i] >= k[i + 1] for i in range(len(k) - 1)):
                        raise DegreeError("AltTensor keys must be strictly increasing", index=list(k))
                    v = Scalar.coerce(v)
                if v:
                    ent[k] = v
        self._entries = ent

    # construction helpers --------------------------------------------
    @classmethod
    def from_items(cls, degree, dim, items):
        """Accumulate ``(index tuple, value)`` pairs with arbitrary ordering."""
        acc = {}
        for k, v in items:
            key, sgn = sort_with_parity(k)
            if not sgn:
                continue
            v = Scalar.coerce(v)
            if sgn < 0:
                v = -v
            prev = acc.get(key)
            acc[key] = v if prev is None else prev + v
        return cls(degree, dim, acc)

    @classmethod
    def zero(cls, degree, dim):
        return cls(degree, dim)

    @classmethod
    def basis(cls, idx, dim, value=ONE):
        """``value * w^i1 ^ ... ^ w^iq`` for any ordering of ``idx``."""
        key, sgn = sort_with_parity(idx)
        if not sgn:
            return cls(len(key), dim)
        return cls(len(key), dim, {key: Scalar.coerce(value) * sgn})

    # access -----------------------------------------------------------
    def __getitem__(self, idx):
        key, sgn = sort_with_parity(idx)
        if not sgn:
            return ZERO
        v = self._entries.get(key)
        if v is None:
            return ZERO
        return v if sgn > 0 else -v

    def get_canonical(self, key):
        return self._entries.get(key, ZERO)

    def items(self):
        return self._entries.items()

    def keys(self):
        return self._entries.keys()

    @property
    def entries(self):
        return dict(self._entries)

    def nnz(self):
        return len(self._entries)

    def is_zero(self):
        return not self._entries

    def __bool__(self):
        return bool(self._entries)

    def __len__(self):
        return len(self._entries)

    # algebra ----------------------------------------------------------
    def _compatible(self, other):
        if not isinstance(other, AltTensor):
            raise TypeError("expected AltTensor")
        if other.dim != self.dim:
            raise DimensionMismatch("ambient dimensions differ", left=self.dim, right=other.dim)
        if other.degree != self.degree:
            raise DegreeError("degrees differ", left=self.degree, right=other.degree)

    def __add__(self, other):
        self._compatible(other)
        out = dict(self._entries)
        for k, v in other._entries.items():
            prev = out.get(k)
            out[k] = v if prev is None else prev + v
        return AltTensor(self.degree, self.dim, out, check=False)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return AltTensor(self.degree, self.dim, {k: -v for k, v in self._entries.items()}, check=False)

    def scale(self, s):
        s = Scalar.coerce(s)
        if not s:
            return AltTensor(self.degree, self.dim)
        return AltTensor(self.degree, self.dim, {k: s * v for k, v in self._entries.items()}, check=False)

    def __mul__(self, s):
        if isinstance(s, AltTensor):
            return wedge(self, s)
        return self.scale(s)

    def __rmul__(self, s):
        return self.scale(s)

    def __eq__(self, other):
        if not isinstance(other, AltTensor):
            return NotImplemented
        return (self.degree, self.dim) == (other.degree, other.dim) and self._entries == other._entries

    def __hash__(self):
        return hash((self.degree, self.dim, frozenset(self._entries.items())))

    def __repr__(self):
        return f"AltTensor(degree={self.degree}, dim={self.dim}, nnz={len(self._entries)})"

    def map_values(self, fn):
        return AltTensor(self.degree, self.dim, {k: fn(v) for k, v in self._entries.items()})

    def full_items(self):
        """All ``(ordered index, value)`` pairs of the full antisymmetric tensor."""
        for key, v in self._entries.items():
            for perm in permutations(range(self.degree)):
                idx = tuple(key[p] for p in perm)
                _, sgn = sort_with_parity(perm)
                yield idx, (v if sgn > 0 else -v)

    # serialization ----------------------------------------------------
    def to_json(self):
        return {
            "degree": self.degree,
            "dim": self.dim,
            "entries": [{"idx": list(k), **v.to_json()} for k, v in sorted(self._entries.items())],
        }

    @classmethod
    def from_json(cls, doc):
        entries = {tuple(e["idx"]): Scalar.parse(e["re"], e.get("im", "0")) for e in doc["entries"]}
        return cls(doc["degree"], doc["dim"], entries)


class SymTensor:
    """Sparse fully symmetric covariant tensor keyed by sorted multi-index."""

    __slots__ = ("degree", "dim", "_entries")

    def __init__(self, degree, dim, entries=None, *, check=True):
        self.degree = degree
        self.dim = dim
        ent = {}
        if entries:
            for k, v in entries.items():
                k = tuple(k)
                if check:
                    if len(k) != degree:
                        raise DegreeError("multi-index length does not match degree", index=list(k), degree=degree)
                    _check_index(k, dim)
                    if list(k) != sorted(k):
                        raise DegreeError("SymTensor keys must be sorted", index=list(k))
                    v = Scalar.coerce(v)
                if v:
                    ent[k] = v
        self._entries = ent

    @classmethod
    def from_items(cls, degree, dim, items):
        acc = {}
        for k, v in items:
            key = tuple(sorted(k))
            v = Scalar.coerce(v)
            prev = acc.get(key)
            acc[key] = v if prev is None else prev + v
        return cls(degree, dim, acc)

    def __getitem__(self, idx):
        return self._entries.get(tuple(sorted(idx)), ZERO)

    def items(self):
        return self._entries.items()

    def keys(self):
        return self._entries.keys()

    @property
    def entries(self):
        return dict(self._entries)

    def nnz(self):
        return len(self._entries)

    def is_zero(self):
        return not self._entries

    def __bool__(self):
        return bool(self._entries)

    def __add__(self, other):
        if other.dim != self.dim or other.degree != self.degree:
            raise DimensionMismatch("incompatible symmetric tensors")
        out = dict(self._entries)
        for k, v in other._entries.items():
            prev = out.get(k)
            out[k] = v if prev is None else prev + v
        return SymTensor(self.degree, self.dim, out, check=False)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s):
        s = Scalar.coerce(s)
        return SymTensor(self.degree, self.dim, {k: s * v for k, v in self._entries.items()}, check=False)

    __rmul__ = scale

    def __mul__(self, s):
        return self.scale(s)

    def __eq__(self, other):
        if not isinstance(other, SymTensor):
            return NotImplemented
        return (self.degree, self.dim) == (other.degree, other.dim) and self._entries == other._entries

    def __hash__(self):
        return hash((self.degree, self.dim, frozenset(self._entries.items())))

    def __repr__(self):
        return f"SymTensor(degree={self.degree}, dim={self.dim}, nnz={len(self._entries)})"

    def to_json(self):
        return {
            "degree": self.degree,
            "dim": self.dim,
            "symmetric": True,
            "entries": [{"idx": list(k), **v.to_json()} for k, v in sorted(self._entries.items())],
        }

    @classmethod
    def from_json(cls, doc):
        entries = {tuple(e["idx"]): Scalar.parse(e["re"], e.get("im", "0")) for e in doc["entries"]}
        return cls(doc["degree"], doc["dim"], entries)


def antisymmetrize(t, dim=None):
    """Project a covariant tensor onto its totally antisymmetric part.

    ``t`` is an :class:`AltTensor` (returned unchanged) or a mapping from
    ordered index tuples to values, with every tuple of the same length q.
    The result is ``(1/q!) sum_sigma sign(sigma) t_{sigma(i)}``.
    Degree above ``dim`` yields the zero tensor.
    """
    if isinstance(t, AltTensor):
        return t
    items = list(t.items())
    if dim is None:
        dim = 1 + max((max(k) for k, _ in items if k), default=-1)
    if not items:
        return AltTensor(0, dim)
    q = len(items[0][0])
    if any(len(k) != q for k, _ in items):
        raise DegreeError("mixed index lengths in tensor")
    if q > dim:
        return AltTensor(q, dim)
    acc = AltTensor.from_items(q, dim, items)
    return acc.scale(Scalar(1) / factorial(q))


def wedge(a, b):
    """Unweighted exterior product."""
    if a.dim != b.dim:
        raise DimensionMismatch("ambient dimensions differ", left=a.dim, right=b.dim)
    acc = {}
    for ka, va in a.items():
        sa = set(ka)
        for kb, vb in b.items():
            if sa.intersection(kb):
                continue
            key = tuple(sorted(ka + kb))
            v = va * vb
            if shuffle_sign(ka, kb) < 0:
                v = -v
            prev = acc.get(key)
            acc[key] = v if prev is None else prev + v
    return AltTensor(a.degree + b.degree, a.dim, acc, check=False)


def _metric_entry(metric, k, l):
    if metric is None:
        return ONE if k == l else ZERO
    if hasattr(metric, "get"):
        return Scalar.coerce(metric.get(k, l))
    return Scalar.coerce(metric[k][l])


def _block_det(metric, K, L):
    if metric is None:
        return ONE if K == L else ZERO
    total = ZERO
    n = len(K)
    for perm in permutations(range(n)):
        _, sgn = sort_with_parity(perm)
        term = ONE
        for r in range(n):
            term = term * _metric_entry(metric, K[r], L[perm[r]])
            if not term:
                break
        if term:
            total = total + (term if sgn > 0 else -term)
    return total


def _contract_blocks(a, b, shared, metric):
    """``{(I, J): value}`` with I, J increasing free blocks of a and b."""
    if a.dim != b.dim:
        raise DimensionMismatch("ambient dimensions differ", left=a.dim, right=b.dim)
    if shared > min(a.degree, b.degree) or shared < 0:
        raise DegreeError("shared exceeds operand degree", shared=shared, p=a.degree, q=b.degree)
    pa = a.degree - shared
    # a_{I K}: move K (the contracted block) to the right end
    a_split = {}
    for key, v in a.items():
        for free, K, sgn in unshuffles(key, pa):
            a_split.setdefault(K, []).append((free, v if sgn > 0 else -v))
    b_split = {}
    for key, v in b.items():
        for L, free, sgn in unshuffles(key, shared):
            b_split.setdefault(L, []).append((free, v if sgn > 0 else -v))
    weight = factorial(shared)
    out = {}
    for K, alist in a_split.items():
        for L, blist in b_split.items():
            det = _block_det(metric, K, L)
            if not det:
                continue
            det = det * weight
            for I, va in alist:
                for J, vb in blist:
                    key = (I, J)
                    v = det * va * vb
                    prev = out.get(key)
                    out[key] = v if prev is None else prev + v
    return out


def contract(a, b, shared, metric=None):
    """Raw contraction of the last ``shared`` slots of a with the first of b.

    Returns a general (not antisymmetrized) tensor as a dict from full
    ordered index tuples ``I + J`` to values:
    ``sum_{k, l} a_{I k} M^{k l} b_{l J}`` with ``M = delta`` by default.
    """
    blocks = _contract_blocks(a, b, shared, metric)
    out = {}
    for (I, J), v in blocks.items():
        if not v:
            continue
        for pi in permutations(range(len(I))):
            _, si = sort_with_parity(pi)
            Ip = tuple(I[p] for p in pi)
            for pj in permutations(range(len(J))):
                _, sj = sort_with_parity(pj)
                Jp = tuple(J[p] for p in pj)
                out[Ip + Jp] = v if si * sj > 0 else -v
    return out


def alt_contract(a, b, shared, metric=None):
    """Contract then antisymmetrize the free indices (shuffle-sum weight).

    With ``shared == 0`` this is exactly :func:`wedge`.
    """
    blocks = _contract_blocks(a, b, shared, metric)
    acc = {}
    for (I, J), v in blocks.items():
        key, sgn = merge_sorted(I, J)
        if not sgn or not v:
            continue
        if sgn < 0:
            v = -v
        prev = acc.get(key)
        acc[key] = v if prev is None else prev + v
    return AltTensor(a.degree + b.degree - 2 * shared, a.dim, acc, check=False)


def proportionality(a, b):
    """Return lambda with ``a == lambda * b`` exactly, or None.

    Works for any pair of objects exposing ``items()`` and ``__getitem__``
    over the same key space.  Both zero gives ``0``.
    """
    ka, kb = set(a.keys()), set(b.keys())
    if ka != kb:
        return None
    if not kb:
        return ZERO
    key = next(iter(sorted(kb)))
    lam = a.entries[key] / b.entries[key] if hasattr(a, "entries") else a[key] / b[key]
    ea = a.entries if hasattr(a, "entries") else dict(a.items())
    eb = b.entries if hasattr(b, "entries") else dict(b.items())
    for k in kb:
        if ea[k] != lam * eb[k]:
            return None
    return lam


def epsilon(dim):
    """Levi-Civita symbol of degree ``dim`` as an AltTensor."""
    return AltTensor(dim, dim, {tuple(range(dim)): ONE})


def total(values):
    return qsum(values)
