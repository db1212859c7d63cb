"""Finite Grassmann (ghost) algebra and BRST-type odd derivations on it."""

import random
from dataclasses import dataclass, field
from itertools import combinations

from .errors import AnticommutatorError, DimensionMismatch, RepresentationError, ResourceGuardError
from .scalar import ZERO, Scalar
from .tensor import AltTensor, merge_sorted

MAX_GHOSTS = 15


class GhostElement:
    """Sum of coefficient * c^S e_A with S increasing and A a V-basis index.

    Scalar-valued elements use dim_V = 1 and A = 0 throughout.
    """

    __slots__ = ("dim", "dim_V", "terms")

    def __init__(self, dim, terms=None, dim_V=1):
        self.dim = dim
        self.dim_V = dim_V
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def monomial(cls, S, dim, A=0, dim_V=1, coeff=1):
        key, sgn = _canon(S)
        if not sgn:
            return cls(dim, {}, dim_V)
        c = Scalar.coerce(coeff)
        return cls(dim, {(A, key): c if sgn > 0 else -c}, dim_V)

    @classmethod
    def generator(cls, k, dim):
        return cls.monomial((k,), dim)

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, ZERO) + v
        return GhostElement(self.dim, out, max(self.dim_V, other.dim_V))

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s):
        s = Scalar.coerce(s)
        return GhostElement(self.dim, {k: s * v for k, v in self.terms.items()}, self.dim_V)

    def __mul__(self, other):
        if not isinstance(other, GhostElement):
            return self.scale(other)
        if self.dim_V > 1 and other.dim_V > 1:
            raise RepresentationError("cannot multiply two V-valued ghost elements")
        out = {}
        for (A, S), a in self.terms.items():
            for (B, T), b in other.terms.items():
                key, sgn = merge_sorted(S, T)
                if not sgn:
                    continue
                idx = A if self.dim_V > 1 else B
                v = a * b
                out[(idx, key)] = out.get((idx, key), ZERO) + (v if sgn > 0 else -v)
        return GhostElement(self.dim, out, max(self.dim_V, other.dim_V))

    def is_zero(self):
        return not self.terms

    def degrees(self):
        return {len(S) for _, S in self.terms}

    def __eq__(self, other):
        if not isinstance(other, GhostElement):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __repr__(self):
        return f"GhostElement(dim={self.dim}, terms={len(self.terms)})"


def _canon(S):
    from .tensor import sort_with_parity

    return sort_with_parity(S)


def ghost_image(cochain):
    """sum_{canonical I} Omega^A_I c^I e_A (unweighted canonical sum)."""
    from .cohomology import Cochain

    if isinstance(cochain, AltTensor):
        cochain = Cochain.scalar(cochain)
    terms = {(A, key): v for (A, key), v in cochain.items()}
    return GhostElement(cochain.dim, terms, cochain.dim_V)


def cochain_image(el, degree):
    """Inverse of ghost_image on a homogeneous element."""
    from .cohomology import Cochain

    comps = [{} for _ in range(el.dim_V)]
    for (A, S), v in el.terms.items():
        if len(S) != degree:
            raise DimensionMismatch("element is not homogeneous", degree=degree, found=len(S))
        comps[A][S] = v
    return Cochain(degree, el.dim, tuple(AltTensor(degree, el.dim, d, check=False) for d in comps))


class GhostOperator:
    """Odd derivation fixed by its values on generators (plus an optional rho term).

    ``gen_images[k]`` is {increasing subset: coefficient} for the image of
    c^k.  With ``rho`` the operator also left-multiplies by c^i rho(X_i).
    """

    def __init__(self, dim, gen_images, rho=None, name="s"):
        self.dim = dim
        self.gen_images = [dict(gen_images.get(k, {})) for k in range(dim)]
        self.rho = rho
        self.dim_V = rho.dim_V if rho is not None else 1
        self.name = name
        self._cache = {}

    def apply_monomial(self, A, S):
        key = (A, S)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out = {}
        for p, s in enumerate(S):
            img = self.gen_images[s]
            if not img:
                continue
            R = S[:p] + S[p + 1:]
            for U, c in img.items():
                # the image is even, so it moves to the front freely
                T, sgn = merge_sorted(U, R)
                if not sgn:
                    continue
                v = c if (sgn > 0) == (p % 2 == 0) else -c
                out[(A, T)] = out.get((A, T), ZERO) + v
        if self.rho is not None:
            sS = set(S)
            for i in range(self.dim):
                if i in sS:
                    continue
                T, sgn = merge_sorted((i,), S)
                M = self.rho.matrices[i]
                for B in range(self.dim_V):
                    r = M.get(B, A)
                    if r:
                        out[(B, T)] = out.get((B, T), ZERO) + (r if sgn > 0 else -r)
        out = {k: v for k, v in out.items() if v}
        self._cache[key] = out
        return out

    def __call__(self, el):
        out = {}
        for (A, S), a in el.terms.items():
            for key, v in self.apply_monomial(A, S).items():
                out[key] = out.get(key, ZERO) + a * v
        return GhostElement(self.dim, out, max(el.dim_V, self.dim_V))

    def __add__(self, other):
        imgs = {}
        for k in range(self.dim):
            d = dict(self.gen_images[k])
            for U, c in other.gen_images[k].items():
                d[U] = d.get(U, ZERO) + c
            imgs[k] = {U: c for U, c in d.items() if c}
        if self.rho is not None and other.rho is not None:
            raise RepresentationError("cannot add two rho terms")
        return GhostOperator(self.dim, imgs, self.rho or other.rho, name=f"{self.name}+{other.name}")

    def generator_coefficients(self, k):
        return dict(self.gen_images[k])

    @property
    def shift(self):
        """Degree shift (all generator images share one degree)."""
        degs = {len(U) for img in self.gen_images for U in img}
        if self.rho is not None:
            degs.add(2)
        return (degs.pop() - 1) if len(degs) == 1 else None


def _guard(dim):
    if dim > MAX_GHOSTS:
        raise ResourceGuardError("too many ghost generators", dim=dim, limit=MAX_GHOSTS)


def operator_from_mixed(dim, mixed, name):
    """s = -sum_{canonical I} W_I^sigma c^I d/dc^sigma."""
    imgs = {}
    for I, row in mixed.items():
        for sigma, w in row.items():
            if w:
                d = imgs.setdefault(sigma, {})
                d[I] = d.get(I, ZERO) - w
    return GhostOperator(dim, imgs, name=name)


def brst_trivial(g):
    _guard(g.dim)
    return operator_from_mixed(g.dim, g.structure, "s2")


def brst_rho(g, rho):
    _guard(g.dim)
    if rho.algebra.dim != g.dim:
        raise RepresentationError("representation belongs to a different algebra")
    base = brst_trivial(g)
    if rho.is_trivial():
        return base
    return GhostOperator(g.dim, {k: base.gen_images[k] for k in range(g.dim)}, rho, name="s~")


def higher_brst(structure):
    """s_{2m-2} from a MultiBracketAlgebra of order 2m-2."""
    g = structure.base
    _guard(g.dim)
    return operator_from_mixed(g.dim, structure.mixed, f"s{structure.order}")


# ---------------------------------------------------------------------------
# verification


def basis_monomials(dim, dim_V=1, degree=None):
    degs = range(dim + 1) if degree is None else [degree]
    for d in degs:
        for S in combinations(range(dim), d):
            for A in range(dim_V):
                yield A, S


def anticommutator_on(a, b, A, S):
    """{a, b} applied to one basis monomial, as a term dict."""
    out = {}
    for first, second in ((a, b), (b, a)):
        for (B, T), v in second.apply_monomial(A, S).items():
            for key, w in first.apply_monomial(B, T).items():
                out[key] = out.get(key, ZERO) + v * w
    return {k: v for k, v in out.items() if v}


def square_on(a, A, S):
    out = {}
    for (B, T), v in a.apply_monomial(A, S).items():
        for key, w in a.apply_monomial(B, T).items():
            out[key] = out.get(key, ZERO) + v * w
    return {k: v for k, v in out.items() if v}


@dataclass
class PairCheck:
    left: str
    right: str
    zero: bool
    checked: int
    witness: dict = None

    def to_json(self):
        doc = {"pair": [self.left, self.right], "zero": self.zero, "checked": self.checked}
        if self.witness:
            doc["witness"] = self.witness
        return doc


def _check_pair(a, b, monomials):
    count = 0
    for A, S in monomials:
        res = square_on(a, A, S) if a is b else anticommutator_on(a, b, A, S)
        count += 1
        if res:
            key = min(res)
            return PairCheck(a.name, b.name, False, count, {
                "monomial": list(S), "value_index": A, "term": list(key[1]), "value": str(res[key])
            })
    return PairCheck(a.name, b.name, True, count)


def nilpotency_check(op, dim_V=1, monomials=None):
    if monomials is None:
        monomials = basis_monomials(op.dim, dim_V)
    return _check_pair(op, op, monomials)


def sampled_monomials(dim, degrees, per_degree, seed=0):
    rng = random.Random(seed)
    out = []
    for d in degrees:
        for _ in range(per_degree):
            out.append((0, tuple(sorted(rng.sample(range(dim), d)))))
    return out


@dataclass
class CompleteBRSTReport:
    terms: list
    pairs: list = field(default_factory=list)
    mode: str = "all monomials"

    @property
    def nilpotent(self):
        return all(p.zero for p in self.pairs)

    def first_failure(self):
        for p in self.pairs:
            if not p.zero:
                return p
        return None

    def to_json(self):
        return {
            "terms": self.terms,
            "nilpotent": self.nilpotent,
            "anticommutators": "all zero" if self.nilpotent else "nonzero",
            "mode": self.mode,
            "pairs": [p.to_json() for p in self.pairs],
        }


def complete_brst(g, structures, exhaustive=None, strict=False, sample_degrees=(2, 3), per_degree=40):
    """s = s_2 + sum s_{2m-2}; check every s_a^2 and {s_a, s_b}.

    Exhaustive mode runs over all 2^dim monomials.  Otherwise each
    anticommutator of odd derivations is an even derivation, hence zero iff
    zero on the generators c^k; the generator block is checked, then the
    degree-2 block and a deterministic sample of higher monomials.
    """
    _guard(g.dim)
    ops = [brst_trivial(g)] + [higher_brst(s) for s in structures if s.order > 2 and not s.is_empty()]
    if exhaustive is None:
        exhaustive = g.dim <= 10
    if exhaustive:
        monos = list(basis_monomials(g.dim))
        mode = "all monomials"
    else:
        monos = list(basis_monomials(g.dim, degree=1)) + list(basis_monomials(g.dim, degree=2))
        monos += sampled_monomials(g.dim, sample_degrees, per_degree)
        mode = "generators (derivation argument) + degree-2 block + samples"
    report = CompleteBRSTReport([2] + [s.order for s in structures if s.order > 2 and not s.is_empty()], mode=mode)
    for i in range(len(ops)):
        for j in range(i, len(ops)):
            report.pairs.append(_check_pair(ops[i], ops[j], monos))
    total = ops[0]
    for op in ops[1:]:
        total = total + op
    if strict and not report.nilpotent:
        bad = report.first_failure()
        raise AnticommutatorError("anticommutator does not vanish", pair=[bad.left, bad.right], **bad.witness)
    return total, report


def leibniz_residual(op, a, b):
    """op(ab) - op(a) b - (-1)^{deg a} a op(b) for homogeneous a."""
    (deg,) = a.degrees() or {0}
    lhs = op(a * b)
    rhs = op(a) * b
    second = a * op(b)
    rhs = rhs + (second if deg % 2 == 0 else second.scale(-1))
    return lhs - rhs
