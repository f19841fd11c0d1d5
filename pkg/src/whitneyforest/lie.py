"""The free Lie ring L(m) over Z in the Lyndon basis.

Lie elements are dicts ``{lyndon word: coefficient}``; tensors in
``L_1 (x) L_{n+1}`` are dicts ``{(i, lyndon word): coefficient}``.  Words are
tuples of 1-based letters.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from . import intlinalg
from .trees import RootedTree, ResourceLimitError, format_rooted, parse_rooted

Word = tuple


def mobius(n: int) -> int:
    result, p, k = 1, 2, n
    while p * p <= k:
        if k % p == 0:
            k //= p
            if k % p == 0:
                return 0
            result = -result
        p += 1
    return -result if k > 1 else result


def witt_rank(m: int, n: int) -> int:
    """Rank of the degree-n part of the free Lie ring on m generators."""
    if m < 1 or n < 1:
        raise ValueError("need m >= 1 and n >= 1")
    total = sum(mobius(d) * m ** (n // d) for d in range(1, n + 1) if n % d == 0)
    return total // n


def dn_rank_formula(m: int, n: int) -> int:
    return m * witt_rank(m, n + 1) - witt_rank(m, n + 2)


# ---------------------------------------------------------------------------
# Lyndon words

def lyndon_words(m: int, n: int) -> list[Word]:
    """Lyndon words of length exactly n on 1..m, in lexicographic order (Duval)."""
    out = []
    w = [0]
    while w:
        w[-1] += 1
        if len(w) == n:
            out.append(tuple(w))
        k = len(w)
        while len(w) < n:
            w.append(w[len(w) - k])
        while w and w[-1] == m:
            w.pop()
    return out


def is_lyndon(w: Word) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w))) and len(w) > 0


@lru_cache(maxsize=None)
def standard_factorization(w: Word) -> tuple[Word, Word]:
    """``w = uv`` with ``v`` the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w} has no standard factorization")


@lru_cache(maxsize=None)
def standard_bracketing(w: Word) -> RootedTree:
    if len(w) == 1:
        return w[0]
    u, v = standard_factorization(w)
    return (standard_bracketing(u), standard_bracketing(v))


@dataclass(frozen=True)
class HallBasis:
    m: int
    degree: int
    elements: tuple  # Lyndon words, lexicographic

    def __len__(self):
        return len(self.elements)

    @property
    def trees(self) -> list[RootedTree]:
        return [standard_bracketing(w) for w in self.elements]

    def index(self, w: Word) -> int:
        return self.elements.index(w)


_basis_cache: dict[tuple[int, int], HallBasis] = {}


def hall_basis(m: int, n: int, cap: int | None = None) -> HallBasis:
    if n < 1:
        raise ValueError("degree must be >= 1")
    if cap is not None and witt_rank(m, n) > cap:
        raise ResourceLimitError(f"Hall basis of degree {n} on {m} letters exceeds cap {cap}")
    key = (m, n)
    b = _basis_cache.get(key)
    if b is None:
        # first writer wins; the content is deterministic either way
        b = _basis_cache.setdefault(key, HallBasis(m, n, tuple(lyndon_words(m, n))))
    return b


# ---------------------------------------------------------------------------
# arithmetic

def add_into(target: dict, source: Mapping, q: int = 1) -> dict:
    for k, v in source.items():
        x = target.get(k, 0) + q * v
        if x:
            target[k] = x
        else:
            target.pop(k, None)
    return target


def _freeze(d: dict) -> tuple:
    return tuple(sorted(d.items()))


@lru_cache(maxsize=None)
def _bracket_words(u: Word, v: Word) -> tuple:
    """``[P(u), P(v)]`` in the Lyndon basis, for Lyndon words u and v."""
    if u == v:
        return ()
    if u > v:
        return tuple((w, -c) for w, c in _bracket_words(v, u))
    if len(u) == 1 or standard_factorization(u)[1] >= v:
        return ((u + v, 1),)
    # [[u1,u2],v] = [u1,[u2,v]] + [[u1,v],u2]
    u1, u2 = standard_factorization(u)
    out: dict = {}
    for w, c in _bracket_words(u2, v):
        add_into(out, dict(_bracket_words(u1, w)), c)
    for w, c in _bracket_words(u1, v):
        add_into(out, dict(_bracket_words(w, u2)), c)
    return _freeze(out)


def lie_bracket(a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for u, cu in a.items():
        for v, cv in b.items():
            for w, c in _bracket_words(u, v):
                x = out.get(w, 0) + cu * cv * c
                if x:
                    out[w] = x
                else:
                    out.pop(w, None)
    return out


def generator(i: int) -> dict:
    return {(i,): 1}


@lru_cache(maxsize=None)
def _rooted_to_lie(t: RootedTree) -> tuple:
    if isinstance(t, int):
        return (((t,), 1),)
    return _freeze(lie_bracket(dict(_rooted_to_lie(t[0])), dict(_rooted_to_lie(t[1]))))


def rooted_to_lie(t: RootedTree) -> dict:
    """The bracket of generators read off a rooted tree, in Lyndon coordinates."""
    return dict(_rooted_to_lie(t))


def degree_of(a: Mapping) -> int | None:
    degs = {len(w) for w in a}
    if len(degs) > 1:
        raise ValueError("element is not homogeneous")
    return degs.pop() if degs else None


@dataclass(frozen=True)
class LieElement:
    """Homogeneous element of L_degree(m) with exact integer coordinates."""

    m: int
    degree: int
    terms: tuple  # sorted ((word, coeff), ...)

    @classmethod
    def of(cls, m: int, degree: int, d: Mapping) -> "LieElement":
        return cls(m, degree, _freeze({k: v for k, v in d.items() if v}))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def vector(self) -> list[int]:
        d = self.as_dict()
        return [d.get(w, 0) for w in hall_basis(self.m, self.degree).elements]

    def __bool__(self):
        return bool(self.terms)

    def to_json(self) -> dict:
        return {"degree": self.degree, "terms": [
            {"coeff": c, "bracket": format_rooted(standard_bracketing(w))} for w, c in self.terms]}


@dataclass(frozen=True)
class TensorElement:
    """Element of L_1 (x) L_{n+1}; keys are ``(i, lyndon word)``."""

    m: int
    n: int
    terms: tuple

    @classmethod
    def of(cls, m: int, n: int, d: Mapping) -> "TensorElement":
        return cls(m, n, _freeze({k: v for k, v in d.items() if v}))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "TensorElement") -> "TensorElement":
        return TensorElement.of(self.m, self.n, add_into(self.as_dict(), other.as_dict()))

    def __neg__(self):
        return TensorElement.of(self.m, self.n, {k: -v for k, v in self.terms})

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, q: int) -> "TensorElement":
        return TensorElement.of(self.m, self.n, {k: q * v for k, v in self.terms})

    def vector(self) -> list[int]:
        d = self.as_dict()
        return [d.get(k, 0) for k in tensor_basis(self.m, self.n)]

    def component(self, i: int) -> LieElement:
        """The L_{n+1} factor paired with X_i."""
        return LieElement.of(self.m, self.n + 1, {w: c for (j, w), c in self.terms if j == i})

    def to_json(self) -> dict:
        return {"degree": self.n, "terms": [
            {"coeff": c, "index": i, "bracket": format_rooted(standard_bracketing(w))}
            for (i, w), c in self.terms]}


def tensor_basis(m: int, n: int) -> list[tuple[int, Word]]:
    return [(i, w) for i in range(1, m + 1) for w in hall_basis(m, n + 1).elements]


def tensor(i: int, a: Mapping) -> dict:
    """``X_i (x) a`` as a tensor dict."""
    return {(i, w): c for w, c in a.items()}


def bracket_map(t: TensorElement) -> LieElement:
    """``X_i (x) h  |->  [X_i, h]``."""
    out: dict = {}
    for (i, w), c in t.terms:
        add_into(out, lie_bracket(generator(i), {w: 1}), c)
    return LieElement.of(t.m, t.n + 2, out)


def parse_lie_json(doc: Mapping, m: int) -> LieElement:
    """Load ``{"degree": d, "terms": [{"coeff": c, "bracket": "..."}]}``;
    brackets in free form are normalized."""
    out: dict = {}
    deg = doc["degree"]
    for term in doc["terms"]:
        t = parse_rooted(term["bracket"], m)
        elt = rooted_to_lie(t)
        if elt and degree_of(elt) != deg:
            raise ValueError(f"bracket {term['bracket']} is not of degree {deg}")
        add_into(out, elt, int(term["coeff"]))
    return LieElement.of(m, deg, out)


def parse_tensor_json(doc: Mapping, m: int) -> TensorElement:
    n = doc["degree"]
    out: dict = {}
    for term in doc["terms"]:
        t = parse_rooted(term["bracket"], m)
        i = int(term["index"])
        if not 1 <= i <= m:
            raise ValueError(f"index {i} out of range 1..{m}")
        add_into(out, tensor(i, rooted_to_lie(t)), int(term["coeff"]))
    return TensorElement.of(m, n, out)


# ---------------------------------------------------------------------------
# the kernel D_n of the bracket map

@dataclass(frozen=True)
class DnLattice:
    m: int
    n: int
    basis: tuple  # Hermite rows over tensor_basis indices

    @property
    def rank(self) -> int:
        return len(self.basis)

    def elements(self) -> list[TensorElement]:
        keys = tensor_basis(self.m, self.n)
        return [TensorElement.of(self.m, self.n, {keys[c]: v for c, v in row.items()})
                for row in self.basis]


def tensor_row(t: TensorElement) -> dict:
    index = {k: i for i, k in enumerate(tensor_basis(t.m, t.n))}
    return {index[k]: v for k, v in t.terms}


def bracket_kernel(m: int, n: int, cap: int | None = None) -> list[dict]:
    """Hermite basis of the kernel of L_1 (x) L_{n+1} -> L_{n+2}, over tensor_basis."""
    keys = tensor_basis(m, n)
    if cap is not None and len(keys) > cap:
        raise ResourceLimitError(f"L_1 (x) L_{n + 1} has rank {len(keys)} above cap {cap}")
    target = {w: i for i, w in enumerate(hall_basis(m, n + 2).elements)}
    rows = []
    for i, w in keys:
        img = lie_bracket(generator(i), {w: 1})
        rows.append({target[u]: c for u, c in img.items()})
    return intlinalg.left_kernel(rows)


_dn_cache: dict[tuple[int, int], DnLattice] = {}


def dn_lattice(m: int, n: int, cap: int | None = None) -> DnLattice:
    key = (m, n)
    if key not in _dn_cache:
        d = DnLattice(m, n, tuple(bracket_kernel(m, n, cap)))
        if d.rank != dn_rank_formula(m, n):
            raise AssertionError(
                f"D_{n}({m}) has rank {d.rank}, formula gives {dn_rank_formula(m, n)}")
        _dn_cache.setdefault(key, d)
    return _dn_cache[key]


class NotInKernel(ValueError):
    pass


def dn_membership(t: TensorElement, d: DnLattice) -> list[int]:
    """Coordinates of ``t`` in the Hermite basis of D_n."""
    if (t.m, t.n) != (d.m, d.n):
        raise ValueError("tensor and lattice disagree on (m, n)")
    if bracket_map(t):
        raise NotInKernel("bracket map does not vanish")
    coeffs = intlinalg.solve_in_lattice(list(d.basis), tensor_row(t))
    if coeffs is None:
        raise NotInKernel("not in the lattice")
    return [coeffs.get(i, 0) for i in range(d.rank)]
