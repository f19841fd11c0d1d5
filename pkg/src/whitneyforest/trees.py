"""Labeled oriented unitrivalent trees.

A rooted tree is either an ``int`` label (a leaf) or a pair ``(left, right)``;
the order of the pair records the cyclic orientation at the trivalent vertex
(parent edge, left, right).  Unrooted trees are handled as pairs of rooted
trees glued at their roots, ``<A,B>``.

Canonical forms ignore orientation; the orientation is carried separately as
a sign, so a raw tree ``t`` equals ``sign * canonical`` modulo AS.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Union

RootedTree = Union[int, tuple]


class TreeSyntaxError(ValueError):
    """Raised on malformed tree text; ``offset`` is the byte position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class LabelError(ValueError):
    pass


class ResourceLimitError(RuntimeError):
    """A computation would exceed a configured size cap."""


# ---------------------------------------------------------------------------
# parsing and printing

class _Parser:
    def __init__(self, text: str):
        self.data = text.encode("utf-8")
        self.pos = 0

    def skip(self):
        while self.pos < len(self.data) and self.data[self.pos] in b" \t\r\n":
            self.pos += 1

    def peek(self) -> bytes:
        self.skip()
        return self.data[self.pos:self.pos + 1]

    def expect(self, token: bytes):
        if self.peek() != token:
            found = self.peek().decode() or "end of input"
            raise TreeSyntaxError(f"expected {token.decode()!r}, found {found!r}", self.pos)
        self.pos += 1

    def rooted(self) -> RootedTree:
        c = self.peek()
        if c == b"(":
            self.pos += 1
            left = self.rooted()
            self.expect(b",")
            right = self.rooted()
            self.expect(b")")
            return (left, right)
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos:self.pos + 1].isdigit():
            self.pos += 1
        if start == self.pos:
            found = c.decode() or "end of input"
            raise TreeSyntaxError(f"expected label or '(', found {found!r}", start)
        return int(self.data[start:self.pos])

    def end(self):
        self.skip()
        if self.pos != len(self.data):
            raise TreeSyntaxError("trailing input", self.pos)


def _check_labels(t: RootedTree, m: int | None):
    for lab in leaves(t):
        if lab < 1:
            raise LabelError(f"label {lab} out of range: labels start at 1")
        if m is not None and lab > m:
            raise LabelError(f"label {lab} out of range 1..{m}")


def parse_rooted(text: str, m: int | None = None) -> RootedTree:
    """Parse ``tree := label | "(" tree "," tree ")"``."""
    p = _Parser(text)
    t = p.rooted()
    p.end()
    _check_labels(t, m)
    return t


def parse_unrooted(text: str, m: int | None = None) -> tuple[RootedTree, RootedTree]:
    """Parse ``"<" tree "," tree ">"`` into the pair of glued rooted trees."""
    p = _Parser(text)
    p.expect(b"<")
    a = p.rooted()
    p.expect(b",")
    b = p.rooted()
    p.expect(b">")
    p.end()
    _check_labels(a, m)
    _check_labels(b, m)
    return a, b


def parse_generator(text: str, m: int | None = None):
    """Parse any of the three tree syntaxes.

    Returns ``("tree", (A, B))``, ``("inf", J)`` or ``("rooted", J)``.
    """
    s = text.strip()
    if s.startswith("inf"):
        p = _Parser(s)
        p.pos = len(b"inf")
        p.expect(b"(")
        body = p.rooted()
        p.expect(b")")
        p.end()
        _check_labels(body, m)
        return "inf", body
    if s.startswith("<"):
        return "tree", parse_unrooted(s, m)
    return "rooted", parse_rooted(s, m)


def format_rooted(t: RootedTree) -> str:
    if isinstance(t, int):
        return str(t)
    return f"({format_rooted(t[0])},{format_rooted(t[1])})"


def format_unrooted(a: RootedTree, b: RootedTree) -> str:
    return f"<{format_rooted(a)},{format_rooted(b)}>"


# ---------------------------------------------------------------------------
# basic operations

def order(t: RootedTree) -> int:
    if isinstance(t, int):
        return 0
    return order(t[0]) + order(t[1]) + 1


def leaves(t: RootedTree) -> Iterator[int]:
    if isinstance(t, int):
        yield t
    else:
        yield from leaves(t[0])
        yield from leaves(t[1])


def rooted_product(i: RootedTree, j: RootedTree) -> RootedTree:
    return (i, j)


def reverse_at_root(t: RootedTree) -> RootedTree:
    """Reverse the cyclic order at the top vertex (one AS move)."""
    if isinstance(t, int):
        raise ValueError("a leaf has no trivalent vertex")
    return (t[1], t[0])


# ---------------------------------------------------------------------------
# canonical forms

@lru_cache(maxsize=None)
def canonical_rooted(t: RootedTree) -> tuple[str, int, bool]:
    """Orientation-free canonical string of a rooted tree.

    Returns ``(key, sign, symmetric)`` where ``t = sign * parse(key)`` modulo AS
    and ``symmetric`` records an AS-reversing automorphism (then ``t = -t``).
    """
    if isinstance(t, int):
        return str(t), 1, False
    ka, sa, fa = canonical_rooted(t[0])
    kb, sb, fb = canonical_rooted(t[1])
    sym = fa or fb or ka == kb
    if ka <= kb:
        return f"({ka},{kb})", sa * sb, sym
    return f"({kb},{ka})", -sa * sb, sym


@dataclass(frozen=True)
class CanonicalTree:
    """Canonical representative of an unrooted oriented labeled tree."""

    key: str
    symmetric: bool = field(compare=False)

    @property
    def halves(self) -> tuple[RootedTree, RootedTree]:
        return parse_unrooted(self.key)

    @property
    def order(self) -> int:
        a, b = self.halves
        return order(a) + order(b)

    def __str__(self):
        return self.key


@dataclass(frozen=True)
class InfTree:
    """A twisted tree ``J^inf``; the body is stored without orientation."""

    body_key: str

    @classmethod
    def of(cls, j: RootedTree) -> "InfTree":
        return cls(canonical_rooted(j)[0])

    @property
    def body(self) -> RootedTree:
        return parse_rooted(self.body_key)

    @property
    def key(self) -> str:
        return f"inf({self.body_key})"

    @property
    def order(self) -> int:
        """Order of the body; the twisted tree lives in tree order ``2 * order``."""
        return order(self.body)

    def __str__(self):
        return self.key


class _Graph:
    """Adjacency form of ``<A,B>``: leaves carry labels, trivalent vertices a
    cyclic neighbour list."""

    def __init__(self, a: RootedTree, b: RootedTree):
        self.label: dict[int, int] = {}
        self.nbrs: dict[int, list[int]] = {}
        ra = self._add(a)
        rb = self._add(b)
        self._link(ra, rb)

    def _new(self) -> int:
        v = len(self.nbrs)
        self.nbrs[v] = []
        return v

    def _link(self, u, v):
        # root slots are filled in first so that cyclic order is (parent, l, r)
        self.nbrs[u].insert(0, v)
        self.nbrs[v].insert(0, u)

    def _add(self, t: RootedTree) -> int:
        v = self._new()
        if isinstance(t, int):
            self.label[v] = t
            return v
        left = self._add(t[0])
        right = self._add(t[1])
        self.nbrs[v] = [left, right]
        self.nbrs[left].insert(0, v)
        self.nbrs[right].insert(0, v)
        return v

    def subtree(self, x: int, parent: int) -> RootedTree:
        """Rooted tree hanging from ``x`` away from ``parent``."""
        if x in self.label:
            return self.label[x]
        ns = self.nbrs[x]
        k = ns.index(parent)
        c1, c2 = ns[(k + 1) % 3], ns[(k + 2) % 3]
        return (self.subtree(c1, x), self.subtree(c2, x))

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, ns in self.nbrs.items():
            for v in ns:
                if u < v:
                    yield u, v

    def leaf_vertices(self) -> list[int]:
        return sorted(self.label)


def plantings(a: RootedTree, b: RootedTree) -> list[tuple[RootedTree, RootedTree]]:
    """All ways of writing the unrooted tree as ``<A', B'>`` (one per edge)."""
    g = _Graph(a, b)
    return [(g.subtree(u, v), g.subtree(v, u)) for u, v in g.edges()]


def leaf_rootings(a: RootedTree, b: RootedTree) -> list[tuple[int, RootedTree]]:
    """For every univalent vertex v: its label and the rooted tree B_v."""
    g = _Graph(a, b)
    out = []
    for v in g.leaf_vertices():
        (w,) = g.nbrs[v]
        out.append((g.label[v], g.subtree(w, v)))
    return out


def canonicalize(a: RootedTree, b: RootedTree) -> tuple[CanonicalTree, int]:
    """Canonical form of the unrooted tree ``<a,b>`` and its AS sign."""
    best = None
    signs = set()
    sym = False
    for x, y in plantings(a, b):
        kx, sx, fx = canonical_rooted(x)
        ky, sy, fy = canonical_rooted(y)
        key = f"<{kx},{ky}>" if kx <= ky else f"<{ky},{kx}>"
        if best is None or key < best:
            best, signs, sym = key, set(), False
        if key == best:
            signs.add(sx * sy)
            sym = sym or fx or fy
    sym = sym or len(signs) > 1
    # a symmetric tree equals its own negative, so +1 is reported when both occur
    sign = 1 if 1 in signs else -1
    return CanonicalTree(best, sym), sign


def canonicalize_text(text: str, m: int | None = None) -> tuple[CanonicalTree, int]:
    return canonicalize(*parse_unrooted(text, m))


def inner_product(i: RootedTree, j: RootedTree) -> tuple[CanonicalTree, int]:
    """``<I,J>``: glue the roots; returns the canonical tree and AS sign."""
    return canonicalize(i, j)


# ---------------------------------------------------------------------------
# enumeration

def _double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def projected_count(m: int, n: int, kind: str) -> int:
    """Estimated generator count: labelings of all leaf-labeled shapes divided
    by the leaf permutations."""
    if kind == "trees":
        ell = n + 2
        shapes = _double_factorial(max(2 * ell - 5, 1))
    elif kind in ("rooted", "inf"):
        ell = n + 1
        shapes = _double_factorial(max(2 * ell - 3, 1))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return -(-m ** ell * shapes // math.factorial(ell))


@lru_cache(maxsize=None)
def _rooted_keys(m: int, n: int) -> tuple[str, ...]:
    if n == 0:
        return tuple(str(i) for i in range(1, m + 1))
    out = set()
    for i in range(n):
        for ka in _rooted_keys(m, i):
            for kb in _rooted_keys(m, n - 1 - i):
                if ka <= kb:
                    out.add(f"({ka},{kb})")
    return tuple(sorted(out))


def enumerate_rooted(m: int, n: int, cap: int | None = None) -> list[RootedTree]:
    """One representative per AS-class of order ``n`` rooted trees."""
    _guard(m, n, "rooted", cap)
    return [parse_rooted(k) for k in _rooted_keys(m, n)]


@lru_cache(maxsize=None)
def _tree_keys(m: int, n: int) -> tuple[tuple[str, bool], ...]:
    seen: dict[str, bool] = {}
    for k in _rooted_keys(m, n):
        r = parse_rooted(k)
        for lab in range(1, m + 1):
            c, _ = canonicalize(r, lab)
            seen[c.key] = c.symmetric
    return tuple(sorted(seen.items()))


def enumerate_trees(m: int, n: int, cap: int | None = None) -> list[CanonicalTree]:
    _guard(m, n, "trees", cap)
    return [CanonicalTree(k, s) for k, s in _tree_keys(m, n)]


def enumerate_inf(m: int, k: int, cap: int | None = None) -> list[InfTree]:
    _guard(m, k, "inf", cap)
    return [InfTree(key) for key in _rooted_keys(m, k)]


def enumerate_generators(m: int, n: int, kind: str, cap: int | None = None) -> list:
    if m < 1 or n < 0:
        raise ValueError("need m >= 1 and n >= 0")
    if kind == "trees":
        return enumerate_trees(m, n, cap)
    if kind == "rooted":
        return enumerate_rooted(m, n, cap)
    if kind == "inf":
        return enumerate_inf(m, n, cap)
    raise ValueError(f"unknown kind {kind!r}")


def _guard(m: int, n: int, kind: str, cap: int | None):
    if cap is not None and projected_count(m, n, kind) > cap:
        raise ResourceLimitError(
            f"{kind} generators for m={m}, n={n} projected above cap {cap}")


# ---------------------------------------------------------------------------
# local moves

def replace_at(t: RootedTree, path: tuple, new: RootedTree) -> RootedTree:
    """Replace the subtree at ``path`` (a tuple of 0/1 child choices)."""
    if not path:
        return new
    head, rest = path[0], path[1:]
    if head == 0:
        return (replace_at(t[0], rest, new), t[1])
    return (t[0], replace_at(t[1], rest, new))


def subtree_at(t: RootedTree, path: tuple) -> RootedTree:
    for p in path:
        t = t[p]
    return t


def node_paths(t: RootedTree, path: tuple = ()) -> Iterator[tuple]:
    """Paths to all trivalent vertices, pre-order."""
    if isinstance(t, int):
        return
    yield path
    yield from node_paths(t[0], path + (0,))
    yield from node_paths(t[1], path + (1,))


def jacobi_sites(t: RootedTree) -> Iterator[tuple[tuple, RootedTree, RootedTree, RootedTree]]:
    """Every internal edge of a rooted tree as ``(path, X, Y, Z)``.

    The edge joins the vertex at ``path`` to its child ``(X, Y)``; ``Z`` is the
    other child.  Rooted Jacobi at that edge relates ``((X,Y),Z)``,
    ``((Y,Z),X)`` and ``((Z,X),Y)``.
    """
    for path in node_paths(t):
        node = subtree_at(t, path)
        for k in (0, 1):
            child, other = node[k], node[1 - k]
            if not isinstance(child, int):
                yield path, child[0], child[1], other


def jacobi_terms(t: RootedTree, path: tuple, x, y, z) -> tuple[RootedTree, RootedTree, RootedTree]:
    """The three trees of a Jacobi relation ``T1 + T2 + T3 = 0`` at a site."""
    return (replace_at(t, path, ((x, y), z)),
            replace_at(t, path, ((y, z), x)),
            replace_at(t, path, ((z, x), y)))
