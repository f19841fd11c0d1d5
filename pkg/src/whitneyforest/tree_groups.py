"""Presentations of the tree groups T_n(m) and T_n^inf(m) and their structure."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Union

from . import intlinalg
from .trees import (CanonicalTree, InfTree, ResourceLimitError, RootedTree, canonicalize,
                    enumerate_inf, enumerate_rooted, enumerate_trees, jacobi_sites,
                    jacobi_terms, leaf_rootings, parse_generator)

Generator = Union[CanonicalTree, InfTree]

DEFAULT_GENERATOR_CAP = 200_000
DEFAULT_MATRIX_ENTRY_LIMIT = 4_000_000


class UnknownGenerator(KeyError):
    pass


@dataclass(frozen=True)
class Presentation:
    m: int
    n: int
    twisted: bool
    generators: tuple
    relations: tuple  # sparse rows over generator indices
    families: tuple  # one tag per relation row
    index: dict = field(compare=False, repr=False)

    def relation_matrix(self) -> list[list[int]]:
        g = len(self.generators)
        return [[r.get(j, 0) for j in range(g)] for r in self.relations]

    def keys(self) -> list[str]:
        return [g.key for g in self.generators]


class _RowSet:
    """Collects relation rows, dropping zero rows and duplicates up to sign."""

    def __init__(self):
        self.rows: list[dict] = []
        self.families: list[str] = []
        self._seen: set = set()

    def add(self, row: dict, family: str):
        row = {k: v for k, v in row.items() if v}
        if not row:
            return
        lead = row[min(row)]
        if lead < 0:
            row = {k: -v for k, v in row.items()}
        key = tuple(sorted(row.items()))
        if key in self._seen:
            return
        self._seen.add(key)
        self.rows.append(row)
        self.families.append(family)


def _term(index: dict, a: RootedTree, b: RootedTree) -> tuple[int, int]:
    c, sign = canonicalize(a, b)
    try:
        return index[c.key], sign
    except KeyError:
        raise UnknownGenerator(c.key) from None


def _add(row: dict, col: int, q: int):
    row[col] = row.get(col, 0) + q


def _framed_rows(rows: _RowSet, trees: list[CanonicalTree], index: dict):
    for t in trees:
        if t.symmetric:
            rows.add({index[t.key]: 2}, "AS")
    for t in trees:
        label, r = leaf_rootings(*t.halves)[0]
        for path, x, y, z in jacobi_sites(r):
            row: dict = {}
            for term in jacobi_terms(r, path, x, y, z):
                col, sign = _term(index, term, label)
                _add(row, col, sign)
            rows.add(row, "IHX")


def framed_presentation(m: int, n: int, cap: int | None = DEFAULT_GENERATOR_CAP) -> Presentation:
    """T_n(m): order n trees modulo AS and IHX."""
    trees = enumerate_trees(m, n, cap)
    index = {t.key: i for i, t in enumerate(trees)}
    rows = _RowSet()
    _framed_rows(rows, trees, index)
    return Presentation(m, n, False, tuple(trees), tuple(rows.rows), tuple(rows.families), index)


def twisted_presentation(m: int, n: int, cap: int | None = DEFAULT_GENERATOR_CAP) -> Presentation:
    """T_n^inf(m).

    Odd order adds boundary-twist rows ``<i,(J,J)> = 0``; even order ``2k`` adds
    the twisted trees of order ``k`` with twisted IHX and interior-twist rows.
    """
    trees = enumerate_trees(m, n, cap)
    gens: list = list(trees)
    if n % 2 == 0:
        gens += enumerate_inf(m, n // 2, cap)
    if cap is not None and len(gens) > cap:
        raise ResourceLimitError(f"{len(gens)} generators exceed cap {cap}")
    index = {g.key: i for i, g in enumerate(gens)}
    rows = _RowSet()
    _framed_rows(rows, trees, index)
    if n % 2 == 1:
        k = (n + 1) // 2
        for j in enumerate_rooted(m, k - 1):
            for i in range(1, m + 1):
                col, sign = _term(index, i, (j, j))
                rows.add({col: sign}, "boundary-twist")
    else:
        k = n // 2
        for j in enumerate_rooted(m, k):
            col, sign = _term(index, j, j)
            row = {index[InfTree.of(j).key]: 2}
            _add(row, col, -sign)
            rows.add(row, "interior-twist")
        for j in enumerate_rooted(m, k):
            for path, x, y, z in jacobi_sites(j):
                t1, t2, t3 = jacobi_terms(j, path, x, y, z)
                # T1 + T2 + T3 = 0 in each rotation: Ta^inf = Tb^inf + Tc^inf + <Tb,Tc>
                for a, b, c in ((t1, t2, t3), (t2, t3, t1), (t3, t1, t2)):
                    row: dict = {}
                    _add(row, index[InfTree.of(a).key], 1)
                    _add(row, index[InfTree.of(b).key], -1)
                    _add(row, index[InfTree.of(c).key], -1)
                    col, sign = _term(index, b, c)
                    _add(row, col, -sign)
                    rows.add(row, "twisted-IHX")
    return Presentation(m, n, True, tuple(gens), tuple(rows.rows), tuple(rows.families), index)


# ---------------------------------------------------------------------------
# structure

@dataclass(frozen=True)
class GroupStructure:
    """Cokernel of a relation matrix: ``Z^rank + torsion``.

    Generators whose Hermite pivot is 1 are eliminated by substitution; the
    remaining columns carry a small dense Smith decomposition.
    """

    rank: int
    torsion: tuple
    ngens: int
    unit_rows: tuple = field(repr=False)  # Hermite rows with pivot 1
    survivors: tuple = field(repr=False)  # generator indices kept after substitution
    residual: tuple = field(repr=False)  # relation rows among survivors (dense)
    diagonal: tuple = field(repr=False)
    V: tuple = field(repr=False)

    def substitute(self, vec: dict) -> dict:
        """Rewrite a formal sum in terms of surviving generators."""
        r = dict(vec)
        for row in self.unit_rows:
            c = min(row)
            x = r.get(c)
            if x:
                intlinalg.addmul(r, row, -x)
        return r

    def coordinates(self, vec: dict) -> tuple:
        """SNF coordinates: torsion coordinates (reduced) then free ones."""
        r = self.substitute(vec)
        y = [r.get(s, 0) for s in self.survivors]
        z = [sum(y[i] * self.V[i][j] for i in range(len(y))) for j in range(len(self.survivors))]
        out = []
        for j, d in enumerate(self.diagonal):
            if d != 1:
                out.append(z[j] % d)
        out.extend(z[len(self.diagonal):])
        return tuple(out)

    def is_zero(self, vec: dict) -> bool:
        return not any(self.coordinates(vec))

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion), "generators": self.ngens}


def structure(p: Presentation | None = None, *, rows: Iterable[dict] = (), ngens: int | None = None,
              matrix_entry_limit: int = DEFAULT_MATRIX_ENTRY_LIMIT) -> GroupStructure:
    if p is not None:
        rows, ngens = p.relations, len(p.generators)
    h = intlinalg.hermite(list(rows))
    unit = tuple(r for r in h if r[min(r)] == 1)
    unit_cols = {min(r) for r in unit}
    survivors = tuple(c for c in range(ngens) if c not in unit_cols)
    pos = {c: i for i, c in enumerate(survivors)}
    residual = [r for r in h if r[min(r)] != 1]
    if len(residual) * len(survivors) > matrix_entry_limit:
        raise ResourceLimitError(
            f"residual {len(residual)}x{len(survivors)} matrix exceeds entry limit {matrix_entry_limit}")
    dense = []
    for r in residual:
        row = [0] * len(survivors)
        for c, v in r.items():
            row[pos[c]] = v  # reduced Hermite rows vanish on unit pivot columns
        dense.append(row)
    snf = intlinalg.smith_dense(dense, len(survivors))
    torsion = tuple(d for d in snf.diagonal if d != 1)
    rank = len(survivors) - len(snf.diagonal)
    return GroupStructure(rank, torsion, ngens, unit, survivors, tuple(map(tuple, dense)),
                          tuple(snf.diagonal), tuple(map(tuple, snf.V)))


@lru_cache(maxsize=None)
def presentation(m: int, n: int, twisted: bool, cap: int | None = DEFAULT_GENERATOR_CAP) -> Presentation:
    return twisted_presentation(m, n, cap) if twisted else framed_presentation(m, n, cap)


@lru_cache(maxsize=None)
def group(m: int, n: int, twisted: bool, cap: int | None = DEFAULT_GENERATOR_CAP,
          matrix_entry_limit: int = DEFAULT_MATRIX_ENTRY_LIMIT) -> tuple[Presentation, GroupStructure]:
    p = presentation(m, n, twisted, cap)
    return p, structure(p, matrix_entry_limit=matrix_entry_limit)


# ---------------------------------------------------------------------------
# formal sums

def formal_sum(p: Presentation, items: Iterable[tuple[int, object]]) -> dict:
    """Sum of ``coeff * g`` where ``g`` is a generator, ``("tree", (A, B))``,
    ``("inf", J)`` or tree text; raw trees are canonicalized with their sign."""
    out: dict = {}
    for coeff, g in items:
        if isinstance(g, str):
            g = parse_generator(g, p.m)
        if isinstance(g, CanonicalTree):
            key, sign = g.key, 1
        elif isinstance(g, InfTree):
            key, sign = g.key, 1
        elif g[0] == "tree":
            c, sign = canonicalize(*g[1])
            key = c.key
        elif g[0] == "inf":
            key, sign = InfTree.of(g[1]).key, 1
        else:
            raise ValueError(f"cannot interpret {g!r} as a generator")
        if key not in p.index:
            raise UnknownGenerator(key)
        _add(out, p.index[key], coeff * sign)
    return {k: v for k, v in out.items() if v}


def reduce(vec: dict, s: GroupStructure) -> tuple:
    return s.coordinates(vec)


def write_matrix_market(p: Presentation, path) -> None:
    import numpy as np
    from scipy.io import mmwrite
    from scipy.sparse import coo_matrix

    r, c, v = [], [], []
    for i, row in enumerate(p.relations):
        for j, x in row.items():
            r.append(i)
            c.append(j)
            v.append(x)
    shape = (len(p.relations), len(p.generators))
    mmwrite(str(path), coo_matrix((np.array(v, dtype=np.int64), (r, c)), shape=shape),
            comment="relation rows x generators", field="integer")
