"""Slow, independent reference computations used to cross-check the fast paths.

Nothing here uses the Lyndon rewriting or the canonical tree forms.
"""
from __future__ import annotations

from . import intlinalg


def bracketings(m: int, leaves: int) -> list:
    """Every ordered bracketing with the given number of leaves on letters 1..m."""
    if leaves == 1:
        return list(range(1, m + 1))
    out = []
    for k in range(1, leaves):
        for a in bracketings(m, k):
            for b in bracketings(m, leaves - k):
                out.append((a, b))
    return out


def expand(t) -> dict:
    """Associative expansion of a bracketing: ``[a,b] = ab - ba`` on words."""
    if isinstance(t, int):
        return {(t,): 1}
    a, b = expand(t[0]), expand(t[1])
    out: dict = {}
    for u, x in a.items():
        for v, y in b.items():
            out[u + v] = out.get(u + v, 0) + x * y
            out[v + u] = out.get(v + u, 0) - x * y
    return {w: c for w, c in out.items() if c}


def _as_normal(t):
    """Sort children by repr; returns (normal form, sign) or None when a
    vertex has equal children (then the bracket is zero)."""
    if isinstance(t, int):
        return t, 1
    a = _as_normal(t[0])
    b = _as_normal(t[1])
    if a is None or b is None:
        return None
    (x, sx), (y, sy) = a, b
    if repr(x) == repr(y):
        return None
    if repr(x) < repr(y):
        return (x, y), sx * sy
    return (y, x), -sx * sy


def _contexts(t, path=()):
    if isinstance(t, int):
        return
    yield path, t
    yield from _contexts(t[0], path + (0,))
    yield from _contexts(t[1], path + (1,))


def _put(t, path, new):
    if not path:
        return new
    if path[0] == 0:
        return (_put(t[0], path[1:], new), t[1])
    return (t[0], _put(t[1], path[1:], new))


def magma_lie_rank(m: int, n: int) -> int:
    """Rank of the degree-n free magma modulo antisymmetry, ``[a,a]=0`` and
    Jacobi: a from-scratch value for the Witt rank."""
    monos = bracketings(m, n)
    index: dict = {}
    for t in monos:
        nf = _as_normal(t)
        if nf is not None:
            index.setdefault(repr(nf[0]), len(index))
    rows = []
    for t in monos:
        for path, node in _contexts(t):
            if isinstance(node[0], int):
                continue
            (x, y), z = node
            row: dict = {}
            for term in (((x, y), z), ((y, z), x), ((z, x), y)):
                nf = _as_normal(_put(t, path, term))
                if nf is not None:
                    c = index[repr(nf[0])]
                    row[c] = row.get(c, 0) + nf[1]
            row = {c: v for c, v in row.items() if v}
            if row:
                rows.append(row)
    return len(index) - intlinalg.rank(rows)


def associative_rank(m: int, degree: int) -> int:
    """Rank of the span of all degree-d brackets inside the free associative ring."""
    words: dict = {}
    rows = []
    for t in bracketings(m, degree):
        e = expand(t)
        rows.append({words.setdefault(w, len(words)): c for w, c in e.items()})
    return intlinalg.rank(rows)


def bracket_kernel_rank(m: int, n: int) -> int:
    """Rank of the kernel of ``L_1 (x) L_{n+1} -> L_{n+2}`` computed through
    associative expansions: dim(L_1 (x) L_{n+1}) minus the rank of the image."""
    words: dict = {}
    rows = []
    for i in range(1, m + 1):
        for t in bracketings(m, n + 1):
            e = expand((i, t))
            rows.append({words.setdefault(w, len(words)): c for w, c in e.items()})
    return m * associative_rank(m, n + 1) - intlinalg.rank(rows)


def tensor_expand(terms: dict) -> dict:
    """``{(i, bracketing): c}`` to ``{(i, word): c}``."""
    out: dict = {}
    for (i, t), c in terms.items():
        for w, x in expand(t).items():
            out[(i, w)] = out.get((i, w), 0) + c * x
    return {k: v for k, v in out.items() if v}

