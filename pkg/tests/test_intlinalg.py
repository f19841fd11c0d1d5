from hypothesis import given, settings, strategies as st

from whitneyforest import intlinalg


def matrices(max_rows=6, max_cols=6, lo=-6, hi=6):
    return st.integers(1, max_cols).flatmap(lambda c: st.lists(
        st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=0, max_size=max_rows
    ).map(lambda rows: (rows, c)))


def sparse(rows):
    return [{j: v for j, v in enumerate(r) if v} for r in rows]


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def det(a):
    # Bareiss, exact
    a = [list(r) for r in a]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1] if n else 1


@settings(max_examples=200)
@given(matrices())
def test_smith_decomposition(mc):
    rows, c = mc
    s = intlinalg.smith_dense(rows, c)
    if rows:
        d = matmul(matmul(s.U, rows), s.V)
        for i in range(len(rows)):
            for j in range(c):
                expect = s.diagonal[i] if i == j and i < len(s.diagonal) else 0
                assert d[i][j] == expect
        assert abs(det(s.U)) == 1
    assert abs(det(s.V)) == 1
    assert all(x > 0 for x in s.diagonal)
    assert all(b % a == 0 for a, b in zip(s.diagonal, s.diagonal[1:]))


@settings(max_examples=200)
@given(matrices())
def test_hermite_is_lattice_invariant(mc):
    rows, c = mc
    h = intlinalg.hermite(sparse(rows))
    # adding one row to another and negating rows does not move the lattice
    if len(rows) >= 2:
        moved = [list(r) for r in rows]
        moved[0] = [x + 3 * y for x, y in zip(moved[0], moved[1])]
        moved[1] = [-x for x in moved[1]]
        assert intlinalg.hermite(sparse(moved)) == h
    cols = [min(r) for r in h]
    assert cols == sorted(set(cols))
    for i, r in enumerate(h):
        p = r[cols[i]]
        assert p > 0
        for other in h[:i]:
            assert 0 <= other.get(cols[i], 0) < p
    for r in sparse(rows):
        assert intlinalg.solve_in_lattice(h, r) is not None


@settings(max_examples=200)
@given(matrices())
def test_rank_matches_smith(mc):
    rows, c = mc
    assert intlinalg.rank(sparse(rows)) == len(intlinalg.smith_dense(rows, c).diagonal)


@settings(max_examples=200)
@given(matrices())
def test_left_kernel(mc):
    rows, c = mc
    k = intlinalg.left_kernel(sparse(rows))
    assert len(k) == len(rows) - intlinalg.rank(sparse(rows))
    for x in k:
        combo = [sum(x.get(i, 0) * rows[i][j] for i in range(len(rows))) for j in range(c)]
        assert not any(combo)


def test_reduce_by_hermite_canonical_coset():
    h = intlinalg.hermite([{0: 2, 1: 1}, {1: 3}])
    r1, _ = intlinalg.reduce_by_hermite(h, {0: 5, 1: 7})
    r2, _ = intlinalg.reduce_by_hermite(h, {0: 5 + 2, 1: 7 + 1 + 3})
    assert r1 == r2


@settings(max_examples=100)
@given(matrices(max_rows=4, max_cols=4, lo=-3, hi=3))
def test_unimodular_inverse(mc):
    rows, c = mc
    V = intlinalg.smith_dense(rows, c).V
    inv = intlinalg.unimodular_inverse(V)
    assert matmul(V, inv) == [[int(i == j) for j in range(c)] for i in range(c)]


def test_solve_mod2():
    cols = [[1, 0, 1], [0, 1, 1]]
    assert intlinalg.solve_mod2(cols, [1, 1, 0]) == [1, 1]
    assert intlinalg.solve_mod2(cols, [1, 1, 1]) is None
    assert intlinalg.solve_mod2([], []) == []
