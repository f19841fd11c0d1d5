import itertools

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from whitneyforest.trees import (InfTree, LabelError, ResourceLimitError,
                                 TreeSyntaxError, canonical_rooted, canonicalize,
                                 canonicalize_text, enumerate_generators, enumerate_inf,
                                 enumerate_rooted, enumerate_trees, format_rooted,
                                 format_unrooted, inner_product, jacobi_sites, jacobi_terms,
                                 leaves, order, parse_generator, parse_rooted, parse_unrooted,
                                 projected_count, reverse_at_root, rooted_product)


def rooted_trees(m=3, max_leaves=7):
    leaf = st.integers(1, m)
    return st.recursive(leaf, lambda kids: st.tuples(kids, kids), max_leaves=max_leaves)


# ---------------------------------------------------------------------------
# independent graph oracle


def to_graph(a, b):
    """Labeled graph with cyclic neighbour order stored per trivalent vertex."""
    g = nx.Graph()
    cyc = {}
    counter = itertools.count()

    def add(t, parent):
        v = next(counter)
        if isinstance(t, int):
            g.add_node(v, label=t)
            return v
        g.add_node(v, label=0)
        cyc[v] = [parent]
        cyc[v].append(add(t[0], v))
        cyc[v].append(add(t[1], v))
        g.add_edge(v, cyc[v][1])
        g.add_edge(v, cyc[v][2])
        return v

    ra = add(a, None)
    rb = add(b, ra)
    g.add_edge(ra, rb)
    if ra in cyc:
        cyc[ra][0] = rb
    return g, cyc


def same_cyclic(x, y):
    return any(x == y[i:] + y[:i] for i in range(3))


def automorphism_signs(a, b):
    g, cyc = to_graph(a, b)
    nm = nx.algorithms.isomorphism.categorical_node_match("label", None)
    signs = set()
    for phi in nx.algorithms.isomorphism.GraphMatcher(g, g, node_match=nm).isomorphisms_iter():
        flips = sum(1 for v, ns in cyc.items() if not same_cyclic([phi[x] for x in ns], cyc[phi[v]]))
        signs.add((-1) ** flips)
    return signs


def shapes(ell):
    """All leaf-numbered unrooted binary trees with ell leaves, as edge lists."""
    if ell == 2:
        yield [("L0", "L1")]
        return
    for edges in shapes(ell - 1):
        for i, (u, v) in enumerate(edges):
            w = f"I{ell}"
            new = edges[:i] + edges[i + 1:] + [(u, w), (w, v), (w, f"L{ell - 1}")]
            yield new


def brute_force_tree_count(m, n):
    ell = n + 2
    buckets = {}
    count = 0
    nm = nx.algorithms.isomorphism.categorical_node_match("label", None)
    for edges in shapes(ell):
        for labels in itertools.product(range(1, m + 1), repeat=ell):
            g = nx.Graph(edges)
            for v in g:
                g.nodes[v]["label"] = labels[int(v[1:])] if v.startswith("L") else 0
            h = nx.weisfeiler_lehman_graph_hash(g, node_attr="label")
            group = buckets.setdefault(h, [])
            if not any(nx.is_isomorphic(g, o, node_match=nm) for o in group):
                group.append(g)
                count += 1
    return count


# ---------------------------------------------------------------------------
# parsing


def test_parse_examples():
    assert parse_rooted("(1,2)", 2) == (1, 2)
    assert parse_rooted("(1,(2,3))", 3) == (1, (2, 3))
    assert order(parse_rooted("(1,(2,3))", 3)) == 2
    with pytest.raises(LabelError):
        parse_rooted("(1,(2,4))", 3)


def test_parse_whitespace_and_errors():
    assert parse_rooted(" ( 1 ,\n(2, 3) ) ") == (1, (2, 3))
    with pytest.raises(TreeSyntaxError) as exc:
        parse_rooted("(1,2")
    assert exc.value.offset == 4
    with pytest.raises(TreeSyntaxError):
        parse_rooted("(1,2))")
    with pytest.raises(TreeSyntaxError):
        parse_rooted("")
    with pytest.raises((TreeSyntaxError, LabelError)):
        parse_rooted("(0,1)")


def test_parse_generator_kinds():
    assert parse_generator("<(1,2),3>") == ("tree", ((1, 2), 3))
    assert parse_generator("inf((1,2))") == ("inf", (1, 2))
    assert parse_generator("(1,2)") == ("rooted", (1, 2))


@given(rooted_trees())
def test_rooted_round_trip(t):
    assert parse_rooted(format_rooted(t)) == t


@given(rooted_trees(), rooted_trees())
def test_unrooted_round_trip(a, b):
    assert parse_unrooted(format_unrooted(a, b)) == (a, b)


def test_rooted_product():
    assert rooted_product(1, 2) == (1, 2)
    assert rooted_product((1, 2), 3) == ((1, 2), 3)
    assert rooted_product((1, 2), (1, 2)) == ((1, 2), (1, 2))


@given(rooted_trees(), rooted_trees())
def test_rooted_product_order(i, j):
    assert order(rooted_product(i, j)) == order(i) + order(j) + 1


# ---------------------------------------------------------------------------
# canonical forms


def test_single_swap_flips_sign():
    c1, s1 = canonicalize((2, 3), 1)
    c2, s2 = canonicalize((3, 2), 1)
    assert c1 == c2
    assert s1 == -s2


def test_inner_product_examples():
    c, s = inner_product(1, 2)
    assert c.key == "<1,2>" and s == 1 and c.order == 0
    c, _ = inner_product((1, 2), 3)
    a, b = c.halves
    assert c.order == 1 and sorted(list(leaves(a)) + list(leaves(b))) == [1, 2, 3]
    h, _ = inner_product((1, 1), (1, 1))
    assert h.symmetric


@settings(max_examples=150)
@given(rooted_trees(), rooted_trees())
def test_canonicalize_idempotent(a, b):
    c, _ = canonicalize(a, b)
    c2, s2 = canonicalize(*c.halves)
    assert c2 == c and s2 == 1


@settings(max_examples=150)
@given(rooted_trees(), rooted_trees())
def test_inner_product_symmetric_in_arguments(i, j):
    ci, si = inner_product(i, j)
    cj, sj = inner_product(j, i)
    assert ci == cj and si == sj
    assert ci.order == order(i) + order(j)


@settings(max_examples=150)
@given(rooted_trees(max_leaves=5), rooted_trees(max_leaves=5))
def test_as_move_sign_parity(a, b):
    c, s = canonicalize(a, b)
    if isinstance(a, int):
        return
    # reversing any one vertex negates the tree
    flipped = reverse_at_root(a)
    c2, s2 = canonicalize(flipped, b)
    assert c2 == c
    assert s2 == -s or c.symmetric


@settings(max_examples=100, deadline=None)
@given(rooted_trees(m=2, max_leaves=4), rooted_trees(m=2, max_leaves=4))
def test_symmetric_flag_matches_automorphism_oracle(a, b):
    c, _ = canonicalize(a, b)
    assert c.symmetric == (-1 in automorphism_signs(a, b))


def test_h_tree_symmetric_by_oracle():
    assert -1 in automorphism_signs((1, 1), (1, 1))
    assert canonicalize_text("<(1,1),(1,1)>")[0].symmetric


@given(rooted_trees())
def test_canonical_rooted_sign_consistent(t):
    key, sign, sym = canonical_rooted(t)
    k2, s2, _ = canonical_rooted(parse_rooted(key))
    assert k2 == key and s2 == 1


def test_inf_tree_ignores_orientation():
    assert InfTree.of((1, (2, 3))) == InfTree.of(((3, 2), 1))
    assert InfTree.of((1, 2)).key == "inf((1,2))"
    assert InfTree.of((1, 2)).order == 1


# ---------------------------------------------------------------------------
# enumeration


def test_enumeration_examples():
    assert [t.key for t in enumerate_trees(2, 0)] == ["<1,1>", "<1,2>", "<2,2>"]
    trees = enumerate_trees(1, 2)
    assert len(trees) == 1 and trees[0].symmetric
    assert [j.key for j in enumerate_inf(1, 1)] == ["inf((1,1))"]


@pytest.mark.parametrize("m,n", [(1, 0), (2, 0), (3, 0), (1, 1), (2, 1), (3, 1),
                                 (1, 2), (2, 2), (3, 2), (2, 3), (1, 4), (2, 4)])
def test_tree_count_matches_brute_force(m, n):
    assert len(enumerate_trees(m, n)) == brute_force_tree_count(m, n)


@pytest.mark.parametrize("m,n", [(1, 3), (2, 2), (3, 2), (2, 4)])
def test_enumerated_trees_distinct_and_canonical(m, n):
    trees = enumerate_trees(m, n)
    assert len({t.key for t in trees}) == len(trees)
    for t in trees:
        assert canonicalize(*t.halves) == (t, 1)
        assert t.order == n


def test_rooted_enumeration_small():
    assert enumerate_rooted(2, 1) == [(1, 1), (1, 2), (2, 2)]
    # (i,(j,k)) up to swaps
    assert len(enumerate_rooted(2, 2)) == 2 * 3


def test_resource_guard():
    with pytest.raises(ResourceLimitError):
        enumerate_generators(4, 8, "trees", cap=1000)
    # the projection is an estimate; it tracks the real count within a small factor
    for m, n in [(2, 2), (3, 2), (2, 4)]:
        real = len(enumerate_trees(m, n))
        assert real / 4 <= projected_count(m, n, "trees") <= 4 * real


def test_jacobi_sites_cover_internal_edges():
    t = ((1, 2), (3, 4))
    sites = list(jacobi_sites(t))
    assert len(sites) == 2
    for path, x, y, z in sites:
        terms = jacobi_terms(t, path, x, y, z)
        assert all(order(u) == order(t) for u in terms)
