import pytest
from hypothesis import given, settings, strategies as st

from whitneyforest.invariants import (ForestError, IntersectionForest, RecipeError, Recipe,
                                      arf_value, linking_data, milnor, milnor_tensor,
                                      parse_forest, realize_recipe, replay, tau)
from whitneyforest.lie import hall_basis, parse_tensor_json, rooted_to_lie
from whitneyforest.tree_groups import group
from whitneyforest.trees import InfTree, canonicalize_text, enumerate_inf, enumerate_rooted, enumerate_trees

WHITEHEAD1 = {"m": 2, "n": 1, "items": [{"eps": 1, "tree": "<(1,2),2>"}]}
WHITEHEAD2 = {"m": 2, "n": 2, "items": [{"omega": 1, "inf": "(1,2)"}]}


def forest_from_vector(m, n, p, vec):
    items = []
    for g, c in sorted(vec.items()):
        gen = p.generators[g]
        for _ in range(abs(c)):
            s = 1 if c > 0 else -1
            if isinstance(gen, InfTree):
                items.append({"omega": s, "inf": gen.body_key})
            else:
                items.append({"eps": s, "tree": gen.key})
    return parse_forest({"m": m, "n": n, "items": items})


def test_parse_valid():
    f = parse_forest(WHITEHEAD1)
    assert f.n == 1 and len(f.trees) == 1
    assert parse_forest(WHITEHEAD2).twisted[0][1] == InfTree.of((1, 2))


def test_parse_folds_sign():
    f = parse_forest({"m": 3, "n": 1, "items": [{"eps": 1, "tree": "<(3,2),1>"}]})
    c, s = canonicalize_text("<(3,2),1>")
    assert f.trees == ((s, c),)


@pytest.mark.parametrize("doc", [
    {"m": 2, "n": 1, "items": [{"omega": 1, "inf": "(1,2)"}]},
    {"m": 2, "n": 1, "items": [{"eps": 2, "tree": "<(1,2),2>"}]},
    {"m": 2, "n": 2, "items": [{"eps": 1, "tree": "<(1,2),2>"}]},
    {"m": 2, "n": 1, "items": [{"eps": 1, "tree": "<(1,3),2>"}]},
    {"m": 2, "n": 2, "items": [{"omega": 2, "inf": "(1,2)"}]},
    {"m": 2, "n": 1, "items": [{"eps": 1, "tree": "<(1,2),2"}]},
    {"m": 2, "n": 1, "items": [{"what": 1}]},
    {"m": 0, "n": 1, "items": []},
    "not json",
])
def test_parse_rejects(doc):
    with pytest.raises(ForestError):
        parse_forest(doc)


def test_framing_may_be_any_integer_at_order_zero():
    f = parse_forest({"m": 1, "n": 0, "items": [{"omega": 5, "inf": "1"}]})
    assert linking_data(f) == [[5]]


def test_tau_examples():
    assert tau(parse_forest(WHITEHEAD1)).is_zero
    assert not tau(parse_forest(WHITEHEAD2)).is_zero
    f = parse_forest({"m": 3, "n": 1, "items": [{"eps": 1, "tree": "<(1,2),3>"},
                                                {"eps": -1, "tree": "<(1,2),3>"}]})
    assert tau(f).is_zero


def test_milnor_examples():
    f = parse_forest({"m": 4, "n": 2, "items": [{"eps": 1, "tree": "<((1,2),3),4>"}]})
    assert milnor(f).longitudes[1].as_dict() == rooted_to_lie((2, (3, 4)))
    want = parse_tensor_json({"degree": 2, "terms": [
        {"coeff": 1, "index": 1, "bracket": "(2,(1,2))"},
        {"coeff": 1, "index": 2, "bracket": "((1,2),1)"}]}, 2)
    assert milnor(parse_forest(WHITEHEAD2)).total == want
    assert not milnor(parse_forest({"m": 3, "n": 2, "items": []})).total


def test_longitudes_reassemble_total():
    f = parse_forest({"m": 3, "n": 2, "items": [{"eps": 1, "tree": "<((1,2),3),1>"},
                                                {"omega": -1, "inf": "(2,3)"}]})
    r = milnor(f)
    rebuilt = {}
    for i, lon in r.longitudes.items():
        for w, c in lon.terms:
            rebuilt[(i, w)] = c
    assert rebuilt == r.total.as_dict()


def test_linking_data():
    assert linking_data(parse_forest({"m": 2, "n": 0, "items": [{"eps": 1, "tree": "<1,2>"}]})) == [[0, 1], [1, 0]]
    assert linking_data(parse_forest({"m": 2, "n": 0, "items": [{"omega": 1, "inf": "1"}]})) == [[1, 0], [0, 0]]
    assert linking_data(parse_forest({"m": 2, "n": 0, "items": []})) == [[0, 0], [0, 0]]
    assert linking_data(parse_forest({"m": 1, "n": 0, "items": [{"eps": -1, "tree": "<1,1>"}]})) == [[-2]]
    with pytest.raises(ForestError):
        linking_data(parse_forest(WHITEHEAD1))


@pytest.mark.parametrize("m,n", [(2, 1), (2, 2), (3, 2), (2, 3), (2, 4)])
def test_milnor_constant_on_relations(m, n):
    p, _ = group(m, n, True)
    base = parse_forest({"m": m, "n": n, "items": [{"eps": 1, "tree": p.generators[0].key}]})
    for row in p.relations:
        f = base + forest_from_vector(m, n, p, row)
        assert milnor(f).total == milnor(base).total


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_milnor_additive(data):
    p, _ = group(2, 2, True)
    vec = st.dictionaries(st.integers(0, len(p.generators) - 1), st.integers(-2, 2), max_size=4)
    f = forest_from_vector(2, 2, p, data.draw(vec))
    g = forest_from_vector(2, 2, p, data.draw(vec))
    assert milnor(f + g).total == milnor(f).total + milnor(g).total


def test_arf_examples():
    a = arf_value(parse_forest({"m": 1, "n": 2, "items": [{"omega": 1, "inf": "(1,1)"}]}))
    assert a.value == ((1,),) and a.obstruction is None
    a = arf_value(parse_forest({"m": 2, "n": 6, "items": [{"omega": 1, "inf": "((1,2),(1,2))"}]}))
    assert a.value == ((1, 2),)
    assert arf_value(parse_forest({"m": 2, "n": 2, "items": []})).value == ()
    assert arf_value(parse_forest(WHITEHEAD2)).obstruction is not None
    with pytest.raises(ForestError):
        arf_value(parse_forest(WHITEHEAD1))


@pytest.mark.parametrize("m,k", [(1, 1), (2, 1), (1, 2), (2, 2)])
def test_arf_of_doubles(m, k):
    for j in enumerate_rooted(m, k - 1):
        for omega in (1, -1):
            f = IntersectionForest(m, 4 * k - 2, (), ((omega, InfTree.of((j, j))),))
            want = tuple(w for w in hall_basis(m, k).elements if rooted_to_lie(j).get(w, 0) % 2)
            assert arf_value(f).value == want


def test_recipe_examples():
    r = realize_recipe(canonicalize_text("<(1,2),3>")[0])
    assert r.to_json()["steps"] == ["start-hopf", "bing-double(2)"]
    r = realize_recipe(InfTree.of((1, 2)))
    assert r.to_json()["steps"] == ["start-framed-unknot(+1)", "twisted-bing-double(1)"]
    r = realize_recipe(InfTree.of(((1, 2), (1, 2))))
    assert r.to_json()["steps"] == ["start-figure-eight", "bing-double(1)"]


@pytest.mark.parametrize("m,n", [(1, 2), (2, 2), (2, 3), (3, 2), (2, 4)])
def test_recipes_replay(m, n):
    gens = list(enumerate_trees(m, n))
    if n % 2 == 0:
        gens += enumerate_inf(m, n // 2)
    for g in gens:
        st_ = replay(realize_recipe(g))
        assert st_.order == n


def test_replay_rejects_tampering():
    r = realize_recipe(canonicalize_text("<(1,2),3>")[0])
    with pytest.raises(RecipeError):
        replay(Recipe(r.target, r.kind, r.steps[:1], r.labels))
    with pytest.raises(RecipeError):
        replay(Recipe(r.target, r.kind, (("bing-double", 1),), r.labels))
    with pytest.raises(RecipeError):
        replay(Recipe(r.target, r.kind, r.steps + (("band-sum", 1, 9),), r.labels))


def test_milnor_tensor_of_empty():
    assert not milnor_tensor(IntersectionForest(2, 3))
