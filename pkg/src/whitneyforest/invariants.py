"""Intersection forests and the invariants read off them: the tree-group
class tau, Milnor invariants, linking data, Arf representatives and symbolic
realization recipes."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .eta import EtaInvariantError, eta_inf_raw, eta_raw, express_in_doubles
from .lie import (TensorElement, add_into, bracket_map, dn_lattice, dn_membership,
                  standard_bracketing)
from .tree_groups import DEFAULT_GENERATOR_CAP, DEFAULT_MATRIX_ENTRY_LIMIT, group
from .trees import (CanonicalTree, InfTree, LabelError, RootedTree, TreeSyntaxError, _Graph,
                    canonical_rooted, canonicalize, format_rooted, order, parse_rooted,
                    parse_unrooted)


class ForestError(ValueError):
    """A forest document failed validation."""


@dataclass(frozen=True)
class IntersectionForest:
    m: int
    n: int
    trees: tuple = ()  # (eps, CanonicalTree), sign already folded into eps
    twisted: tuple = ()  # (omega, InfTree)

    def is_empty(self) -> bool:
        return not self.trees and not self.twisted

    def __add__(self, other: "IntersectionForest") -> "IntersectionForest":
        if (self.m, self.n) != (other.m, other.n):
            raise ForestError("forests disagree on (m, n)")
        return IntersectionForest(self.m, self.n, self.trees + other.trees,
                                  self.twisted + other.twisted)

    def to_json(self) -> dict:
        items = [{"eps": e, "tree": t.key} for e, t in self.trees]
        items += [{"omega": w, "inf": j.body_key} for w, j in self.twisted]
        return {"m": self.m, "n": self.n, "items": items}


def _int(doc, key) -> int:
    v = doc.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ForestError(f"{key!r} must be an integer")
    return v


def parse_forest(doc) -> IntersectionForest:
    """Validate a forest document (a dict or JSON text)."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ForestError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ForestError("forest must be a JSON object")
    m, n = _int(doc, "m"), _int(doc, "n")
    if m < 1 or n < 0:
        raise ForestError("need m >= 1 and n >= 0")
    items = doc.get("items", [])
    if not isinstance(items, list):
        raise ForestError("'items' must be a list")
    trees, twisted = [], []
    for pos, item in enumerate(items):
        where = f"item {pos}"
        if not isinstance(item, dict):
            raise ForestError(f"{where}: not an object")
        try:
            if "tree" in item:
                eps = _int(item, "eps")
                if eps not in (1, -1):
                    raise ForestError(f"{where}: eps must be +1 or -1")
                a, b = parse_unrooted(item["tree"], m)
                if order(a) + order(b) != n:
                    raise ForestError(f"{where}: tree has order {order(a) + order(b)}, expected {n}")
                c, sign = canonicalize(a, b)
                trees.append((eps * sign, c))
            elif "inf" in item:
                omega = _int(item, "omega")
                if n % 2:
                    raise ForestError(f"{where}: twisted trees need even order")
                if n > 0 and omega not in (1, -1):
                    raise ForestError(f"{where}: omega must be +1 or -1 when n > 0")
                text = item["inf"].strip()
                if text.startswith("inf"):
                    text = text[3:]
                j = parse_rooted(text, m)
                if 2 * order(j) != n:
                    raise ForestError(f"{where}: twisted tree has order {2 * order(j)}, expected {n}")
                twisted.append((omega, InfTree.of(j)))
            else:
                raise ForestError(f"{where}: needs a 'tree' or an 'inf' entry")
        except (TreeSyntaxError, LabelError) as exc:
            raise ForestError(f"{where}: {exc}") from None
    return IntersectionForest(m, n, tuple(trees), tuple(twisted))


def load_forest(path) -> IntersectionForest:
    with open(path, encoding="utf-8") as fh:
        return parse_forest(fh.read())


# ---------------------------------------------------------------------------
# tau

@dataclass(frozen=True)
class TauResult:
    coordinates: tuple
    rank: int
    torsion: tuple

    @property
    def is_zero(self) -> bool:
        return not any(self.coordinates)

    def to_json(self) -> dict:
        return {"zero": self.is_zero, "coordinates": list(self.coordinates), "rank": self.rank,
                "torsion": list(self.torsion)}


def forest_vector(f: IntersectionForest, cap=DEFAULT_GENERATOR_CAP,
                  matrix_entry_limit=DEFAULT_MATRIX_ENTRY_LIMIT) -> dict:
    p, _ = group(f.m, f.n, True, cap, matrix_entry_limit)
    vec: dict = {}
    for eps, t in f.trees:
        add_into(vec, {p.index[t.key]: eps})
    for omega, j in f.twisted:
        add_into(vec, {p.index[j.key]: omega})
    return vec


def tau(f: IntersectionForest, cap=DEFAULT_GENERATOR_CAP,
        matrix_entry_limit=DEFAULT_MATRIX_ENTRY_LIMIT) -> TauResult:
    _, s = group(f.m, f.n, True, cap, matrix_entry_limit)
    return TauResult(s.coordinates(forest_vector(f, cap, matrix_entry_limit)), s.rank, s.torsion)


# ---------------------------------------------------------------------------
# Milnor invariants

@dataclass(frozen=True)
class MilnorResult:
    n: int
    total: TensorElement
    dn_coordinates: tuple
    longitudes: dict = field(compare=False)  # i -> LieElement of degree n + 1

    def to_json(self, longitude: int | None = None) -> dict:
        if longitude is not None:
            return {"n": self.n, "component": longitude,
                    "longitude": self.longitudes[longitude].to_json()}
        return {"n": self.n, "total": self.total.to_json(),
                "dn_coordinates": list(self.dn_coordinates),
                "longitudes": {str(i): v.to_json() for i, v in self.longitudes.items()}}


def milnor_tensor(f: IntersectionForest) -> TensorElement:
    out: dict = {}
    for eps, t in f.trees:
        add_into(out, eta_raw(*t.halves), eps)
    for omega, j in f.twisted:
        add_into(out, eta_inf_raw(j.body), omega)
    return TensorElement.of(f.m, f.n, out)


def milnor(f: IntersectionForest, cap=DEFAULT_GENERATOR_CAP) -> MilnorResult:
    total = milnor_tensor(f)
    if bracket_map(total):
        raise EtaInvariantError("the Milnor tensor is not in the kernel of the bracket map")
    coords = dn_membership(total, dn_lattice(f.m, f.n, cap))
    longs = {i: total.component(i) for i in range(1, f.m + 1)}
    return MilnorResult(f.n, total, tuple(coords), longs)


def linking_data(f: IntersectionForest) -> list[list[int]]:
    """Order 0: ``l[i][j]`` is the coefficient of ``X_i (x) X_j`` in mu_0,
    i.e. linking numbers off the diagonal and framings on it."""
    if f.n != 0:
        raise ForestError("linking data needs an order 0 forest")
    d = milnor_tensor(f).as_dict()
    return [[d.get((i, (j,)), 0) for j in range(1, f.m + 1)] for i in range(1, f.m + 1)]


# ---------------------------------------------------------------------------
# Arf

@dataclass(frozen=True)
class ArfResult:
    k: int
    value: tuple  # Lyndon words w with coefficient 1 in sum 1 (x) w
    obstruction: TensorElement | None = None

    def to_json(self) -> dict:
        if self.obstruction is not None:
            return {"k": self.k, "obstruction": self.obstruction.to_json(), "value": None}
        return {"k": self.k, "obstruction": None,
                "value": [format_rooted(standard_bracketing(w)) for w in self.value],
                "group": f"Z2 (x) L_{self.k}", "representative": True}


def arf_value(f: IntersectionForest, cap=DEFAULT_GENERATOR_CAP,
              matrix_entry_limit=DEFAULT_MATRIX_ENTRY_LIMIT) -> ArfResult:
    """A representative of Arf_k in Z2 (x) L_k, for a forest of order 4k - 2.

    The true value lives in a quotient of this group; what is returned is the
    class of tau expressed in the doubled trees ``(J,J)^inf``.
    """
    if f.n % 4 != 2:
        raise ForestError("Arf values are defined for order 4k - 2")
    k = (f.n + 2) // 4
    total = milnor_tensor(f)
    if total:
        return ArfResult(k, (), total)
    bits = express_in_doubles(f.m, f.n, forest_vector(f, cap, matrix_entry_limit), cap,
                              matrix_entry_limit)
    if bits is None:
        raise EtaInvariantError("tau lies outside the kernel although mu vanishes")
    return ArfResult(k, tuple(w for w, b in bits if b))


# ---------------------------------------------------------------------------
# realization recipes

class RecipeError(ValueError):
    pass


@dataclass(frozen=True)
class Recipe:
    target: str
    kind: str  # "tree", "twisted" or "double"
    steps: tuple  # ("start-hopf",), ("bing-double", c), ("band-sum", a, b), ...
    labels: tuple  # component c (1-based) -> target label, before band sums

    @staticmethod
    def step_text(step) -> str:
        if len(step) == 1:
            return step[0]
        return f"{step[0]}({','.join(str(x) for x in step[1:])})"

    def to_json(self) -> dict:
        return {"target": self.target, "kind": self.kind,
                "steps": [self.step_text(s) for s in self.steps],
                "labels": {str(i + 1): lab for i, lab in enumerate(self.labels)}}


def _double_along(t: RootedTree, comp: int, steps: list, labels: list, leaf_order: list,
                  kind: str = "bing-double"):
    """Grow component ``comp`` into ``t`` by pre-order Bing doubling; the
    components of the leaves are appended to ``leaf_order`` left to right."""
    if isinstance(t, int):
        labels[comp - 1] = t
        leaf_order.append(comp)
        return
    new = len(labels) + 1
    labels.append(None)
    steps.append((kind, comp))
    _double_along(t[0], comp, steps, labels, leaf_order)
    _double_along(t[1], new, steps, labels, leaf_order)


def _band_sums(leaf_order: list[int], labels: list, steps: list):
    keep: dict = {}
    for c in leaf_order:
        lab = labels[c - 1]
        keep[lab] = min(keep.get(lab, c), c)
    for c in leaf_order:
        if c != keep[labels[c - 1]]:
            steps.append(("band-sum", keep[labels[c - 1]], c))


def realize_recipe(g) -> Recipe:
    """Symbolic Bing-doubling recipe for a single generator.

    Components are numbered in order of creation; band sums merging
    components with equal labels come last, in post-order of the tree.
    """
    leaf_order: list = []
    if isinstance(g, CanonicalTree):
        a, b = g.halves
        gr = _Graph(a, b)
        v = gr.leaf_vertices()[0]
        (w,) = gr.nbrs[v]
        r = gr.subtree(w, v)
        steps: list = [("start-hopf",)]
        labels: list = [gr.label[v], None]
        _double_along(r, 2, steps, labels, leaf_order)
        _band_sums(leaf_order + [1], labels, steps)
        return Recipe(g.key, "tree", tuple(steps), tuple(labels))
    if not isinstance(g, InfTree):
        raise RecipeError(f"unsupported generator {g!r}")
    body = g.body
    if not isinstance(body, int) and canonical_rooted(body[0])[0] == canonical_rooted(body[1])[0]:
        steps = [("start-figure-eight",)]
        labels = [None]
        _double_along(body[0], 1, steps, labels, leaf_order)
        _band_sums(leaf_order, labels, steps)
        return Recipe(g.key, "double", tuple(steps), tuple(labels))
    steps = [("start-framed-unknot", "+1")]
    if isinstance(body, int):
        return Recipe(g.key, "twisted", tuple(steps), (body,))
    labels = [None, None]
    steps.append(("twisted-bing-double", 1))
    _double_along(body[0], 1, steps, labels, leaf_order)
    _double_along(body[1], 2, steps, labels, leaf_order)
    _band_sums(leaf_order, labels, steps)
    return Recipe(g.key, "twisted", tuple(steps), tuple(labels))


@dataclass(frozen=True)
class ReplayState:
    kind: str
    order: int  # tree order of the realized generator
    components: frozenset


# tree order gained per doubling: a twisted body appears twice in the order,
# and a doubled body (J,J) grows in both copies of J
_GROWTH = {"tree": 1, "twisted": 2, "double": 4}


def replay(recipe: Recipe) -> ReplayState:
    """Re-run the order bookkeeping of a recipe and check it against the target."""
    st = None
    for step in recipe.steps:
        name = step[0]
        if st is None:
            if name == "start-hopf":
                st = ReplayState("tree", 0, frozenset({1, 2}))
            elif name == "start-framed-unknot":
                st = ReplayState("twisted", 0, frozenset({1}))
            elif name == "start-figure-eight":
                st = ReplayState("double", 2, frozenset({1}))
            else:
                raise RecipeError(f"recipe must start with a base link, got {name}")
            continue
        if name.startswith("start-"):
            raise RecipeError("a recipe has exactly one base link")
        alive = st.components
        if name in ("bing-double", "twisted-bing-double"):
            if step[1] not in alive:
                raise RecipeError(f"no component {step[1]}")
            if name == "twisted-bing-double" and (st.kind != "twisted" or st.order != 0):
                raise RecipeError("twisted doubling applies to the framed unknot only")
            new = max(alive) + 1
            st = ReplayState(st.kind, st.order + _GROWTH[st.kind], alive | {new})
        elif name == "band-sum":
            a, b = step[1], step[2]
            if a == b or a not in alive or b not in alive:
                raise RecipeError(f"bad band sum {a},{b}")
            st = ReplayState(st.kind, st.order, alive - {b})
        else:
            raise RecipeError(f"unknown step {name}")
    if st is None:
        raise RecipeError("empty recipe")
    target_order = _target_order(recipe.target)
    expected = len(set(recipe.labels))
    if st.order != target_order or len(st.components) != expected:
        raise RecipeError(f"replay gives order {st.order} with {len(st.components)} components, "
                          f"target needs {target_order} with {expected}")
    return st


def _target_order(key: str) -> int:
    if key.startswith("inf"):
        return 2 * order(parse_rooted(key[len("inf("):-1]))
    a, b = parse_unrooted(key)
    return order(a) + order(b)
