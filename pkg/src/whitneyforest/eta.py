"""The map eta from twisted tree groups to D_n, with audits and kernels."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from . import intlinalg
from .lie import (TensorElement, add_into, bracket_map, dn_lattice, dn_membership, hall_basis,
                  rooted_to_lie, standard_bracketing, tensor, tensor_row, witt_rank)
from .tree_groups import (DEFAULT_GENERATOR_CAP, DEFAULT_MATRIX_ENTRY_LIMIT, GroupStructure,
                          Presentation, group)
from .trees import (CanonicalTree, InfTree, RootedTree, canonicalize, format_rooted, leaf_rootings,
                    node_paths, order, replace_at, reverse_at_root, subtree_at)


class EtaInvariantError(AssertionError):
    """An internal consistency check on eta failed."""


def eta_raw(a: RootedTree, b: RootedTree) -> dict:
    """``sum_v X_l(v) (x) B_v`` for the raw oriented tree ``<a,b>``."""
    out: dict = {}
    for label, bv in leaf_rootings(a, b):
        add_into(out, tensor(label, rooted_to_lie(bv)))
    return out


def _order_of(a, b) -> int:
    return order(a) + order(b)


def eta_tree(t: CanonicalTree, m: int) -> TensorElement:
    a, b = t.halves
    return TensorElement.of(m, _order_of(a, b), eta_raw(a, b))


def eta_inf_raw(j: RootedTree) -> dict:
    doubled = eta_raw(j, j)
    if any(c % 2 for c in doubled.values()):
        raise EtaInvariantError(f"eta(<J,J>) has an odd coefficient for J = {format_rooted(j)}")
    return {k: c // 2 for k, c in doubled.items()}


def eta_inf(j: InfTree, m: int) -> TensorElement:
    body = j.body
    return TensorElement.of(m, 2 * order(body), eta_inf_raw(body))


def eta_generator(g, m: int) -> TensorElement:
    if isinstance(g, InfTree):
        return eta_inf(g, m)
    return eta_tree(g, m)


def eta_parsed(parsed, m: int) -> TensorElement:
    """eta of the output of :func:`trees.parse_generator`."""
    kind, body = parsed
    if kind == "tree":
        a, b = body
        return TensorElement.of(m, _order_of(a, b), eta_raw(a, b))
    if kind == "inf":
        return TensorElement.of(m, 2 * order(body), eta_inf_raw(body))
    raise ValueError("eta is defined on unrooted trees and twisted trees, not rooted trees")


# ---------------------------------------------------------------------------
# the matrix on a presentation

@dataclass(frozen=True)
class EtaMatrix:
    m: int
    n: int
    presentation: Presentation = field(repr=False)
    structure: GroupStructure = field(repr=False)
    images: tuple = field(repr=False)  # TensorElement per generator
    rows: tuple = field(repr=False)  # sparse rows over tensor_basis(m, n)
    dn_coords: tuple = field(repr=False)  # coordinates in the D_n Hermite basis

    def apply(self, vec: dict) -> dict:
        """eta of a formal sum of generators, as a sparse tensor row."""
        out: dict = {}
        for g, c in vec.items():
            intlinalg.addmul(out, self.rows[g], c)
        return out

    def apply_dn(self, vec: dict) -> list[int]:
        d = dn_lattice(self.m, self.n)
        out = [0] * d.rank
        for g, c in vec.items():
            for i, x in enumerate(self.dn_coords[g]):
                out[i] += c * x
        return out


@lru_cache(maxsize=None)
def eta_matrix(m: int, n: int, cap: int | None = DEFAULT_GENERATOR_CAP,
               matrix_entry_limit: int = DEFAULT_MATRIX_ENTRY_LIMIT) -> EtaMatrix:
    p, s = group(m, n, True, cap, matrix_entry_limit)
    d = dn_lattice(m, n, cap)
    images, rows, coords = [], [], []
    for g in p.generators:
        t = eta_generator(g, m)
        try:
            c = dn_membership(t, d)
        except ValueError as exc:
            raise EtaInvariantError(f"eta({g.key}) is not in D_{n}({m}): {exc}") from None
        images.append(t)
        rows.append(tensor_row(t))
        coords.append(tuple(c))
    return EtaMatrix(m, n, p, s, tuple(images), tuple(rows), tuple(coords))


# ---------------------------------------------------------------------------
# audit

@dataclass
class AuditReport:
    m: int
    n: int
    rows_checked: dict = field(default_factory=dict)  # family -> count
    failures: list = field(default_factory=list)  # human-readable entries
    surjective: bool = False
    image_rank: int = 0
    dn_rank: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures and self.surjective

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "ok": self.ok, "rows_checked": self.rows_checked,
                "failures": self.failures, "surjective": self.surjective,
                "image_rank": self.image_rank, "dn_rank": self.dn_rank}


def _reversals(t: RootedTree):
    """The tree with one trivalent vertex reversed, for every vertex."""
    for path in node_paths(t):
        yield replace_at(t, path, reverse_at_root(subtree_at(t, path)))


def audit_well_defined(m: int, n: int, cap: int | None = DEFAULT_GENERATOR_CAP,
                       matrix_entry_limit: int = DEFAULT_MATRIX_ENTRY_LIMIT) -> AuditReport:
    em = eta_matrix(m, n, cap, matrix_entry_limit)
    p = em.presentation
    rep = AuditReport(m, n)

    def count(family):
        rep.rows_checked[family] = rep.rows_checked.get(family, 0) + 1

    for row, family in zip(p.relations, p.families):
        count(family)
        if em.apply(row):
            terms = " ".join(f"{c:+d}*{p.generators[g].key}" for g, c in sorted(row.items()))
            rep.failures.append(f"{family}: {terms}")

    for g, row in zip(p.generators, em.rows):
        if isinstance(g, InfTree):
            body = g.body
            for rev in _reversals(body):
                count("symmetry")
                if tensor_row(TensorElement.of(m, n, eta_inf_raw(rev))) != row:
                    rep.failures.append(f"symmetry: {g.key} vs inf({format_rooted(rev)})")
            continue
        a, b = g.halves
        for side in (0, 1):
            half = (a, b)[side]
            for rev in _reversals(half):
                count("AS-vertex")
                raw = (rev, b) if side == 0 else (a, rev)
                img = tensor_row(TensorElement.of(m, n, eta_raw(*raw)))
                intlinalg.addmul(img, row, 1)
                if img:
                    rep.failures.append(f"AS-vertex: {g.key} at a vertex of {format_rooted(half)}")
        if bracket_map(em.images[p.index[g.key]]):
            rep.failures.append(f"D_n: bracket of eta({g.key}) is nonzero")

    d = dn_lattice(m, n, cap)
    image = intlinalg.hermite([dict(r) for r in em.rows if r])
    rep.image_rank = len(image)
    rep.dn_rank = d.rank
    rep.surjective = image == list(d.basis)
    return rep


# ---------------------------------------------------------------------------
# kernel of the induced map

@dataclass
class KernelReport:
    m: int
    n: int
    rank: int
    torsion: tuple
    generators: list  # formal sums {generator key: coeff}, one per invariant factor
    matched: list | None = None  # (J,J)^inf keys spanning the kernel when n = 4k - 2
    expected_dimension: int | None = None

    @property
    def trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def to_json(self) -> dict:
        out = {"m": self.m, "n": self.n, "rank": self.rank, "torsion": list(self.torsion),
               "generators": self.generators}
        if self.matched is not None:
            out["matched"] = self.matched
            out["expected_dimension"] = self.expected_dimension
        return out


@dataclass(frozen=True)
class _KernelData:
    em: EtaMatrix
    kbasis: tuple  # Hermite basis of ker(eta) on survivor coordinates
    relations: tuple  # residual relations in kbasis coordinates (dense)
    snf: intlinalg.Smith
    Vinv: tuple


def _to_survivor_vector(s: GroupStructure, vec: dict) -> dict:
    pos = {c: i for i, c in enumerate(s.survivors)}
    return {pos[c]: v for c, v in s.substitute(vec).items()}


@lru_cache(maxsize=None)
def _kernel_data(m: int, n: int, cap, matrix_entry_limit) -> _KernelData:
    em = eta_matrix(m, n, cap, matrix_entry_limit)
    s = em.structure
    e_s = [{i: v for i, v in enumerate(em.dn_coords[g]) if v} for g in s.survivors]
    kbasis = intlinalg.left_kernel(e_s)
    rel = []
    for r in s.residual:
        sparse = {i: v for i, v in enumerate(r) if v}
        coeffs = intlinalg.solve_in_lattice(kbasis, sparse)
        if coeffs is None:
            raise EtaInvariantError("a relation does not lie in the kernel of eta")
        rel.append([coeffs.get(i, 0) for i in range(len(kbasis))])
    snf = intlinalg.smith_dense(rel, len(kbasis))
    vinv = intlinalg.unimodular_inverse(snf.V) if kbasis else []
    return _KernelData(em, tuple(kbasis), tuple(map(tuple, rel)), snf, tuple(map(tuple, vinv)))


def _kernel_coords(kd: _KernelData, vec: dict) -> list[int] | None:
    """Coordinates of a formal generator sum in the kernel basis, or None if
    eta does not vanish on it."""
    sv = _to_survivor_vector(kd.em.structure, vec)
    c = intlinalg.solve_in_lattice(list(kd.kbasis), sv)
    if c is None:
        return None
    return [c.get(i, 0) for i in range(len(kd.kbasis))]


def _group_coords(kd: _KernelData, c: list[int]) -> list[int]:
    V = kd.snf.V
    k = len(c)
    z = [sum(c[i] * V[i][j] for i in range(k)) for j in range(k)]
    out = [z[j] % d for j, d in enumerate(kd.snf.diagonal) if d != 1]
    return out + z[len(kd.snf.diagonal):]


def ker_eta(m: int, n: int, cap: int | None = DEFAULT_GENERATOR_CAP,
            matrix_entry_limit: int = DEFAULT_MATRIX_ENTRY_LIMIT) -> KernelReport:
    kd = _kernel_data(m, n, cap, matrix_entry_limit)
    em = kd.em
    s, p = em.structure, em.presentation
    diag = kd.snf.diagonal
    k = len(kd.kbasis)
    torsion = tuple(d for d in diag if d != 1)
    rank = k - len(diag)

    gens = []
    keep = [j for j, d in enumerate(diag) if d != 1] + list(range(len(diag), k))
    for j in keep:
        x: dict = {}
        for i, c in enumerate(kd.Vinv[j]):
            intlinalg.addmul(x, kd.kbasis[i], c)
        gens.append({p.generators[s.survivors[c]].key: v for c, v in sorted(x.items())})

    rep = KernelReport(m, n, rank, torsion, gens)
    if n % 4 == 2:
        kk = (n + 2) // 4
        words = hall_basis(m, kk).elements
        rep.expected_dimension = witt_rank(m, kk)
        cols = [_group_coords(kd, kernel_coords_of_double(kd, w)) for w in words]
        elementary = rank == 0 and all(d == 2 for d in torsion)
        spans = elementary and all(
            intlinalg.solve_mod2(cols, [int(i == j) for i in range(len(torsion))]) is not None
            for j in range(len(torsion)))
        if elementary and spans and len(torsion) == len(words):
            rep.matched = [InfTree.of((standard_bracketing(w), standard_bracketing(w))).key
                           for w in words]
        else:
            rep.matched = []
    return rep


def kernel_coords_of_double(kd: _KernelData, word) -> list[int]:
    """Kernel coordinates of ``(J,J)^inf`` for the Lyndon word ``word``."""
    j = standard_bracketing(word)
    key = InfTree.of((j, j)).key
    p = kd.em.presentation
    c = _kernel_coords(kd, {p.index[key]: 1})
    if c is None:
        raise EtaInvariantError(f"eta({key}) is nonzero")
    return c


def kernel_class(m: int, n: int, vec: dict, cap: int | None = DEFAULT_GENERATOR_CAP,
                 matrix_entry_limit: int = DEFAULT_MATRIX_ENTRY_LIMIT) -> list[int] | None:
    """Group coordinates of a kernel element, or None when eta(vec) != 0."""
    kd = _kernel_data(m, n, cap, matrix_entry_limit)
    c = _kernel_coords(kd, vec)
    return None if c is None else _group_coords(kd, c)


def express_in_doubles(m: int, n: int, vec: dict, cap: int | None = DEFAULT_GENERATOR_CAP,
                       matrix_entry_limit: int = DEFAULT_MATRIX_ENTRY_LIMIT):
    """For ``n = 4k - 2``: bits ``a_J`` with ``vec = sum a_J (J,J)^inf`` in the
    twisted tree group, one per Lyndon word of length k; None if eta(vec) != 0."""
    if n % 4 != 2:
        raise ValueError("the doubled-tree basis exists only for n = 4k - 2")
    kd = _kernel_data(m, n, cap, matrix_entry_limit)
    c = _kernel_coords(kd, vec)
    if c is None:
        return None
    words = hall_basis(m, (n + 2) // 4).elements
    cols = [_group_coords(kd, kernel_coords_of_double(kd, w)) for w in words]
    bits = intlinalg.solve_mod2(cols, _group_coords(kd, c))
    if bits is None:
        raise EtaInvariantError("kernel element outside the span of the doubled trees")
    return list(zip(words, bits))
