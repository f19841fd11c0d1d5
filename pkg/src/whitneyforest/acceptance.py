"""The certification suite behind ``wf selftest`` and ``tests/test_acceptance.py``."""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from . import oracles
from .eta import audit_well_defined, eta_inf, eta_tree, ker_eta
from .invariants import arf_value, milnor, parse_forest, tau
from .lie import (bracket_kernel, dn_rank_formula, hall_basis, parse_tensor_json, witt_rank)
from .tree_groups import group
from .trees import InfTree, canonicalize_text, parse_rooted


@dataclass
class CriterionResult:
    name: str
    ok: bool
    detail: str
    seconds: float
    budget: float

    @property
    def passed(self) -> bool:
        return self.ok and self.seconds <= self.budget

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        late = "" if self.seconds <= self.budget else f" (over budget {self.budget:.0f}s)"
        return f"{self.name} {status} [{self.seconds:.2f}s]{late} {self.detail}"


def _tensor(terms: list[tuple[int, int, str]], m: int, n: int):
    return parse_tensor_json({"degree": n, "terms": [
        {"coeff": c, "index": i, "bracket": b} for c, i, b in terms]}, m)


def a1_witt_ranks() -> tuple[bool, str]:
    bad = []
    for m in range(1, 5):
        for n in range(1, 7):
            if len(hall_basis(m, n)) != witt_rank(m, n):
                bad.append(("hall", m, n))
    for m in range(1, 4):
        for n in range(1, 6):
            if oracles.magma_lie_rank(m, n) != witt_rank(m, n):
                bad.append(("magma", m, n))
    return not bad, f"mismatches {bad}" if bad else "hall basis, Witt formula and magma oracle agree"


def a2_dn_ranks() -> tuple[bool, str]:
    bad = []
    for m in range(1, 4):
        for n in range(0, 5):
            r = len(bracket_kernel(m, n))
            if r != dn_rank_formula(m, n) or r != oracles.bracket_kernel_rank(m, n):
                bad.append((m, n, r))
    return not bad, f"mismatches {bad}" if bad else "kernel ranks equal m*r(n+1) - r(n+2)"


def a3_eta_examples() -> tuple[bool, str]:
    y, _ = canonicalize_text("<(1,2),3>")
    want_y = _tensor([(1, 1, "(2,3)"), (1, 2, "(3,1)"), (1, 3, "(1,2)")], 3, 1)
    got_y = eta_tree(y, 3)
    want_w = _tensor([(1, 1, "(2,(1,2))"), (1, 2, "((1,2),1)")], 2, 2)
    got_w = eta_inf(InfTree.of(parse_rooted("(1,2)")), 2)
    ok = got_y == want_y and got_w == want_w
    return ok, "Y-tree and (1,2)^inf images match" if ok else f"got {got_y} and {got_w}"


def a4_audit() -> tuple[bool, str]:
    bad = []
    for m in range(1, 4):
        for n in range(0, 5):
            rep = audit_well_defined(m, n)
            if not rep.ok:
                bad.append((m, n, rep.failures[:3], rep.surjective))
    return not bad, f"failures {bad}" if bad else "all relation rows vanish, eta onto D_n"


def a5_order_two() -> tuple[bool, str]:
    _, tw = group(1, 2, True)
    _, fr = group(1, 2, False)
    ok = (tw.rank, tw.torsion) == (0, (2,)) and (fr.rank, fr.torsion) == (0, ())
    detail = [f"T2inf(1)={tw.rank},{list(tw.torsion)} T2(1)={fr.rank},{list(fr.torsion)}"]
    for m in range(1, 4):
        k = ker_eta(m, 2)
        want = [f"inf(({i},{i}))" for i in range(1, m + 1)]
        good = k.rank == 0 and k.torsion == (2,) * m and k.matched == want
        ok = ok and good
        if not good:
            detail.append(f"ker_eta({m},2)={k.to_json()}")
    return ok, " ".join(detail)


def a6_isomorphisms() -> tuple[bool, str]:
    bad = []
    for m in range(1, 4):
        for n in (0, 1, 3, 4):
            _, s = group(m, n, True)
            k = ker_eta(m, n)
            if not k.trivial or s.torsion or s.rank != dn_rank_formula(m, n):
                bad.append((m, n, s.rank, s.torsion, k.to_json()))
    return not bad, f"failures {bad}" if bad else "eta injective with rank D_n for n = 0,1,3,4"


def a7_milnor() -> tuple[bool, str]:
    notes = []
    f = parse_forest({"m": 4, "n": 2, "items": [{"eps": 1, "tree": "<((1,2),3),4>"}]})
    lon = milnor(f).longitudes[1]
    want = parse_tensor_json({"degree": 2, "terms": [
        {"coeff": 1, "index": 1, "bracket": "(2,(3,4))"}]}, 4).component(1)
    ok1 = lon == want
    notes.append(f"longitude1={'ok' if ok1 else lon.to_json()}")
    w1 = parse_forest({"m": 2, "n": 1, "items": [{"eps": 1, "tree": "<(1,2),2>"}]})
    ok2 = tau(w1).is_zero
    notes.append(f"tau(whitehead1)={'0' if ok2 else 'nonzero'}")
    w2 = parse_forest({"m": 2, "n": 2, "items": [{"omega": 1, "inf": "(1,2)"}]})
    want_w = _tensor([(1, 1, "(2,(1,2))"), (1, 2, "((1,2),1)")], 2, 2)
    ok3 = milnor(w2).total == want_w and not tau(w2).is_zero
    notes.append(f"mu(whitehead2)={'ok' if ok3 else milnor(w2).total}")
    a = arf_value(parse_forest({"m": 1, "n": 2, "items": [{"omega": 1, "inf": "(1,1)"}]}))
    ok4 = a.obstruction is None and a.value == ((1,),)
    notes.append(f"arf={'1(x)X1' if ok4 else a.to_json()}")
    return ok1 and ok2 and ok3 and ok4, " ".join(notes)


def a8_kernel_six() -> tuple[bool, str]:
    k2 = ker_eta(2, 6)
    k1 = ker_eta(1, 6)
    ok = (k2.rank == 0 and k2.torsion == (2,) and k2.matched == ["inf(((1,2),(1,2)))"]
          and k1.trivial)
    return ok, f"ker_eta(2,6)={k2.rank},{list(k2.torsion)} via {k2.matched}; ker_eta(1,6) trivial={k1.trivial}"


CRITERIA: list[tuple[str, Callable[[], tuple[bool, str]], float, bool]] = [
    ("A1", a1_witt_ranks, 10, False),
    ("A2", a2_dn_ranks, 30, False),
    ("A3", a3_eta_examples, 1, False),
    ("A4", a4_audit, 300, False),
    ("A5", a5_order_two, 30, False),
    ("A6", a6_isomorphisms, 600, False),
    ("A7", a7_milnor, 1, False),
    ("A8", a8_kernel_six, 3600, True),
]


def run_criterion(name: str) -> CriterionResult:
    for n, fn, budget, _ in CRITERIA:
        if n == name:
            t0 = time.perf_counter()
            try:
                ok, detail = fn()
            except Exception as exc:  # a crash is a failure, reported like one
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            return CriterionResult(name, ok, detail, time.perf_counter() - t0, budget)
    raise KeyError(name)


def run_suite(full: bool = False) -> list[CriterionResult]:
    return [run_criterion(n) for n, _, _, batch in CRITERIA if full or not batch]
