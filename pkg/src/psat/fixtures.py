"""Worked examples as ready-made formulas, and the ``selftest`` suite over them."""

from __future__ import annotations

from typing import Callable, Iterator

from psat.assignment import Assignment, parse_assignment, residual
from psat.cnf import pg_nnf, plaisted_greenbaum, tseitin
from psat.enumeration import count_models, enumerate_projected, enumerate_with_generalization, generalize
from psat.formula import Formula, Manager, QuantifiedFormula, equivalent
from psat.satcheck import (
    dual_entails,
    entails,
    entails_exists,
    shannon_disjuncts,
    verifies,
    verifies_exists,
    verifies_extended,
)

EX1 = "(A1 & A2) | (A1 & !A2)"
PHI_STAR = "((A1 & A2) | (A1 & !A2)) & ((!A3 & A4) | (!A3 & !A4))"
PSI = (
    "(B1 | B2)"
    " & (!B1 | A1) & (!B1 | A2) & (B1 | !A1 | !A2)"
    " & (!B2 | A1) & (!B2 | !A2) & (B2 | !A1 | A2)"
)
# clauses of PSI over (A1, A2, B1, B2) = ids (1, 2, 3, 4)
PSI_CLAUSES = [(3, 4), (-3, 1), (-3, 2), (3, -1, -2), (-4, 1), (-4, -2), (4, -1, 2)]


def manager(*names: str) -> Manager:
    mgr = Manager()
    for n in names:
        mgr.declare(n)
    return mgr


def ex1() -> tuple[Manager, Formula]:
    mgr = manager("A1", "A2")
    return mgr, mgr.parse(EX1)


def phi_star() -> tuple[Manager, Formula]:
    mgr = manager("A1", "A2", "A3", "A4")
    return mgr, mgr.parse(PHI_STAR)


def psi() -> tuple[Manager, QuantifiedFormula]:
    mgr = manager("A1", "A2", "B1", "B2")
    m = mgr.parse(PSI)
    return mgr, QuantifiedFormula(m, frozenset({mgr.id_of("B1"), mgr.id_of("B2")}))


def valid_cubes_disjunction(m: int = 4) -> tuple[Manager, Formula, Assignment]:
    """``OR_i (A_i & cube_i)`` whose cubes (over X, Y) form a valid disjunction."""
    mgr = manager(*[f"A{i}" for i in range(1, m + 1)], "X", "Y")
    x, y = mgr.atom("X"), mgr.atom("Y")
    cubes = [x & y, x & ~y, ~x & y, ~x & ~y]
    parts = [mgr.atom(f"A{i}") & cubes[(i - 1) % 4] for i in range(1, m + 1)]
    f = mgr.disj(parts)
    mu = Assignment({mgr.id_of(f"A{i}"): True for i in range(1, m + 1)})
    return mgr, f, mu


def _checks() -> Iterator[tuple[str, Callable[[], bool]]]:
    def example1() -> bool:
        mgr, f = ex1()
        mu = parse_assignment(mgr, "A1")
        return entails(mu, f) and not verifies(mu, f) and dual_entails(mu, f)

    def example2() -> bool:
        mgr, f1 = ex1()
        f2 = mgr.atom("A1")
        mu = parse_assignment(mgr, "A1")
        a2 = mgr.atom("A2")
        return (
            equivalent(f1, f2)
            and residual(f1, mu) is (a2 | ~a2)
            and residual(f2, mu) is mgr.true
            and entails(mu, f1) and entails(mu, f2)
            and not verifies(mu, f1) and verifies(mu, f2)
            and verifies_extended(mu, f1)
        )

    def extended_gap() -> bool:
        _, f, mu = valid_cubes_disjunction()
        return entails(mu, f) and not verifies_extended(mu, f)

    def example4() -> bool:
        mgr, q = psi()
        a1, a2 = mgr.atom("A1"), mgr.atom("A2")
        want = [a1 & a2 & ~a2, a1 & a2, a1 & ~a2, mgr.false]
        got = shannon_disjuncts(q)
        mu = parse_assignment(mgr, "A1")
        return (
            len(got) == 4
            and all(equivalent(g, w) for g, w in zip(got, want))
            and entails_exists(mu, q)
            and not verifies_exists(mu, q)
        )

    def example5() -> bool:
        mgr, f = ex1()
        ts, pg, pgn = tseitin(f), plaisted_greenbaum(f), pg_nnf(f)
        want = _rename(ts, mgr)
        ternary = {c for c in want if len(c) == 3}
        mu = parse_assignment(mgr, "A1")
        ok = want == {frozenset(c) for c in _psi_named()}
        ok = ok and _rename(pg, mgr) == want - ternary and _rename(pgn, mgr) == want - ternary
        for enc in (ts, pg, pgn):
            q = enc.as_quantified()
            ok = ok and entails_exists(mu, q) and not verifies_exists(mu, q)
        return ok

    def example6() -> bool:
        mgr, f = phi_star()
        eta = parse_assignment(mgr, "A1,A2,-A3,A4")
        mu = parse_assignment(mgr, "A1,-A3")
        v = enumerate_with_generalization(f, "verify")
        e = enumerate_with_generalization(f, "entail")
        return (
            generalize(eta, f, "verify").assignment == eta
            and generalize(eta, f, "entail").assignment == mu
            and len(v) == 4
            and e.assignments() == [mu]
            and count_models(v) == count_models(e) == 4
        )

    def projected() -> bool:
        mgr, q = psi()
        e = enumerate_projected(q, "entail")
        v = enumerate_projected(q, "verify")
        return e.assignments() == [parse_assignment(mgr, "A1")] and len(v) == 2

    yield "example-1 entailment without verification", example1
    yield "example-2 equivalent formulas, different verification", example2
    yield "extended verification still weaker than entailment", extended_gap
    yield "example-4 shannon expansion and exists-entailment", example4
    yield "example-5 tseitin/pg clause sets and exists-entailment", example5
    yield "example-6 generalization and enumeration", example6
    yield "projected enumeration of exists B . psi", projected


def _psi_named() -> list[frozenset[str]]:
    names = {1: "A1", 2: "A2", 3: "B1", 4: "B2"}
    return [frozenset(("" if l > 0 else "!") + names[abs(l)] for l in c) for c in PSI_CLAUSES]


def _rename(enc, mgr: Manager) -> set[frozenset[str]]:
    """Clause set with encoder atoms renamed ``B<k>`` in order of appearance."""
    ren: dict[int, str] = {}
    for c in enc.clauses:
        for l in c:
            a = abs(l)
            if a in enc.fresh_atoms and a not in ren:
                ren[a] = f"B{len(ren) + 1}"
    def nm(a: int) -> str:
        return ren.get(a) or mgr.name(a)
    return {frozenset(("" if l > 0 else "!") + nm(abs(l)) for l in c) for c in enc.clauses}


def run_selftest(out=print) -> bool:
    ok = True
    for name, check in _checks():
        try:
            passed = bool(check())
        except Exception as exc:  # report and keep going
            passed = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        ok = ok and passed
        out(f"{'PASS' if passed else 'FAIL'}  {name}")
    return ok
