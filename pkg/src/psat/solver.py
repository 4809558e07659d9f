"""A small incremental CDCL solver.

Two-watched-literal propagation, first-UIP learning, no restarts and no
clause deletion. Branching is fixed: the lowest unassigned variable, tried
true first, so every run on the same input is identical. Assumptions are
handled MiniSat style, one decision level per assumption.

Variables are positive ints (atom ids of a :class:`~psat.formula.Manager`),
literals are signed ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from psat.assignment import Assignment
from psat.formula import CnfFormula


@dataclass(frozen=True)
class SolveResult:
    sat: bool
    model: Assignment | None = None

    def __bool__(self) -> bool:
        return self.sat


class Solver:
    """Incremental solver state: clause database, trail and watch lists."""

    def __init__(self, clauses: Iterable[Sequence[int]] = (), num_vars: int = 0):
        self.ok = True
        self.clauses: list[list[int]] = []
        self.num_learnt = 0
        self.watches: dict[int, list[int]] = {}
        self.value: list[bool | None] = [None]
        self.level: list[int] = [0]
        self.reason: list[int | None] = [None]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.solve_calls = 0
        self.conflicts = 0
        self.decisions = 0
        self.model: Assignment | None = None
        self._original: list[tuple[int, ...]] = []
        self.ensure_vars(num_vars)
        for c in clauses:
            self.add_clause(c)

    @property
    def num_vars(self) -> int:
        return len(self.value) - 1

    def ensure_vars(self, n: int) -> None:
        while len(self.value) <= n:
            self.value.append(None)
            self.level.append(0)
            self.reason.append(None)

    def _lit_value(self, lit: int) -> bool | None:
        v = self.value[abs(lit)]
        if v is None:
            return None
        return v if lit > 0 else not v

    # -- database ----------------------------------------------------------

    def add_clause(self, lits: Iterable[int]) -> bool:
        """Add a clause at level 0. Returns False once the database is unsat."""
        lits = list(dict.fromkeys(lits))
        for l in lits:
            if l == 0:
                raise ValueError("0 is not a literal")
            self.ensure_vars(abs(l))
        self._original.append(tuple(lits))
        if not self.ok:
            return False
        self._backtrack(0)
        s = set(lits)
        if any(-l in s for l in s):
            return True
        out = []
        for l in lits:
            v = self._lit_value(l)
            if v is True:
                return True
            if v is None:
                out.append(l)
        if not out:
            self.ok = False
            return False
        if len(out) == 1:
            self._enqueue(out[0], None)
            if self._propagate() is not None:
                self.ok = False
            return self.ok
        self._attach(out)
        return True

    def _attach(self, lits: list[int]) -> int:
        ci = len(self.clauses)
        self.clauses.append(lits)
        self.watches.setdefault(lits[0], []).append(ci)
        self.watches.setdefault(lits[1], []).append(ci)
        return ci

    # -- trail -------------------------------------------------------------

    def _enqueue(self, lit: int, reason: int | None) -> None:
        v = abs(lit)
        self.value[v] = lit > 0
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _backtrack(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        stop = self.trail_lim[lvl]
        for lit in self.trail[stop:]:
            v = abs(lit)
            self.value[v] = None
            self.reason[v] = None
        del self.trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = min(self.qhead, len(self.trail))

    def _propagate(self) -> int | None:
        """Unit propagation; returns the index of a conflicting clause or None."""
        clauses, value = self.clauses, self.value
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            false_lit = -p
            ws = self.watches.get(false_lit)
            if not ws:
                continue
            i = j = 0
            n = len(ws)
            while i < n:
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                fv = value[abs(first)]
                if fv is not None and fv == (first > 0):
                    ws[j] = ci
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    vk = value[abs(lk)]
                    if vk is None or vk == (lk > 0):
                        c[1], c[k] = lk, c[1]
                        self.watches.setdefault(lk, []).append(ci)
                        break
                else:
                    ws[j] = ci
                    j += 1
                    if fv is not None:
                        # first literal false too
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        return ci
                    self._enqueue(first, ci)
            del ws[j:]
        return None

    def _analyze(self, confl: int) -> tuple[list[int], int]:
        cur = len(self.trail_lim)
        learnt: list[int] = [0]
        seen: set[int] = set()
        counter = 0
        p = 0
        idx = len(self.trail) - 1
        clause = self.clauses[confl]
        while True:
            for q in clause:
                if q == p:
                    continue
                v = abs(q)
                if v in seen or self.level[v] == 0:
                    continue
                seen.add(v)
                if self.level[v] == cur:
                    counter += 1
                else:
                    learnt.append(q)
            while abs(self.trail[idx]) not in seen:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            seen.discard(abs(p))
            counter -= 1
            if counter == 0:
                break
            clause = self.clauses[self.reason[abs(p)]]
        learnt[0] = -p
        if len(learnt) == 1:
            return learnt, 0
        best = max(range(1, len(learnt)), key=lambda i: self.level[abs(learnt[i])])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, self.level[abs(learnt[1])]

    # -- search ------------------------------------------------------------

    def solve(self, assumptions: Iterable[int] = ()) -> SolveResult:
        """Search for a model extending ``assumptions``; the database is unchanged."""
        self.solve_calls += 1
        self.model = None
        assumptions = list(assumptions)
        for l in assumptions:
            self.ensure_vars(abs(l))
        if not self.ok:
            return SolveResult(False)
        self._backtrack(0)
        if self._propagate() is not None:
            self.ok = False
            return SolveResult(False)
        result = self._search(assumptions)
        self._backtrack(0)
        return result

    def _search(self, assumptions: list[int]) -> SolveResult:
        next_var = 1
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                if not self.trail_lim:
                    self.ok = False
                    return SolveResult(False)
                learnt, bt = self._analyze(confl)
                self._backtrack(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self.num_learnt += 1
                    ci = self._attach(learnt)
                    self._enqueue(learnt[0], ci)
                next_var = 1
                continue
            lvl = len(self.trail_lim)
            if lvl < len(assumptions):
                p = assumptions[lvl]
                pv = self._lit_value(p)
                if pv is False:
                    return SolveResult(False)
                self.trail_lim.append(len(self.trail))
                if pv is None:
                    self._enqueue(p, None)
                continue
            value = self.value
            n = len(value)
            while next_var < n and value[next_var] is not None:
                next_var += 1
            if next_var >= n:
                self.model = Assignment({v: bool(value[v]) for v in range(1, n)})
                assert self._check_model(), "model violates a clause"
                return SolveResult(True, self.model)
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(next_var, None)

    def _check_model(self) -> bool:
        m = self.model
        return all(any(m.get(abs(l)) == (l > 0) for l in c) for c in self._original if c)

    def add_blocking_clause(self, cube: Assignment | Iterable[int]) -> bool:
        """Forbid every total extension of ``cube``."""
        lits = cube.literals if isinstance(cube, Assignment) else tuple(cube)
        return self.add_clause([-l for l in lits])


def solver_for(f: CnfFormula) -> Solver:
    s = Solver(num_vars=max(f.atoms(), default=0))
    for c in f.clauses:
        s.add_clause(c)
    return s


def solve(f: CnfFormula) -> SolveResult:
    return solver_for(f).solve()


def solve_assumptions(f: CnfFormula, assumptions: Assignment) -> SolveResult:
    return solver_for(f).solve(assumptions.literals)


def add_blocking_clause(state: Solver, cube: Assignment) -> None:
    state.add_blocking_clause(cube)
