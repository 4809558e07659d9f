"""Verification and entailment of partial assignments.

``verifies(mu, f)``: the residual of ``f`` under ``mu`` is literally ``true``.
``entails(mu, f)``: every total extension of ``mu`` satisfies ``f``, i.e. the
residual is valid. Verification implies entailment; the converse only holds on
tautology-free CNF. Both relations are lifted to ``exists B . psi``.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Union

from psat.assignment import Assignment, residual
from psat.cnf import tseitin
from psat.formula import AND, ATOM, FALSE, IMPLIES, NOT, OR, TRUE, Formula, QuantifiedFormula, atoms, postorder
from psat.solver import Solver, solver_for
from psat.tables import full_mask, truth_table

EXPANSION_BOUND = 20
EXHAUSTIVE_BOUND = 14
FALLBACK_BOUND = 12

# a solver literal, or a constant before simplification
Lit = Union[int, bool]


class ExpansionError(ValueError):
    pass


def verifies(mu: Assignment, f: Formula) -> bool:
    return residual(f, mu) is f.mgr.true


def verifies_extended(mu: Assignment, f: Formula) -> bool:
    """Verification whose residual also rewrites ``l | !l`` to ``true``."""
    return residual(f, mu, extended=True) is f.mgr.true


def is_valid(f: Formula, exhaustive_bound: int = EXHAUSTIVE_BOUND) -> bool:
    mgr = f.mgr
    if f is mgr.true:
        return True
    if f is mgr.false:
        return False
    universe = sorted(atoms(f))
    if len(universe) <= exhaustive_bound:
        return truth_table(f, universe) == full_mask(len(universe))
    return not solver_for(tseitin(mgr.not_(f))).solve()


def is_satisfiable(f: Formula, exhaustive_bound: int = EXHAUSTIVE_BOUND) -> bool:
    mgr = f.mgr
    if f is mgr.true:
        return True
    if f is mgr.false:
        return False
    universe = sorted(atoms(f))
    if len(universe) <= exhaustive_bound:
        return truth_table(f, universe) != 0
    return bool(solver_for(tseitin(f)).solve())


def entails(mu: Assignment, f: Formula, exhaustive_bound: int = EXHAUSTIVE_BOUND) -> bool:
    return is_valid(residual(f, mu), exhaustive_bound)


class DualChecker:
    """Entailment by refutation: ``mu |= f`` iff ``Ts(!f) & mu`` is unsat.

    One incremental solver over ``Ts(!f)`` serves every query.
    """

    def __init__(self, f: Formula):
        self.formula = f
        self.cnf = tseitin(f.mgr.not_(f))
        self.solver = solver_for(self.cnf)
        self.countermodel: Assignment | None = None

    def entails(self, mu: Assignment) -> bool:
        # atoms outside f cannot matter, and may clash with encoder atoms
        orig = self.cnf.original_atoms
        res = self.solver.solve([l for l in mu.literals if abs(l) in orig])
        if res:
            # report only original atoms
            self.countermodel = res.model.restrict(orig) | mu.restrict(mu.mapped - orig)
            return False
        self.countermodel = None
        return True

    @property
    def solve_calls(self) -> int:
        return self.solver.solve_calls


def dual_entails(mu: Assignment, f: Formula) -> bool:
    return DualChecker(f).entails(mu)


def bound_assignments(bound: Iterable[int]) -> Iterable[Assignment]:
    bound = sorted(bound)
    for values in itertools.product((True, False), repeat=len(bound)):
        yield Assignment(dict(zip(bound, values)))


def shannon_disjuncts(q: QuantifiedFormula, limit: int = EXPANSION_BOUND) -> list[Formula]:
    """Residuals of the matrix under every total assignment to the bound atoms."""
    if len(q.bound) > limit:
        raise ExpansionError(f"expansion too large: {len(q.bound)} bound atoms exceed the limit of {limit}")
    return [residual(q.matrix, d) for d in bound_assignments(q.bound)]


def shannon_expansion(q: QuantifiedFormula, limit: int = EXPANSION_BOUND) -> Formula:
    return q.mgr.disj(shannon_disjuncts(q, limit))


def verifies_exists(mu: Assignment, q: QuantifiedFormula) -> bool:
    """Is there a total ``delta`` on the bound atoms with ``mu | delta`` verifying the matrix?

    One SAT call. Every node ``g`` of the residual gets two variables, "g
    evaluates to true" and "g evaluates to false" under three-valued
    semantics; bound atoms are the only free choices and the remaining free
    atoms stay unknown. Three-valued evaluation is monotone, so each variable
    only needs the implication towards its definition.
    """
    mgr = q.mgr
    g = residual(q.matrix, mu)
    if g is mgr.true:
        return True
    if g is mgr.false:
        return False
    if not (atoms(g) & q.bound):
        return False
    return _dual_rail_true(g, q.bound)


def _dual_rail_true(g: Formula, bound: frozenset[int]) -> bool:
    solver = Solver(num_vars=max(atoms(g)))
    rails: dict[int, tuple[Lit, Lit]] = {}

    def new_var() -> int:
        v = solver.num_vars + 1
        solver.ensure_vars(v)
        return v

    def conj(xs: list[Lit]) -> Lit:
        if any(x is False for x in xs):
            return False
        xs = [x for x in xs if x is not True]
        if not xs:
            return True
        if len(xs) == 1:
            return xs[0]
        v = new_var()
        for x in xs:
            solver.add_clause([-v, x])
        return v

    def disj(xs: list[Lit]) -> Lit:
        if any(x is True for x in xs):
            return True
        xs = [x for x in xs if x is not False]
        if not xs:
            return False
        if len(xs) == 1:
            return xs[0]
        v = new_var()
        solver.add_clause([-v, *xs])
        return v

    for node in postorder(g):
        k = node.kind
        if k == TRUE:
            r: tuple[Lit, Lit] = (True, False)
        elif k == FALSE:
            r = (False, True)
        elif k == ATOM:
            a = node.atom
            r = (a, -a) if a in bound else (False, False)
        elif k == NOT:
            t, f = rails[node.args[0].uid]
            r = (f, t)
        else:
            t1, f1 = rails[node.args[0].uid]
            t2, f2 = rails[node.args[1].uid]
            if k == AND:
                r = (conj([t1, t2]), disj([f1, f2]))
            elif k == OR:
                r = (disj([t1, t2]), conj([f1, f2]))
            elif k == IMPLIES:
                r = (disj([f1, t2]), conj([t1, f2]))
            else:
                r = (disj([conj([t1, t2]), conj([f1, f2])]), disj([conj([t1, f2]), conj([f1, t2])]))
        rails[node.uid] = r
    top = rails[g.uid][0]
    if isinstance(top, bool):
        return top
    return solver.solve([top]).sat


def entails_exists(
    mu: Assignment,
    q: QuantifiedFormula,
    fallback_bound: int = FALLBACK_BOUND,
    method: str = "auto",
) -> bool:
    """Does every total extension of ``mu`` on the free atoms have a witness on the bound ones?

    ``method`` is ``"table"`` (truth table over the residual's atoms),
    ``"cegar"`` (two solvers refining each other) or ``"auto"``, which uses
    the table when the residual has at most ``fallback_bound`` atoms.
    """
    mgr = q.mgr
    g = residual(q.matrix, mu)
    if g is mgr.true:
        return True
    if g is mgr.false:
        return False
    rest = atoms(g)
    if method == "auto":
        method = "table" if len(rest) <= fallback_bound else "cegar"
    if method == "table":
        return _entails_exists_table(g, rest, q.bound)
    if method == "cegar":
        return _entails_exists_cegar(g, rest, q.bound)
    raise ValueError(f"unknown method {method!r}")


def _entails_exists_table(g: Formula, rest: frozenset[int], bound: frozenset[int]) -> bool:
    free = sorted(rest - bound)
    exist = sorted(rest & bound)
    table = truth_table(g, free + exist)
    width = 1 << len(exist)
    block = (1 << width) - 1
    for i in range(1 << len(free)):
        if not (table >> (i * width)) & block:
            return False
    return True


def _entails_exists_cegar(g: Formula, rest: frozenset[int], bound: frozenset[int]) -> bool:
    mgr = g.mgr
    free = sorted(rest - bound)
    exist = rest & bound
    witness = solver_for(tseitin(g))
    # candidates: free assignments refuted by every witness found so far
    candidates = Solver(num_vars=max(free, default=0))
    used = set(atoms(g))
    while True:
        if not candidates.solve():
            return True
        eta = candidates.model.restrict(free)
        res = witness.solve(eta.literals)
        if not res:
            return False
        delta = res.model.restrict(exist)
        h = residual(g, delta)
        if h is mgr.true:
            return True
        enc = tseitin(mgr.not_(h), avoid=used)
        used |= enc.atoms()
        for c in enc.clauses:
            candidates.add_clause(c)
