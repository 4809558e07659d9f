"""AllSAT enumeration producing cubes (partial assignments).

Two families:

* :func:`enumerate_verification` splits on atoms and emits a branch as soon as
  the branch assignment verifies the formula.
* :func:`enumerate_with_generalization` takes total models from the solver and
  shrinks each one, dropping literals while the reduced cube still verifies
  (``mode="verify"``) or still entails (``mode="entail"``) the formula.

:func:`enumerate_projected` does the latter for ``exists B . psi``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from psat.assignment import Assignment, residual
from psat.cnf import tseitin
from psat.formula import Formula, QuantifiedFormula, atoms
from psat.satcheck import DualChecker, entails_exists, verifies, verifies_exists
from psat.solver import solver_for
from psat.tables import cube_table, row_literals, rows, truth_table

MODES = ("verify", "entail")
BRUTE_BOUND = 20


@dataclass(frozen=True)
class Cube:
    assignment: Assignment
    provenance: str = "generalized"  # or "branch", "total"

    @property
    def literals(self) -> tuple[int, ...]:
        return self.assignment.literals

    def __len__(self) -> int:
        return len(self.assignment)


@dataclass
class CubeSet:
    cubes: list[Cube]
    atom_universe: tuple[int, ...]
    disjoint: bool
    mode: str
    stats: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.cubes)

    def __iter__(self):
        return iter(self.cubes)

    def assignments(self) -> list[Assignment]:
        return [c.assignment for c in self.cubes]

    @property
    def sum_cube_sizes(self) -> int:
        return sum(len(c) for c in self.cubes)


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def enumerate_brute(f: Formula, bound: int = BRUTE_BOUND) -> CubeSet:
    """Every total model over ``atoms(f)``, lexicographic, true first."""
    universe = tuple(sorted(atoms(f)))
    if len(universe) > bound:
        raise ValueError(f"{len(universe)} atoms exceed the brute-force bound of {bound}")
    table = truth_table(f, universe)
    cubes = [Cube(Assignment.from_literals(row_literals(k, universe)), "total") for k in rows(table)]
    return CubeSet(cubes, universe, True, "brute", {"num_cubes": len(cubes)})


def enumerate_verification(f: Formula) -> CubeSet:
    """Semantic splitting: branch on the lowest atom left in the residual.

    A branch is closed when its residual is ``false`` and emitted when it is
    ``true``; an assignment that only entails the formula is never noticed.
    """
    start = time.perf_counter()
    mgr = f.mgr
    cubes: list[Cube] = []
    nodes = 0
    # explicit stack; true branch explored first
    stack: list[tuple[Formula, tuple[int, ...]]] = [(residual(f, {}), ())]
    while stack:
        g, lits = stack.pop()
        nodes += 1
        if g is mgr.false:
            continue
        if g is mgr.true:
            cubes.append(Cube(Assignment.from_literals(lits), "branch"))
            continue
        a = min(atoms(g))
        stack.append((residual(g, {a: False}), lits + (-a,)))
        stack.append((residual(g, {a: True}), lits + (a,)))
    stats = _stats(cubes, 0, start)
    stats["search_nodes"] = nodes
    return CubeSet(cubes, tuple(sorted(atoms(f))), True, "verify", stats)


class _Generalizer:
    """Greedy literal dropping in increasing atom order, one pass."""

    def __init__(self, test: Callable[[Assignment], bool]):
        self.test = test
        self.checks = 0

    def run(self, eta: Assignment, frozen: Sequence[Assignment] | None) -> Assignment:
        cube = eta
        for lit in eta.literals:
            cand = cube.without(abs(lit))
            if frozen is not None and not all(cand.conflicts_with(p) for p in frozen):
                continue
            self.checks += 1
            if self.test(cand):
                cube = cand
        return cube


def _plain_test(f: Formula, mode: str) -> tuple[Callable[[Assignment], bool], DualChecker | None]:
    if mode == "verify":
        return (lambda mu: verifies(mu, f)), None
    dual = DualChecker(f)
    return dual.entails, dual


def generalize(
    eta: Assignment,
    f: Formula,
    mode: str,
    frozen: CubeSet | Sequence[Assignment] | None = None,
) -> Cube:
    """Shrink the model ``eta`` of ``f``.

    A literal is dropped when the smaller cube still verifies ``f``
    (``verify``) or is still entailing it by the dual check (``entail``).
    With ``frozen`` prior cubes, a drop is also refused if the smaller cube
    would stop conflicting with one of them.
    """
    _check_mode(mode)
    test, _ = _plain_test(f, mode)
    prior = _prior(frozen)
    return Cube(_Generalizer(test).run(eta, prior))


def _prior(frozen) -> list[Assignment] | None:
    if frozen is None:
        return None
    if isinstance(frozen, CubeSet):
        return frozen.assignments()
    return list(frozen)


def _stats(cubes: list[Cube], solver_calls: int, start: float) -> dict:
    return {
        "num_cubes": len(cubes),
        "sum_cube_sizes": sum(len(c) for c in cubes),
        "solver_calls": solver_calls,
        "wall_ms": round((time.perf_counter() - start) * 1000.0, 3),
    }


def enumerate_with_generalization(f: Formula, mode: str = "entail", disjoint: bool = True) -> CubeSet:
    """Solver-driven AllSAT with model generalization.

    Each model of ``Ts(f)`` is restricted to the atoms of ``f``, generalized,
    emitted, and blocked over the atoms of ``f`` only.
    """
    _check_mode(mode)
    start = time.perf_counter()
    universe = tuple(sorted(atoms(f)))
    main = solver_for(tseitin(f))
    test, dual = _plain_test(f, mode)
    gen = _Generalizer(test)
    cubes: list[Cube] = []
    prior: list[Assignment] = []
    while True:
        res = main.solve()
        if not res:
            break
        eta = res.model.restrict(universe)
        cube = gen.run(eta, prior if disjoint else None)
        cubes.append(Cube(cube))
        prior.append(cube)
        main.add_blocking_clause(cube)
    calls = main.solve_calls + (dual.solve_calls if dual is not None else 0)
    stats = _stats(cubes, calls, start)
    stats["generalization_checks"] = gen.checks
    return CubeSet(cubes, universe, disjoint, mode, stats)


def enumerate_projected(q: QuantifiedFormula, mode: str = "entail", disjoint: bool = True) -> CubeSet:
    """Enumerate cubes over the free atoms covering the models of ``exists B . psi``."""
    _check_mode(mode)
    start = time.perf_counter()
    universe = tuple(sorted(q.free))
    main = solver_for(tseitin(q.matrix))
    main.ensure_vars(max(universe, default=0))
    if mode == "verify":
        gen = _Generalizer(lambda mu: verifies_exists(mu, q))
    else:
        gen = _Generalizer(lambda mu: entails_exists(mu, q))
    cubes: list[Cube] = []
    prior: list[Assignment] = []
    while True:
        res = main.solve()
        if not res:
            break
        eta = res.model.restrict(universe)
        cube = gen.run(eta, prior if disjoint else None)
        cubes.append(Cube(cube))
        prior.append(cube)
        main.add_blocking_clause(cube)
    stats = _stats(cubes, main.solve_calls, start)
    stats["generalization_checks"] = gen.checks
    return CubeSet(cubes, universe, disjoint, mode, stats)


def _cover_table(cs: CubeSet, order: Sequence[int]) -> int:
    table = 0
    for c in cs.cubes:
        table |= cube_table(c.literals, order)
    return table


def check_cover(cs: CubeSet, f: Formula, bound: int = BRUTE_BOUND) -> bool:
    """Do the cubes' total extensions form exactly the model set of ``f``?"""
    order = tuple(sorted(set(cs.atom_universe) | atoms(f) | {abs(l) for c in cs.cubes for l in c.literals}))
    if len(order) > bound:
        raise ValueError(f"{len(order)} atoms exceed the brute-force bound of {bound}")
    return _cover_table(cs, order) == truth_table(f, order)


def check_disjoint(cs: CubeSet) -> bool:
    a = cs.assignments()
    return all(a[i].conflicts_with(a[j]) for i in range(len(a)) for j in range(i + 1, len(a)))


def count_models(cs: CubeSet) -> int:
    """Models covered by a disjoint cube set over its atom universe."""
    if not cs.disjoint:
        raise ValueError("count requires disjoint cubes")
    n = len(cs.atom_universe)
    return sum(1 << (n - len(c)) for c in cs.cubes)
