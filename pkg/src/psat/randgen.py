"""Seeded random formulas, CNFs and equivalence-preserving rewrites."""

from __future__ import annotations

import random

from psat.assignment import Assignment
from psat.formula import AND, ATOM, FALSE, IFF, IMPLIES, NOT, OR, TRUE, CnfFormula, Formula, Manager, atoms

_KINDS = (AND, OR, AND, OR, IMPLIES, IFF, NOT)


def random_formula(
    rng: random.Random,
    mgr: Manager,
    num_atoms: int,
    depth: int,
    kinds: tuple[str, ...] = _KINDS,
    const_prob: float = 0.0,
) -> Formula:
    names = [f"A{i}" for i in range(1, num_atoms + 1)]
    for n in names:
        mgr.declare(n)

    def go(d: int) -> Formula:
        if d == 0 or rng.random() < 0.15:
            if const_prob and rng.random() < const_prob:
                return mgr.const(rng.random() < 0.5)
            a = mgr.atom(rng.choice(names))
            return mgr.not_(a) if rng.random() < 0.3 else a
        k = rng.choice(kinds)
        if k == NOT:
            return mgr.not_(go(d - 1))
        return mgr.binary(k, go(d - 1), go(d - 1))

    return go(depth)


def random_cnf(
    rng: random.Random,
    mgr: Manager,
    num_atoms: int,
    num_clauses: int,
    max_len: int = 3,
    allow_tautologies: bool = False,
) -> CnfFormula:
    ids = [mgr.declare(f"A{i}") for i in range(1, num_atoms + 1)]
    clauses = []
    for _ in range(num_clauses):
        k = rng.randint(1, max_len)
        lits: list[int] = []
        for a in rng.sample(ids, min(k, len(ids))):
            lits.append(a if rng.random() < 0.5 else -a)
        if allow_tautologies and rng.random() < 0.3:
            l = rng.choice(lits)
            lits.append(-l)
        clauses.append(tuple(lits))
    return CnfFormula(mgr, tuple(clauses), frozenset(ids))


def random_assignment(rng: random.Random, atom_ids, density: float = 0.5) -> Assignment:
    return Assignment({a: rng.random() < 0.5 for a in sorted(atom_ids) if rng.random() < density})


def rewrite_equivalent(rng: random.Random, f: Formula, steps: int = 3) -> Formula:
    """Apply ``steps`` random equivalence-preserving rewrites at random nodes."""
    mgr = f.mgr
    atom_pool = sorted(atoms(f)) or [mgr.declare("A1")]

    def rewrite(g: Formula) -> Formula:
        k = g.kind
        a = mgr.atom_of(rng.choice(atom_pool))
        options = [
            lambda: mgr.not_(mgr.not_(g)),
            lambda: mgr.or_(mgr.and_(g, a), mgr.and_(g, mgr.not_(a))),
            lambda: mgr.and_(g, mgr.or_(a, mgr.not_(a))),
        ]
        if k in (AND, OR, IFF):
            options.append(lambda: mgr.binary(k, g.args[1], g.args[0]))
        if k == AND:
            options.append(lambda: mgr.not_(mgr.or_(mgr.not_(g.args[0]), mgr.not_(g.args[1]))))
        if k == OR:
            options.append(lambda: mgr.not_(mgr.and_(mgr.not_(g.args[0]), mgr.not_(g.args[1]))))
            options.append(lambda: mgr.implies(mgr.not_(g.args[0]), g.args[1]))
        if k == IMPLIES:
            options.append(lambda: mgr.or_(mgr.not_(g.args[0]), g.args[1]))
        if k == IFF:
            options.append(lambda: mgr.and_(mgr.implies(g.args[0], g.args[1]), mgr.implies(g.args[1], g.args[0])))
        if k == NOT and g.args[0].kind == NOT:
            options.append(lambda: g.args[0].args[0])
        return rng.choice(options)()

    def at(g: Formula, target: int, counter: list[int]) -> Formula:
        idx = counter[0]
        counter[0] += 1
        if idx == target:
            return rewrite(g)
        if g.kind in (ATOM, TRUE, FALSE):
            return g
        if g.kind == NOT:
            return mgr.not_(at(g.args[0], target, counter))
        return mgr.binary(g.kind, at(g.args[0], target, counter), at(g.args[1], target, counter))

    for _ in range(steps):
        n = _tree_size(f)
        f = at(f, rng.randrange(n), [0])
    return f


def _tree_size(f: Formula) -> int:
    if f.kind in (ATOM, TRUE, FALSE):
        return 1
    return 1 + sum(_tree_size(c) for c in f.args)

