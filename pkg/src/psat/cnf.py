"""Definitional CNF encodings: Tseitin, Plaisted-Greenbaum, and PG after NNF.

Labeling is bottom-up and stops as soon as the remaining skeleton is already
a CNF: the root's top-level conjunctions split into clauses, each clause's
top-level disjunctions split into literals, and only the disjuncts that are
not literals get a fresh atom. Every labeled node is a binary connective over
literals (negations fold into the literal sign), and each label ``B`` gets
the clauses of ``B <-> (l1 op l2)``, or of one direction of it for PG.
"""

from __future__ import annotations

from typing import Iterable, Union

from psat.formula import (
    AND,
    ATOM,
    FALSE,
    IFF,
    IMPLIES,
    NOT,
    OR,
    TRUE,
    CnfFormula,
    Formula,
    atoms,
    nnf,
)

POS, NEG = 1, 2
BOTH = POS | NEG

# a "literal" during encoding may still be a truth constant
Lit = Union[int, bool]


def _def_clauses(kind: str, b: int, x: Lit, y: Lit, polarity: int) -> list[list[Lit]]:
    """Clauses of ``b -> (x op y)`` (POS) and/or ``b <- (x op y)`` (NEG)."""
    nb = -b
    fwd: list[list[Lit]]
    bwd: list[list[Lit]]
    if kind == AND:
        fwd = [[nb, x], [nb, y]]
        bwd = [[b, _neg(x), _neg(y)]]
    elif kind == OR:
        fwd = [[nb, x, y]]
        bwd = [[b, _neg(x)], [b, _neg(y)]]
    elif kind == IMPLIES:
        fwd = [[nb, _neg(x), y]]
        bwd = [[b, x], [b, _neg(y)]]
    elif kind == IFF:
        fwd = [[nb, _neg(x), y], [nb, x, _neg(y)]]
        bwd = [[b, x, y], [b, _neg(x), _neg(y)]]
    else:
        raise ValueError(kind)
    out: list[list[Lit]] = []
    if polarity & POS:
        out += fwd
    if polarity & NEG:
        out += bwd
    return out


def _neg(x: Lit) -> Lit:
    if isinstance(x, bool):
        return not x
    return -x


def _finish(clause: Iterable[Lit]) -> tuple[int, ...] | None:
    """Drop false constants; None when the clause holds trivially."""
    out: list[int] = []
    for l in clause:
        if l is True:
            return None
        if l is False:
            continue
        if l not in out:
            out.append(l)
    return tuple(out)


def _top_clauses(f: Formula) -> list[list[Formula]]:
    """Split the root into conjuncts, and each conjunct into disjuncts."""
    conjuncts: list[Formula] = []
    stack = [f]
    while stack:
        g = stack.pop()
        if g.kind == AND:
            stack.append(g.args[1])
            stack.append(g.args[0])
        else:
            conjuncts.append(g)
    out = []
    for c in conjuncts:
        disjuncts: list[Formula] = []
        stack = [c]
        while stack:
            g = stack.pop()
            if g.kind == OR:
                stack.append(g.args[1])
                stack.append(g.args[0])
            else:
                disjuncts.append(g)
        out.append(disjuncts)
    return out


def _strip_not(g: Formula) -> tuple[Formula, bool]:
    sign = True
    while g.kind == NOT:
        g = g.args[0]
        sign = not sign
    return g, sign


def _polarities(top: list[list[Formula]]) -> dict[Formula, int]:
    """Polarity of every node below the top-level clause skeleton."""
    pol: dict[Formula, int] = {}
    stack: list[tuple[Formula, int]] = [(d, POS) for clause in top for d in clause]
    while stack:
        g, p = stack.pop()
        old = pol.get(g, 0)
        if old | p == old:
            continue
        pol[g] = old | p
        add = p & ~old
        k = g.kind
        if k == NOT:
            stack.append((g.args[0], _flip(add)))
        elif k in (AND, OR):
            stack.append((g.args[0], add))
            stack.append((g.args[1], add))
        elif k == IMPLIES:
            stack.append((g.args[0], _flip(add)))
            stack.append((g.args[1], add))
        elif k == IFF:
            stack.append((g.args[0], BOTH))
            stack.append((g.args[1], BOTH))
    return pol


def _flip(p: int) -> int:
    return ((p & POS) and NEG) | ((p & NEG) and POS)


def _encode(f: Formula, polarity_aware: bool, avoid: Iterable[int]) -> CnfFormula:
    mgr = f.mgr
    original = atoms(f)
    top = _top_clauses(f)
    pol = _polarities(top) if polarity_aware else None
    labels: dict[Formula, int] = {}
    defs: list[tuple[int, ...]] = []
    fresh: list[int] = []
    taken = set(avoid) | set(original)

    def new_label() -> int:
        [b] = mgr.fresh_atoms(1, avoid=taken)
        taken.add(b)
        fresh.append(b)
        return b

    def lit(g: Formula) -> Lit:
        node, sign = _strip_not(g)
        k = node.kind
        if k == TRUE or k == FALSE:
            return (k == TRUE) == sign
        if k == ATOM:
            a = node.args[0]
            return a if sign else -a
        b = label(node)
        return b if sign else -b

    def label(node: Formula) -> int:
        b = labels.get(node)
        if b is not None:
            return b
        # children first, so labels are numbered bottom-up, left to right
        x = lit(node.args[0])
        y = lit(node.args[1])
        b = new_label()
        labels[node] = b
        p = pol[node] if pol is not None else BOTH
        for c in _def_clauses(node.kind, b, x, y, p):
            fin = _finish(c)
            if fin is not None:
                defs.append(fin)
        return b

    roots = []
    for disjuncts in top:
        fin = _finish([lit(d) for d in disjuncts])
        if fin is not None:
            roots.append(fin)
    return CnfFormula(mgr, tuple(roots + defs), original, frozenset(fresh))


def tseitin(f: Formula, avoid: Iterable[int] = ()) -> CnfFormula:
    """Tseitin CNF of ``f``; fresh atoms avoid ``avoid`` and the atoms of ``f``."""
    return _encode(f, False, avoid)


def plaisted_greenbaum(f: Formula, avoid: Iterable[int] = ()) -> CnfFormula:
    """Like :func:`tseitin`, but each definition keeps only the implication(s)
    required by the polarity with which the labeled subformula occurs."""
    return _encode(f, True, avoid)


def pg_nnf(f: Formula, avoid: Iterable[int] = ()) -> CnfFormula:
    return _encode(nnf(f), True, avoid)


ENCODERS = {"tseitin": tseitin, "pg": plaisted_greenbaum, "pg-nnf": pg_nnf}
