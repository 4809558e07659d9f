"""Partial truth assignments, three-valued evaluation and residuals."""

from __future__ import annotations

import enum
import itertools
from typing import Iterable, Iterator, Mapping

from psat.formula import (
    AND,
    ATOM,
    FALSE,
    IFF,
    IMPLIES,
    NOT,
    OR,
    TRUE,
    Formula,
    Manager,
    postorder,
)


class TruthValue3(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    def __invert__(self) -> "TruthValue3":
        if self is TruthValue3.TRUE:
            return TruthValue3.FALSE
        if self is TruthValue3.FALSE:
            return TruthValue3.TRUE
        return TruthValue3.UNKNOWN

    @classmethod
    def of(cls, value: bool | None) -> "TruthValue3":
        if value is None:
            return cls.UNKNOWN
        return cls.TRUE if value else cls.FALSE


T3, F3, U3 = TruthValue3.TRUE, TruthValue3.FALSE, TruthValue3.UNKNOWN


class Assignment(Mapping[int, bool]):
    """Immutable partial map from atom id to truth value.

    The literal view uses signed atom ids: ``3`` means atom 3 is true,
    ``-3`` that it is false. Literals are always listed by increasing atom id.
    """

    __slots__ = ("_map", "_lits")

    def __init__(self, values: Mapping[int, bool] | Iterable[tuple[int, bool]] = ()):
        m = dict(values)
        for a in m:
            if not isinstance(a, int) or a <= 0:
                raise ValueError(f"bad atom id {a!r}")
        self._map = m
        self._lits = tuple(a if m[a] else -a for a in sorted(m))

    @classmethod
    def from_literals(cls, literals: Iterable[int]) -> "Assignment":
        m: dict[int, bool] = {}
        for lit in literals:
            if lit == 0:
                raise ValueError("0 is not a literal")
            a, v = abs(lit), lit > 0
            if m.get(a, v) != v:
                raise ValueError(f"atom {a} assigned both values")
            m[a] = v
        return cls(m)

    @property
    def literals(self) -> tuple[int, ...]:
        return self._lits

    @property
    def mapped(self) -> frozenset[int]:
        return frozenset(self._map)

    def __getitem__(self, atom: int) -> bool:
        return self._map[atom]

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._map))

    def __len__(self) -> int:
        return len(self._map)

    def __hash__(self) -> int:
        return hash(self._lits)

    def __eq__(self, other) -> bool:
        if isinstance(other, Assignment):
            return self._lits == other._lits
        return NotImplemented

    def __repr__(self) -> str:
        return f"Assignment({list(self._lits)})"

    def value(self, atom: int) -> bool | None:
        return self._map.get(atom)

    def is_total_over(self, atoms: Iterable[int]) -> bool:
        return all(a in self._map for a in atoms)

    def __or__(self, other: "Assignment") -> "Assignment":
        return Assignment.from_literals(self._lits + other._lits)

    def without(self, atom: int) -> "Assignment":
        m = dict(self._map)
        m.pop(atom, None)
        return Assignment(m)

    def restrict(self, atoms: Iterable[int]) -> "Assignment":
        keep = set(atoms)
        return Assignment({a: v for a, v in self._map.items() if a in keep})

    def conflicts_with(self, other: "Assignment") -> bool:
        small, big = (self, other) if len(self) <= len(other) else (other, self)
        return any(big._map.get(a, v) != v for a, v in small._map.items())

    def is_subset_of(self, other: "Assignment") -> bool:
        return all(other._map.get(a) == v for a, v in self._map.items())


def parse_assignment(mgr: Manager, text: str) -> Assignment:
    """Read ``"A1,-A3"`` (``!`` also negates). Blank text is the empty assignment."""
    lits = []
    for item in text.replace(" ", ",").split(","):
        item = item.strip()
        if not item:
            continue
        neg = item[0] in "-!~"
        name = item[1:] if neg else item
        aid = mgr.declare(name)
        lits.append(-aid if neg else aid)
    return Assignment.from_literals(lits)


def format_assignment(mgr: Manager, a: Assignment) -> str:
    return " ".join(("-" if l < 0 else "") + mgr.name(abs(l)) for l in a.literals)


def eval3(f: Formula, a: Mapping[int, bool]) -> TruthValue3:
    """Three-valued value of ``f`` under ``a``; unassigned atoms are unknown."""
    val: dict[Formula, TruthValue3] = {}
    for node in postorder(f):
        k = node.kind
        if k == TRUE:
            v = T3
        elif k == FALSE:
            v = F3
        elif k == ATOM:
            v = TruthValue3.of(a.get(node.args[0]))
        elif k == NOT:
            v = ~val[node.args[0]]
        else:
            v = _BINARY3[k](val[node.args[0]], val[node.args[1]])
        val[node] = v
    return val[f]


def _and3(x: TruthValue3, y: TruthValue3) -> TruthValue3:
    if x is F3 or y is F3:
        return F3
    if x is T3 and y is T3:
        return T3
    return U3


def _or3(x: TruthValue3, y: TruthValue3) -> TruthValue3:
    if x is T3 or y is T3:
        return T3
    if x is F3 and y is F3:
        return F3
    return U3


def _implies3(x: TruthValue3, y: TruthValue3) -> TruthValue3:
    return _or3(~x, y)


def _iff3(x: TruthValue3, y: TruthValue3) -> TruthValue3:
    if x is U3 or y is U3:
        return U3
    return T3 if x is y else F3


_BINARY3 = {AND: _and3, OR: _or3, IMPLIES: _implies3, IFF: _iff3}


def eval2(f: Formula, a: Mapping[int, bool]) -> bool:
    """Two-valued value of ``f``; every atom of ``f`` must be assigned."""
    v = eval3(f, a)
    if v is U3:
        raise ValueError("assignment is not total over the formula")
    return v is T3


def residual(f: Formula, a: Mapping[int, bool], extended: bool = False) -> Formula:
    """Substitute assigned atoms by constants and propagate them.

    Only these rewrites are applied, bottom-up::

        !true => false            !false => true
        true & g, g & true => g   false & g, g & false => false
        true | g, g | true => true
        false | g, g | false => g
        true -> g => g            false -> g => true
        g -> true => true         g -> false => !g
        true <-> g, g <-> true => g
        false <-> g, g <-> false => !g

    With ``extended`` set, ``l | !l`` (and ``!l | l``) for a literal ``l``
    also rewrites to ``true``.
    """
    mgr = f.mgr
    t, fl = mgr.true, mgr.false
    out: dict[Formula, Formula] = {}

    def neg(g: Formula) -> Formula:
        if g is t:
            return fl
        if g is fl:
            return t
        return mgr.not_(g)

    for node in postorder(f):
        k = node.kind
        if k == TRUE or k == FALSE:
            r = node
        elif k == ATOM:
            v = a.get(node.args[0])
            r = node if v is None else (t if v else fl)
        elif k == NOT:
            r = neg(out[node.args[0]])
        else:
            x, y = out[node.args[0]], out[node.args[1]]
            if k == AND:
                if x is t:
                    r = y
                elif y is t:
                    r = x
                elif x is fl or y is fl:
                    r = fl
                else:
                    r = mgr.and_(x, y)
            elif k == OR:
                if x is t or y is t:
                    r = t
                elif x is fl:
                    r = y
                elif y is fl:
                    r = x
                elif extended and _complementary(x, y):
                    r = t
                else:
                    r = mgr.or_(x, y)
            elif k == IMPLIES:
                if x is t:
                    r = y
                elif x is fl or y is t:
                    r = t
                elif y is fl:
                    r = neg(x)
                else:
                    r = mgr.implies(x, y)
            else:
                if x is t:
                    r = y
                elif y is t:
                    r = x
                elif x is fl:
                    r = neg(y)
                elif y is fl:
                    r = neg(x)
                else:
                    r = mgr.iff(x, y)
        out[node] = r
    return out[f]


def _complementary(x: Formula, y: Formula) -> bool:
    return x.is_literal and y.is_literal and x.literal() == -y.literal()


def extensions(a: Assignment, over: Iterable[int]) -> Iterator[Assignment]:
    """Total assignments on ``over`` extending ``a``, true-first lexicographic."""
    over = sorted(set(over))
    if not a.mapped <= set(over):
        raise ValueError("assignment maps atoms outside the extension set")
    free = [x for x in over if x not in a.mapped]
    base = dict(a)
    for values in itertools.product((True, False), repeat=len(free)):
        m = dict(base)
        m.update(zip(free, values))
        yield Assignment(m)


def cube_of(mgr: Manager, a: Assignment) -> Formula:
    """Conjunction of the literals of ``a`` in atom order."""
    if not a:
        raise ValueError("empty cube")
    return mgr.cube(a.literals)
