"""Hash-consed propositional formulas.

Every formula lives in a :class:`Manager`, which owns the atom table and the
unique table of nodes. Two formulas built in the same manager are the same
Python object iff they are structurally identical, so ``is``/``==`` on nodes
is structural equality and nodes can be used as dictionary keys for memoized
traversals.

Node kinds are ``true``, ``false``, ``atom``, ``not``, ``and``, ``or``,
``implies`` and ``iff``. Disjunction, implication and bi-implication are kept
as primitive kinds instead of being desugared: residuals (see
:mod:`psat.assignment`) propagate constants per connective, and the shape of
a residual depends on which connective it went through.

Text grammar (loosest binding first)::

    formula := imp ('<->' imp)*           left-assoc
    imp     := or ('->' imp)?             right-assoc
    or      := and ('|' and)*
    and     := unary ('&' unary)*
    unary   := ('!' | '~') unary | 'true' | 'false' | NAME | '(' formula ')'

``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

TRUE = "true"
FALSE = "false"
ATOM = "atom"
NOT = "not"
AND = "and"
OR = "or"
IMPLIES = "implies"
IFF = "iff"

BINARY_KINDS = (AND, OR, IMPLIES, IFF)

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

# printer precedence, tighter binds higher
_PREC = {IFF: 1, IMPLIES: 2, OR: 3, AND: 4, NOT: 5, ATOM: 6, TRUE: 6, FALSE: 6}
_SYMBOL = {AND: "&", OR: "|", IMPLIES: "->", IFF: "<->"}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class Formula:
    """A node of a formula DAG. Build these through a :class:`Manager`."""

    __slots__ = ("mgr", "kind", "args", "uid", "__weakref__")

    def __init__(self, mgr: "Manager", kind: str, args: tuple, uid: int):
        self.mgr = mgr
        self.kind = kind
        self.args = args
        self.uid = uid

    @property
    def atom(self) -> int:
        if self.kind != ATOM:
            raise TypeError(f"{self.kind} node has no atom")
        return self.args[0]

    @property
    def is_const(self) -> bool:
        return self.kind is TRUE or self.kind is FALSE

    @property
    def is_literal(self) -> bool:
        return self.kind == ATOM or (self.kind == NOT and self.args[0].kind == ATOM)

    def literal(self) -> int:
        """Signed atom id of a literal node."""
        if self.kind == ATOM:
            return self.args[0]
        if self.kind == NOT and self.args[0].kind == ATOM:
            return -self.args[0].args[0]
        raise TypeError("not a literal")

    def __invert__(self) -> "Formula":
        return self.mgr.not_(self)

    def __and__(self, other: "Formula") -> "Formula":
        return self.mgr.and_(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return self.mgr.or_(self, other)

    def implies(self, other: "Formula") -> "Formula":
        return self.mgr.implies(self, other)

    def iff(self, other: "Formula") -> "Formula":
        return self.mgr.iff(self, other)

    def __str__(self) -> str:
        return self.mgr.to_str(self)

    def __repr__(self) -> str:
        return f"<Formula {self.mgr.to_str(self)}>"


class Manager:
    """Atom table plus unique table for hash-consed formulas.

    Atom ids are dense and start at 1, so a signed atom id doubles as a
    DIMACS literal.
    """

    def __init__(self):
        self._names: list[str | None] = [None]
        self._ids: dict[str, int] = {}
        self._fresh: set[int] = set()
        self._unique: dict[tuple, Formula] = {}
        self.true = self._mk(TRUE, ())
        self.false = self._mk(FALSE, ())

    # -- atom table --------------------------------------------------------

    def atom(self, name: str) -> Formula:
        """Return the atom node called ``name``, declaring it if needed."""
        return self._mk(ATOM, (self.declare(name),))

    def atoms_named(self, *names: str) -> list[Formula]:
        return [self.atom(n) for n in names]

    def declare(self, name: str) -> int:
        aid = self._ids.get(name)
        if aid is not None:
            return aid
        if not NAME_RE.match(name):
            raise ValueError(f"invalid atom name {name!r}")
        aid = len(self._names)
        self._names.append(name)
        self._ids[name] = aid
        return aid

    def atom_of(self, aid: int) -> Formula:
        self.name(aid)
        return self._mk(ATOM, (aid,))

    def name(self, aid: int) -> str:
        if aid <= 0 or aid >= len(self._names):
            raise KeyError(aid)
        return self._names[aid]

    def id_of(self, name: str) -> int:
        return self._ids[name]

    def has_atom(self, name: str) -> bool:
        return name in self._ids

    @property
    def num_atoms(self) -> int:
        return len(self._names) - 1

    def is_fresh(self, aid: int) -> bool:
        return aid in self._fresh

    def fresh_atoms(self, count: int, avoid: Iterable[int] = ()) -> list[int]:
        """Allocate ``count`` encoder atoms named ``_B1``, ``_B2``, ...

        Names already taken by user atoms, and ids in ``avoid``, are skipped.
        Encoder atoms created by earlier calls are reused, which keeps
        encodings of the same formula identical from call to call.
        """
        avoid = set(avoid)
        out: list[int] = []
        k = 0
        while len(out) < count:
            k += 1
            name = f"_B{k}"
            aid = self._ids.get(name)
            if aid is None:
                aid = self.declare(name)
                self._fresh.add(aid)
            elif aid not in self._fresh or aid in avoid:
                continue
            out.append(aid)
        return out

    # -- node construction -------------------------------------------------

    def _mk(self, kind: str, args: tuple) -> Formula:
        if kind == ATOM:
            key = (kind, args[0])
        else:
            key = (kind,) + tuple(a.uid for a in args)
        node = self._unique.get(key)
        if node is None:
            node = Formula(self, kind, args, len(self._unique))
            self._unique[key] = node
        return node

    def const(self, value: bool) -> Formula:
        return self.true if value else self.false

    def not_(self, f: Formula) -> Formula:
        return self._mk(NOT, (f,))

    def and_(self, f: Formula, g: Formula) -> Formula:
        return self._mk(AND, (f, g))

    def or_(self, f: Formula, g: Formula) -> Formula:
        return self._mk(OR, (f, g))

    def implies(self, f: Formula, g: Formula) -> Formula:
        return self._mk(IMPLIES, (f, g))

    def iff(self, f: Formula, g: Formula) -> Formula:
        return self._mk(IFF, (f, g))

    def binary(self, kind: str, f: Formula, g: Formula) -> Formula:
        if kind not in BINARY_KINDS:
            raise ValueError(kind)
        return self._mk(kind, (f, g))

    def conj(self, items: Iterable[Formula]) -> Formula:
        """Left-nested conjunction; ``true`` when empty."""
        return self._fold(AND, items, self.true)

    def disj(self, items: Iterable[Formula]) -> Formula:
        """Left-nested disjunction; ``false`` when empty."""
        return self._fold(OR, items, self.false)

    def _fold(self, kind: str, items: Iterable[Formula], empty: Formula) -> Formula:
        acc = None
        for f in items:
            acc = f if acc is None else self._mk(kind, (acc, f))
        return empty if acc is None else acc

    def literal(self, lit: int) -> Formula:
        a = self.atom_of(abs(lit))
        return a if lit > 0 else self.not_(a)

    def cube(self, literals: Iterable[int]) -> Formula:
        return self.conj(self.literal(l) for l in literals)

    def clause(self, literals: Iterable[int]) -> Formula:
        return self.disj(self.literal(l) for l in literals)

    # -- text --------------------------------------------------------------

    def parse(self, text: str) -> Formula:
        return _Parser(self, text).parse()

    def to_str(self, f: Formula) -> str:
        memo: dict[Formula, str] = {}
        return self._fmt(f, memo)

    def _fmt(self, f: Formula, memo: dict) -> str:
        s = memo.get(f)
        if s is not None:
            return s
        k = f.kind
        if k == TRUE or k == FALSE:
            s = k
        elif k == ATOM:
            s = self._names[f.args[0]]
        elif k == NOT:
            c = f.args[0]
            inner = self._fmt(c, memo)
            s = "!" + (inner if _PREC[c.kind] >= _PREC[NOT] else f"({inner})")
        else:
            l, r = f.args
            p = _PREC[k]
            ls, rs = self._fmt(l, memo), self._fmt(r, memo)
            if k == IMPLIES:
                lpar, rpar = _PREC[l.kind] <= p, _PREC[r.kind] < p
            else:
                lpar, rpar = _PREC[l.kind] < p, _PREC[r.kind] <= p
            if lpar:
                ls = f"({ls})"
            if rpar:
                rs = f"({rs})"
            s = f"{ls} {_SYMBOL[k]} {rs}"
        memo[f] = s
        return s


# -- parser -------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>\#[^\n]*)"
    r"|(?P<op><->|->|[!~&|()])|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
)


class _Parser:
    def __init__(self, mgr: Manager, text: str):
        self.mgr = mgr
        self.toks = list(self._lex(text))
        self.pos = 0

    @staticmethod
    def _lex(text: str) -> Iterator[tuple[str, str, int, int]]:
        line, line_start, i = 1, 0, 0
        while i < len(text):
            m = _TOKEN_RE.match(text, i)
            if m is None:
                raise ParseError(f"unknown character {text[i]!r}", line, i - line_start + 1)
            kind = m.lastgroup
            if kind == "nl":
                line += 1
                line_start = m.end()
            elif kind in ("op", "name"):
                yield kind, m.group(), line, i - line_start + 1
            i = m.end()
        yield "eof", "", line, i - line_start + 1

    def peek(self) -> tuple[str, str, int, int]:
        return self.toks[self.pos]

    def take(self, value: str | None = None):
        tok = self.toks[self.pos]
        if value is not None and tok[1] != value:
            found = tok[1] or "end of input"
            raise ParseError(f"expected {value!r}, found {found!r}", tok[2], tok[3])
        self.pos += 1
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        tok = self.peek()
        if tok[0] != "eof":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], tok[3])
        return f

    def iff(self) -> Formula:
        f = self.imp()
        while self.peek()[1] == "<->":
            self.take()
            f = self.mgr.iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.or_()
        if self.peek()[1] == "->":
            self.take()
            return self.mgr.implies(f, self.imp())
        return f

    def or_(self) -> Formula:
        f = self.and_()
        while self.peek()[1] == "|":
            self.take()
            f = self.mgr.or_(f, self.and_())
        return f

    def and_(self) -> Formula:
        f = self.unary()
        while self.peek()[1] == "&":
            self.take()
            f = self.mgr.and_(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, val, line, col = self.peek()
        if val in ("!", "~"):
            self.take()
            return self.mgr.not_(self.unary())
        if val == "(":
            self.take()
            f = self.iff()
            self.take(")")
            return f
        if kind == "name":
            self.take()
            if val == "true":
                return self.mgr.true
            if val == "false":
                return self.mgr.false
            return self.mgr.atom(val)
        raise ParseError(f"unexpected {val or 'end of input'!r}", line, col)


# -- traversals ---------------------------------------------------------------

def postorder(f: Formula) -> list[Formula]:
    """Distinct nodes of the DAG, children before parents."""
    out: list[Formula] = []
    seen: set[int] = set()
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            out.append(node)
            continue
        if node.uid in seen:
            continue
        seen.add(node.uid)
        stack.append((node, True))
        if node.kind != ATOM:
            for c in reversed(node.args):
                if c.uid not in seen:
                    stack.append((c, False))
    return out


def atoms(f: Formula) -> frozenset[int]:
    """Atom ids occurring in ``f``."""
    return frozenset(n.args[0] for n in postorder(f) if n.kind == ATOM)


def size(f: Formula) -> int:
    """Number of distinct DAG nodes."""
    return len(postorder(f))


def nnf(f: Formula) -> Formula:
    """Negation normal form: only and/or over literals and constants.

    Implications become disjunctions; a bi-implication becomes
    ``(a & b) | (!a & !b)`` (its negation ``(a & !b) | (!a & b)``).
    """
    mgr = f.mgr
    memo: dict[tuple[int, bool], Formula] = {}

    def go(g: Formula, pos: bool) -> Formula:
        key = (g.uid, pos)
        r = memo.get(key)
        if r is not None:
            return r
        k = g.kind
        if k == TRUE or k == FALSE:
            r = mgr.const((k == TRUE) == pos)
        elif k == ATOM:
            r = g if pos else mgr.not_(g)
        elif k == NOT:
            r = go(g.args[0], not pos)
        else:
            a, b = g.args
            if k == AND:
                r = (mgr.and_ if pos else mgr.or_)(go(a, pos), go(b, pos))
            elif k == OR:
                r = (mgr.or_ if pos else mgr.and_)(go(a, pos), go(b, pos))
            elif k == IMPLIES:
                r = mgr.or_(go(a, False), go(b, True)) if pos else mgr.and_(go(a, True), go(b, False))
            else:
                if pos:
                    r = mgr.or_(mgr.and_(go(a, True), go(b, True)), mgr.and_(go(a, False), go(b, False)))
                else:
                    r = mgr.or_(mgr.and_(go(a, True), go(b, False)), mgr.and_(go(a, False), go(b, True)))
        memo[key] = r
        return r

    return go(f, True)


def is_nnf(f: Formula) -> bool:
    for n in postorder(f):
        if n.kind in (IMPLIES, IFF):
            return False
        if n.kind == NOT and n.args[0].kind != ATOM:
            return False
    return True


def equivalent(f1: Formula, f2: Formula, exhaustive_bound: int = 14) -> bool:
    """True iff ``f1`` and ``f2`` agree on every total assignment."""
    if f1 is f2:
        return True
    if f1.mgr is not f2.mgr:
        raise ValueError("formulas belong to different managers")
    universe = sorted(atoms(f1) | atoms(f2))
    if len(universe) <= exhaustive_bound:
        from psat.tables import truth_table
        return truth_table(f1, universe) == truth_table(f2, universe)
    from psat.satcheck import is_valid
    return is_valid(f1.mgr.iff(f1, f2), exhaustive_bound=0)


# -- CNF and quantified formulas ----------------------------------------------

Clause = tuple[int, ...]


@dataclass(frozen=True)
class CnfFormula:
    """Clauses over signed atom ids of ``mgr``.

    ``original_atoms`` is the atom set of the formula that was encoded and
    ``fresh_atoms`` the definition atoms introduced by the encoder (empty for
    native CNF). The empty clause appears only as the encoding of ``false``.
    """

    mgr: Manager
    clauses: tuple[Clause, ...]
    original_atoms: frozenset[int] = frozenset()
    fresh_atoms: frozenset[int] = frozenset()

    def __post_init__(self):
        if self.original_atoms & self.fresh_atoms:
            raise ValueError("fresh atoms overlap original atoms")

    @classmethod
    def from_clauses(cls, mgr: Manager, clauses: Iterable[Sequence[int]]) -> "CnfFormula":
        cl = tuple(tuple(c) for c in clauses)
        return cls(mgr, cl, frozenset(abs(l) for c in cl for l in c))

    def atoms(self) -> frozenset[int]:
        return frozenset(abs(l) for c in self.clauses for l in c) | self.original_atoms | self.fresh_atoms

    def to_formula(self) -> Formula:
        return self.mgr.conj(self.mgr.clause(c) for c in self.clauses)

    def as_quantified(self) -> "QuantifiedFormula":
        """``exists fresh_atoms . clauses`` with the original atoms free."""
        return QuantifiedFormula(self.to_formula(), self.fresh_atoms, self.original_atoms)

    def format_clauses(self) -> list[str]:
        name = self.mgr.name
        return ["(" + " | ".join(("!" if l < 0 else "") + name(abs(l)) for l in c) + ")" for c in self.clauses]

    def __len__(self) -> int:
        return len(self.clauses)


def is_tautology_free_cnf(f: CnfFormula) -> bool:
    return not any(_is_tautology(c) for c in f.clauses)


def _is_tautology(clause: Sequence[int]) -> bool:
    lits = set(clause)
    return any(-l in lits for l in lits)


def remove_tautologies(f: CnfFormula) -> CnfFormula:
    kept = tuple(c for c in f.clauses if not _is_tautology(c))
    return CnfFormula(f.mgr, kept, f.original_atoms, f.fresh_atoms)


@dataclass(frozen=True)
class QuantifiedFormula:
    """``exists bound . matrix``.

    ``free`` defaults to the matrix atoms minus ``bound``; pass it explicitly
    when the quantified formula stands for a formula whose atoms may have
    vanished from the matrix (e.g. an encoding that dropped satisfied clauses).
    """

    matrix: Formula
    bound: frozenset[int]
    free: frozenset[int] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "bound", frozenset(self.bound))
        free = self.free
        if free is None:
            free = atoms(self.matrix) - self.bound
        object.__setattr__(self, "free", frozenset(free))
        if self.free & self.bound:
            raise ValueError("free and bound atoms overlap")

    @property
    def mgr(self) -> Manager:
        return self.matrix.mgr
