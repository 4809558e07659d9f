"""Bit-parallel truth tables.

A truth table over an ordered atom list ``order`` of length ``n`` is an int
with ``2**n`` bits. Bit ``k`` holds the value of the formula under the total
assignment where ``order[i]`` is true iff bit ``n-1-i`` of ``k`` is 0. So
increasing ``k`` walks the assignments in lexicographic order, atom by atom,
true before false.
"""

from __future__ import annotations

from typing import Iterator, Sequence

from psat.formula import AND, ATOM, FALSE, IFF, IMPLIES, NOT, OR, TRUE, Formula, postorder


def full_mask(n: int) -> int:
    return (1 << (1 << n)) - 1


def atom_pattern(i: int, n: int) -> int:
    """Table of the i-th atom of an n-atom order."""
    j = n - 1 - i
    width = 1 << j
    # within a block of 2*width bits the low half has bit j clear (atom true)
    chunk = (1 << width) - 1
    span = 2 * width
    total = 1 << n
    while span < total:
        chunk |= chunk << span
        span *= 2
    return chunk


def truth_table(f: Formula, order: Sequence[int]) -> int:
    n = len(order)
    if n > 24:
        raise ValueError(f"truth table over {n} atoms is too large")
    full = full_mask(n)
    index = {a: i for i, a in enumerate(order)}
    val: dict[Formula, int] = {}
    for node in postorder(f):
        k = node.kind
        if k == TRUE:
            v = full
        elif k == FALSE:
            v = 0
        elif k == ATOM:
            try:
                v = atom_pattern(index[node.args[0]], n)
            except KeyError:
                raise ValueError(f"atom {node.mgr.name(node.args[0])} not in table order") from None
        elif k == NOT:
            v = full ^ val[node.args[0]]
        else:
            a, b = val[node.args[0]], val[node.args[1]]
            if k == AND:
                v = a & b
            elif k == OR:
                v = a | b
            elif k == IMPLIES:
                v = (full ^ a) | b
            else:
                v = full ^ (a ^ b)
        val[node] = v
    return val[f]


def cube_table(literals: Sequence[int], order: Sequence[int]) -> int:
    n = len(order)
    index = {a: i for i, a in enumerate(order)}
    v = full_mask(n)
    for lit in literals:
        p = atom_pattern(index[abs(lit)], n)
        v &= p if lit > 0 else full_mask(n) ^ p
    return v


def row_literals(k: int, order: Sequence[int]) -> tuple[int, ...]:
    n = len(order)
    return tuple(a if not (k >> (n - 1 - i)) & 1 else -a for i, a in enumerate(order))


def rows(table: int) -> Iterator[int]:
    """Indices of the set bits, ascending."""
    k = 0
    while table:
        if table & 1:
            yield k
        low = (table & -table).bit_length() - 1 if not table & 1 else 1
        table >>= low
        k += low


def popcount(table: int) -> int:
    return bin(table).count("1")
