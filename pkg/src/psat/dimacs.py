"""DIMACS CNF reading and writing.

Reading maps DIMACS variable ``k`` to the atom named ``A<k>``. Writing numbers
variables by atom id and can emit a sidecar map with one line per atom::

    atom <name> <dimacs-var> [fresh]
"""

from __future__ import annotations

from psat.formula import CnfFormula, Manager


class DimacsError(ValueError):
    pass


def looks_like_dimacs(text: str) -> bool:
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("c"):
            continue
        return s.startswith("p cnf")
    return False


def read_dimacs(text: str, mgr: Manager | None = None) -> CnfFormula:
    mgr = mgr or Manager()
    header = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("c") or s.startswith("%"):
            continue
        if s.startswith("p"):
            parts = s.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"bad problem line at line {lineno}: {s!r}")
            header = (int(parts[2]), int(parts[3]))
            for k in range(1, header[0] + 1):
                mgr.declare(f"A{k}")
            continue
        if header is None:
            raise DimacsError(f"clause before problem line at line {lineno}")
        for tok in s.split():
            try:
                v = int(tok)
            except ValueError:
                raise DimacsError(f"bad literal {tok!r} at line {lineno}") from None
            if v == 0:
                clauses.append(tuple(current))
                current = []
                continue
            if abs(v) > header[0]:
                raise DimacsError(f"variable {abs(v)} exceeds declared {header[0]} at line {lineno}")
            aid = mgr.declare(f"A{abs(v)}")
            current.append(aid if v > 0 else -aid)
    if current:
        clauses.append(tuple(current))
    if header is None:
        raise DimacsError("missing problem line")
    declared = frozenset(mgr.id_of(f"A{k}") for k in range(1, header[0] + 1))
    return CnfFormula(mgr, tuple(clauses), declared)


def write_dimacs(f: CnfFormula) -> str:
    n = max(f.atoms(), default=0)
    lines = [f"p cnf {n} {len(f.clauses)}"]
    lines += [" ".join(map(str, c + (0,))) for c in f.clauses]
    return "\n".join(lines) + "\n"


def atom_map(f: CnfFormula) -> str:
    lines = []
    for aid in sorted(f.atoms()):
        mark = " fresh" if aid in f.fresh_atoms else ""
        lines.append(f"atom {f.mgr.name(aid)} {aid}{mark}")
    return "\n".join(lines) + ("\n" if lines else "")
