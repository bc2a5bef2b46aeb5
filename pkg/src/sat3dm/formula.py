"""CNF formulas: data model, DIMACS I/O, strict 3CNF normalization, evaluation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple, Union

Assignment = Dict[int, bool]


class FormatError(ValueError):
    """Malformed input file. ``line`` is 1-based, or None when not tied to a line."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class Literal(NamedTuple):
    variable: int
    negated: bool = False

    @classmethod
    def from_int(cls, value: int) -> "Literal":
        if value == 0:
            raise ValueError("literal 0 has no variable")
        return cls(abs(value), value < 0)

    def to_int(self) -> int:
        return -self.variable if self.negated else self.variable

    def value(self, assignment: Assignment) -> bool:
        return assignment[self.variable] != self.negated

    def __neg__(self) -> "Literal":
        return Literal(self.variable, not self.negated)

    def __str__(self) -> str:
        return f"{'~' if self.negated else ''}x{self.variable}"


Clause = Tuple[Literal, ...]


@dataclass(frozen=True)
class Formula:
    num_vars: int
    clauses: Tuple[Clause, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        for j, clause in enumerate(self.clauses, 1):
            for lit in clause:
                if lit.variable < 1 or lit.variable > self.num_vars:
                    raise ValueError(
                        f"clause {j}: variable {lit.variable} outside 1..{self.num_vars}"
                    )

    @classmethod
    def from_ints(cls, num_vars: int, clauses: Iterable[Iterable[int]]) -> "Formula":
        return cls(num_vars, tuple(tuple(Literal.from_int(v) for v in c) for c in clauses))

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def to_ints(self) -> List[List[int]]:
        return [[lit.to_int() for lit in clause] for clause in self.clauses]

    def occurring_vars(self) -> List[int]:
        return sorted({lit.variable for clause in self.clauses for lit in clause})


class StrictFormula(Formula):
    """A formula whose clauses all have exactly three (positional) literal slots."""

    def __post_init__(self):
        super().__post_init__()
        for j, clause in enumerate(self.clauses, 1):
            if len(clause) != 3:
                raise ValueError(f"clause {j} has {len(clause)} slots, expected 3")


@dataclass(frozen=True)
class NormalizationMap:
    original_num_vars: int
    fresh_vars: Tuple[int, ...] = ()
    # 0-based index of the source clause for each strict clause
    clause_provenance: Tuple[int, ...] = ()


class OccurrenceTable(NamedTuple):
    counts: Dict[int, int]
    # slots[j][p] = (variable, running occurrence index k), both 1-based
    slots: Tuple[Tuple[Tuple[int, int], ...], ...]


# ---------------------------------------------------------------- DIMACS


def parse_dimacs(text: Union[str, bytes]) -> Formula:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    header: Optional[Tuple[int, int]] = None
    clauses: List[List[int]] = []
    current: List[int] = []
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise FormatError("duplicate header", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"bad header {line!r}, expected 'p cnf <n> <m>'", lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise FormatError(f"non-integer in header {line!r}", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise FormatError("negative count in header", lineno)
            continue
        if header is None:
            raise FormatError("clause data before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                value = int(tok)
            except ValueError:
                raise FormatError(f"non-integer token {tok!r}", lineno) from None
            if value == 0:
                clauses.append(current)
                current = []
            elif abs(value) > header[0]:
                raise FormatError(
                    f"literal {value} out of range (n = {header[0]})", lineno
                )
            else:
                current.append(value)
    if header is None:
        raise FormatError("missing 'p cnf' header", lineno or None)
    if current:
        raise FormatError("last clause not terminated by 0", lineno)
    if len(clauses) != header[1]:
        raise FormatError(
            f"header declares {header[1]} clauses, found {len(clauses)}", lineno
        )
    return Formula.from_ints(header[0], clauses)


def emit_dimacs(f: Formula) -> str:
    lines = [f"p cnf {f.num_vars} {f.num_clauses}"]
    lines.extend(" ".join([*map(str, c), "0"]) for c in f.to_ints())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- normalization


def normalize(f: Formula) -> Tuple[StrictFormula, NormalizationMap]:
    """Rewrite ``f`` into strict 3CNF.

    Short clauses repeat their last literal; a clause of length k > 3 becomes a
    chain of k-2 clauses linked by k-3 fresh variables numbered after the
    existing ones, in clause order.
    """
    out: List[Clause] = []
    provenance: List[int] = []
    fresh: List[int] = []
    next_var = f.num_vars + 1
    for j, clause in enumerate(f.clauses):
        k = len(clause)
        if k == 0:
            raise ValueError(
                f"clause {j + 1} is empty; formula trivially unsatisfiable, cannot normalize"
            )
        if k <= 3:
            out.append(clause + (clause[-1],) * (3 - k))
            provenance.append(j)
            continue
        links = [Literal(v) for v in range(next_var, next_var + k - 3)]
        fresh.extend(z.variable for z in links)
        next_var += k - 3
        out.append((clause[0], clause[1], links[0]))
        for t in range(1, k - 3):
            out.append((-links[t - 1], clause[t + 1], links[t]))
        out.append((-links[-1], clause[-2], clause[-1]))
        provenance.extend([j] * (k - 2))
    strict = StrictFormula(next_var - 1, tuple(out))
    return strict, NormalizationMap(f.num_vars, tuple(fresh), tuple(provenance))


def extend_assignment(f: Formula, nmap: NormalizationMap, a: Assignment) -> Assignment:
    """Extend a satisfying assignment of ``f`` to the fresh chain variables of ``normalize(f)``.

    Link variable t of a split clause is true iff none of the first t+1 literals is.
    """
    out = {v: a[v] for v in range(1, f.num_vars + 1)}
    fresh = iter(nmap.fresh_vars)
    for clause in f.clauses:
        if len(clause) <= 3:
            continue
        seen_true = clause[0].value(a)
        for t in range(1, len(clause) - 2):
            seen_true = seen_true or clause[t].value(a)
            out[next(fresh)] = not seen_true
    return out


# ---------------------------------------------------------------- evaluation


def occurrence_table(f: StrictFormula) -> OccurrenceTable:
    counts: Dict[int, int] = {}
    slots = []
    for clause in f.clauses:
        row = []
        for lit in clause:
            k = counts.get(lit.variable, 0) + 1
            counts[lit.variable] = k
            row.append((lit.variable, k))
        slots.append(tuple(row))
    return OccurrenceTable(counts, tuple(slots))


def check_assignment(f: Formula, a: Assignment) -> None:
    missing = [v for v in range(1, f.num_vars + 1) if v not in a]
    if missing:
        raise ValueError(f"assignment missing variable(s) {missing[:5]}")


def evaluate(f: Formula, a: Assignment) -> bool:
    check_assignment(f, a)
    return all(any(lit.value(a) for lit in clause) for clause in f.clauses)


# ---------------------------------------------------------------- certificates


def format_assignment(a: Optional[Assignment], num_vars: int) -> str:
    if a is None:
        return "s cnf UNSAT\n"
    values = [str(v if a[v] else -v) for v in range(1, num_vars + 1)]
    return "s cnf SAT\n" + " ".join(["v", *values, "0"]) + "\n"


def parse_assignment(text: Union[str, bytes]) -> Optional[Assignment]:
    """Read an assignment certificate; returns None for ``s cnf UNSAT``."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), 1) if ln.strip()]
    if not lines:
        raise FormatError("empty certificate")
    first_no, first = lines[0]
    if first == "s cnf UNSAT":
        return None
    if first != "s cnf SAT":
        raise FormatError(f"expected 's cnf SAT' or 's cnf UNSAT', got {first!r}", first_no)
    values: List[int] = []
    terminated = False
    for lineno, line in lines[1:]:
        tokens = line.split()
        if tokens[0] != "v" or terminated:
            raise FormatError(f"unexpected line {line!r}", lineno)
        for tok in tokens[1:]:
            try:
                value = int(tok)
            except ValueError:
                raise FormatError(f"non-integer token {tok!r}", lineno) from None
            if terminated:
                raise FormatError("values after terminating 0", lineno)
            if value == 0:
                terminated = True
            else:
                values.append(value)
    if not terminated:
        raise FormatError("assignment not terminated by 0", lines[-1][0])
    a: Assignment = {}
    for value in values:
        if abs(value) in a:
            raise FormatError(f"variable {abs(value)} assigned twice")
        a[abs(value)] = value > 0
    return a

