"""The classical 3SAT -> 3DM reduction with global garbage collection.

Kept as a size baseline: every variable gets a ring of 2m triples whatever
its occurrence count, and (n-1)m garbage pairs are joined to every literal
tip, which gives 2nm(n-1)m garbage triples.
"""

from __future__ import annotations

from typing import Dict, List, NamedTuple, Optional

from .formula import Formula, StrictFormula
from .matching import ElementId, TdmInstance, Triple


class SizeStats(NamedTuple):
    w: int
    x: int
    y: int
    triples: int
    # False when the clause-triple term is the 3m upper bound
    exact: bool


def clause_triple_count(f: Formula) -> int:
    """Distinct clause triples: one per distinct literal in each clause."""
    return sum(len(set(clause)) for clause in f.clauses)


def gj_size(n: int, m: int, clause_triples: Optional[int] = None) -> SizeStats:
    if n < 1 or m < 1:
        raise ValueError("n and m must both be at least 1")
    tips = 2 * n * m
    exact = clause_triples is not None
    ct = clause_triples if exact else 3 * m
    return SizeStats(tips, tips, tips, tips + ct + tips * (n - 1) * m, exact)


def reduce_gj(f: StrictFormula) -> TdmInstance:
    n, m = f.num_vars, f.num_clauses
    if n < 1 or m < 1:
        raise ValueError("the baseline reduction needs n >= 1 and m >= 1")
    garbage = (n - 1) * m
    labels: Dict[ElementId, str] = {}

    def tip(i: int, j: int, bar: bool) -> int:
        return 2 * ((i - 1) * m + j - 1) + (2 if bar else 1)

    def ring(i: int, j: int) -> int:
        return (i - 1) * m + j

    for i in range(1, n + 1):
        for j in range(1, m + 1):
            labels[ElementId("W", tip(i, j, False))] = f"u[{i},{j}]"
            labels[ElementId("W", tip(i, j, True))] = f"u'[{i},{j}]"
            labels[ElementId("X", ring(i, j))] = f"a[{i},{j}]"
            labels[ElementId("Y", ring(i, j))] = f"b[{i},{j}]"
    for j in range(1, m + 1):
        labels[ElementId("X", n * m + j)] = f"s1[{j}]"
        labels[ElementId("Y", n * m + j)] = f"s2[{j}]"
    for k in range(1, garbage + 1):
        labels[ElementId("X", n * m + m + k)] = f"g1[{k}]"
        labels[ElementId("Y", n * m + m + k)] = f"g2[{k}]"

    triples: List[Triple] = []
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            triples.append(Triple(tip(i, j, True), ring(i, j), ring(i, j)))
            triples.append(Triple(tip(i, j, False), ring(i, j % m + 1), ring(i, j)))
    for j, clause in enumerate(f.clauses, 1):
        seen = set()
        for lit in clause:
            if lit in seen:
                continue
            seen.add(lit)
            triples.append(Triple(tip(lit.variable, j, lit.negated), n * m + j, n * m + j))
    for k in range(1, garbage + 1):
        g = n * m + m + k
        for i in range(1, n + 1):
            for j in range(1, m + 1):
                triples.append(Triple(tip(i, j, False), g, g))
                triples.append(Triple(tip(i, j, True), g, g))

    size = 2 * n * m
    return TdmInstance(size, size, size, tuple(triples), labels)
