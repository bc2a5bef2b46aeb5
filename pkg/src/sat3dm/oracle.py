"""Brute-force SAT, seeded instance generation and end-to-end equivalence checks."""

from __future__ import annotations

import csv
import io
from dataclasses import astuple, dataclass, fields
from typing import Iterable, List, Optional

from . import matching, reduce_gj, reduce_linear
from .formula import (
    Assignment,
    Formula,
    Literal,
    StrictFormula,
    evaluate,
    extend_assignment,
    normalize,
)

MAX_BRUTE_VARS = 24
DEFAULT_GJ_BUDGET = 5000

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 (Steele, Lea, Flood 2014); fixed so suites match across languages.

    state += 0x9E3779B97F4A7C15
    z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)                      (all arithmetic mod 2**64)
    """

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)


@dataclass(frozen=True)
class GenConfig:
    num_vars: int
    num_clauses: int
    seed: int

    def __post_init__(self):
        if self.num_vars < 1 or self.num_clauses < 1:
            raise ValueError("num_vars and num_clauses must be at least 1")
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")


def gen_random(cfg: GenConfig) -> StrictFormula:
    """Random strict 3CNF.

    Slots are filled clause by clause, left to right. Each slot draws two
    words: the variable is ``1 + w1 % n`` and the literal is negated iff the
    top bit of ``w2`` is set.
    """
    rng = SplitMix64(cfg.seed)
    clauses = []
    for _ in range(cfg.num_clauses):
        clause = []
        for _ in range(3):
            var = 1 + rng.next() % cfg.num_vars
            clause.append(Literal(var, bool(rng.next() >> 63)))
        clauses.append(tuple(clause))
    return StrictFormula(cfg.num_vars, tuple(clauses))


def sat_brute(f: Formula) -> Optional[Assignment]:
    """First satisfying assignment with x1 most significant and false < true."""
    n = f.num_vars
    if n > MAX_BRUTE_VARS:
        raise ValueError(f"{n} variables exceeds the brute-force limit of {MAX_BRUTE_VARS}")
    # per clause: (mask of variables appearing positively, negatively); bit n-i is x_i
    masks = []
    for clause in f.clauses:
        pos = neg = 0
        for lit in clause:
            bit = 1 << (n - lit.variable)
            if lit.negated:
                neg |= bit
            else:
                pos |= bit
        masks.append((pos, neg))
    full = (1 << n) - 1
    for code in range(1 << n):
        if all(code & pos or ~code & neg & full for pos, neg in masks):
            return {i: bool(code >> (n - i) & 1) for i in range(1, n + 1)}
    return None


def all_polarity_formula() -> StrictFormula:
    """The 8 clauses over x1, x2, x3 with every sign pattern; unsatisfiable."""
    clauses = []
    for signs in range(8):
        clauses.append(tuple(Literal(v, bool(signs >> (3 - v) & 1)) for v in (1, 2, 3)))
    return StrictFormula(3, tuple(clauses))


@dataclass
class EquivalenceRecord:
    seed: Optional[int]
    n: int
    m: int
    sat: str = ""
    linear: str = ""
    gj: str = ""
    x3c: str = ""
    roundtrip: str = ""
    W: int = 0
    X: int = 0
    Y: int = 0
    M_linear: int = 0
    M_gj: int = 0

    @property
    def agrees(self) -> bool:
        yes = {"SAT", "MATCH", "COVER"}
        no = {"UNSAT", "NONE"}
        verdicts = [v for v in (self.sat, self.linear, self.gj, self.x3c) if v != "SKIP"]
        same = all(v in yes for v in verdicts) or all(v in no for v in verdicts)
        return same and self.roundtrip in ("ok", "n/a")


CSV_HEADER = [f.name for f in fields(EquivalenceRecord)]


def equivalence_check(
    f: Formula, seed: Optional[int] = None, gj_budget: int = DEFAULT_GJ_BUDGET
) -> EquivalenceRecord:
    """Run every decision route on ``f`` and record the verdicts; never raises."""
    rec = EquivalenceRecord(seed, f.num_vars, f.num_clauses)
    try:
        _run_pipeline(f, rec, gj_budget)
    except Exception as exc:  # recorded, not thrown
        rec.roundtrip = f"error:{type(exc).__name__}"
    return rec


def _run_pipeline(f: Formula, rec: EquivalenceRecord, gj_budget: int) -> None:
    a = sat_brute(f)
    rec.sat = "SAT" if a is not None else "UNSAT"
    if f.num_clauses == 0 or any(not clause for clause in f.clauses):
        rec.linear = rec.gj = rec.x3c = "SKIP"
        rec.roundtrip = "n/a"
        return
    strict, nmap = normalize(f)
    inst, rm = reduce_linear.reduce(strict)
    rec.W, rec.X, rec.Y = inst.sizes
    rec.M_linear = len(inst.triples)

    match = matching.solve_exact(inst)
    rec.linear = "MATCH" if match is not None else "NONE"
    cover = matching.solve_x3c(matching.to_x3c(inst))
    rec.x3c = "COVER" if cover is not None else "NONE"

    predicted = reduce_gj.gj_size(strict.num_vars, strict.num_clauses,
                                  reduce_gj.clause_triple_count(strict))
    rec.M_gj = predicted.triples
    if predicted.triples > gj_budget:
        rec.gj = "SKIP"
    else:
        gj_inst = reduce_gj.reduce_gj(strict)
        gj_match = matching.solve_exact(gj_inst)
        rec.gj = "MATCH" if gj_match is not None else "NONE"
        if len(gj_inst.triples) != predicted.triples or (
            gj_match is not None and not matching.verify_matching(gj_inst, gj_match)
        ):
            rec.roundtrip = "fail"
            return

    if a is None:
        rec.roundtrip = "n/a"
        return
    ok = True
    full = extend_assignment(f, nmap, a)
    embedded = reduce_linear.embed_assignment(rm, full)
    ok &= bool(matching.verify_matching(inst, embedded))
    lifted = reduce_linear.lift_matching(inst, rm, embedded)
    ok &= all(lifted[i] == full[i] for i in rm.ring_len)
    if match is not None:
        solved = reduce_linear.lift_matching(inst, rm, match)
        ok &= evaluate(f, {v: solved[v] for v in range(1, f.num_vars + 1)})
    if cover is not None:
        ok &= bool(matching.verify_matching(inst, cover))
    rec.roundtrip = "ok" if ok else "fail"


def run_suite(configs: Iterable[GenConfig], gj_budget: int = DEFAULT_GJ_BUDGET) -> List[EquivalenceRecord]:
    return [equivalence_check(gen_random(cfg), cfg.seed, gj_budget) for cfg in configs]


def report_csv(records: Iterable[EquivalenceRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(["" if v is None else v for v in astuple(rec)])
    return buf.getvalue()


def summarize(records: Iterable[EquivalenceRecord]) -> dict:
    records = list(records)
    return {
        "instances": len(records),
        "sat": sum(r.sat == "SAT" for r in records),
        "unsat": sum(r.sat == "UNSAT" for r in records),
        "gj_skipped": sum(r.gj == "SKIP" for r in records),
        "agree": sum(r.agrees for r in records),
        "disagree": sum(not r.agrees for r in records),
    }
