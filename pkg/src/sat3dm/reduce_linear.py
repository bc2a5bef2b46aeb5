"""Linear-size reduction from strict 3CNF to 3DM (21 triples per clause).

Gadgets, per variable i occurring m_i times (slots, counted with multiplicity):

* a ring of 2*m_i triples over c[i,k], c'[i,k] (W), a[i,k] (X), b[i,k] (Y);
  the "true" family (c[i,k], a[i,k], b[i,k]) and the "false" family
  (c'[i,k], a[i,k+1], b[i,k]) with a[i,m_i+1] = a[i,1]. Closing the ring is
  what forces every k to make the same choice.

Per clause j, three element pairs (t1, t1'), (tf1, tf1'), (tf2, tf2'):

* T1 edges take the slot's c' vertex for a positive literal, c for a negative
  one, so t1 can only be matched through a true literal;
* TF1/TF2 edges take both c and c' of every slot and absorb the two
  remaining free vertices whatever their polarity.

Selecting the true family leaves c'[i,k] free, the false family leaves c[i,k]
free; each clause therefore has exactly three free W vertices for its three
pairs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .formula import Assignment, StrictFormula, evaluate, occurrence_table
from .matching import ElementId, TdmInstance, Triple, verify_matching


class Role(NamedTuple):
    """Gadget role of one triple: kind in TRUE_RING, FALSE_RING, T1, TF1, TF2."""

    kind: str
    args: Tuple

    def __str__(self) -> str:
        return f"{self.kind}({','.join(map(str, self.args))})"

    @classmethod
    def parse(cls, text: str) -> "Role":
        match = re.fullmatch(r"(TRUE_RING|FALSE_RING|T1|TF1|TF2)\(([^()]*)\)", text)
        if not match:
            raise ValueError(f"bad role tag {text!r}")
        parts = match.group(2).split(",")
        args = tuple(int(p) for p in parts[:2])
        if match.group(1) in ("TF1", "TF2"):
            if len(parts) != 3 or parts[2] not in ("c", "c'"):
                raise ValueError(f"bad role tag {text!r}")
            args += (parts[2],)
        elif len(parts) != 2:
            raise ValueError(f"bad role tag {text!r}")
        return cls(match.group(1), args)


class Slot(NamedTuple):
    variable: int
    k: int
    negated: bool


@dataclass(frozen=True)
class ReductionMap:
    formula: StrictFormula
    ring_len: Dict[int, int]
    # keyed by (i, k): c, c', a, b vertices of each ring position
    c: Dict[Tuple[int, int], ElementId]
    c_prime: Dict[Tuple[int, int], ElementId]
    a: Dict[Tuple[int, int], ElementId]
    b: Dict[Tuple[int, int], ElementId]
    # per clause: {"t1": ..., "t1'": ..., "tf1": ..., ...}
    clause_elements: Tuple[Dict[str, ElementId], ...]
    slots: Tuple[Tuple[Slot, Slot, Slot], ...]
    roles: Tuple[Role, ...]
    triple_of: Dict[Role, int]

    def role_comments(self) -> List[str]:
        return [f"role {n} {role}" for n, role in enumerate(self.roles, 1)]


def reduce(f: StrictFormula) -> Tuple[TdmInstance, ReductionMap]:
    m = f.num_clauses
    if m == 0:
        raise ValueError("nothing to reduce; decide SAT trivially upstream")
    occ = occurrence_table(f)
    ring_len = {i: occ.counts[i] for i in sorted(occ.counts)}
    total = sum(ring_len.values())

    labels: Dict[ElementId, str] = {}
    c, c_prime, a, b = {}, {}, {}, {}
    pos = 0
    for i, mi in ring_len.items():
        for k in range(1, mi + 1):
            pos += 1
            c[i, k] = ElementId("W", 2 * pos - 1)
            c_prime[i, k] = ElementId("W", 2 * pos)
            a[i, k] = ElementId("X", pos)
            b[i, k] = ElementId("Y", pos)
            labels[c[i, k]] = f"c[{i},{k}]"
            labels[c_prime[i, k]] = f"c'[{i},{k}]"
            labels[a[i, k]] = f"a[{i},{k}]"
            labels[b[i, k]] = f"b[{i},{k}]"

    clause_elements = []
    for j in range(1, m + 1):
        elems = {}
        for offset, name in enumerate(("t1", "tf1", "tf2"), 1):
            index = total + 3 * (j - 1) + offset
            elems[name] = ElementId("X", index)
            elems[name + "'"] = ElementId("Y", index)
            labels[elems[name]] = f"{name}[{j}]"
            labels[elems[name + "'"]] = f"{name}'[{j}]"
        clause_elements.append(elems)

    triples: List[Triple] = []
    roles: List[Role] = []

    def add(w: ElementId, x: ElementId, y: ElementId, role: Role) -> None:
        triples.append(Triple(w.index, x.index, y.index))
        roles.append(role)

    for i, mi in ring_len.items():
        for k in range(1, mi + 1):
            add(c[i, k], a[i, k], b[i, k], Role("TRUE_RING", (i, k)))
            add(c_prime[i, k], a[i, k % mi + 1], b[i, k], Role("FALSE_RING", (i, k)))

    slots = []
    for j, (clause, occ_row) in enumerate(zip(f.clauses, occ.slots), 1):
        row = tuple(Slot(i, k, lit.negated) for lit, (i, k) in zip(clause, occ_row))
        slots.append(row)
        elems = clause_elements[j - 1]
        for p, s in enumerate(row, 1):
            w = c[s.variable, s.k] if s.negated else c_prime[s.variable, s.k]
            add(w, elems["t1"], elems["t1'"], Role("T1", (j, p)))
        for q in ("tf1", "tf2"):
            for p, s in enumerate(row, 1):
                add(c[s.variable, s.k], elems[q], elems[q + "'"], Role(q.upper(), (j, p, "c")))
                add(c_prime[s.variable, s.k], elems[q], elems[q + "'"], Role(q.upper(), (j, p, "c'")))

    inst = TdmInstance(2 * total, total + 3 * m, total + 3 * m, tuple(triples), labels)
    rm = ReductionMap(
        formula=f,
        ring_len=ring_len,
        c=c,
        c_prime=c_prime,
        a=a,
        b=b,
        clause_elements=tuple(clause_elements),
        slots=tuple(slots),
        roles=tuple(roles),
        triple_of={role: n for n, role in enumerate(roles, 1)},
    )
    return inst, rm


def embed_assignment(rm: ReductionMap, a: Assignment) -> Tuple[int, ...]:
    """Perfect matching for a satisfying assignment of ``rm.formula``.

    Each clause sends its lowest true slot to t1 and its other two slots, in
    order, to tf1 and tf2.
    """
    if not evaluate(rm.formula, a):
        raise ValueError("assignment does not satisfy the formula")
    chosen = []
    for i, mi in rm.ring_len.items():
        kind = "TRUE_RING" if a[i] else "FALSE_RING"
        chosen.extend(rm.triple_of[Role(kind, (i, k))] for k in range(1, mi + 1))
    for j, row in enumerate(rm.slots, 1):
        winner = next(p for p, s in enumerate(row, 1) if a[s.variable] != s.negated)
        chosen.append(rm.triple_of[Role("T1", (j, winner))])
        rest = [p for p in (1, 2, 3) if p != winner]
        for q, p in zip(("TF1", "TF2"), rest):
            side = "c'" if a[row[p - 1].variable] else "c"
            chosen.append(rm.triple_of[Role(q, (j, p, side))])
    return tuple(sorted(chosen))


def lift_matching(inst: TdmInstance, rm: ReductionMap, selected: Sequence[int]) -> Assignment:
    """Read a truth assignment off a perfect matching of ``inst``.

    x_i is true iff a[i,1] is covered by its true-family triple; variables
    with no occurrence are false.
    """
    verdict = verify_matching(inst, selected)
    if not verdict:
        raise ValueError(f"not a perfect matching: {verdict}")
    picked = set(selected)
    out: Assignment = {v: False for v in range(1, rm.formula.num_vars + 1)}
    for i, mi in rm.ring_len.items():
        flags = {rm.triple_of[Role("TRUE_RING", (i, k))] in picked for k in range(1, mi + 1)}
        if len(flags) != 1:
            raise RuntimeError(f"ring of x{i} mixes true and false triples")
        out[i] = flags.pop()
    if not evaluate(rm.formula, out):
        raise RuntimeError("lifted assignment does not satisfy the formula")
    return out


def parse_role_comments(comments: Sequence[str]) -> Optional[List[Role]]:
    """Roles from ``role <n> <tag>`` comment bodies; None if there are none."""
    found: List[Tuple[int, Role]] = []
    for body in comments:
        parts = body.split()
        if parts and parts[0] == "role":
            if len(parts) != 3:
                raise ValueError(f"bad role comment {body!r}")
            found.append((int(parts[1]), Role.parse(parts[2])))
    if not found:
        return None
    if [n for n, _ in found] != list(range(1, len(found) + 1)):
        raise ValueError("role comments are not numbered 1..M in order")
    return [role for _, role in found]
