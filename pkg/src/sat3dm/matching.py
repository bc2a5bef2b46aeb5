"""3DM and X3C instances: models, file formats, certificate checking, exact solvers.

Triple and set indices in certificates are 1-based, matching the file formats.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from . import exact_cover
from .formula import FormatError

AXES = ("W", "X", "Y")

Selection = Tuple[int, ...]


class ElementId(NamedTuple):
    axis: str
    index: int

    def __str__(self) -> str:
        return f"{self.axis}:{self.index}"


class Triple(NamedTuple):
    w: int
    x: int
    y: int


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    element: Optional[ElementId] = None
    count: Optional[int] = None

    def __bool__(self) -> bool:
        return self.accepted

    def __str__(self) -> str:
        if self.accepted:
            return "ACCEPT"
        return f"REJECT ({self.element} covered {self.count} times)"


@dataclass(frozen=True)
class TdmInstance:
    w_size: int
    x_size: int
    y_size: int
    triples: Tuple[Triple, ...] = ()
    labels: Mapping[ElementId, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "triples", tuple(Triple(*t) for t in self.triples))
        sizes = self.sizes
        if min(sizes) < 0:
            raise ValueError("axis sizes must be non-negative")
        seen = set()
        for n, t in enumerate(self.triples, 1):
            for value, size, axis in zip(t, sizes, AXES):
                if not 1 <= value <= size:
                    raise ValueError(f"triple {n}: {axis} index {value} outside 1..{size}")
            if t in seen:
                raise ValueError(f"triple {n} {tuple(t)} is a duplicate")
            seen.add(t)
        used: Dict[str, set] = {axis: set() for axis in AXES}
        for element, label in self.labels.items():
            axis, index = element
            if axis not in used or not 1 <= index <= sizes[AXES.index(axis)]:
                raise ValueError(f"label for nonexistent element {element}")
            if not label or any(ch.isspace() for ch in label):
                raise ValueError(f"label {label!r} is empty or contains whitespace")
            if label in used[axis]:
                raise ValueError(f"label {label!r} repeated on axis {axis}")
            used[axis].add(label)

    @property
    def sizes(self) -> Tuple[int, int, int]:
        return (self.w_size, self.x_size, self.y_size)

    def column(self, axis: int, index: int) -> int:
        """0-based position of an element in the order W < X < Y, then index."""
        return sum(self.sizes[:axis]) + index - 1

    def label(self, element: ElementId) -> str:
        return self.labels.get(element, str(element))


@dataclass(frozen=True)
class X3cInstance:
    universe_size: int
    sets: Tuple[Tuple[int, int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(tuple(sorted(s)) for s in self.sets))
        if self.universe_size < 0 or self.universe_size % 3:
            raise ValueError(f"universe size {self.universe_size} is not a multiple of 3")
        for n, s in enumerate(self.sets, 1):
            if len(s) != 3 or len(set(s)) != 3:
                raise ValueError(f"set {n} must have exactly three distinct members")
            if not all(1 <= u <= self.universe_size for u in s):
                raise ValueError(f"set {n} has a member outside 1..{self.universe_size}")


def _check_indices(selected: Iterable[int], limit: int, what: str) -> List[int]:
    out = list(selected)
    for i in out:
        if not 1 <= i <= limit:
            raise IndexError(f"{what} index {i} outside 1..{limit}")
    return out


# ---------------------------------------------------------------- 3DM


def verify_matching(inst: TdmInstance, selected: Iterable[int]) -> Verdict:
    chosen = _check_indices(selected, len(inst.triples), "triple")
    counts = [Counter(), Counter(), Counter()]
    for i in chosen:
        for axis, value in enumerate(inst.triples[i - 1]):
            counts[axis][value] += 1
    for axis, size in enumerate(inst.sizes):
        for index in range(1, size + 1):
            if counts[axis][index] != 1:
                return Verdict(False, ElementId(AXES[axis], index), counts[axis][index])
    return Verdict(True)


def solve_exact(inst: TdmInstance) -> Optional[Selection]:
    """A perfect matching as sorted 1-based triple indices, or None if none exists."""
    if len(set(inst.sizes)) != 1:
        return None
    rows = [(inst.column(0, t.w), inst.column(1, t.x), inst.column(2, t.y)) for t in inst.triples]
    found = exact_cover.solve(sum(inst.sizes), rows)
    return None if found is None else tuple(r + 1 for r in found)


def to_x3c(inst: TdmInstance) -> X3cInstance:
    if len(set(inst.sizes)) != 1:
        raise ValueError(
            f"axis sizes {inst.sizes} differ; X3C needs equal W, X, Y to admit a cover"
        )
    return X3cInstance(
        sum(inst.sizes),
        tuple((inst.column(0, t.w) + 1, inst.column(1, t.x) + 1, inst.column(2, t.y) + 1)
              for t in inst.triples),
    )


# ---------------------------------------------------------------- X3C


def verify_cover(inst: X3cInstance, selected: Iterable[int]) -> Verdict:
    chosen = _check_indices(selected, len(inst.sets), "set")
    counts = Counter(u for i in chosen for u in inst.sets[i - 1])
    for u in range(1, inst.universe_size + 1):
        if counts[u] != 1:
            return Verdict(False, ElementId("U", u), counts[u])
    return Verdict(True)


def solve_x3c(inst: X3cInstance) -> Optional[Selection]:
    rows = [tuple(u - 1 for u in s) for s in inst.sets]
    found = exact_cover.solve(inst.universe_size, rows)
    return None if found is None else tuple(r + 1 for r in found)


# ---------------------------------------------------------------- file formats


def _content_lines(text: Union[str, bytes]):
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split()
        if tokens and tokens[0] != "c":
            yield lineno, tokens


def _ints(tokens: Sequence[str], lineno: int) -> List[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"non-integer token in {' '.join(tokens)!r}", lineno) from None


def comment_lines(text: Union[str, bytes]) -> List[str]:
    """Bodies of the ``c`` lines of an instance file, in order."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    out = []
    for raw in text.splitlines():
        stripped = raw.strip()
        if stripped == "c" or stripped.startswith("c "):
            out.append(stripped[2:])
    return out


def format_tdm(inst: TdmInstance, comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p 3dm {inst.w_size} {inst.x_size} {inst.y_size} {len(inst.triples)}")
    for element, label in sorted(inst.labels.items(), key=lambda kv: (AXES.index(kv[0].axis), kv[0].index)):
        lines.append(f"e {element.axis.lower()} {element.index} {label}")
    lines.extend(f"t {t.w} {t.x} {t.y}" for t in inst.triples)
    return "\n".join(lines) + "\n"


def parse_tdm(text: Union[str, bytes]) -> TdmInstance:
    header = None
    labels: Dict[ElementId, str] = {}
    triples: List[Tuple[int, int, int]] = []
    lineno = 0
    for lineno, tokens in _content_lines(text):
        kind = tokens[0]
        if kind == "p":
            if header is not None:
                raise FormatError("duplicate header", lineno)
            if len(tokens) != 6 or tokens[1] != "3dm":
                raise FormatError("expected 'p 3dm <W> <X> <Y> <M>'", lineno)
            header = _ints(tokens[2:], lineno)
            continue
        if header is None:
            raise FormatError("data before 'p 3dm' header", lineno)
        if kind == "e":
            if len(tokens) != 4 or tokens[1] not in ("w", "x", "y"):
                raise FormatError("expected 'e <w|x|y> <index> <label>'", lineno)
            element = ElementId(tokens[1].upper(), _ints(tokens[2:3], lineno)[0])
            if element in labels:
                raise FormatError(f"element {element} labelled twice", lineno)
            labels[element] = tokens[3]
        elif kind == "t":
            if len(tokens) != 4:
                raise FormatError("expected 't <w> <x> <y>'", lineno)
            triples.append(tuple(_ints(tokens[1:], lineno)))
        else:
            raise FormatError(f"unknown line type {kind!r}", lineno)
    if header is None:
        raise FormatError("missing 'p 3dm' header", lineno or None)
    if len(triples) != header[3]:
        raise FormatError(f"header declares {header[3]} triples, found {len(triples)}", lineno)
    try:
        return TdmInstance(header[0], header[1], header[2], tuple(triples), labels)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_x3c(inst: X3cInstance) -> str:
    lines = [f"p x3c {inst.universe_size} {len(inst.sets)}"]
    lines.extend("s {} {} {}".format(*s) for s in inst.sets)
    return "\n".join(lines) + "\n"


def parse_x3c(text: Union[str, bytes]) -> X3cInstance:
    header = None
    sets: List[Tuple[int, ...]] = []
    lineno = 0
    for lineno, tokens in _content_lines(text):
        if tokens[0] == "p":
            if header is not None:
                raise FormatError("duplicate header", lineno)
            if len(tokens) != 4 or tokens[1] != "x3c":
                raise FormatError("expected 'p x3c <3q> <|S|>'", lineno)
            header = _ints(tokens[2:], lineno)
        elif header is None:
            raise FormatError("data before 'p x3c' header", lineno)
        elif tokens[0] == "s" and len(tokens) == 4:
            sets.append(tuple(_ints(tokens[1:], lineno)))
        else:
            raise FormatError("expected 's <u1> <u2> <u3>'", lineno)
    if header is None:
        raise FormatError("missing 'p x3c' header", lineno or None)
    if len(sets) != header[1]:
        raise FormatError(f"header declares {header[1]} sets, found {len(sets)}", lineno)
    try:
        return X3cInstance(header[0], tuple(sets))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


_CERT_WORDS = {"3dm": "MATCH", "x3c": "COVER"}


def format_selection(kind: str, selected: Optional[Sequence[int]]) -> str:
    """Certificate text for ``kind`` in {"3dm", "x3c"}; None means no solution."""
    if selected is None:
        return f"s {kind} NONE\n"
    return f"s {kind} {_CERT_WORDS[kind]}\n" + " ".join(["m", *map(str, selected), "0"]) + "\n"


def parse_selection(kind: str, text: Union[str, bytes]) -> Optional[Selection]:
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty certificate")
    lineno, head = lines[0]
    if head == ["s", kind, "NONE"]:
        if len(lines) > 1:
            raise FormatError("data after NONE verdict", lines[1][0])
        return None
    if head != ["s", kind, _CERT_WORDS[kind]]:
        raise FormatError(f"expected 's {kind} {_CERT_WORDS[kind]}' or 's {kind} NONE'", lineno)
    if len(lines) != 2 or lines[1][1][0] != "m":
        raise FormatError("expected one 'm <i1> ... 0' line", lineno + 1)
    lineno, tokens = lines[1]
    values = _ints(tokens[1:], lineno)
    if not values or values[-1] != 0 or 0 in values[:-1]:
        raise FormatError("index list must end with a single 0", lineno)
    values = values[:-1]
    if any(b <= a for a, b in zip(values, values[1:])):
        raise FormatError("indices must be strictly increasing", lineno)
    return tuple(values)


def detect_kind(text: Union[str, bytes]) -> str:
    """Classify a file by its first header token.

    Returns one of ``cnf``, ``3dm``, ``x3c`` for instances and ``cnf-cert``,
    ``3dm-cert``, ``x3c-cert`` for certificates.
    """
    for lineno, tokens in _content_lines(text):
        if len(tokens) >= 2 and tokens[1] in ("cnf", "3dm", "x3c"):
            if tokens[0] == "p":
                return tokens[1]
            if tokens[0] == "s":
                return tokens[1] + "-cert"
        raise FormatError("unrecognised header; expected 'p cnf|3dm|x3c' or 's cnf|3dm|x3c'", lineno)
    raise FormatError("empty input")
