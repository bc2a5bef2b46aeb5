"""Algorithm X over dict-of-sets columns, iterative, with canonical branching.

Columns are integers ``0..num_columns-1``; the column order is the element
order used for tie-breaking. Rows are tuples of distinct column ids.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Set, Tuple


def _select(cols: Dict[int, Set[int]], rows: Sequence[Sequence[int]], r: int) -> List[Set[int]]:
    removed = []
    for j in rows[r]:
        for i in cols[j]:
            for k in rows[i]:
                if k != j:
                    cols[k].discard(i)
        removed.append(cols.pop(j))
    return removed


def _deselect(cols: Dict[int, Set[int]], rows: Sequence[Sequence[int]], r: int, removed: List[Set[int]]) -> None:
    for j in reversed(rows[r]):
        cols[j] = removed.pop()
        for i in cols[j]:
            for k in rows[i]:
                if k != j:
                    cols[k].add(i)


def solve(num_columns: int, rows: Sequence[Sequence[int]]) -> Optional[Tuple[int, ...]]:
    """Return the first exact cover found (sorted 0-based row ids), or None.

    Branches on the live column with the fewest candidate rows, lowest column
    id on ties, and tries candidates in ascending row order, so the result is
    a pure function of the input.
    """
    cols: Dict[int, Set[int]] = {c: set() for c in range(num_columns)}
    for r, row in enumerate(rows):
        if len(set(row)) != len(row):
            raise ValueError(f"row {r} repeats a column")
        for c in row:
            if not 0 <= c < num_columns:
                raise ValueError(f"row {r} references column {c} outside 0..{num_columns - 1}")
            cols[c].add(r)

    solution: List[int] = []
    # frame: [candidates, next position, undo record of the row currently selected]
    frames: List[list] = []
    while True:
        if not cols:
            return tuple(sorted(solution))
        c = min(cols, key=lambda col: (len(cols[col]), col))
        frames.append([sorted(cols[c]), 0, None])
        while frames:
            frame = frames[-1]
            if frame[2] is not None:
                _deselect(cols, rows, solution.pop(), frame[2])
                frame[2] = None
            if frame[1] < len(frame[0]):
                r = frame[0][frame[1]]
                frame[1] += 1
                frame[2] = _select(cols, rows, r)
                solution.append(r)
                break
            frames.pop()
        else:
            return None
