"""Independent oracles shared by the test modules.

These deliberately avoid the package's own evaluation and verification code
so that they can check it.
"""

from itertools import combinations, product

import pytest

from sat3dm.oracle import GenConfig, gen_random

ACCEPTANCE_LINES = []


def brute_sat(num_vars, int_clauses):
    """True iff some assignment satisfies the signed-integer clause list."""
    for bits in product([False, True], repeat=num_vars):
        if all(any(bits[abs(v) - 1] == (v > 0) for v in clause) for clause in int_clauses):
            return True
    return False


def covers_exactly(sizes, triples, chosen):
    """Every element of each axis appears exactly once among ``chosen`` (0-based)."""
    for axis, size in enumerate(sizes):
        hit = sorted(triples[i][axis] for i in chosen)
        if hit != list(range(1, size + 1)):
            return False
    return True


def naive_perfect_matching_exists(sizes, triples):
    if len(set(sizes)) != 1:
        return False
    return any(
        covers_exactly(sizes, triples, chosen)
        for chosen in combinations(range(len(triples)), sizes[0])
    )


def suite_formulas(n=5, m=8, seeds=range(1, 201)):
    return [gen_random(GenConfig(n, m, s)) for s in seeds]


@pytest.fixture(scope="session")
def suite():
    return suite_formulas()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
