import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import covers_exactly, naive_perfect_matching_exists
from sat3dm import exact_cover
from sat3dm.formula import FormatError, StrictFormula
from sat3dm.matching import (
    ElementId,
    TdmInstance,
    X3cInstance,
    comment_lines,
    detect_kind,
    format_selection,
    format_tdm,
    format_x3c,
    parse_selection,
    parse_tdm,
    parse_x3c,
    solve_exact,
    solve_x3c,
    to_x3c,
    verify_cover,
    verify_matching,
)
from sat3dm.oracle import all_polarity_formula
from sat3dm.reduce_linear import embed_assignment, reduce

SINGLE = TdmInstance(1, 1, 1, ((1, 1, 1),))


@st.composite
def tdm_instances(draw, max_size=4, max_triples=12, equal=True):
    if equal:
        k = draw(st.integers(0, max_size))
        sizes = (k, k, k)
    else:
        sizes = tuple(draw(st.integers(0, max_size)) for _ in range(3))
    if min(sizes) == 0:
        return TdmInstance(*sizes)
    triple = st.tuples(*(st.integers(1, s) for s in sizes))
    triples = draw(st.lists(triple, max_size=max_triples, unique=True))
    return TdmInstance(*sizes, tuple(triples))


def planted_instance(rng, k, extra):
    """A k-per-axis instance with one planted perfect matching plus random noise triples."""
    xs, ys = list(range(1, k + 1)), list(range(1, k + 1))
    rng.shuffle(xs)
    rng.shuffle(ys)
    triples = {(w, x, y) for w, x, y in zip(range(1, k + 1), xs, ys)}
    while len(triples) < k + extra:
        triples.add((rng.randint(1, k), rng.randint(1, k), rng.randint(1, k)))
    triples = sorted(triples)
    rng.shuffle(triples)
    return TdmInstance(k, k, k, tuple(triples))


class TestExactCoverEngine:
    def test_knuth_example(self):
        # columns A..G = 0..6; the unique cover is rows 0, 3, 4
        rows = [(2, 4, 5), (0, 3, 6), (1, 2, 5), (0, 3), (1, 6), (3, 4, 6)]
        assert exact_cover.solve(7, rows) == (0, 3, 4)

    def test_empty_problem(self):
        assert exact_cover.solve(0, []) == ()

    def test_uncoverable_column(self):
        assert exact_cover.solve(2, [(0,)]) is None

    def test_repeated_column_rejected(self):
        with pytest.raises(ValueError):
            exact_cover.solve(2, [(0, 0)])

    def test_first_candidate_wins(self):
        assert exact_cover.solve(2, [(0, 1), (0, 1), (0,), (1,)]) == (0,)


class TestVerifyMatching:
    def test_accept_singleton(self):
        assert verify_matching(SINGLE, [1])

    def test_reject_empty(self):
        verdict = verify_matching(SINGLE, [])
        assert not verdict
        assert (verdict.element, verdict.count) == (ElementId("W", 1), 0)
        assert str(verdict) == "REJECT (W:1 covered 0 times)"

    def test_reject_double_cover(self):
        inst = TdmInstance(2, 2, 2, ((1, 1, 1), (2, 1, 2)))
        verdict = verify_matching(inst, [1, 2])
        assert (verdict.element, verdict.count) == (ElementId("X", 1), 2)

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            verify_matching(SINGLE, [2])

    def test_embedded_certificate_on_reduction(self):
        inst, rm = reduce(StrictFormula.from_ints(3, [[1, 2, 3]]))
        chosen = embed_assignment(rm, {1: True, 2: True, 3: True})
        assert len(chosen) == 6
        assert verify_matching(inst, chosen)
        assert covers_exactly(inst.sizes, inst.triples, [i - 1 for i in chosen])


class TestSolveExact:
    def test_singleton(self):
        assert solve_exact(SINGLE) == (1,)

    def test_no_triples(self):
        assert solve_exact(TdmInstance(1, 1, 1)) is None

    def test_unequal_sizes(self):
        assert solve_exact(TdmInstance(2, 1, 1, ((1, 1, 1), (2, 1, 1)))) is None

    def test_all_polarity_reduction(self):
        inst, _ = reduce(all_polarity_formula())
        assert solve_exact(inst) is None

    def test_tie_break(self):
        inst = TdmInstance(2, 2, 2, ((1, 2, 2), (1, 1, 1), (2, 1, 1), (2, 2, 2)))
        # W:1 has two candidates and is branched first; triple 1 is tried first
        assert solve_exact(inst) == (1, 3)

    @settings(max_examples=300, deadline=None)
    @given(tdm_instances())
    def test_complete_against_enumeration(self, inst):
        found = solve_exact(inst)
        assert (found is not None) == naive_perfect_matching_exists(inst.sizes, inst.triples)
        if found is not None:
            assert verify_matching(inst, found)
            assert list(found) == sorted(set(found))

    @settings(max_examples=100, deadline=None)
    @given(tdm_instances(max_size=3, max_triples=8, equal=False))
    def test_unequal_axes_never_match(self, inst):
        if len(set(inst.sizes)) > 1:
            assert solve_exact(inst) is None

    @pytest.mark.parametrize("seed", range(6))
    def test_planted_twelve_per_axis(self, seed):
        rng = random.Random(seed)
        inst = planted_instance(rng, 12, 4)
        found = solve_exact(inst)
        assert found is not None and verify_matching(inst, found)
        assert naive_perfect_matching_exists(inst.sizes, inst.triples)

    @given(tdm_instances())
    def test_deterministic(self, inst):
        assert solve_exact(inst) == solve_exact(inst)


class TestX3c:
    def test_to_x3c_renumbering(self):
        x = to_x3c(SINGLE)
        assert x == X3cInstance(3, ((1, 2, 3),))

    def test_to_x3c_of_reduction(self):
        inst, _ = reduce(StrictFormula.from_ints(3, [[1, 2, 3]]))
        x = to_x3c(inst)
        assert x.universe_size == 18
        assert len(x.sets) == 21

    def test_to_x3c_rejects_unequal(self):
        with pytest.raises(ValueError, match="differ"):
            to_x3c(TdmInstance(2, 1, 1, ((1, 1, 1),)))

    def test_verify_cover(self):
        assert verify_cover(X3cInstance(3, ((1, 2, 3),)), [1])
        assert not verify_cover(X3cInstance(3, ((1, 2, 3),)), [])
        six = X3cInstance(6, ((1, 2, 3), (1, 2, 4), (4, 5, 6)))
        assert verify_cover(six, [1, 3])
        assert not verify_cover(six, [1, 2])
        with pytest.raises(IndexError):
            verify_cover(six, [4])

    def test_solve(self):
        assert solve_x3c(X3cInstance(3, ((1, 2, 3),))) == (1,)
        assert solve_x3c(X3cInstance(3, ((1, 2, 3), (1, 2, 3)))) == (1,)
        assert solve_x3c(X3cInstance(6, ((1, 2, 3), (3, 4, 5)))) is None

    def test_model_validation(self):
        with pytest.raises(ValueError):
            X3cInstance(4)
        with pytest.raises(ValueError):
            X3cInstance(3, ((1, 1, 2),))
        with pytest.raises(ValueError):
            X3cInstance(3, ((1, 2, 4),))

    @settings(max_examples=200, deadline=None)
    @given(tdm_instances())
    def test_decision_and_certificate_preserved(self, inst):
        found = solve_exact(inst)
        x = to_x3c(inst)
        cover = solve_x3c(x)
        assert (found is None) == (cover is None)
        if cover is not None:
            assert verify_cover(x, cover)
            assert verify_matching(inst, cover)
            assert cover == found


class TestInstanceModel:
    def test_duplicate_triple(self):
        with pytest.raises(ValueError, match="duplicate"):
            TdmInstance(1, 1, 1, ((1, 1, 1), (1, 1, 1)))

    def test_index_range(self):
        with pytest.raises(ValueError):
            TdmInstance(1, 1, 1, ((1, 2, 1),))

    def test_labels(self):
        with pytest.raises(ValueError, match="repeated"):
            TdmInstance(2, 1, 1, labels={ElementId("W", 1): "a", ElementId("W", 2): "a"})
        with pytest.raises(ValueError, match="whitespace"):
            TdmInstance(1, 1, 1, labels={ElementId("W", 1): "a b"})
        inst = TdmInstance(1, 1, 1, labels={ElementId("W", 1): "a", ElementId("X", 1): "a"})
        assert inst.label(ElementId("X", 1)) == "a"
        assert inst.label(ElementId("Y", 1)) == "Y:1"


class TestFormats:
    def test_tdm_layout(self):
        inst = TdmInstance(1, 1, 1, ((1, 1, 1),), {ElementId("X", 1): "a[1,1]", ElementId("W", 1): "c[1,1]"})
        text = format_tdm(inst, ["hello"])
        assert text == "c hello\np 3dm 1 1 1 1\ne w 1 c[1,1]\ne x 1 a[1,1]\nt 1 1 1\n"
        assert parse_tdm(text) == inst
        assert comment_lines(text) == ["hello"]

    @given(tdm_instances(equal=False))
    def test_tdm_roundtrip(self, inst):
        assert parse_tdm(format_tdm(inst)) == inst

    @given(tdm_instances())
    def test_x3c_roundtrip(self, inst):
        x = to_x3c(inst)
        assert parse_x3c(format_x3c(x)) == x

    def test_x3c_layout(self):
        assert format_x3c(X3cInstance(3, ((1, 2, 3),))) == "p x3c 3 1\ns 1 2 3\n"

    @pytest.mark.parametrize("kind, word", [("3dm", "MATCH"), ("x3c", "COVER")])
    def test_certificates(self, kind, word):
        assert format_selection(kind, (1, 4)) == f"s {kind} {word}\nm 1 4 0\n"
        assert format_selection(kind, None) == f"s {kind} NONE\n"
        assert parse_selection(kind, f"s {kind} {word}\nm 1 4 0\n") == (1, 4)
        assert parse_selection(kind, f"s {kind} {word}\nm 0\n") == ()
        assert parse_selection(kind, f"s {kind} NONE\n") is None

    @pytest.mark.parametrize(
        "text",
        ["", "s 3dm MATCH\n", "s 3dm MATCH\nm 2 1 0\n", "s 3dm MATCH\nm 1 2\n", "s 3dm YES\nm 0\n",
         "s 3dm NONE\nm 0\n", "s 3dm MATCH\nm 1 0 2 0\n"],
    )
    def test_bad_certificates(self, text):
        with pytest.raises(FormatError):
            parse_selection("3dm", text)

    @pytest.mark.parametrize(
        "text, message",
        [
            ("t 1 1 1\n", "before"),
            ("p 3dm 1 1 1 2\nt 1 1 1\n", "declares 2"),
            ("p 3dm 1 1 1 1\nt 1 1 2\n", "outside"),
            ("p 3dm 1 1 1 1\nq 1\n", "unknown"),
            ("p 3dm 1 1 1\n", "expected"),
            ("p 3dm 1 1 1 1\ne z 1 foo\nt 1 1 1\n", "expected"),
        ],
    )
    def test_bad_tdm(self, text, message):
        with pytest.raises(FormatError, match=message):
            parse_tdm(text)

    @pytest.mark.parametrize(
        "text, kind",
        [
            ("c x\np cnf 1 0\n", "cnf"),
            ("p 3dm 0 0 0 0\n", "3dm"),
            ("p x3c 3 0\n", "x3c"),
            ("s cnf SAT\nv 0\n", "cnf-cert"),
            ("s 3dm NONE\n", "3dm-cert"),
            ("s x3c COVER\nm 0\n", "x3c-cert"),
        ],
    )
    def test_detect_kind(self, text, kind):
        assert detect_kind(text) == kind

    def test_detect_kind_garbage(self):
        with pytest.raises(FormatError):
            detect_kind("hello world\n")
