from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sat3dm.formula import Formula, StrictFormula, evaluate
from sat3dm.oracle import (
    CSV_HEADER,
    GenConfig,
    SplitMix64,
    all_polarity_formula,
    equivalence_check,
    gen_random,
    report_csv,
    run_suite,
    sat_brute,
    summarize,
)


class TestSplitMix64:
    def test_reference_outputs(self):
        # published SplitMix64 outputs for seed 1234567
        rng = SplitMix64(1234567)
        assert [rng.next() for _ in range(5)] == [
            6457827717110365317,
            3203168211198807973,
            9817491932198370423,
            4593380528125082431,
            16408922859458223821,
        ]

    def test_seed_zero(self):
        assert SplitMix64(0).next() == 0xE220A8397B1DCDAF


class TestGenRandom:
    def test_deterministic(self):
        cfg = GenConfig(5, 8, 42)
        assert gen_random(cfg) == gen_random(cfg)
        assert gen_random(cfg) != gen_random(GenConfig(5, 8, 43))

    def test_frozen_instance(self):
        # pins the generator layout: two words per slot, var = 1 + w1 % n, sign = top bit of w2
        assert gen_random(GenConfig(5, 8, 42)).to_ints() == [
            [4, 4, -1], [-1, -1, 3], [-4, 2, 5], [-3, 3, -1],
            [3, -3, -4], [-2, -4, 1], [4, 5, 2], [-5, 4, 2],
        ]

    @given(st.integers(1, 9), st.integers(1, 9), st.integers(0, 2**64 - 1))
    def test_range(self, n, m, seed):
        f = gen_random(GenConfig(n, m, seed))
        assert isinstance(f, StrictFormula)
        assert f.num_clauses == m
        assert all(1 <= lit.variable <= n for c in f.clauses for lit in c)

    def test_invalid_config(self):
        with pytest.raises(ValueError):
            GenConfig(0, 1, 1)
        with pytest.raises(ValueError):
            GenConfig(1, 1, -1)


class TestSatBrute:
    def test_lexicographic_first(self):
        f = StrictFormula.from_ints(3, [[1, 2, 3]])
        assert sat_brute(f) == {1: False, 2: False, 3: True}

    def test_all_polarity(self):
        assert sat_brute(all_polarity_formula()) is None

    def test_empty_formula(self):
        assert sat_brute(Formula(0, ())) == {}
        assert sat_brute(Formula(2, ())) == {1: False, 2: False}

    def test_empty_clause(self):
        assert sat_brute(Formula.from_ints(1, [[1], []])) is None

    def test_guard(self):
        with pytest.raises(ValueError, match="limit"):
            sat_brute(Formula(25, ()))

    @given(st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v])), max_size=3),
                           max_size=8).map(lambda cs: Formula.from_ints(n, cs))))
    def test_decision_oracle(self, f):
        models = [dict(enumerate(bits, 1)) for bits in product([False, True], repeat=f.num_vars)
                  if evaluate(f, dict(enumerate(bits, 1)))]
        found = sat_brute(f)
        if models:
            assert found == models[0]
        else:
            assert found is None


class TestEquivalenceCheck:
    def test_hand(self):
        rec = equivalence_check(StrictFormula.from_ints(3, [[1, 2, 3]]))
        assert (rec.sat, rec.linear, rec.gj, rec.x3c, rec.roundtrip) == ("SAT", "MATCH", "MATCH", "COVER", "ok")
        assert (rec.W, rec.X, rec.Y, rec.M_linear, rec.M_gj) == (6, 6, 6, 21, 21)
        assert rec.agrees

    def test_all_polarity(self):
        rec = equivalence_check(all_polarity_formula())
        assert (rec.sat, rec.linear, rec.gj, rec.x3c) == ("UNSAT", "NONE", "NONE", "NONE")
        assert rec.agrees

    def test_non_strict_input(self):
        rec = equivalence_check(Formula.from_ints(5, [[1, 2, 3, 4, 5], [-1], [-2, -3]]))
        assert rec.agrees and rec.sat == "SAT" and rec.roundtrip == "ok"

    def test_gj_budget_skip_is_recorded(self):
        rec = equivalence_check(all_polarity_formula(), gj_budget=10)
        assert rec.gj == "SKIP" and rec.M_gj == 840 and rec.agrees

    def test_degenerate_inputs(self):
        assert equivalence_check(Formula(2, ())).linear == "SKIP"
        rec = equivalence_check(Formula.from_ints(1, [[]]))
        assert rec.sat == "UNSAT" and rec.agrees

    def test_disagreement_detected(self):
        rec = equivalence_check(StrictFormula.from_ints(3, [[1, 2, 3]]))
        rec.linear = "NONE"
        assert not rec.agrees

    def test_errors_recorded_not_raised(self):
        rec = equivalence_check(Formula(30, ()))
        assert rec.roundtrip.startswith("error:")
        assert not rec.agrees

    def test_csv(self):
        records = run_suite([GenConfig(3, 2, 1), GenConfig(3, 2, 2)])
        text = report_csv(records)
        lines = text.splitlines()
        assert lines[0] == "seed,n,m,sat,linear,gj,x3c,roundtrip,W,X,Y,M_linear,M_gj"
        assert lines[0].split(",") == CSV_HEADER
        assert lines[1].startswith("1,3,2,")
        assert len(lines) == 3
        assert summarize(records)["disagree"] == 0
