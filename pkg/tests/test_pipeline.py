import json
import math
import re
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beyondmean.descriptives import GroupSample
from beyondmean.errors import (
    DataError,
    DegenerateDataError,
    DomainError,
    HeaderError,
    LabelCountError,
    PairingError,
    ParseError,
    ScoreParseError,
    UsageError,
)
from beyondmean.pipeline import (
    BETWEEN,
    WITHIN,
    ExperimentDataset,
    analyze,
    dataset_to_csv,
    parse_dataset,
    render_report,
    report_to_dict,
)
from beyondmean.simulation import SimulationScenario, simulate_experiment
from beyondmean.specfun import BetaParams, beta_from_moments

DATA = Path(__file__).parent / "data"

BETWEEN_CSV = b"subject,group,score\ns1,A,0.41\ns2,A,0.52\ns3,B,0.38\ns4,B,0.61\n"
WITHIN_CSV = (
    "subject,treatment,score\n"
    "s1,ITL,0.40\ns1,TDD,0.45\n"
    "s2,ITL,0.62\ns2,TDD,0.58\n"
    "s3,ITL,0.15\ns3,TDD,0.35\n"
    "s4,ITL,0.90\ns4,TDD,0.71\n"
)


def _matching(n, mean, sd, label):
    """Sample whose mean and sd reproduce the given summaries exactly (up to rounding)."""
    z = np.arange(1, n + 1, dtype=float) ** 1.5
    z = (z - z.mean()) / z.std(ddof=1)
    return GroupSample(label, tuple(mean + sd * z))


def _between(control, treatment):
    nc, nt = len(control.scores), len(treatment.scores)
    return ExperimentDataset(BETWEEN, control, treatment,
                             tuple(f"c{i}" for i in range(nc)), tuple(f"t{i}" for i in range(nt)))


def _simulated(seed=11, n=15):
    return simulate_experiment(SimulationScenario(BetaParams(12, 18), BetaParams(2, 3), n, seed))


class TestParse:
    def test_between(self):
        d = parse_dataset(BETWEEN_CSV, "between")
        assert d.design == BETWEEN
        assert d.labels == ("A", "B")
        assert d.control.scores == (0.41, 0.52) and d.treatment.scores == (0.38, 0.61)

    def test_within_pairs_by_subject(self):
        shuffled = "subject,treatment,score\ns2,TDD,0.58\ns1,ITL,0.40\ns2,ITL,0.62\ns1,TDD,0.45\n"
        d = parse_dataset(shuffled, "within")
        assert d.design == WITHIN
        assert dict(zip(d.control_subjects, d.pairs())) == {"s2": (0.58, 0.62), "s1": (0.45, 0.40)}

    def test_accepts_stream_and_bom(self):
        import io

        d = parse_dataset(io.BytesIO(b"\xef\xbb\xbf" + BETWEEN_CSV), "between_subjects")
        assert d.labels == ("A", "B")

    def test_blank_lines_skipped_but_counted(self):
        with pytest.raises(ScoreParseError) as e:
            parse_dataset("subject,group,score\n\ns1,A,x\n", "between")
        assert e.value.line == 3

    def test_round_trip(self):
        d = _simulated()
        assert parse_dataset(dataset_to_csv(d), "between") == d
        w = parse_dataset(WITHIN_CSV, "within")
        assert parse_dataset(dataset_to_csv(w), "within") == w

    def test_comma_decimal(self):
        with pytest.raises(ScoreParseError) as e:
            parse_dataset("subject,group,score\ns1,A,0.3\ns2,A,0,42\ns3,B,0.5\n", "between")
        assert e.value.line == 3
        assert str(e.value).startswith("line 3:") and "0,42" in str(e.value)

    @pytest.mark.parametrize("text, line", [
        ("subject,group\ns1,A\n", 1),
        ("subject,treatment,score\ns1,A,1\n", 1),
        ("", 1),
    ])
    def test_bad_header(self, text, line):
        with pytest.raises(HeaderError) as e:
            parse_dataset(text, "between")
        assert e.value.line == line

    def test_missing_column(self):
        with pytest.raises(ParseError) as e:
            parse_dataset("subject,group,score\ns1,A,0.1\ns2,B\n", "between")
        assert e.value.line == 3

    def test_extra_column(self):
        with pytest.raises(ParseError) as e:
            parse_dataset("subject,group,score\ns1,A,0.1,x,y\n", "between")
        assert e.value.line == 2

    @pytest.mark.parametrize("score", ["abc", "nan", "inf", ""])
    def test_non_numeric(self, score):
        with pytest.raises(ScoreParseError):
            parse_dataset(f"subject,group,score\ns1,A,{score}\ns2,B,1\n", "between")

    @pytest.mark.parametrize("groups", [["A", "A"], ["A", "B", "C"]])
    def test_label_count(self, groups):
        rows = "".join(f"s{i},{g},0.{i + 1}\n" for i, g in enumerate(groups))
        with pytest.raises(LabelCountError):
            parse_dataset("subject,group,score\n" + rows, "between")

    def test_within_missing_arm_names_subject(self):
        text = "subject,treatment,score\ns1,X,1\ns1,Y,2\ns2,X,1\ns2,Y,3\ns3,X,5\n"
        with pytest.raises(PairingError) as e:
            parse_dataset(text, "within")
        assert "'s3'" in str(e.value) and e.value.line == 6

    def test_within_duplicate(self):
        with pytest.raises(PairingError) as e:
            parse_dataset("subject,treatment,score\ns1,X,1\ns1,X,2\ns1,Y,3\n", "within")
        assert e.value.line == 3

    def test_bad_design(self):
        with pytest.raises(UsageError):
            parse_dataset(BETWEEN_CSV, "crossover")

    def test_within_invariants(self):
        with pytest.raises(PairingError):
            ExperimentDataset(WITHIN, GroupSample("a", (1, 2)), GroupSample("b", (1, 2, 3)), ("s1", "s2"), ("s1", "s2", "s3"))
        with pytest.raises(DataError):
            ExperimentDataset(BETWEEN, GroupSample("a", (1, 2)), GroupSample("a", (3, 4)), ("1", "2"), ("3", "4"))


class TestAnalyze:
    def test_simulated_report_is_complete(self):
        r = analyze(_simulated())
        assert r.design == BETWEEN
        assert [c.target for c in r.normality] == ["A", "B"]
        assert all(c.result is not None for c in r.normality)
        assert 0 <= r.variance_test.p_value <= 1
        assert r.variance_test.test_name == "Brown-Forsythe"
        assert r.mean_test.test_name == "Independent t-test"
        assert r.ln_cvr is not None and r.hedges_g is not None

    def test_estimate_matches_descriptives(self):
        r = analyze(_simulated(seed=3))
        assert r.mean_test.estimate == pytest.approx(r.treatment.mean - r.control.mean, abs=1e-15)

    def test_within(self):
        r = analyze(parse_dataset(WITHIN_CSV, "within"))
        assert r.mean_test.test_name == "Dependent t-test"
        assert [c.target for c in r.normality] == ["difference"]
        assert r.mean_test.df == (3.0,)

    def test_table4_summaries(self):
        d = _between(_matching(20, 0.416, 0.317, "ITL"), _matching(20, 0.383, 0.225, "TDD"))
        r = analyze(d)
        assert (r.control.mean, r.control.sd) == pytest.approx((0.416, 0.317), abs=1e-12)
        assert r.ln_cvr.value == pytest.approx(-0.260, abs=0.005)
        assert r.hedges_g.value == pytest.approx(-0.118, abs=0.01)

    def test_control_label(self):
        d = _simulated()
        assert analyze(d, control_label="B").control_label == "B"
        with pytest.raises(UsageError):
            analyze(d, control_label="Z")

    @pytest.mark.parametrize("alpha", [0, 1, -0.5])
    def test_bad_alpha(self, alpha):
        with pytest.raises(DomainError):
            analyze(_simulated(), alpha=alpha)

    def test_flags_follow_p_values(self):
        for alpha in (0.001, 0.05, 0.5):
            r = analyze(_simulated(), alpha=alpha)
            f = r.flags
            assert f["equal_variances_met"] == (r.variance_test.p_value >= alpha)
            assert f["variance_difference_significant"] == (r.variance_test.p_value < alpha)
            assert f["mean_difference_significant"] == (r.mean_test.p_value < alpha)
            assert f["normality_met"] == all(c.result.p_value >= alpha for c in r.normality)

    def test_small_arm_skips_normality(self):
        d = _between(GroupSample("a", (0.1, 0.3)), GroupSample("b", (0.2, 0.5, 0.9)))
        r = analyze(d)
        assert r.normality[0].result is None and r.normality[0].note
        assert r.flags["normality_met"] is not None

    def test_non_positive_mean_marks_cv_undefined(self):
        d = _between(GroupSample("a", (-1.0, 0.5, -0.2)), GroupSample("b", (0.2, 0.5, 0.9)))
        r = analyze(d)
        assert r.ln_cvr is None and r.ln_cvr_note == "undefined: non-positive mean"
        assert r.cv_control is None
        doc = report_to_dict(r)
        assert doc["arms"]["control"]["cv"] is None
        assert "undefined: non-positive mean" in render_report(r, "text").decode()

    def test_degenerate_propagates_with_context(self):
        d = _between(GroupSample("a", (1.0, 1.0, 1.0)), GroupSample("b", (1.0, 1.0, 1.0)))
        with pytest.raises(DegenerateDataError, match="Brown-Forsythe"):
            analyze(d)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2 ** 64 - 1), st.integers(3, 40))
    def test_label_swap_coherence(self, seed, n):
        d = _simulated(seed=seed, n=n)
        r, s = analyze(d), analyze(d, control_label="B")
        assert s.mean_test.estimate == pytest.approx(-r.mean_test.estimate, abs=1e-15)
        assert s.mean_test.p_value == pytest.approx(r.mean_test.p_value, abs=1e-14)
        assert s.hedges_g.value == pytest.approx(-r.hedges_g.value, abs=1e-15)
        assert s.ln_cvr.value == pytest.approx(-r.ln_cvr.value, abs=1e-12)
        assert s.variance_test.p_value == pytest.approx(r.variance_test.p_value, abs=1e-14)
        assert sorted(c.result.p_value for c in s.normality) == sorted(c.result.p_value for c in r.normality)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.05, 0.95), st.floats(0.01, 1.0), st.floats(0.05, 0.95), st.floats(0.01, 1.0),
           st.integers(2, 30), st.integers(0, 2 ** 64 - 1))
    def test_simulate_analyze_never_errors(self, ma, fa, mb, fb, n, seed):
        # sd as a fraction of the feasible maximum sqrt(m(1-m))
        pa = beta_from_moments(ma, 0.999 * fa * math.sqrt(ma * (1 - ma)))
        pb = beta_from_moments(mb, 0.999 * fb * math.sqrt(mb * (1 - mb)))
        r = analyze(simulate_experiment(SimulationScenario(pa, pb, n, seed)))
        assert 0 <= r.mean_test.p_value <= 1


class TestRender:
    def test_json_schema(self):
        doc = json.loads(render_report(analyze(_simulated()), "json"))
        assert doc["schema_version"] == "1" and doc["kind"] == "analysis_report"
        assert set(doc) == {"schema_version", "kind", "design", "alpha", "arms", "normality",
                            "variance_test", "mean_test", "effect_sizes", "flags"}
        assert set(doc["effect_sizes"]["ln_cvr"]) == {"name", "value", "exp_value", "percent_change",
                                                      "reciprocal_percent_change"}

    def test_byte_identical_reruns(self):
        d = _simulated()
        for fmt in ("json", "text"):
            assert render_report(analyze(d), fmt) == render_report(analyze(d), fmt)

    def test_json_and_text_agree(self):
        r = analyze(_simulated(seed=5))
        doc = json.loads(render_report(r, "json"))
        text = render_report(r, "text").decode()
        for value in (doc["arms"]["control"]["mean"], doc["arms"]["treatment"]["sd"],
                      doc["variance_test"]["statistic"], doc["mean_test"]["statistic"],
                      doc["effect_sizes"]["hedges_g"]["value"], doc["effect_sizes"]["ln_cvr"]["value"]):
            assert f"{value:.3f}" in text

    def test_table4_text_has_both_phrasings(self):
        d = _between(_matching(20, 0.416, 0.317, "ITL"), _matching(20, 0.383, 0.225, "TDD"))
        text = render_report(analyze(d), "text").decode()
        assert "0.771" in text
        assert re.search(r"22\.9% less variable", text)
        assert re.search(r"29\.7% more variable", text)

    def test_tiny_p_value(self):
        d = _between(_matching(30, 0.5, 0.01, "a"), _matching(30, 0.5, 0.3, "b"))
        assert "< 0.001" in render_report(analyze(d), "text").decode()

    def test_bad_format(self):
        with pytest.raises(UsageError):
            render_report(analyze(_simulated()), "xml")

    def test_golden(self):
        d = parse_dataset((DATA / "golden_input.csv").read_bytes(), "between")
        got = json.loads(render_report(analyze(d), "json"))
        expected = json.loads((DATA / "golden_report.json").read_text())
        assert_same_document(got, expected)


def assert_same_document(got, expected, path="$"):
    """Structural equality; floats compared to 1e-12 relative to absorb libm last-bit differences."""
    if isinstance(expected, dict):
        assert isinstance(got, dict) and set(got) == set(expected), path
        for k in expected:
            assert_same_document(got[k], expected[k], f"{path}.{k}")
    elif isinstance(expected, list):
        assert isinstance(got, list) and len(got) == len(expected), path
        for i, (g, e) in enumerate(zip(got, expected)):
            assert_same_document(g, e, f"{path}[{i}]")
    elif isinstance(expected, float) and not isinstance(expected, bool):
        assert got == pytest.approx(expected, rel=1e-12, abs=1e-300), path
    else:
        assert got == expected, path
