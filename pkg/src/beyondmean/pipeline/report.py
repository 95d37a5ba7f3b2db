"""Text and JSON rendering of analysis and power-study reports.

JSON documents carry ``schema_version`` and ``kind`` keys; the full layout
is documented in the README. Floats are written at full precision.
Non-finite numbers (an infinite F when one arm has no spread) are written
as the strings ``"inf"``, ``"-inf"`` or ``"nan"`` so the output stays valid JSON.
"""

import json
import math
from typing import TYPE_CHECKING, Optional

from ..effect_sizes import reciprocal_variability_change_percent, variability_change_percent
from ..errors import UsageError
from ..stattests import TestResult
from .analysis import AnalysisReport
from .dataset import WITHIN

if TYPE_CHECKING:
    from ..simulation import PowerReport

SCHEMA_VERSION = "1"


def _num(x):
    if x is None:
        return None
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def _test_dict(t: Optional[TestResult]):
    if t is None:
        return None
    return {
        "test_name": t.test_name,
        "statistic": _num(t.statistic),
        "df": [_num(v) for v in t.df],
        "p_value": _num(t.p_value),
        "estimate": _num(t.estimate),
    }


def report_to_dict(r: AnalysisReport) -> dict:
    def arm(label, s, cv):
        return {"label": label, "n": s.n, "mean": _num(s.mean), "sd": _num(s.sd),
                "median": _num(s.median), "cv": _num(cv)}

    if r.ln_cvr is not None:
        cvr = {
            "name": r.ln_cvr.name,
            "value": _num(r.ln_cvr.value),
            "exp_value": _num(r.ln_cvr.auxiliary),
            "percent_change": _num(variability_change_percent(r.ln_cvr)),
            "reciprocal_percent_change": _num(reciprocal_variability_change_percent(r.ln_cvr)),
        }
    else:
        cvr = None
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "analysis_report",
        "design": r.design,
        "alpha": r.alpha,
        "arms": {
            "control": arm(r.control_label, r.control, r.cv_control),
            "treatment": arm(r.treatment_label, r.treatment, r.cv_treatment),
        },
        "normality": [
            {"target": c.target, "test": _test_dict(c.result), "note": c.note} for c in r.normality
        ],
        "variance_test": _test_dict(r.variance_test),
        "mean_test": _test_dict(r.mean_test),
        "effect_sizes": {
            "hedges_g": {"name": r.hedges_g.name, "value": _num(r.hedges_g.value)},
            "ln_cvr": cvr,
            "ln_cvr_note": r.ln_cvr_note,
        },
        "flags": r.flags,
    }


def power_report_to_dict(p: "PowerReport") -> dict:
    from ..simulation import describe_population

    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "power_report",
        "alpha": p.alpha,
        "master_seed": p.master_seed,
        "population_a": describe_population(p.population_a),
        "population_b": describe_population(p.population_b),
        "entries": [
            {
                "n": e.n,
                "replications": e.replications,
                "alpha": e.alpha,
                "rejection_rate_bf": e.rejection_rate_bf,
                "rejection_rate_t": e.rejection_rate_t,
                "mc_se_bf": e.mc_se_bf,
                "mc_se_t": e.mc_se_t,
                "degenerate_bf": e.degenerate_bf,
                "degenerate_t": e.degenerate_t,
            }
            for e in p.entries
        ],
    }


def _dump(doc: dict) -> bytes:
    return (json.dumps(doc, indent=2, allow_nan=False) + "\n").encode("utf-8")


def _f(x, digits=3):
    if x is None:
        return "-"
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return f"{x:.{digits}f}"


def _p(p):
    return "< 0.001" if p < 0.001 else _f(p)


def _variability_lines(r: AnalysisReport) -> list[str]:
    e = r.ln_cvr
    t, c = r.treatment_label, r.control_label
    pct = variability_change_percent(e)
    rec = reciprocal_variability_change_percent(e)
    word = "less" if pct < 0 else "more"
    rec_word = "more" if rec > 0 else "less"
    return [
        f"lnCVR        {_f(e.value):>8}   exp(lnCVR) = {_f(e.auxiliary)}",
        f"  {t} is {abs(pct):.1f}% {word} variable than {c} (CV ratio {t}/{c} - 1 = {pct:+.1f}%)",
        f"  {c} is {abs(rec):.1f}% {rec_word} variable than {t} (CV ratio {c}/{t} - 1 = {rec:+.1f}%)",
    ]


def render_text(r: AnalysisReport) -> str:
    design = "within-subjects" if r.design == WITHIN else "between-subjects"
    lines = [
        f"Two-arm analysis ({design} design), alpha = {r.alpha:g}",
        f"Control: {r.control_label}   Treatment: {r.treatment_label}",
        "",
        "Descriptive statistics",
        f"{'Treatment':<12}{'N':>5}{'Mean':>9}{'SD':>9}{'Median':>9}{'CV':>9}",
    ]
    for label, s, cv in ((r.control_label, r.control, r.cv_control),
                         (r.treatment_label, r.treatment, r.cv_treatment)):
        lines.append(f"{label:<12}{s.n:>5}{_f(s.mean):>9}{_f(s.sd):>9}{_f(s.median):>9}{_f(cv):>9}")

    lines += ["", "Normality (Shapiro-Wilk)", f"{'Target':<12}{'W':>9}{'p-value':>10}"]
    for check in r.normality:
        if check.result is None:
            lines.append(f"{check.target:<12}  {check.note}")
        else:
            lines.append(f"{check.target:<12}{_f(check.result.statistic):>9}{_p(check.result.p_value):>10}")

    v = r.variance_test
    lines += [
        "",
        "Homogeneity of variances (Brown-Forsythe)",
        f"F({v.df[0]:g}, {v.df[1]:g}) = {_f(v.statistic)}, p-value {_p(v.p_value) if v.p_value < 0.001 else '= ' + _p(v.p_value)}",
        "",
        f"{r.mean_test.test_name} ({r.treatment_label} - {r.control_label}), df = {r.mean_test.df[0]:g}",
        f"{'Coeff.':<8}{'Estimate':>10}{'t-statistic':>13}{'p-value':>10}",
        f"{'Diff':<8}{_f(r.mean_test.estimate):>10}{_f(r.mean_test.statistic):>13}{_p(r.mean_test.p_value):>10}",
        "",
        "Effect sizes",
        f"Hedges' g    {_f(r.hedges_g.value):>8}",
    ]
    if r.ln_cvr is not None:
        lines += _variability_lines(r)
    else:
        lines.append(f"lnCVR        {r.ln_cvr_note}")

    flags = r.flags

    def verdict(ok):
        return "not tested" if ok is None else ("met" if ok else "violated")

    lines += [
        "",
        f"Assumption checks at alpha = {r.alpha:g}",
        f"  normality: {verdict(flags['normality_met'])}",
        f"  equal variances: {verdict(flags['equal_variances_met'])}",
        f"  mean difference significant: {'yes' if flags['mean_difference_significant'] else 'no'}",
        f"  variance difference significant: {'yes' if flags['variance_difference_significant'] else 'no'}",
    ]
    return "\n".join(lines) + "\n"


def render_report(r: AnalysisReport, format: str = "text") -> bytes:
    """Render as ``"text"`` (fixed-width tables) or ``"json"``."""
    if format == "json":
        return _dump(report_to_dict(r))
    if format == "text":
        return render_text(r).encode("utf-8")
    raise UsageError(f"format must be 'text' or 'json', got {format!r}")


def render_power_report(p: "PowerReport", format: str = "json") -> bytes:
    from ..simulation import describe_population

    if format == "json":
        return _dump(power_report_to_dict(p))
    if format != "text":
        raise UsageError(f"format must be 'text' or 'json', got {format!r}")
    a, b = describe_population(p.population_a), describe_population(p.population_b)
    lines = [
        f"Power study: Beta({a['alpha']:g}, {a['beta']:g}) vs Beta({b['alpha']:g}, {b['beta']:g}), "
        f"alpha = {p.alpha:g}, seed = {p.master_seed}",
        f"{'n':>6}{'reps':>8}{'BF power':>10}{'(se)':>8}{'t power':>10}{'(se)':>8}",
    ]
    for e in p.entries:
        lines.append(f"{e.n:>6}{e.replications:>8}{e.rejection_rate_bf:>10.4f}{e.mc_se_bf:>8.4f}"
                     f"{e.rejection_rate_t:>10.4f}{e.mc_se_t:>8.4f}")
    return ("\n".join(lines) + "\n").encode("utf-8")
