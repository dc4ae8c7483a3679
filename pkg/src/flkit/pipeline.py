"""Pipeline orchestration: run FL families over a corpus, evaluate, and report."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import combine as cmb
from . import mbfl, sbfl
from .corpus import PROGRAM_FILE, FaultBundle, ScoreRecord
from .irhist import history_rank_files, ir_rank_files, propagate_file_scores
from .metrics import (
    CorrelationUndefinedError,
    NotLocalizedError,
    e_inspect_at_n,
    expected_first_faulty_rank,
    r_squared,
)
from .minilang import gen_mutants, run
from .model import ScoredList, full_universe_ranking, lift_to_method_granularity
from .predswitch import critical_predicates_for_tests
from .slicing import Strategy, backward_slice, combine_slices
from .stacktrace import score_stack_traces

AT_N = (1, 3, 5, 10)

# Step budget for mutant and predicate-flip re-executions; both can loop
# forever, and desk-scale corpus programs stay far below this.
REEXEC_STEP_BUDGET = 5_000


class PipelineError(Exception):
    pass


@dataclass
class FaultAnalysis:
    """Per-fault technique scores (statement granularity) plus family timings."""

    bundle: FaultBundle
    scores: dict = field(default_factory=dict)  # technique_id -> ScoredList
    timings: dict = field(default_factory=dict)  # family -> seconds


def analyze_fault(
    bundle: FaultBundle,
    families: Sequence[str],
    reexec_step_budget: int = REEXEC_STEP_BUDGET,
) -> FaultAnalysis:
    """Run the requested FL families on one fault.

    Raises PipelineError listing families whose required inputs are absent.
    """
    missing = []
    if "ir" in families and bundle.bug_report is None:
        missing.append("ir (no report.txt)")
    if "history" in families and bundle.commits is None:
        missing.append("history (no history.json)")
    if missing:
        raise PipelineError(f"fault {bundle.fault_id}: missing family data: {missing}")

    analysis = FaultAnalysis(bundle)
    program = bundle.program
    elements = bundle.elements

    t0 = time.perf_counter()
    traces = {t.test_id: run(program, t) for t in bundle.tests}
    analysis.timings["testruns"] = time.perf_counter() - t0
    failed_traces = [tr for tr in traces.values() if tr.failed]
    if not failed_traces:
        raise PipelineError(f"fault {bundle.fault_id}: no failing test")

    method_elements: dict = {}
    for elem in elements:
        method_elements.setdefault(elem.method_id, []).append(elem)

    for family in families:
        t0 = time.perf_counter()
        if family == "sbfl":
            spectrum = sbfl.build_spectrum(
                [(tr.covered, tr.failed) for tr in traces.values()], elements
            )
            analysis.scores["ochiai"] = sbfl.spectrum_scores(spectrum, sbfl.ochiai, "ochiai")
            analysis.scores["dstar"] = sbfl.spectrum_scores(spectrum, sbfl.dstar, "dstar")
        elif family == "slicing":
            slices = [
                backward_slice(tr)
                for tr in failed_traces
                if tr.criterion_event is not None
            ]
            for strategy in Strategy:
                tech = f"slice-{strategy.value}"
                if slices:
                    analysis.scores[tech] = combine_slices(slices, strategy)
                else:
                    analysis.scores[tech] = ScoredList(tech)
        elif family == "stacktrace":
            _, stmt_scores = score_stack_traces(failed_traces, method_elements)
            analysis.scores["stacktrace"] = stmt_scores
        elif family == "predswitch":
            failing_tests = [
                t for t in bundle.tests if traces[t.test_id].failed
            ]
            scored, _ = critical_predicates_for_tests(
                program, failing_tests, step_budget=reexec_step_budget
            )
            analysis.scores["predswitch"] = scored
        elif family == "ir":
            files = {PROGRAM_FILE: program.source}
            file_scores = ir_rank_files(bundle.bug_report, files)
            analysis.scores["ir"] = propagate_file_scores(
                file_scores, {PROGRAM_FILE: elements}
            )
        elif family == "history":
            now = max(c.timestamp for c in bundle.commits)
            file_scores = history_rank_files(bundle.commits, now)
            analysis.scores["history"] = propagate_file_scores(
                file_scores, {PROGRAM_FILE: elements}
            )
        elif family == "mbfl":
            original = {
                tid: (not tr.failed, tr.signature()) for tid, tr in traces.items()
            }
            mutants = gen_mutants(program)
            mutant_runs = {}
            mutant_stmt = {}
            for mutant in mutants:
                mutant_stmt[mutant.mutant_id] = mutant.element
                per_test = {}
                for test in bundle.tests:
                    tr = run(mutant.program, test, step_budget=reexec_step_budget)
                    per_test[test.test_id] = (not tr.failed, tr.signature())
                mutant_runs[mutant.mutant_id] = per_test
            matrix = mbfl.build_outcome_matrix(original, mutant_runs, mutant_stmt)
            for tech in ("metallaxis", "muse"):
                analysis.scores[tech] = mbfl.aggregate_to_statement(tech, matrix, elements)
        else:
            raise PipelineError(f"unknown family {family!r}")
        analysis.timings[family] = time.perf_counter() - t0
    return analysis


def _granular(analysis: FaultAnalysis, granularity: str):
    """(universe, faulty, technique->ScoredList) at the requested granularity."""
    bundle = analysis.bundle
    if granularity == "statement":
        return tuple(bundle.elements), set(bundle.faulty), analysis.scores
    if granularity != "method":
        raise PipelineError(f"unknown granularity {granularity!r}")
    method_of = bundle.program.method_map()
    universe = tuple(dict.fromkeys(method_of.values()))
    faulty = {method_of[e] for e in bundle.faulty}
    lifted = {
        tech: lift_to_method_granularity(scored, method_of)
        for tech, scored in analysis.scores.items()
    }
    return universe, faulty, lifted


def _summary(values: Mapping[str, Optional[Fraction]], exams: Mapping[str, Optional[Fraction]]):
    """Aggregate per-fault expected ranks; unlocalized faults count against @n
    and are excluded from the EXAM mean."""
    localized = [v for v in values.values() if v is not None]
    exam_vals = [float(x) for x in exams.values() if x is not None]
    return {
        "e_inspect": {
            fid: (str(v) if v is not None else None) for fid, v in sorted(values.items())
        },
        "at": {str(n): e_inspect_at_n(localized, n) for n in AT_N},
        "exam_mean": (sum(exam_vals) / len(exam_vals)) if exam_vals else None,
        "not_localized": sum(1 for v in values.values() if v is None),
    }


def evaluate_corpus(
    bundles: Sequence[FaultBundle],
    level: int = 2,
    granularity: str = "statement",
    seed: int = 0,
    k: int = 10,
    cv: str = "kfold",
    q: int = 100,
    reexec_step_budget: int = REEXEC_STEP_BUDGET,
    with_ablation: bool = True,
) -> dict:
    """Run every family of the preset on every fault, combine, and summarize."""
    families = cmb.preset_families(level)
    techniques = list(cmb.preset_techniques(level))
    analyses = [analyze_fault(b, families, reexec_step_budget) for b in bundles]

    per_tech_values: dict = {t: {} for t in techniques}
    per_tech_exam: dict = {t: {} for t in techniques}
    features = []
    for analysis in analyses:
        universe, faulty, scores = _granular(analysis, granularity)
        fid = analysis.bundle.fault_id
        for tech in techniques:
            ranking = full_universe_ranking(scores[tech], universe)
            value = expected_first_faulty_rank(ranking, faulty)
            per_tech_values[tech][fid] = value
            per_tech_exam[tech][fid] = value / len(universe)
        features.append(
            cmb.build_features(
                fid, scores, universe, faulty, techniques, analysis.bundle.project
            )
        )

    def run_cv(feats):
        if cv == "kfold":
            return cmb.kfold_cv(feats, k=k, seed=seed)
        if cv == "cross-project":
            return cmb.cross_project_cv(feats, seed=seed)
        raise PipelineError(f"unknown cv method {cv!r}")

    universe_sizes = {f.fault_id: len(f.elements) for f in features}
    combined_values = run_cv(features)
    combined_exam = {
        fid: v / universe_sizes[fid] for fid, v in combined_values.items()
    }

    ablation = {}
    if with_ablation and len(families) > 1:
        for family in families:
            kept = [t for t in techniques if cmb.TECHNIQUE_FAMILY[t] != family]
            reduced = [
                cmb.FaultFeatures(
                    f.fault_id,
                    tuple(kept),
                    f.elements,
                    f.matrix[:, [techniques.index(t) for t in kept]],
                    f.faulty,
                    f.project,
                )
                for f in features
            ]
            values = run_cv(reduced)
            exams = {fid: v / universe_sizes[fid] for fid, v in values.items()}
            ablation[family] = _summary(values, exams)

    corr = correlation_matrix(per_tech_values, q=q)

    timings: dict = {}
    for analysis in analyses:
        for family, seconds in analysis.timings.items():
            timings[family] = timings.get(family, 0.0) + seconds

    return {
        "preset": level,
        "granularity": granularity,
        "seed": seed,
        "cv": cv,
        "k": k,
        "faults": sorted(b.fault_id for b in bundles),
        "techniques": {
            t: _summary(per_tech_values[t], per_tech_exam[t]) for t in techniques
        },
        "combined": _summary(combined_values, combined_exam),
        "ablation": ablation,
        "correlation": corr,
        "timings": timings,
    }


def correlation_matrix(per_tech_values: Mapping[str, Mapping], q: int = 100) -> dict:
    """Pairwise r^2 (and p-values) of per-fault expected ranks; undefined pairs are null."""
    techniques = sorted(per_tech_values)
    r2 = [[None] * len(techniques) for _ in techniques]
    pv = [[None] * len(techniques) for _ in techniques]
    for i, ta in enumerate(techniques):
        for j, tb in enumerate(techniques):
            if j < i:
                r2[i][j], pv[i][j] = r2[j][i], pv[j][i]
                continue
            common = sorted(set(per_tech_values[ta]) & set(per_tech_values[tb]))
            xs = [per_tech_values[ta][f] for f in common]
            ys = [per_tech_values[tb][f] for f in common]
            if any(v is None for v in xs) or any(v is None for v in ys):
                continue
            try:
                r2[i][j], pv[i][j] = r_squared(xs, ys, q=q)
            except CorrelationUndefinedError:
                pass
    return {"techniques": techniques, "r2": r2, "p": pv}


def evaluate_score_records(
    records: Sequence[ScoreRecord],
    bundles: Sequence[FaultBundle],
    granularity: str = "statement",
) -> dict:
    """Metrics for externally supplied suspiciousness scores.

    Faults a technique never scores, or where no faulty element can be ranked,
    are counted as not-localized.
    """
    by_id = {b.fault_id: b for b in bundles}
    techniques = sorted({r.technique_id for r in records})
    per_tech_values: dict = {t: {b.fault_id: None for b in bundles} for t in techniques}
    per_tech_exam: dict = {t: {b.fault_id: None for b in bundles} for t in techniques}
    for record in records:
        bundle = by_id.get(record.fault_id)
        if bundle is None:
            raise PipelineError(f"score record references unknown fault {record.fault_id!r}")
        analysis = FaultAnalysis(bundle, {record.technique_id: record.scores})
        universe, faulty, scores = _granular(analysis, granularity)
        ranking = full_universe_ranking(scores[record.technique_id], universe)
        try:
            value = expected_first_faulty_rank(ranking, faulty)
        except NotLocalizedError:
            continue
        per_tech_values[record.technique_id][record.fault_id] = value
        per_tech_exam[record.technique_id][record.fault_id] = value / len(universe)
    return {
        "granularity": granularity,
        "faults": sorted(by_id),
        "techniques": {
            t: _summary(per_tech_values[t], per_tech_exam[t]) for t in techniques
        },
    }


# --- report emission -------------------------------------------------------


def emit_report(results: dict, fmt: str = "text-table") -> str:
    if fmt == "json":
        return json.dumps(results, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        return _emit_csv(results)
    if fmt in ("text", "text-table"):
        return _emit_text(results)
    raise PipelineError(f"unknown report format {fmt!r}")


def _metric_rows(results: dict):
    rows = []
    for tech, summary in results.get("techniques", {}).items():
        rows.append((tech, summary))
    if results.get("combined"):
        rows.append(("combined", results["combined"]))
    return rows


def _emit_csv(results: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["technique"] + [f"at{n}" for n in AT_N] + ["exam_mean", "not_localized"])
    for tech, summary in _metric_rows(results):
        writer.writerow(
            [tech]
            + [summary["at"][str(n)] for n in AT_N]
            + [
                "" if summary["exam_mean"] is None else f"{summary['exam_mean']:.6f}",
                summary["not_localized"],
            ]
        )
    return buf.getvalue()


def _emit_text(results: dict) -> str:
    lines = []
    header = []
    for key in ("preset", "granularity", "cv", "seed"):
        if key in results:
            header.append(f"{key}={results[key]}")
    if header:
        lines.append("  ".join(header))
        lines.append("")

    def table(title, rows):
        lines.append(title)
        lines.append(
            f"{'technique':<22}" + "".join(f"{'@' + str(n):>6}" for n in AT_N) + f"{'EXAM':>10}{'miss':>6}"
        )
        for tech, summary in rows:
            exam = summary["exam_mean"]
            lines.append(
                f"{tech:<22}"
                + "".join(f"{summary['at'][str(n)]:>6}" for n in AT_N)
                + (f"{exam:>10.4f}" if exam is not None else f"{'-':>10}")
                + f"{summary['not_localized']:>6}"
            )
        lines.append("")

    table("Technique performance", _metric_rows(results))
    if results.get("ablation"):
        table(
            "Leave-one-family-out",
            [(f"w/o {family}", s) for family, s in results["ablation"].items()],
        )
    corr = results.get("correlation")
    if corr:
        lines.append("Correlation (r^2)")
        techs = corr["techniques"]
        lines.append(f"{'':<22}" + "".join(f"{t[:10]:>12}" for t in techs))
        for i, ta in enumerate(techs):
            cells = []
            for j in range(len(techs)):
                v = corr["r2"][i][j]
                cells.append(f"{v:>12.3f}" if v is not None else f"{'-':>12}")
            lines.append(f"{ta:<22}" + "".join(cells))
        lines.append("")
    if results.get("timings"):
        lines.append("Timings (s)")
        for family, seconds in sorted(results["timings"].items()):
            lines.append(f"{family:<22}{seconds:>10.3f}")
        lines.append("")
    return "\n".join(lines) + "\n"
