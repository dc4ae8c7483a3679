"""Command-line surface: localize, evaluate, correlate, combine, report."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import combine as cmb
from .corpus import CorpusError, ingest_scores, load_corpus, load_fault
from .metrics import expected_first_faulty_rank
from .model import full_universe_ranking
from .pipeline import (
    PipelineError,
    analyze_fault,
    correlation_matrix,
    emit_report,
    evaluate_corpus,
    evaluate_score_records,
)


def _parse_preset(text: str) -> int:
    if text.startswith("level"):
        text = text[len("level") :]
    try:
        level = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad preset {text!r}; expected level1..level4")
    if level not in (1, 2, 3, 4):
        raise argparse.ArgumentTypeError(f"preset level {level} out of range 1..4")
    return level


def _add_common(parser):
    parser.add_argument("--corpus", required=True, help="corpus directory")
    parser.add_argument("--preset", type=_parse_preset, default=2, help="level1..level4")
    parser.add_argument("--granularity", choices=("statement", "method"), default="statement")
    parser.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("localize", help="rank suspicious statements for one fault")
    p.add_argument("--corpus", required=True)
    p.add_argument("--fault", required=True, help="fault id (corpus subdirectory)")
    p.add_argument("--preset", type=_parse_preset, default=2)
    p.add_argument(
        "--technique",
        action="append",
        help="restrict output to these techniques (repeatable)",
    )
    p.add_argument("--top", type=int, default=10)

    p = sub.add_parser("evaluate", help="run the preset over a corpus with cross-validation")
    _add_common(p)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--cv", choices=("kfold", "cross-project"), default="kfold")
    p.add_argument("--format", choices=("text-table", "json", "csv"), default="text-table")
    p.add_argument("--no-ablation", action="store_true")
    p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("correlate", help="pairwise r^2 between techniques")
    _add_common(p)
    p.add_argument("--q", type=int, default=100, help="expected-rank retention threshold")
    p.add_argument("--format", choices=("text-table", "json"), default="text-table")

    p = sub.add_parser("combine", help="train, save, or apply a rank-combination model")
    _add_common(p)
    p.add_argument("--save", help="train on the corpus and write the model JSON here")
    p.add_argument("--load", help="apply a previously saved model")
    p.add_argument("--fault", help="with --load: fault to score")

    p = sub.add_parser("report", help="metrics for externally supplied score records")
    p.add_argument("--corpus", required=True)
    p.add_argument("--scores", required=True, help="JSON-lines score records")
    p.add_argument("--granularity", choices=("statement", "method"), default="statement")
    p.add_argument("--format", choices=("text-table", "json", "csv"), default="text-table")
    p.add_argument("--out")
    return parser


def _write(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_localize(args) -> int:
    bundle = load_fault(Path(args.corpus) / args.fault)
    families = cmb.preset_families(args.preset)
    analysis = analyze_fault(bundle, families)
    techniques = args.technique or sorted(analysis.scores)
    for tech in techniques:
        if tech not in analysis.scores:
            raise PipelineError(f"technique {tech!r} not produced by preset level{args.preset}")
        ranking = full_universe_ranking(analysis.scores[tech], bundle.elements)
        value = expected_first_faulty_rank(ranking, set(bundle.faulty))
        print(f"== {tech} (E_inspect = {value})")
        shown = 0
        for group, start, score in zip(ranking.groups, ranking.start_positions, ranking.scores):
            for elem in sorted(group, key=str):
                marker = " *" if elem in bundle.faulty else ""
                print(f"  {start:>4}  {score:<12.6g} {elem}{marker}")
                shown += 1
                if shown >= args.top:
                    break
            if shown >= args.top:
                break
    return 0


def cmd_evaluate(args) -> int:
    bundles = load_corpus(args.corpus)
    results = evaluate_corpus(
        bundles,
        level=args.preset,
        granularity=args.granularity,
        seed=args.seed,
        k=args.k,
        cv=args.cv,
        with_ablation=not args.no_ablation,
    )
    _write(emit_report(results, args.format), args.out)
    return 0


def cmd_correlate(args) -> int:
    bundles = load_corpus(args.corpus)
    results = evaluate_corpus(
        bundles,
        level=args.preset,
        granularity=args.granularity,
        seed=args.seed,
        q=args.q,
        with_ablation=False,
    )
    slim = {"correlation": results["correlation"]}
    _write(emit_report(slim, args.format), None)
    return 0


def cmd_combine(args) -> int:
    bundles = load_corpus(args.corpus)
    families = cmb.preset_families(args.preset)
    techniques = list(cmb.preset_techniques(args.preset))
    if args.load:
        model = cmb.RankModel.from_json(Path(args.load).read_text())
        targets = [b for b in bundles if args.fault in (None, b.fault_id)]
        if not targets:
            raise PipelineError(f"fault {args.fault!r} not in corpus")
        for bundle in targets:
            analysis = analyze_fault(bundle, families)
            feats = cmb.build_features(
                bundle.fault_id,
                analysis.scores,
                bundle.elements,
                bundle.faulty,
                list(model.techniques),
            )
            value = cmb.combined_e_inspect(model, feats)
            print(f"{bundle.fault_id}: combined E_inspect = {value}")
        return 0
    features = []
    for bundle in bundles:
        analysis = analyze_fault(bundle, families)
        features.append(
            cmb.build_features(
                bundle.fault_id, analysis.scores, bundle.elements, bundle.faulty, techniques
            )
        )
    pairs = cmb.build_pairwise_constraints(features, seed=args.seed)
    model = cmb.train(pairs, techniques, seed=args.seed)
    text = model.to_json() + "\n"
    if args.save:
        Path(args.save).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_report(args) -> int:
    bundles = load_corpus(args.corpus)
    records = ingest_scores(args.scores)
    results = evaluate_score_records(records, bundles, granularity=args.granularity)
    _write(emit_report(results, args.format), args.out)
    return 0


COMMANDS = {
    "localize": cmd_localize,
    "evaluate": cmd_evaluate,
    "correlate": cmd_correlate,
    "combine": cmd_combine,
    "report": cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (CorpusError, PipelineError, cmb.CombineError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
