"""Corpus layout and score-record ingestion.

A corpus is a directory of fault directories:

    corpus/<fault_id>/
        program.ml      subject program
        tests.json      {"tests": [{"id", "entry", "args", "expect"}]}
        truth.json      {"faulty": ["file:line:idx", ...],
                         "insertions": [{"file", "after_line"}, ...],
                         "project": "..."}           (project optional)
        report.txt      bug report text               (optional)
        history.json    {"commits": [{"ts", "msg", "files"}]}  (optional)

Pre-computed suspiciousness scores are exchanged as JSON lines:

    {"fault": "...", "technique": "...", "scores": [["file:line:idx", 0.5], ...]}

with the literal token "inf" standing for +infinity.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .irhist import Commit, commits_from_json
from .minilang import Program, TestCase, parse
from .model import (
    ModelError,
    ProgramElement,
    ScoredList,
    adjust_ground_truth_for_insertions,
    parse_element_key,
)

log = logging.getLogger(__name__)

PROGRAM_FILE = "program.ml"


class CorpusError(Exception):
    pass


@dataclass(frozen=True)
class FaultBundle:
    """One loaded fault: program, tests, ground truth, and auxiliary inputs."""

    fault_id: str
    program: Program
    tests: tuple
    faulty: frozenset
    project: str = ""
    bug_report: Optional[str] = None
    commits: Optional[tuple] = None

    @property
    def elements(self) -> tuple:
        return tuple(self.program.elements())


def load_fault(fault_dir: str | Path) -> FaultBundle:
    fault_dir = Path(fault_dir)
    fault_id = fault_dir.name
    missing = [
        name
        for name in (PROGRAM_FILE, "tests.json", "truth.json")
        if not (fault_dir / name).exists()
    ]
    if missing:
        raise CorpusError(f"fault {fault_id}: missing inputs {missing}")

    program = parse((fault_dir / PROGRAM_FILE).read_text(), file_id=PROGRAM_FILE)
    tests_data = json.loads((fault_dir / "tests.json").read_text())
    tests = tuple(
        TestCase(t["id"], t["entry"], tuple(t.get("args", ())), t["expect"])
        for t in tests_data["tests"]
    )
    if not tests:
        raise CorpusError(f"fault {fault_id}: no tests")

    truth = json.loads((fault_dir / "truth.json").read_text())
    elements = program.elements()
    element_set = set(elements)
    faulty: set[ProgramElement] = set()
    for key in truth.get("faulty", ()):
        elem = parse_element_key(key)
        if elem not in element_set:
            raise CorpusError(f"fault {fault_id}: faulty element {key} not executable")
        faulty.add(elem)
    insertions = [
        (ins["file"], ins["after_line"]) for ins in truth.get("insertions", ())
    ]
    if insertions:
        faulty |= adjust_ground_truth_for_insertions([], insertions, elements)
    if not faulty:
        raise CorpusError(f"fault {fault_id}: empty ground truth")

    report_path = fault_dir / "report.txt"
    bug_report = report_path.read_text() if report_path.exists() else None
    history_path = fault_dir / "history.json"
    commits = (
        tuple(commits_from_json(history_path.read_text()))
        if history_path.exists()
        else None
    )
    return FaultBundle(
        fault_id,
        program,
        tests,
        frozenset(faulty),
        truth.get("project", ""),
        bug_report,
        commits,
    )


def load_corpus(corpus_dir: str | Path) -> list[FaultBundle]:
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise CorpusError(f"corpus directory {corpus_dir} does not exist")
    fault_dirs = sorted(p for p in corpus_dir.iterdir() if p.is_dir())
    if not fault_dirs:
        raise CorpusError(f"corpus directory {corpus_dir} contains no faults")
    return [load_fault(d) for d in fault_dirs]


@dataclass(frozen=True)
class ScoreRecord:
    fault_id: str
    technique_id: str
    scores: ScoredList


def ingest_scores(path: str | Path) -> list[ScoreRecord]:
    """Parse JSON-lines score records; a duplicate (fault, technique) last-wins."""
    records: dict[tuple, ScoreRecord] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
                fault = data["fault"]
                technique = data["technique"]
                entries = []
                for key, score in data["scores"]:
                    if score == "inf":
                        score = math.inf
                    entries.append((parse_element_key(key), float(score)))
                record = ScoreRecord(fault, technique, ScoredList(technique, entries))
            except (
                KeyError,
                TypeError,
                ValueError,
                ModelError,
                json.JSONDecodeError,
            ) as exc:
                raise CorpusError(f"{path}:{lineno}: malformed score record: {exc}") from exc
            if (fault, technique) in records:
                log.warning(
                    "%s:%d: duplicate record for (%s, %s); keeping the later one",
                    path,
                    lineno,
                    fault,
                    technique,
                )
            records[(fault, technique)] = record
    return list(records.values())


def write_scores(records, path: str | Path):
    with open(path, "w") as fh:
        for rec in records:
            scores = [
                [str(elem), "inf" if math.isinf(score) else score]
                for elem, score in rec.scores.entries
            ]
            fh.write(
                json.dumps(
                    {
                        "fault": rec.fault_id,
                        "technique": rec.technique_id,
                        "scores": scores,
                    }
                )
                + "\n"
            )
