"""Crash-fault scoring from stack frames: the frame at depth d scores 1/d."""

from __future__ import annotations

import json
from typing import Iterable, Mapping

from .minilang.interp import CRASH, ExecutionTrace
from .model import ScoredList


def method_scores_from_frames(frame_lists: Iterable[Iterable]) -> dict:
    """Max over failed tests of 1/depth per method. Non-crash lists are empty."""
    scores: dict = {}
    for frames in frame_lists:
        for frame in frames:
            score = 1.0 / frame.depth
            if score > scores.get(frame.method_id, 0.0):
                scores[frame.method_id] = score
    return scores


def score_stack_traces(
    failed_traces: Iterable[ExecutionTrace], method_elements: Mapping
) -> tuple[ScoredList, ScoredList]:
    """Score methods from crash stacks and propagate to their statements.

    Assertion failures come from the test harness, not the program, so they
    contribute nothing; with no crashes at all both lists are empty.
    method_elements maps method_id -> its statement elements.
    """
    frame_lists = [
        t.outcome.stack for t in failed_traces if t.outcome.status == CRASH
    ]
    methods = method_scores_from_frames(frame_lists)
    method_list = ScoredList("stacktrace", tuple(methods.items()))
    entries = []
    for method, score in methods.items():
        for elem in method_elements.get(method, ()):
            entries.append((elem, score))
    return method_list, ScoredList("stacktrace", entries)


class _ExternalFrame:
    def __init__(self, method_id, depth):
        self.method_id = method_id
        self.depth = depth


def frames_from_json(text: str) -> dict:
    """Ingest external stack traces: {"traces": [{"test": ..., "frames": [{"method", "line"}]}]}."""
    data = json.loads(text)
    out = {}
    for rec in data["traces"]:
        out[rec["test"]] = [
            _ExternalFrame(f["method"], d + 1) for d, f in enumerate(rec["frames"])
        ]
    return out
