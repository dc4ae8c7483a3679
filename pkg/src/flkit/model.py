"""Shared data model: program elements, scored lists, tie-aware rankings, fault cases."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Optional, Sequence


class ModelError(Exception):
    """Invalid construction or use of a model object."""


@dataclass(frozen=True)
class ProgramElement:
    """A statement location: (file_id, line, stmt_index), optionally inside a method.

    stmt_index distinguishes multiple statements starting on the same line.
    method_id does not participate in equality so that score sources that do
    and do not annotate methods can be joined.
    """

    file_id: str
    line: int
    stmt_index: int = 0
    method_id: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.line < 1:
            raise ModelError(f"line must be positive, got {self.line}")
        if self.stmt_index < 0:
            raise ModelError(f"stmt_index must be non-negative, got {self.stmt_index}")

    @property
    def key(self) -> str:
        return f"{self.file_id}:{self.line}:{self.stmt_index}"

    def __str__(self) -> str:
        return self.key


def parse_element_key(key: str) -> ProgramElement:
    """Parse a "file:line:idx" element id."""
    parts = key.rsplit(":", 2)
    if len(parts) != 3:
        raise ModelError(f"malformed element id {key!r}")
    file_id, line, idx = parts
    try:
        return ProgramElement(file_id, int(line), int(idx))
    except ValueError as exc:
        raise ModelError(f"malformed element id {key!r}") from exc


@dataclass(frozen=True)
class ScoredList:
    """Scores assigned by one technique. Scores may be +inf; no element repeats."""

    technique_id: str
    entries: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        seen = set()
        for elem, score in self.entries:
            if elem in seen:
                raise ModelError(f"duplicate element {elem} in scored list")
            seen.add(elem)
            if math.isnan(score):
                raise ModelError(f"NaN score for {elem}")

    def as_dict(self) -> dict:
        return dict(self.entries)

    @property
    def elements(self) -> set:
        return {e for e, _ in self.entries}

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class Ranking:
    """Tie-groups in strictly decreasing score order, with 1-based start positions."""

    groups: tuple  # tuple of frozensets
    start_positions: tuple
    scores: tuple

    def __post_init__(self):
        pos = 1
        for i, group in enumerate(self.groups):
            if self.start_positions[i] != pos:
                raise ModelError("start positions inconsistent with group sizes")
            pos += len(group)
        for a, b in zip(self.scores, self.scores[1:]):
            if not a > b:
                raise ModelError("group scores must strictly decrease")

    @property
    def total(self) -> int:
        return sum(len(g) for g in self.groups)

    def position_of(self, elem) -> Optional[int]:
        """Start position of the tie-group containing elem, or None."""
        for group, start in zip(self.groups, self.start_positions):
            if elem in group:
                return start
        return None


def rank_elements(scored: ScoredList) -> Ranking:
    """Group elements by exact score equality, ordered by decreasing score.

    +inf sorts above every finite score and forms its own tie-group.
    """
    if not scored.entries:
        raise ModelError("cannot rank an empty scored list")
    by_score: dict = {}
    for elem, score in scored.entries:
        by_score.setdefault(score, set()).add(elem)
    ordered = sorted(by_score.items(), key=lambda kv: kv[0], reverse=True)
    groups = []
    starts = []
    scores = []
    pos = 1
    for score, members in ordered:
        groups.append(frozenset(members))
        starts.append(pos)
        scores.append(score)
        pos += len(members)
    return Ranking(tuple(groups), tuple(starts), tuple(scores))


def full_universe_ranking(scored: ScoredList, universe: Iterable) -> Ranking:
    """Rank the whole element universe; elements the technique left unscored get 0."""
    universe = set(universe)
    have = scored.as_dict()
    outside = set(have) - universe
    if outside:
        raise ModelError(f"scored elements outside universe: {sorted(map(str, outside))}")
    entries = [(e, have.get(e, 0.0)) for e in universe]
    return rank_elements(ScoredList(scored.technique_id, entries))


def lift_to_method_granularity(
    scored: ScoredList, method_of: Mapping[Hashable, str]
) -> ScoredList:
    """Lift statement scores to methods: a method scores the max of its statements."""
    out: dict = {}
    for elem, score in scored.entries:
        try:
            method = method_of[elem]
        except KeyError:
            raise ModelError(f"element {elem} has no method mapping") from None
        if method not in out or score > out[method]:
            out[method] = score
    return ScoredList(scored.technique_id, tuple(out.items()))


def adjust_ground_truth_for_insertions(
    modified: Iterable[tuple[str, int]],
    inserted_after: Iterable[tuple[str, int]],
    elements: Iterable[ProgramElement],
) -> frozenset:
    """Map a patch onto faulty executable elements.

    Modified or deleted lines claim every element on that line. A pure
    insertion between lines L and L+1 claims the first executable element
    after L; an insertion past the last executable element falls back to the
    nearest preceding one.
    """
    by_file: dict[str, list[ProgramElement]] = {}
    for e in elements:
        by_file.setdefault(e.file_id, []).append(e)
    for elems in by_file.values():
        elems.sort(key=lambda e: (e.line, e.stmt_index))

    faulty: set[ProgramElement] = set()
    for file_id, line in modified:
        faulty.update(e for e in by_file.get(file_id, ()) if e.line == line)
    for file_id, line in inserted_after:
        elems = by_file.get(file_id, [])
        following = [e for e in elems if e.line > line]
        if following:
            faulty.add(following[0])
        else:
            preceding = [e for e in elems if e.line <= line]
            if preceding:
                faulty.add(preceding[-1])
    if not faulty:
        raise ModelError("patch maps to no executable element")
    return frozenset(faulty)


@dataclass(frozen=True)
class FaultCase:
    """One defect: its element universe, ground truth, tests, and auxiliary inputs."""

    case_id: str
    elements: frozenset
    faulty: frozenset
    tests: tuple  # (test_id, passed) pairs
    bug_report: Optional[str] = None
    history: Optional[tuple] = None
    project: Optional[str] = None

    def __post_init__(self):
        if not self.faulty:
            raise ModelError(f"fault {self.case_id}: empty faulty set")
        if not self.faulty <= self.elements:
            raise ModelError(f"fault {self.case_id}: faulty elements outside universe")
        if not any(not passed for _, passed in self.tests):
            raise ModelError(f"fault {self.case_id}: no failing test")
