"""File-level scorers: bug-report text similarity and fix-history recency.

Both produce file scores that are propagated uniformly onto every executable
statement of the file.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .model import ScoredList

_CAMEL = re.compile(r"(?<=[a-z0-9])(?=[A-Z])|(?<=[A-Z])(?=[A-Z][a-z])")


def tokenize(text: str) -> list[str]:
    """Split on non-alphanumerics, then camelCase and underscores; lowercase."""
    out = []
    for chunk in re.split(r"[^0-9A-Za-z_]+", text):
        for part in chunk.split("_"):
            for word in _CAMEL.split(part):
                if word:
                    out.append(word.lower())
    return out


def ir_rank_files(report_text: str, files: Mapping[str, str]) -> ScoredList:
    """Cosine similarity between TF-IDF vectors of the bug report and each file.

    tf is the raw term count; idf = ln(N/df) over the file corpus, dropping
    query terms that occur in no file.
    """
    if not files:
        raise ValueError("need at least one file")
    query = Counter(tokenize(report_text))
    if not query:
        raise ValueError("bug report is empty after tokenization")
    docs = {fid: Counter(tokenize(text)) for fid, text in files.items()}
    n = len(docs)
    df = Counter()
    for counts in docs.values():
        df.update(set(counts))
    idf = {term: math.log(n / df[term]) for term in df}

    def vec(counts: Counter) -> dict:
        return {t: c * idf[t] for t, c in counts.items() if t in idf}

    qv = vec(query)
    qnorm = math.sqrt(sum(w * w for w in qv.values()))
    entries = []
    for fid, counts in docs.items():
        dv = vec(counts)
        dnorm = math.sqrt(sum(w * w for w in dv.values()))
        if qnorm == 0 or dnorm == 0:
            entries.append((fid, 0.0))
            continue
        dot = sum(w * dv.get(t, 0.0) for t, w in qv.items())
        entries.append((fid, dot / (qnorm * dnorm)))
    return ScoredList("ir", entries)


@dataclass(frozen=True)
class Commit:
    timestamp: float
    message: str
    files: tuple

    def __post_init__(self):
        object.__setattr__(self, "files", tuple(self.files))

    @property
    def is_fix(self) -> bool:
        msg = self.message.lower()
        return "fix" in msg or "close" in msg


def recency_weight(t_norm: float) -> float:
    """Logistic hotspot weighting in (0, 1]; t_norm=1 (newest fix) gives 0.5."""
    return 1.0 / (1.0 + math.exp(-12.0 * t_norm + 12.0))


def history_rank_files(commits: Iterable[Commit], now: float) -> ScoredList:
    """Sum recency weights of each file's fix commits; no fix commits -> all zero."""
    commits = list(commits)
    if not commits:
        raise ValueError("empty history log")
    for a, b in zip(commits, commits[1:]):
        if b.timestamp < a.timestamp:
            raise ValueError("history log timestamps must be non-decreasing")
    fixes = [c for c in commits if c.is_fix]
    scores: dict = {f: 0.0 for c in commits for f in c.files}
    if fixes:
        oldest = fixes[0].timestamp
        span = now - oldest
        for c in fixes:
            t_norm = (c.timestamp - oldest) / span if span > 0 else 1.0
            w = recency_weight(t_norm)
            for f in c.files:
                scores[f] += w
    return ScoredList("history", tuple(scores.items()))


def commits_from_json(text: str) -> list[Commit]:
    """Parse {"commits": [{"ts", "msg", "files"}]}; order must be chronological."""
    data = json.loads(text)
    return [Commit(c["ts"], c["msg"], tuple(c["files"])) for c in data["commits"]]


def propagate_file_scores(
    file_scores: ScoredList, file_elements: Mapping[str, Iterable]
) -> ScoredList:
    """Every executable statement receives its file's score; unscored files give 0."""
    scores = file_scores.as_dict()
    entries = []
    for fid, elements in file_elements.items():
        score = scores.get(fid, 0.0)
        for elem in elements:
            entries.append((elem, score))
    return ScoredList(file_scores.technique_id, entries)
