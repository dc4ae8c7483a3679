"""Technique combination: normalized feature vectors, a pairwise max-margin
linear ranker trained by seeded subgradient descent, cross-validation, and
the run-time-level presets."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .metrics import expected_first_faulty_rank
from .model import ScoredList, rank_elements

PAIR_CAP = 50  # correct elements sampled per faulty element
L2_LAMBDA = 0.01
EPOCHS = 100
MARGIN = 1.0

# Families grouped by order-of-magnitude run-time cost.
LEVEL_FAMILIES = {
    1: ("history", "stacktrace", "ir"),
    2: ("history", "stacktrace", "ir", "slicing", "sbfl"),
    3: ("history", "stacktrace", "ir", "slicing", "sbfl", "predswitch"),
    4: ("history", "stacktrace", "ir", "slicing", "sbfl", "predswitch", "mbfl"),
}

FAMILY_TECHNIQUES = {
    "sbfl": ("ochiai", "dstar"),
    "mbfl": ("metallaxis", "muse"),
    "slicing": ("slice-union", "slice-intersection", "slice-frequency"),
    "stacktrace": ("stacktrace",),
    "predswitch": ("predswitch",),
    "ir": ("ir",),
    "history": ("history",),
}

TECHNIQUE_FAMILY = {
    tech: family for family, techs in FAMILY_TECHNIQUES.items() for tech in techs
}


class CombineError(Exception):
    pass


def preset_families(level: int) -> tuple:
    if level not in LEVEL_FAMILIES:
        raise CombineError(f"unknown time level {level}; expected 1..4")
    return LEVEL_FAMILIES[level]


def preset_techniques(level: int) -> tuple:
    return tuple(
        tech for family in preset_families(level) for tech in FAMILY_TECHNIQUES[family]
    )


def normalize(scored: ScoredList, universe: Iterable) -> dict:
    """Min-max normalize to [0, 1] over the whole element universe.

    Unscored elements count as raw 0. +inf maps to 1 and is excluded from the
    finite maximum; a degenerate (constant) score vector maps to all zeros.
    """
    universe = list(universe)
    if not universe:
        raise CombineError("empty element universe")
    have = scored.as_dict()
    raw = {e: float(have.get(e, 0.0)) for e in universe}
    finite = [v for v in raw.values() if math.isfinite(v)]
    out = {}
    if finite:
        lo, hi = min(finite), max(finite)
    else:
        lo = hi = 0.0
    for e, v in raw.items():
        if math.isinf(v):
            out[e] = 1.0
        elif hi == lo:
            out[e] = 0.0
        else:
            out[e] = (v - lo) / (hi - lo)
    return out


@dataclass(frozen=True)
class FaultFeatures:
    """Per-fault feature matrix: one row per element, one column per technique."""

    fault_id: str
    techniques: tuple
    elements: tuple
    matrix: np.ndarray  # shape (len(elements), len(techniques)), all in [0, 1]
    faulty: frozenset
    project: str = ""

    def __post_init__(self):
        if self.matrix.shape != (len(self.elements), len(self.techniques)):
            raise CombineError("feature matrix shape mismatch")
        if np.any(self.matrix < 0) or np.any(self.matrix > 1):
            raise CombineError("feature values must lie in [0, 1]")

    def vector(self, elem) -> np.ndarray:
        return self.matrix[self.elements.index(elem)]


def build_features(
    fault_id: str,
    technique_scores: Mapping[str, ScoredList],
    universe: Iterable,
    faulty: Iterable,
    techniques: Sequence[str],
    project: str = "",
) -> FaultFeatures:
    universe = tuple(universe)
    missing = [t for t in techniques if t not in technique_scores]
    if missing:
        raise CombineError(f"fault {fault_id}: missing technique scores for {missing}")
    columns = [normalize(technique_scores[t], universe) for t in techniques]
    matrix = np.array([[col[e] for col in columns] for e in universe], dtype=float)
    return FaultFeatures(
        fault_id, tuple(techniques), universe, matrix, frozenset(faulty), project
    )


def build_pairwise_constraints(
    faults: Iterable[FaultFeatures], seed: int = 0, cap: int = PAIR_CAP
) -> list:
    """(faulty vector, correct vector) pairs, never crossing faults.

    Each faulty element is contrasted against at most `cap` correct elements of
    the same fault, sampled with the run seed to bound pair explosion.
    """
    rng = random.Random(seed)
    pairs = []
    for fault in faults:
        correct = [e for e in fault.elements if e not in fault.faulty]
        for fe in fault.elements:
            if fe not in fault.faulty:
                continue
            if not correct:
                continue
            chosen = correct if len(correct) <= cap else rng.sample(correct, cap)
            fv = fault.vector(fe)
            for ce in chosen:
                pairs.append((fv, fault.vector(ce)))
    return pairs


@dataclass(frozen=True)
class RankModel:
    techniques: tuple
    weights: np.ndarray
    seed: int
    epochs: int = EPOCHS
    margin: float = MARGIN

    def __post_init__(self):
        if not np.all(np.isfinite(self.weights)):
            raise CombineError("model weights must be finite")

    def to_json(self) -> str:
        return json.dumps(
            {
                "techniques": list(self.techniques),
                "weights": [float(w) for w in self.weights],
                "seed": self.seed,
                "epochs": self.epochs,
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "RankModel":
        data = json.loads(text)
        return cls(
            tuple(data["techniques"]),
            np.asarray(data["weights"], dtype=float),
            data["seed"],
            data.get("epochs", EPOCHS),
        )


def train(pairs: Sequence, techniques: Sequence[str], seed: int = 0) -> RankModel:
    """Minimize sum hinge(1 - w.(x_faulty - x_correct)) + lambda ||w||^2.

    Deterministic seeded stochastic subgradient descent: 100 epochs,
    step 0.1/sqrt(epoch).
    """
    if not pairs:
        raise CombineError("no training pairs")
    dim = len(techniques)
    diffs = [np.asarray(f, dtype=float) - np.asarray(c, dtype=float) for f, c in pairs]
    for d in diffs:
        if d.shape != (dim,):
            raise CombineError("pair dimension does not match technique count")
    rng = random.Random(seed)
    w = np.zeros(dim)
    order = list(range(len(diffs)))
    for epoch in range(1, EPOCHS + 1):
        step = 0.1 / math.sqrt(epoch)
        rng.shuffle(order)
        for i in order:
            d = diffs[i]
            grad = 2.0 * L2_LAMBDA * w
            if MARGIN - float(w @ d) > 0:
                grad = grad - d
            w = w - step * grad
    return RankModel(tuple(techniques), w, seed)


def violations(model: RankModel, pairs: Sequence) -> int:
    """Pairwise constraints where the faulty element does not outscore the correct one."""
    count = 0
    for f, c in pairs:
        if float(model.weights @ np.asarray(f)) <= float(model.weights @ np.asarray(c)):
            count += 1
    return count


def predict(model: RankModel, features: FaultFeatures) -> ScoredList:
    if features.techniques != model.techniques:
        raise CombineError(
            f"feature techniques {features.techniques} do not match model {model.techniques}"
        )
    scores = features.matrix @ model.weights
    return ScoredList("combined", list(zip(features.elements, scores.tolist())))


def combined_e_inspect(model: RankModel, fault: FaultFeatures) -> Fraction:
    ranking = rank_elements(predict(model, fault))
    return expected_first_faulty_rank(ranking, set(fault.faulty))


def kfold_cv(
    faults: Sequence[FaultFeatures], k: int = 10, seed: int = 0, cap: int = PAIR_CAP
) -> dict:
    """Seeded k-fold cross-validation; returns fault_id -> E_inspect (exact)."""
    faults = list(faults)
    if len(faults) < k:
        raise CombineError(f"need at least k={k} faults, got {len(faults)}")
    order = list(range(len(faults)))
    random.Random(seed).shuffle(order)
    folds = [order[i::k] for i in range(k)]
    results = {}
    for fold in folds:
        test_set = {faults[i].fault_id for i in fold}
        train_faults = [f for f in faults if f.fault_id not in test_set]
        pairs = build_pairwise_constraints(train_faults, seed=seed, cap=cap)
        model = train(pairs, faults[0].techniques, seed=seed)
        for i in fold:
            results[faults[i].fault_id] = combined_e_inspect(model, faults[i])
    return results


def cross_project_cv(
    faults: Sequence[FaultFeatures], seed: int = 0, cap: int = PAIR_CAP
) -> dict:
    """Leave-one-project-out cross-validation; returns fault_id -> E_inspect."""
    projects = sorted({f.project for f in faults})
    if len(projects) < 2:
        raise CombineError("cross-project validation needs at least two projects")
    results = {}
    for project in projects:
        train_faults = [f for f in faults if f.project != project]
        test_faults = [f for f in faults if f.project == project]
        pairs = build_pairwise_constraints(train_faults, seed=seed, cap=cap)
        model = train(pairs, train_faults[0].techniques, seed=seed)
        for fault in test_faults:
            results[fault.fault_id] = combined_e_inspect(model, fault)
    return results
