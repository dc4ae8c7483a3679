import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from flkit.metrics import (
    CorrelationUndefinedError,
    NotLocalizedError,
    e_inspect_at_n,
    exam,
    expected_first_faulty_rank,
    r_squared,
)
from flkit.model import ProgramElement, Ranking, ScoredList, rank_elements


def enumerate_expected_rank(t: int, t_f: int, start: int) -> Fraction:
    """Oracle: average the first-faulty position over every arrangement.

    All C(t, t_f) placements of the faulty elements among the t tied slots
    are equally likely; the first faulty element sits at start + min(slot).
    """
    total = Fraction(0)
    count = 0
    for placement in itertools.combinations(range(t), t_f):
        total += start + min(placement)
        count += 1
    return total / count


def ranking_with_tied_group(t: int, t_f: int, start: int):
    """A ranking whose first (and only) faulty group has size t at position start."""
    groups = []
    starts = []
    scores = []
    pos = 1
    score = 100.0
    # filler singleton groups occupying positions 1..start-1
    for i in range(start - 1):
        groups.append(frozenset({ProgramElement("pre", i + 1)}))
        starts.append(pos)
        scores.append(score)
        pos += 1
        score -= 1.0
    tied = frozenset(ProgramElement("g", i + 1) for i in range(t))
    groups.append(tied)
    starts.append(pos)
    scores.append(score)
    faulty = set(list(sorted(tied, key=lambda e: e.line))[:t_f])
    return Ranking(tuple(groups), tuple(starts), tuple(scores)), faulty


class TestExpectedFirstFaultyRank:
    @pytest.mark.parametrize("start", [1, 5])
    @pytest.mark.parametrize(
        "t,t_f", [(t, t_f) for t in range(1, 9) for t_f in range(1, t + 1)]
    )
    def test_matches_enumeration_oracle(self, t, t_f, start):
        ranking, faulty = ranking_with_tied_group(t, t_f, start)
        got = expected_first_faulty_rank(ranking, faulty)
        assert got == enumerate_expected_rank(t, t_f, start)

    def test_single_faulty_reduces_to_midpoint(self):
        # t_f = 1: expected rank is start + (t-1)/2
        ranking, faulty = ranking_with_tied_group(7, 1, 3)
        assert expected_first_faulty_rank(ranking, faulty) == 3 + Fraction(6, 2)

    def test_all_faulty_reduces_to_start(self):
        ranking, faulty = ranking_with_tied_group(5, 5, 2)
        assert expected_first_faulty_rank(ranking, faulty) == 2

    def test_untied_exact_position(self):
        a, b, c = (ProgramElement("f", i) for i in (1, 2, 3))
        r = rank_elements(ScoredList("t", [(a, 3.0), (b, 2.0), (c, 1.0)]))
        assert expected_first_faulty_rank(r, {b}) == 2

    def test_only_first_faulty_group_counts(self):
        a, b, c = (ProgramElement("f", i) for i in (1, 2, 3))
        r = rank_elements(ScoredList("t", [(a, 3.0), (b, 2.0), (c, 1.0)]))
        assert expected_first_faulty_rank(r, {b, c}) == 2

    def test_hand_worked_case(self):
        # t=4, t_f=2, start=1: (3*1 + 2*2 + 1*3) / 6 = 5/3
        ranking, faulty = ranking_with_tied_group(4, 2, 1)
        assert expected_first_faulty_rank(ranking, faulty) == Fraction(5, 3)

    def test_missing_fault_raises(self):
        ranking, _ = ranking_with_tied_group(3, 1, 1)
        with pytest.raises(NotLocalizedError):
            expected_first_faulty_rank(ranking, {ProgramElement("other", 9)})

    @given(st.integers(1, 10), st.data(), st.integers(1, 4))
    def test_value_within_group_bounds(self, t, data, start):
        t_f = data.draw(st.integers(1, t))
        ranking, faulty = ranking_with_tied_group(t, t_f, start)
        v = expected_first_faulty_rank(ranking, faulty)
        assert start <= v <= start + (t - t_f)


class TestAtNAndExam:
    def test_at_n_counts(self):
        vals = [Fraction(1), Fraction(5, 2), Fraction(4), Fraction(11)]
        assert e_inspect_at_n(vals, 1) == 1
        assert e_inspect_at_n(vals, 3) == 2
        assert e_inspect_at_n(vals, 4) == 3
        assert e_inspect_at_n(vals, 10) == 3

    def test_at_n_rejects_bad_n(self):
        with pytest.raises(ValueError):
            e_inspect_at_n([], 0)

    def test_exam_is_expected_rank_over_universe(self):
        ranking, faulty = ranking_with_tied_group(4, 2, 1)
        assert exam(ranking, faulty, 10) == Fraction(5, 3) / 10

    def test_exam_rejects_small_universe(self):
        ranking, faulty = ranking_with_tied_group(4, 2, 1)
        with pytest.raises(ValueError):
            exam(ranking, faulty, 3)


def least_squares_r2(xs, ys):
    """Oracle: r^2 via an explicit least-squares fit, residual form."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    return 1.0 - ss_res / ss_tot


class TestRSquared:
    def test_matches_least_squares_oracle(self):
        rng = random.Random(7)
        xs = [rng.uniform(1, 80) for _ in range(40)]
        ys = [2.0 * x + rng.gauss(0, 5) for x in xs]
        r2, p = r_squared(xs, ys, q=100)
        assert r2 == pytest.approx(least_squares_r2(xs, ys), abs=1e-9)
        assert 0.0 <= p <= 1.0

    def test_perfect_line(self):
        xs = [1.0, 2.0, 3.0, 4.0]
        ys = [3.0, 5.0, 7.0, 9.0]
        r2, _ = r_squared(xs, ys)
        assert r2 == pytest.approx(1.0, abs=1e-12)

    def test_threshold_drops_far_pairs(self):
        # (150, 200) exceeds q in both coordinates and must be ignored.
        xs = [1.0, 2.0, 3.0, 150.0]
        ys = [2.0, 4.0, 6.0, 200.0]
        r2, _ = r_squared(xs, ys, q=100)
        assert r2 == pytest.approx(least_squares_r2(xs[:3], ys[:3]), abs=1e-9)

    def test_pair_kept_if_either_side_within_q(self):
        xs = [1.0, 2.0, 3.0, 150.0]
        ys = [2.0, 4.0, 6.0, 50.0]
        r2, _ = r_squared(xs, ys, q=100)
        assert r2 == pytest.approx(least_squares_r2(xs, ys), abs=1e-9)

    def test_too_few_pairs(self):
        with pytest.raises(CorrelationUndefinedError):
            r_squared([1.0, 2.0], [1.0, 2.0])

    def test_zero_variance(self):
        with pytest.raises(CorrelationUndefinedError):
            r_squared([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            r_squared([1.0], [1.0, 2.0])

    def test_symmetry(self):
        xs = [1.0, 4.0, 2.0, 9.0, 5.0]
        ys = [2.0, 3.0, 8.0, 7.0, 1.0]
        assert r_squared(xs, ys)[0] == pytest.approx(r_squared(ys, xs)[0], abs=1e-12)
