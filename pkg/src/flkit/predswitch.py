"""Critical-predicate discovery by flipping one dynamic predicate evaluation at a time."""

from __future__ import annotations

from dataclasses import dataclass

from .minilang.interp import PASS, STEP_BUDGET, TestCase, run
from .minilang.parse import Program
from .model import ScoredList

# Bounds the number of re-executions per failing test; instances are taken
# in execution order.
INSTANCE_BUDGET = 10**4


@dataclass(frozen=True)
class SwitchResult:
    critical: frozenset  # predicate elements whose flip turns the failure into a pass
    reexecutions: int


def find_critical_predicates(
    program: Program,
    test: TestCase,
    instance_budget: int = INSTANCE_BUDGET,
    step_budget: int = STEP_BUDGET,
) -> SwitchResult:
    """Flip each dynamic predicate instance of the failing run, one per re-execution.

    A flip that crashes or exhausts the step budget simply does not qualify.
    """
    baseline = run(program, test, step_budget=step_budget)
    if not baseline.failed:
        raise ValueError(f"test {test.test_id} passes; nothing to switch")
    pred_elem = dict(program.predicates())
    critical = set()
    instances = baseline.predicate_instances[:instance_budget]
    for pred_id, occurrence, _branch in instances:
        flipped = run(program, test, flip=(pred_id, occurrence), step_budget=step_budget)
        if flipped.flip_applied and flipped.outcome.status == PASS:
            critical.add(pred_elem[pred_id])
    return SwitchResult(frozenset(critical), len(instances))


def critical_predicates_for_tests(
    program: Program,
    failing_tests,
    instance_budget: int = INSTANCE_BUDGET,
    step_budget: int = STEP_BUDGET,
) -> tuple[ScoredList, int]:
    """Union of critical predicates over failing tests, as a set-valued scored list."""
    critical = set()
    reexecutions = 0
    for test in failing_tests:
        result = find_critical_predicates(program, test, instance_budget, step_budget)
        critical |= result.critical
        reexecutions += result.reexecutions
    return ScoredList("predswitch", [(e, 1.0) for e in critical]), reexecutions
