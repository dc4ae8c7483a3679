"""Instrumented tree-walking interpreter.

Every executed statement (and every dynamic predicate evaluation) produces one
trace event recording defined/used variables, the event indices it depends on
(dynamic data dependences, including values returned by calls), and its
dynamic control parent. Predicate evaluations can be individually inverted
for predicate switching.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from ..model import ProgramElement
from .parse import (
    ArrayLit,
    Assert,
    Assign,
    Binary,
    BoolLit,
    Call,
    Expr,
    ExprStmt,
    Function,
    If,
    Index,
    Num,
    Program,
    Return,
    Stmt,
    Unary,
    Var,
    VarDecl,
    While,
)

STEP_BUDGET = 10**6

# Integer magnitude trap; keeps runaway mutants (e.g. squaring in a loop)
# from producing astronomically large bignums before the step budget hits.
INT_LIMIT = 2**63

PASS = "pass"
ASSERT_FAIL = "assertfail"
CRASH = "crash"


@dataclass(frozen=True)
class StackFrameInfo:
    method_id: str
    element: ProgramElement  # crash site for depth 1, call site otherwise
    depth: int


@dataclass(frozen=True)
class Outcome:
    status: str  # PASS | ASSERT_FAIL | CRASH
    crash_kind: Optional[str] = None
    stack: tuple = ()  # StackFrameInfo, depth 1 first; crashes only


@dataclass(frozen=True)
class Event:
    index: int
    element: ProgramElement
    defs: frozenset  # variable names defined here
    uses: frozenset  # variable names read here
    deps: frozenset  # indices of events this one data-depends on
    control: Optional[int]  # index of the controlling branch event


@dataclass(frozen=True)
class TestCase:
    test_id: str
    entry: str
    args: tuple
    expect: Any  # concrete value, or the string "pass" for run-to-completion

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class ExecutionTrace:
    test_id: str
    outcome: Outcome
    covered: frozenset
    events: tuple
    predicate_instances: tuple  # (pred_id, occurrence, taken_branch)
    criterion_event: Optional[int]  # failure-raising event (return event on Pass)
    value: Any = None
    flip_applied: bool = True  # False when a requested flip occurrence was never reached

    @property
    def failed(self) -> bool:
        return self.outcome.status != PASS

    def signature(self) -> tuple:
        """Observable output, used for mutant-kill output comparison."""
        if self.outcome.status == CRASH:
            return (CRASH, self.outcome.crash_kind)
        if self.outcome.status == ASSERT_FAIL:
            elem = self.events[self.criterion_event].element if self.criterion_event is not None else None
            return (ASSERT_FAIL, elem)
        return (PASS, _freeze(self.value))


def _freeze(value):
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    return value


class _Crash(Exception):
    def __init__(self, kind):
        self.kind = kind


class _AssertFailed(Exception):
    pass


class _ReturnSignal(Exception):
    def __init__(self, value, event_index):
        self.value = value
        self.event_index = event_index


@dataclass
class _Frame:
    function: str
    env: dict
    var_events: dict  # name -> defining event index
    call_site_event: Optional[int]
    call_site_elem: Optional[ProgramElement]
    control: list = field(default_factory=list)  # stack of branch event indices

    def control_parent(self) -> Optional[int]:
        return self.control[-1] if self.control else self.call_site_event


class _Interp:
    def __init__(self, program: Program, flip=None, step_budget=STEP_BUDGET):
        self.program = program
        self.flip = flip  # (pred_id, occurrence) or None
        self.flip_applied = False
        self.step_budget = step_budget
        self.steps = 0
        self.events: list[Event] = []
        self.predicate_instances: list[tuple] = []
        self.pred_counts: dict[str, int] = {}
        self.frames: list[_Frame] = []
        self.current_stmt: Optional[Stmt] = None

    # -- event bookkeeping --

    def new_event(self, elem: ProgramElement) -> int:
        self.steps += 1
        if self.steps > self.step_budget:
            raise _Crash("budget")
        idx = len(self.events)
        frame = self.frames[-1]
        self.events.append(
            Event(idx, elem, frozenset(), frozenset(), frozenset(), frame.control_parent())
        )
        return idx

    def finish_event(self, idx: int, defs=(), uses=(), deps=()):
        ev = self.events[idx]
        self.events[idx] = Event(
            ev.index,
            ev.element,
            frozenset(defs),
            frozenset(uses),
            frozenset(deps),
            ev.control,
        )

    # -- expression evaluation: returns (value, uses, deps) --

    def eval(self, expr: Expr):
        if isinstance(expr, Num):
            return expr.value, set(), set()
        if isinstance(expr, BoolLit):
            return expr.value, set(), set()
        if isinstance(expr, Var):
            frame = self.frames[-1]
            if expr.name not in frame.env:
                raise _Crash("undefined-var")
            deps = set()
            if expr.name in frame.var_events:
                deps.add(frame.var_events[expr.name])
            return frame.env[expr.name], {expr.name}, deps
        if isinstance(expr, Unary):
            value, uses, deps = self.eval(expr.operand)
            if expr.op == "-":
                self.require_int(value)
                return -value, uses, deps
            self.require_bool(value)
            return (not value), uses, deps
        if isinstance(expr, Binary):
            return self.eval_binary(expr)
        if isinstance(expr, Index):
            base, uses, deps = self.eval(expr.base)
            idx, u2, d2 = self.eval(expr.index)
            uses |= u2
            deps |= d2
            if not isinstance(base, list):
                raise _Crash("type")
            self.require_int(idx)
            if idx < 0 or idx >= len(base):
                raise _Crash("bounds")
            return base[idx], uses, deps
        if isinstance(expr, ArrayLit):
            items = []
            uses: set = set()
            deps: set = set()
            for item in expr.items:
                v, u, d = self.eval(item)
                items.append(v)
                uses |= u
                deps |= d
            return items, uses, deps
        if isinstance(expr, Call):
            return self.eval_call(expr)
        raise AssertionError(f"unhandled expr {expr!r}")

    def eval_binary(self, expr: Binary):
        if expr.op in ("&&", "||"):
            left, uses, deps = self.eval(expr.left)
            self.require_bool(left)
            if (expr.op == "&&" and not left) or (expr.op == "||" and left):
                return left, uses, deps
            right, u2, d2 = self.eval(expr.right)
            self.require_bool(right)
            return right, uses | u2, deps | d2
        left, uses, deps = self.eval(expr.left)
        right, u2, d2 = self.eval(expr.right)
        uses |= u2
        deps |= d2
        op = expr.op
        if op in ("==", "!="):
            eq = left == right
            return (eq if op == "==" else not eq), uses, deps
        self.require_int(left)
        self.require_int(right)
        if op == "+":
            return self.checked(left + right), uses, deps
        if op == "-":
            return self.checked(left - right), uses, deps
        if op == "*":
            return self.checked(left * right), uses, deps
        if op == "/":
            if right == 0:
                raise _Crash("div0")
            return int(left / right) if (left < 0) != (right < 0) else left // right, uses, deps
        if op == "%":
            if right == 0:
                raise _Crash("div0")
            return left - right * (int(left / right) if (left < 0) != (right < 0) else left // right), uses, deps
        if op == "<":
            return left < right, uses, deps
        if op == "<=":
            return left <= right, uses, deps
        if op == ">":
            return left > right, uses, deps
        if op == ">=":
            return left >= right, uses, deps
        raise AssertionError(f"unhandled operator {op}")

    def eval_call(self, expr: Call):
        fn: Function = self.program.functions[expr.name]
        if len(expr.args) != len(fn.params):
            raise _Crash("arity")
        values = []
        uses: set = set()
        deps: set = set()
        for arg in expr.args:
            v, u, d = self.eval(arg)
            values.append(v)
            uses |= u
            deps |= d
        call_event = self.current_event
        caller_elem = self.current_stmt.elem if self.current_stmt is not None else None
        frame = _Frame(
            fn.name,
            dict(zip(fn.params, values)),
            {p: call_event for p in fn.params},
            call_event,
            caller_elem,
        )
        if len(self.frames) >= 200:
            raise _Crash("stack-overflow")
        self.frames.append(frame)
        saved_stmt = self.current_stmt
        try:
            self.exec_body(fn.body)
        except _ReturnSignal as ret:
            self.frames.pop()
            self.current_stmt = saved_stmt
            deps.add(ret.event_index)
            return ret.value, uses, deps
        # A crash propagates past this point without unwinding self.frames,
        # deliberately: crash_stack() needs the frames as they were.
        self.frames.pop()
        self.current_stmt = saved_stmt
        # fell off the end of the function: implicit return 0 with no event
        return 0, uses, deps

    @staticmethod
    def checked(value: int) -> int:
        if value > INT_LIMIT or value < -INT_LIMIT:
            raise _Crash("overflow")
        return value

    @staticmethod
    def require_int(value):
        if not isinstance(value, int) or isinstance(value, bool):
            raise _Crash("type")

    @staticmethod
    def require_bool(value):
        if not isinstance(value, bool):
            raise _Crash("type")

    # -- statements --

    def exec_body(self, body):
        for stmt in body:
            self.exec_stmt(stmt)

    def eval_predicate(self, stmt) -> tuple[bool, set, set]:
        value, uses, deps = self.eval(stmt.cond)
        self.require_bool(value)
        occurrence = self.pred_counts.get(stmt.pred_id, 0)
        self.pred_counts[stmt.pred_id] = occurrence + 1
        if self.flip is not None and self.flip == (stmt.pred_id, occurrence):
            value = not value
            self.flip_applied = True
        self.predicate_instances.append((stmt.pred_id, occurrence, value))
        return value, uses, deps

    def exec_stmt(self, stmt: Stmt):
        self.current_stmt = stmt
        frame = self.frames[-1]
        idx = self.new_event(stmt.elem)
        self.current_event = idx
        if isinstance(stmt, VarDecl):
            if stmt.init is not None:
                value, uses, deps = self.eval(stmt.init)
            else:
                value, uses, deps = 0, set(), set()
            frame.env[stmt.name] = value
            frame.var_events[stmt.name] = idx
            self.finish_event(idx, defs={stmt.name}, uses=uses, deps=deps)
        elif isinstance(stmt, Assign):
            value, uses, deps = self.eval(stmt.value)
            if stmt.index is not None:
                pos, u2, d2 = self.eval(stmt.index)
                uses |= u2 | {stmt.target}
                deps |= d2
                if stmt.target not in frame.env:
                    raise _Crash("undefined-var")
                if stmt.target in frame.var_events:
                    deps.add(frame.var_events[stmt.target])
                arr = frame.env[stmt.target]
                if not isinstance(arr, list):
                    raise _Crash("type")
                self.require_int(pos)
                if pos < 0 or pos >= len(arr):
                    raise _Crash("bounds")
                arr = list(arr)
                arr[pos] = value
                frame.env[stmt.target] = arr
            else:
                if stmt.target not in frame.env:
                    raise _Crash("undefined-var")
                frame.env[stmt.target] = value
            frame.var_events[stmt.target] = idx
            self.finish_event(idx, defs={stmt.target}, uses=uses, deps=deps)
        elif isinstance(stmt, If):
            value, uses, deps = self.eval_predicate(stmt)
            self.finish_event(idx, uses=uses, deps=deps)
            frame.control.append(idx)
            try:
                self.exec_body(stmt.then_body if value else stmt.else_body)
            finally:
                frame.control.pop()
        elif isinstance(stmt, While):
            value, uses, deps = self.eval_predicate(stmt)
            self.finish_event(idx, uses=uses, deps=deps)
            while value:
                frame.control.append(idx)
                try:
                    self.exec_body(stmt.body)
                finally:
                    frame.control.pop()
                self.current_stmt = stmt
                idx = self.new_event(stmt.elem)
                self.current_event = idx
                value, uses, deps = self.eval_predicate(stmt)
                self.finish_event(idx, uses=uses, deps=deps)
        elif isinstance(stmt, Return):
            if stmt.value is not None:
                value, uses, deps = self.eval(stmt.value)
            else:
                value, uses, deps = 0, set(), set()
            self.finish_event(idx, uses=uses, deps=deps)
            raise _ReturnSignal(value, idx)
        elif isinstance(stmt, Assert):
            value, uses, deps = self.eval(stmt.cond)
            self.require_bool(value)
            self.finish_event(idx, uses=uses, deps=deps)
            if not value:
                raise _AssertFailed()
        elif isinstance(stmt, ExprStmt):
            _, uses, deps = self.eval(stmt.expr)
            self.finish_event(idx, uses=uses, deps=deps)
        else:
            raise AssertionError(f"unhandled statement {stmt!r}")

    def crash_stack(self) -> tuple:
        frames = []
        depth = 1
        site = self.current_stmt.elem if self.current_stmt is not None else None
        for frame in reversed(self.frames):
            frames.append(StackFrameInfo(frame.function, site, depth))
            depth += 1
            site = frame.call_site_elem
        return tuple(frames)


def run(
    program: Program,
    test: TestCase,
    flip: Optional[tuple[str, int]] = None,
    step_budget: int = STEP_BUDGET,
) -> ExecutionTrace:
    """Execute one test, optionally inverting a single dynamic predicate instance."""
    if test.entry not in program.functions:
        raise ValueError(f"entry function {test.entry!r} not defined")
    interp = _Interp(program, flip=flip, step_budget=step_budget)
    fn = program.functions[test.entry]
    if len(test.args) != len(fn.params):
        raise ValueError(f"{test.entry} expects {len(fn.params)} args, got {len(test.args)}")
    args = [list(a) if isinstance(a, (list, tuple)) else a for a in test.args]
    interp.frames.append(
        _Frame(fn.name, dict(zip(fn.params, args)), {}, None, None)
    )
    interp.current_event = None
    value = None
    criterion = None
    try:
        try:
            interp.exec_body(fn.body)
            value = 0
            criterion = len(interp.events) - 1 if interp.events else None
        except _ReturnSignal as ret:
            value = ret.value
            criterion = ret.event_index
        if test.expect == "pass" or value == test.expect or (
            isinstance(test.expect, (list, tuple))
            and isinstance(value, list)
            and list(test.expect) == value
        ):
            outcome = Outcome(PASS)
        else:
            # wrong result: the harness assertion fails (not a crash)
            outcome = Outcome(ASSERT_FAIL)
    except _AssertFailed:
        outcome = Outcome(ASSERT_FAIL)
        criterion = len(interp.events) - 1
    except _Crash as crash:
        outcome = Outcome(CRASH, crash_kind=crash.kind, stack=interp.crash_stack())
        criterion = len(interp.events) - 1 if interp.events else None
    covered = frozenset(ev.element for ev in interp.events)
    return ExecutionTrace(
        test_id=test.test_id,
        outcome=outcome,
        covered=covered,
        events=tuple(interp.events),
        predicate_instances=tuple(interp.predicate_instances),
        criterion_event=criterion,
        value=value,
        flip_applied=interp.flip_applied if flip is not None else True,
    )


def run_with_flip(
    program: Program, test: TestCase, pred_id: str, occurrence: int
) -> ExecutionTrace:
    """Re-run a test with one dynamic predicate evaluation inverted.

    If the occurrence is never reached the trace reports flip_applied=False.
    """
    return run(program, test, flip=(pred_id, occurrence))
