"""First-order mutant generation for the mini language.

Operator table (an explicit extension point, not a fixed standard set):
  aor  arithmetic operator replacement  (+ - * / % -> each other)
  ror  relational operator replacement  (== != < <= > >= -> each other)
  lor  logical operator replacement     (&& <-> ||)
  cpm  constant perturbation            (c -> c+1, c -> c-1)
  sdl  statement deletion               (assignments and expression statements)
  ncd  negate condition                 (if/while cond -> !cond)
"""

from __future__ import annotations

import copy
from dataclasses import dataclass

from ..model import ProgramElement
from .parse import (
    ARITH_OPS,
    Assign,
    Binary,
    ExprStmt,
    If,
    LOGIC_OPS,
    Num,
    Program,
    REL_OPS,
    Stmt,
    Unary,
    While,
    iter_exprs,
)


@dataclass(frozen=True)
class Mutant:
    mutant_id: str
    element: ProgramElement  # the statement the mutation lives in
    operator: str
    description: str
    program: Program


def _find_stmt(program: Program, node_id: int) -> Stmt:
    for stmt in program.statements():
        if stmt.node_id == node_id:
            return stmt
    raise KeyError(node_id)


def _find_expr(program: Program, node_id: int):
    for stmt in program.statements():
        for node in iter_exprs(stmt):
            if node.node_id == node_id:
                return stmt, node
    raise KeyError(node_id)


def _stmt_fingerprint(stmt: Stmt) -> str:
    parts = [type(stmt).__name__]
    for node in iter_exprs(stmt):
        label = type(node).__name__
        for attr in ("op", "value", "name"):
            if hasattr(node, attr):
                label += f":{getattr(node, attr)}"
        parts.append(label)
    return "|".join(parts)


def gen_mutants(program: Program) -> list[Mutant]:
    """Every applicable operator at every applicable site, lexical order, deduplicated."""
    plans = []  # (kind, stmt_node_id, expr_node_id or None, payload, description)
    for stmt in program.statements():
        for node in iter_exprs(stmt):
            if isinstance(node, Binary):
                if node.op in ARITH_OPS:
                    for op in ARITH_OPS:
                        if op != node.op:
                            plans.append(("aor", stmt.node_id, node.node_id, op, f"{node.op} -> {op}"))
                elif node.op in REL_OPS:
                    for op in REL_OPS:
                        if op != node.op:
                            plans.append(("ror", stmt.node_id, node.node_id, op, f"{node.op} -> {op}"))
                elif node.op in LOGIC_OPS:
                    other = "||" if node.op == "&&" else "&&"
                    plans.append(("lor", stmt.node_id, node.node_id, other, f"{node.op} -> {other}"))
            elif isinstance(node, Num):
                plans.append(("cpm", stmt.node_id, node.node_id, node.value + 1, f"{node.value} -> {node.value + 1}"))
                plans.append(("cpm", stmt.node_id, node.node_id, node.value - 1, f"{node.value} -> {node.value - 1}"))
        if isinstance(stmt, (Assign, ExprStmt)):
            plans.append(("sdl", stmt.node_id, None, None, "delete statement"))
        if isinstance(stmt, (If, While)):
            plans.append(("ncd", stmt.node_id, None, None, "negate condition"))

    mutants = []
    seen: set[tuple] = set()
    for kind, stmt_id, expr_id, payload, description in plans:
        mutated = copy.deepcopy(program)
        if kind in ("aor", "ror", "lor"):
            stmt, node = _find_expr(mutated, expr_id)
            node.op = payload
        elif kind == "cpm":
            stmt, node = _find_expr(mutated, expr_id)
            node.value = payload
        elif kind == "sdl":
            stmt = _find_stmt(mutated, stmt_id)
            _delete_stmt(mutated, stmt)
        elif kind == "ncd":
            stmt = _find_stmt(mutated, stmt_id)
            stmt.cond = Unary("!", stmt.cond, line=stmt.cond.line)
        else:
            raise AssertionError(kind)
        target = stmt.elem
        key = (target, kind if kind == "sdl" else _stmt_fingerprint(stmt))
        if key in seen:
            continue
        seen.add(key)
        mutants.append(
            Mutant(f"m{len(mutants):03d}", target, kind, description, mutated)
        )
    return mutants


def _delete_stmt(program: Program, stmt: Stmt):
    def prune(body: list) -> bool:
        for i, s in enumerate(body):
            if s is stmt:
                del body[i]
                return True
            if isinstance(s, If):
                if prune(s.then_body) or prune(s.else_body):
                    return True
            elif isinstance(s, While):
                if prune(s.body):
                    return True
        return False

    for fn in program.functions.values():
        if prune(fn.body):
            return
    raise KeyError("statement not found for deletion")
