"""Lexer, parser, and AST for the mini language.

Syntax is C-flavored and whitespace-insensitive, so several statements may
share a source line; stmt_index distinguishes them. Element and predicate
numbering follows lexical order and is stable across runs.

    func collatz(x) { var res = 0;
        if ((x % 2) == 0)
            res = x / 2;
        else
            res = x * 3 + 1;
        return res;
    }

Values are integers, booleans, and integer arrays. Statements: var
declaration, assignment (plain or indexed), if/else, while, return, assert,
and expression statements (calls). Comments run from '#' to end of line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..model import ProgramElement


class MiniSyntaxError(Exception):
    def __init__(self, msg, line, col):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


KEYWORDS = {"func", "var", "if", "else", "while", "return", "assert", "true", "false"}
TWO_CHAR = {"==", "!=", "<=", ">=", "&&", "||"}
ONE_CHAR = set("+-*/%<>!=(){}[],;")

ARITH_OPS = ("+", "-", "*", "/", "%")
REL_OPS = ("==", "!=", "<", "<=", ">", ">=")
LOGIC_OPS = ("&&", "||")


@dataclass
class Token:
    kind: str  # "name", "int", "punct", "kw"
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(source)
    while i < n:
        c = source[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
        elif c in " \t\r":
            col += 1
            i += 1
        elif c == "#":
            while i < n and source[i] != "\n":
                i += 1
        elif c.isdigit():
            start = i
            while i < n and source[i].isdigit():
                i += 1
            tokens.append(Token("int", source[start:i], line, col))
            col += i - start
        elif c.isalpha() or c == "_":
            start = i
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            text = source[start:i]
            tokens.append(Token("kw" if text in KEYWORDS else "name", text, line, col))
            col += i - start
        elif source[i : i + 2] in TWO_CHAR:
            tokens.append(Token("punct", source[i : i + 2], line, col))
            i += 2
            col += 2
        elif c in ONE_CHAR:
            tokens.append(Token("punct", c, line, col))
            i += 1
            col += 1
        else:
            raise MiniSyntaxError(f"unexpected character {c!r}", line, col)
    return tokens


# --- AST -------------------------------------------------------------------

_next_node_id = 0


def _nid() -> int:
    global _next_node_id
    _next_node_id += 1
    return _next_node_id


@dataclass
class Expr:
    line: int = field(default=0, kw_only=True)
    node_id: int = field(default_factory=_nid, kw_only=True)


@dataclass
class Num(Expr):
    value: int


@dataclass
class BoolLit(Expr):
    value: bool


@dataclass
class Var(Expr):
    name: str


@dataclass
class Unary(Expr):
    op: str  # "-" or "!"
    operand: Expr


@dataclass
class Binary(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass
class Call(Expr):
    name: str
    args: list


@dataclass
class Index(Expr):
    base: Expr
    index: Expr


@dataclass
class ArrayLit(Expr):
    items: list


@dataclass
class Stmt:
    elem: ProgramElement = field(default=None, kw_only=True)
    node_id: int = field(default_factory=_nid, kw_only=True)


@dataclass
class VarDecl(Stmt):
    name: str
    init: Optional[Expr]


@dataclass
class Assign(Stmt):
    target: str
    index: Optional[Expr]  # indexed store when present
    value: Expr


@dataclass
class If(Stmt):
    cond: Expr
    then_body: list
    else_body: list
    pred_id: str = ""


@dataclass
class While(Stmt):
    cond: Expr
    body: list
    pred_id: str = ""


@dataclass
class Return(Stmt):
    value: Optional[Expr]


@dataclass
class Assert(Stmt):
    cond: Expr


@dataclass
class ExprStmt(Stmt):
    expr: Expr


@dataclass
class Function:
    name: str
    params: list
    body: list
    line: int


@dataclass
class Program:
    functions: dict
    file_id: str
    source: str

    def statements(self) -> list:
        """All statements in lexical order."""
        out = []
        for fn in self.functions.values():
            _collect(fn.body, out)
        return out

    def elements(self) -> list:
        return [s.elem for s in self.statements()]

    def predicates(self) -> list:
        """(pred_id, element) for every if/while, lexical order."""
        return [
            (s.pred_id, s.elem)
            for s in self.statements()
            if isinstance(s, (If, While))
        ]

    def method_map(self) -> dict:
        return {e: e.method_id for e in self.elements()}


def _collect(body, out):
    for s in body:
        out.append(s)
        if isinstance(s, If):
            _collect(s.then_body, out)
            _collect(s.else_body, out)
        elif isinstance(s, While):
            _collect(s.body, out)


class _Parser:
    def __init__(self, tokens, file_id):
        self.tokens = tokens
        self.pos = 0
        self.file_id = file_id
        self.stmts_on_line: dict[int, int] = {}
        self.n_predicates = 0
        self.current_func = ""

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else Token("", "", 1, 1)
            raise MiniSyntaxError("unexpected end of input", last.line, last.col)
        self.pos += 1
        return tok

    def expect(self, text) -> Token:
        tok = self.next()
        if tok.text != text:
            raise MiniSyntaxError(f"expected {text!r}, found {tok.text!r}", tok.line, tok.col)
        return tok

    def at(self, text) -> bool:
        tok = self.peek()
        return tok is not None and tok.text == text

    def accept(self, text) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def element_for(self, line) -> ProgramElement:
        idx = self.stmts_on_line.get(line, 0)
        self.stmts_on_line[line] = idx + 1
        return ProgramElement(self.file_id, line, idx, method_id=self.current_func)

    # -- grammar --

    def program(self) -> Program:
        functions = {}
        while self.peek() is not None:
            fn = self.function()
            if fn.name in functions:
                tok = self.tokens[self.pos - 1]
                raise MiniSyntaxError(f"duplicate function {fn.name!r}", fn.line, 1)
            functions[fn.name] = fn
        if not functions:
            raise MiniSyntaxError("empty program", 1, 1)
        return functions

    def function(self) -> Function:
        kw = self.expect("func")
        name = self.next()
        if name.kind != "name":
            raise MiniSyntaxError("expected function name", name.line, name.col)
        self.current_func = name.text
        self.expect("(")
        params = []
        if not self.at(")"):
            while True:
                p = self.next()
                if p.kind != "name":
                    raise MiniSyntaxError("expected parameter name", p.line, p.col)
                params.append(p.text)
                if not self.accept(","):
                    break
        self.expect(")")
        body = self.block()
        return Function(name.text, params, body, kw.line)

    def block(self) -> list:
        self.expect("{")
        body = []
        while not self.at("}"):
            body.append(self.statement())
        self.expect("}")
        return body

    def stmt_or_block(self) -> list:
        if self.at("{"):
            return self.block()
        return [self.statement()]

    def statement(self) -> Stmt:
        tok = self.peek()
        if tok is None:
            raise MiniSyntaxError("unexpected end of input", 1, 1)
        elem = self.element_for(tok.line)
        if self.accept("var"):
            name = self.next()
            init = self.expression() if self.accept("=") else None
            self.expect(";")
            return VarDecl(name.text, init, elem=elem)
        if self.accept("if"):
            # claim the predicate number before parsing nested bodies so that
            # numbering stays lexical under nesting
            pred = f"p{self.n_predicates}"
            self.n_predicates += 1
            self.expect("(")
            cond = self.expression()
            self.expect(")")
            then_body = self.stmt_or_block()
            else_body = self.stmt_or_block() if self.accept("else") else []
            return If(cond, then_body, else_body, pred_id=pred, elem=elem)
        if self.accept("while"):
            pred = f"p{self.n_predicates}"
            self.n_predicates += 1
            self.expect("(")
            cond = self.expression()
            self.expect(")")
            body = self.stmt_or_block()
            return While(cond, body, pred_id=pred, elem=elem)
        if self.accept("return"):
            value = None if self.at(";") else self.expression()
            self.expect(";")
            return Return(value, elem=elem)
        if self.accept("assert"):
            self.expect("(")
            cond = self.expression()
            self.expect(")")
            self.expect(";")
            return Assert(cond, elem=elem)
        # assignment or expression statement
        if tok.kind == "name":
            nxt = self.tokens[self.pos + 1] if self.pos + 1 < len(self.tokens) else None
            if nxt is not None and nxt.text == "=":
                self.pos += 2
                value = self.expression()
                self.expect(";")
                return Assign(tok.text, None, value, elem=elem)
            if nxt is not None and nxt.text == "[":
                # lookahead for "name[expr] = ..." vs an index read in an expression
                save = self.pos
                self.pos += 1
                try:
                    self.expect("[")
                    index = self.expression()
                    self.expect("]")
                    if self.accept("="):
                        value = self.expression()
                        self.expect(";")
                        return Assign(tok.text, index, value, elem=elem)
                finally:
                    pass
                self.pos = save
        expr = self.expression()
        self.expect(";")
        return ExprStmt(expr, elem=elem)

    def expression(self) -> Expr:
        return self.or_expr()

    def or_expr(self) -> Expr:
        left = self.and_expr()
        while self.at("||"):
            op = self.next()
            right = self.and_expr()
            left = Binary("||", left, right, line=op.line)
        return left

    def and_expr(self) -> Expr:
        left = self.rel_expr()
        while self.at("&&"):
            op = self.next()
            right = self.rel_expr()
            left = Binary("&&", left, right, line=op.line)
        return left

    def rel_expr(self) -> Expr:
        left = self.add_expr()
        while (tok := self.peek()) is not None and tok.text in REL_OPS:
            op = self.next()
            right = self.add_expr()
            left = Binary(op.text, left, right, line=op.line)
        return left

    def add_expr(self) -> Expr:
        left = self.mul_expr()
        while (tok := self.peek()) is not None and tok.text in ("+", "-"):
            op = self.next()
            right = self.mul_expr()
            left = Binary(op.text, left, right, line=op.line)
        return left

    def mul_expr(self) -> Expr:
        left = self.unary_expr()
        while (tok := self.peek()) is not None and tok.text in ("*", "/", "%"):
            op = self.next()
            right = self.unary_expr()
            left = Binary(op.text, left, right, line=op.line)
        return left

    def unary_expr(self) -> Expr:
        tok = self.peek()
        if tok is not None and tok.text in ("-", "!"):
            self.next()
            return Unary(tok.text, self.unary_expr(), line=tok.line)
        return self.postfix_expr()

    def postfix_expr(self) -> Expr:
        expr = self.primary()
        while self.at("["):
            tok = self.next()
            index = self.expression()
            self.expect("]")
            expr = Index(expr, index, line=tok.line)
        return expr

    def primary(self) -> Expr:
        tok = self.next()
        if tok.kind == "int":
            return Num(int(tok.text), line=tok.line)
        if tok.text == "true":
            return BoolLit(True, line=tok.line)
        if tok.text == "false":
            return BoolLit(False, line=tok.line)
        if tok.text == "(":
            expr = self.expression()
            self.expect(")")
            return expr
        if tok.text == "[":
            items = []
            if not self.at("]"):
                while True:
                    items.append(self.expression())
                    if not self.accept(","):
                        break
            self.expect("]")
            return ArrayLit(items, line=tok.line)
        if tok.kind == "name":
            if self.at("("):
                self.next()
                args = []
                if not self.at(")"):
                    while True:
                        args.append(self.expression())
                        if not self.accept(","):
                            break
                self.expect(")")
                return Call(tok.text, args, line=tok.line)
            return Var(tok.text, line=tok.line)
        raise MiniSyntaxError(f"unexpected token {tok.text!r}", tok.line, tok.col)


def parse(source: str, file_id: str = "main") -> Program:
    """Parse source text into a Program with stable element/predicate numbering."""
    parser = _Parser(tokenize(source), file_id)
    functions = parser.program()
    program = Program(functions, file_id, source)
    # reject calls to undefined functions up front
    for stmt in program.statements():
        for node in iter_exprs(stmt):
            if isinstance(node, Call) and node.name not in functions:
                raise MiniSyntaxError(f"call to undefined function {node.name!r}", node.line, 1)
    return program


def iter_exprs(stmt: Stmt):
    """All expression nodes of a statement, lexical order."""
    roots = []
    if isinstance(stmt, VarDecl) and stmt.init is not None:
        roots = [stmt.init]
    elif isinstance(stmt, Assign):
        roots = ([stmt.index] if stmt.index is not None else []) + [stmt.value]
    elif isinstance(stmt, (If, While)):
        roots = [stmt.cond]
    elif isinstance(stmt, Return) and stmt.value is not None:
        roots = [stmt.value]
    elif isinstance(stmt, Assert):
        roots = [stmt.cond]
    elif isinstance(stmt, ExprStmt):
        roots = [stmt.expr]
    stack = list(reversed(roots))
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Unary):
            stack.append(node.operand)
        elif isinstance(node, Binary):
            stack.extend([node.right, node.left])
        elif isinstance(node, Call):
            stack.extend(reversed(node.args))
        elif isinstance(node, Index):
            stack.extend([node.index, node.base])
        elif isinstance(node, ArrayLit):
            stack.extend(reversed(node.items))
