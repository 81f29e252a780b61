"""
Problem file format.

    # comment
    var x in [-1, 2];
    var y in [0, 3];
    eq: x + y = 0;
    ineq: x^2 - 0.5 >= 0;
    proj: x;

Expressions support + - * / ^integer, interval literals [a, b] and the
functions sqr, sqrt, exp, log, sin, cos. Decimal literals that are not
exactly representable become one-ULP enclosures. Bounds of domains and
interval literals may be inf or -inf; literals beyond the float range
become unbounded.
"""
import logging
import math
import re
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from src.interval.box import Box
from src.interval.interval import ArithOp, Interval, UnaryOp
from src.model.expr import Binary, Constant, Expr, Unary, Var, neg
from src.model.problem import NCSP, Constraint, Relation

logger = logging.getLogger(__name__)

INF = math.inf

KEYWORDS = {"var", "in", "eq", "ineq", "proj"}
FUNCTIONS = {
    "sqr": UnaryOp.SQR,
    "sqrt": UnaryOp.SQRT,
    "exp": UnaryOp.EXP,
    "log": UnaryOp.LOG,
    "sin": UnaryOp.SIN,
    "cos": UnaryOp.COS,
}

TOKEN_PATTERNS = [
    ("comment", r"#[^\n]*"),
    ("space", r"[ \t\r]+"),
    ("newline", r"\n"),
    ("number", r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"),
    ("ident", r"[A-Za-z_][A-Za-z_0-9]*"),
    ("op", r">=|<=|[-+*/^=:;,\[\]()]"),
]
TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in TOKEN_PATTERNS))


class ProblemParseError(ValueError):
    """Problem text rejected, with the position of the offending token"""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        location = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{location}{message}")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = TOKEN_RE.match(text, pos)
        if not match:
            raise ProblemParseError(f"Unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = match.lastgroup
        if kind == "newline":
            line += 1
            line_start = match.end()
        elif kind not in ("space", "comment"):
            tokens.append(Token(kind, match.group(), line, pos - line_start + 1))
        pos = match.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    """Recursive-descent parser over the token list"""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0
        self.names: List[str] = []
        self.index: Dict[str, int] = {}
        self.domains: List[Interval] = []
        self.constraints: List[Constraint] = []
        self.projection: Optional[List[int]] = None

    # Token helpers

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _error(self, message: str, token: Optional[Token] = None) -> ProblemParseError:
        token = token or self.current
        return ProblemParseError(message, token.line, token.column)

    def _check(self, text: str) -> bool:
        token = self.current
        return token.kind in ("op", "ident") and token.text == text

    def _accept(self, text: str) -> bool:
        if self._check(text):
            self.pos += 1
            return True
        return False

    def _expect(self, text: str) -> Token:
        token = self.current
        if not self._check(text):
            found = token.text or "end of input"
            raise self._error(f"Expected {text!r} but found {found!r}")
        self.pos += 1
        return token

    def _expect_ident(self) -> Token:
        token = self.current
        if token.kind != "ident" or token.text in KEYWORDS:
            raise self._error(f"Expected an identifier but found {token.text or 'end of input'!r}")
        self.pos += 1
        return token

    # Statements

    def parse_program(self) -> None:
        while self.current.kind != "eof":
            token = self.current
            if self._accept("var"):
                self._parse_declaration()
            elif self._accept("eq"):
                self._parse_constraint(Relation.EQ_ZERO)
            elif self._accept("ineq"):
                self._parse_constraint(Relation.GEQ_ZERO)
            elif self._accept("proj"):
                self._parse_projection(token)
            else:
                raise self._error(f"Expected 'var', 'eq', 'ineq' or 'proj' but found {token.text!r}")

    def _parse_declaration(self) -> None:
        name_token = self._expect_ident()
        name = name_token.text
        if name in self.index:
            raise self._error(f"Variable {name!r} declared twice", name_token)
        if name in FUNCTIONS:
            raise self._error(f"{name!r} is a function name", name_token)
        self._expect("in")
        open_token = self._expect("[")
        lo = self._parse_bound(upper=False)
        self._expect(",")
        hi = self._parse_bound(upper=True)
        self._expect("]")
        self._expect(";")
        if lo > hi or lo == INF or hi == -INF:
            raise self._error(f"Malformed interval [{lo}, {hi}] for {name!r}", open_token)
        self.index[name] = len(self.names)
        self.names.append(name)
        self.domains.append(Interval(lo, hi))

    def _parse_constraint(self, relation: Relation) -> None:
        self._expect(":")
        lhs = self._parse_expr()
        relop = self.current
        if relation is Relation.EQ_ZERO:
            self._expect("=")
            rhs = self._parse_expr()
            expr = _normalize(lhs, rhs)
        elif self._accept(">="):
            rhs = self._parse_expr()
            expr = _normalize(lhs, rhs)
        elif self._accept("<="):
            rhs = self._parse_expr()
            expr = _normalize(rhs, lhs)
        else:
            raise self._error(f"Expected '>=' or '<=' but found {relop.text!r}")
        self._expect(";")
        self.constraints.append(Constraint(expr, relation))

    def _parse_projection(self, keyword: Token) -> None:
        if self.projection is not None:
            raise self._error("Duplicate 'proj' clause", keyword)
        self._expect(":")
        chosen: List[int] = []
        while not self._check(";"):
            token = self._expect_ident()
            if token.text not in self.index:
                raise self._error(f"Unknown identifier {token.text!r}", token)
            chosen.append(self.index[token.text])
        self._expect(";")
        if not chosen:
            raise self._error("Empty 'proj' clause", keyword)
        self.projection = chosen

    # Literals

    def _parse_bound(self, upper: bool) -> float:
        """Outward float for a signed decimal or inf, rounded toward the side given by upper"""
        negative = self._accept("-")
        token = self.current
        if token.kind == "ident" and token.text == "inf":
            self.pos += 1
            return -INF if negative else INF
        if token.kind != "number":
            raise self._error(f"Expected a number but found {token.text or 'end of input'!r}")
        self.pos += 1
        value = Interval.from_decimal(token.text)
        if negative:
            value = -value
        return value.hi if upper else value.lo

    # Expressions: expr := term (('+' | '-') term)*

    def _parse_expr(self) -> Expr:
        node = self._parse_term()
        while self.current.kind == "op" and self.current.text in ("+", "-"):
            op = ArithOp.ADD if self.current.text == "+" else ArithOp.SUB
            self.pos += 1
            node = Binary(op, node, self._parse_term())
        return node

    def _parse_term(self) -> Expr:
        node = self._parse_unary()
        while self.current.kind == "op" and self.current.text in ("*", "/"):
            op = ArithOp.MUL if self.current.text == "*" else ArithOp.DIV
            self.pos += 1
            node = Binary(op, node, self._parse_unary())
        return node

    def _parse_unary(self) -> Expr:
        if self._accept("-"):
            return neg(self._parse_unary())
        if self._accept("+"):
            return self._parse_unary()
        return self._parse_power()

    def _parse_power(self) -> Expr:
        node = self._parse_atom()
        if self._accept("^"):
            negative = self._accept("-")
            token = self.current
            if token.kind != "number" or not token.text.isdigit():
                raise self._error(f"Expected an integer exponent but found {token.text!r}")
            self.pos += 1
            k = -int(token.text) if negative else int(token.text)
            if k == 2:
                return Unary(UnaryOp.SQR, node)
            return Unary(UnaryOp.POW, node, k)
        return node

    def _parse_atom(self) -> Expr:
        token = self.current
        if token.kind == "number":
            self.pos += 1
            return Constant(Interval.from_decimal(token.text))
        if self._accept("("):
            node = self._parse_expr()
            self._expect(")")
            return node
        if self._accept("["):
            lo = self._parse_bound(upper=False)
            self._expect(",")
            hi = self._parse_bound(upper=True)
            self._expect("]")
            if lo > hi or lo == INF or hi == -INF:
                raise self._error(f"Malformed interval literal [{lo}, {hi}]", token)
            return Constant(Interval(lo, hi))
        if token.kind == "ident":
            self.pos += 1
            if token.text in FUNCTIONS:
                self._expect("(")
                arg = self._parse_expr()
                self._expect(")")
                return Unary(FUNCTIONS[token.text], arg)
            if token.text in self.index:
                return Var(self.index[token.text])
            raise self._error(f"Unknown identifier {token.text!r}", token)
        raise self._error(f"Unexpected {token.text or 'end of input'!r} in expression")


def _normalize(lhs: Expr, rhs: Expr) -> Expr:
    """lhs - rhs, keeping lhs alone when rhs is the literal 0"""
    if isinstance(rhs, Constant) and rhs.value == Interval(0.0, 0.0):
        return lhs
    return Binary(ArithOp.SUB, lhs, rhs)


def parse(text: str, title: str = "") -> NCSP:
    """Parse problem text into an NCSP"""
    parser = _Parser(tokenize(text))
    parser.parse_program()

    if not parser.names:
        raise ProblemParseError("Problem declares no variables")

    n = len(parser.names)
    e = sum(1 for c in parser.constraints if c.relation is Relation.EQ_ZERO)
    projection: Tuple[int, ...] = ()
    if parser.projection is not None:
        projection = tuple(parser.projection)
    elif e > 0:
        if n <= e:
            raise ProblemParseError(
                f"{e} equations over {n} variables: the problem must be under-constrained "
                f"or name its projection variables with 'proj:'"
            )
        projection = tuple(range(e))

    try:
        problem = NCSP(
            names=tuple(parser.names),
            initial=Box(tuple(parser.domains)),
            constraints=tuple(parser.constraints),
            projection=projection,
            title=title,
        )
    except ValueError as exc:
        raise ProblemParseError(str(exc)) from exc

    logger.debug(f"Parsed problem {title!r}: n={problem.n}, e={problem.equation_count}, i={problem.inequality_count}")
    return problem


def load_problem(path: str) -> NCSP:
    """Read and parse a UTF-8 problem file"""
    file_path = Path(path)
    text = file_path.read_text(encoding="utf-8")
    return parse(text, title=file_path.stem)


# Printing

def _format_number(x: float) -> str:
    """Shortest text that reads back as exactly x"""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    text = repr(float(x))
    if Fraction(text) != Fraction(x):
        text = str(Decimal(x))
    return text


def format_expr(expr: Expr, names: Tuple[str, ...]) -> str:
    if isinstance(expr, Var):
        return names[expr.index]
    if isinstance(expr, Constant):
        value = expr.value
        if value.is_degenerate:
            return _format_number(value.lo)
        return f"[{_format_number(value.lo)}, {_format_number(value.hi)}]"
    if isinstance(expr, Binary):
        return f"({format_expr(expr.left, names)} {expr.op.value} {format_expr(expr.right, names)})"
    if isinstance(expr, Unary):
        inner = format_expr(expr.arg, names)
        if expr.op is UnaryOp.NEG:
            return f"(-{inner})"
        if expr.op is UnaryOp.SQR:
            return f"({inner})^2"
        if expr.op is UnaryOp.POW:
            return f"({inner})^{expr.exponent}"
        return f"{expr.op.value}({inner})"
    raise TypeError(f"Not an expression node: {expr!r}")


def format_problem(problem: NCSP) -> str:
    """Problem text that parses back to a structurally identical NCSP"""
    lines = []
    if problem.title:
        lines.append(f"# {problem.title}")
    for name, domain in zip(problem.names, problem.initial):
        lines.append(f"var {name} in [{_format_number(domain.lo)}, {_format_number(domain.hi)}];")
    for constraint in problem.constraints:
        body = format_expr(constraint.expr, problem.names)
        if constraint.relation is Relation.EQ_ZERO:
            lines.append(f"eq: {body} = 0;")
        else:
            lines.append(f"ineq: {body} >= 0;")
    if problem.projection:
        lines.append(f"proj: {' '.join(problem.names[i] for i in problem.projection)};")
    return "\n".join(lines) + "\n"
