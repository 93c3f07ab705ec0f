"""A small text language for q-series, parsed by recursive descent.

Examples::

    poch(q^4; q^4; inf) / poch(q; q; inf)
    sum(n, 0, inf, poch(-q^2; q^2; n) * q^(2*n+1) / poch(q; q^2; n+1))
    1 + sum(n, 1, inf, (-1)^n * q^(3*n) / (1 - q^(2*n)))

Grammar::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := "-" factor | atom ("^" power)?
    power  := int | ident | "(" affine ")"
    atom   := int | "q" | ident | "(" expr ")" | poch | sum
    poch   := "poch" "(" ["-"] "q" ["^" power] ";" "q" ["^" int] ";" (affine | "inf") ")"
    sum    := "sum" "(" ident "," ["-"] int "," "inf" "," expr ")"
    affine := ["-"] aterm (("+" | "-") aterm)*
    aterm  := int ["*" ident] | ident ["*" int]

Identifiers are single lowercase letters other than ``q`` and must be bound by
an enclosing ``sum``.  Unary minus applies to the whole factor, so ``-q^2`` is
``-(q^2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from . import series as S
from .qproducts import INFINITE, _times_poch
from .report import VerificationReport, from_comparison, timed
from .series import Series, SeriesError

MAX_DEPTH = 200
MAX_POWER = 10_000
SUM_PROBES = 3


class QExprError(ValueError):
    """Error with an optional 1-based source position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class QExprSyntaxError(QExprError):
    pass


class QExprEvalError(QExprError):
    pass


# ---------------------------------------------------------------------------
# lexer


@dataclass(frozen=True)
class Token:
    kind: str  # INT, Q, IDENT, POCH, SUM, INF, a punctuation character, or EOF
    text: str
    line: int
    column: int


_PUNCT = set("+-*/^();,")
_KEYWORDS = {"poch": "POCH", "sum": "SUM", "inf": "INF"}


def tokenize(text: str) -> list[Token]:
    tokens = []
    i, line, col = 0, 1, 1
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        if ch in _PUNCT:
            tokens.append(Token(ch, ch, line, col))
            i, col = i + 1, col + 1
            continue
        if ch.isascii() and ch.isdigit():
            j = i
            while j < len(text) and text[j].isascii() and text[j].isdigit():
                j += 1
            if j < len(text) and text[j] == ".":
                raise QExprSyntaxError("exponents and constants must be integers", line, col + j - i)
            tokens.append(Token("INT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isascii() and ch.isalpha():
            j = i
            while j < len(text) and text[j].isascii() and text[j].isalpha():
                j += 1
            word = text[i:j]
            if word in _KEYWORDS:
                tokens.append(Token(_KEYWORDS[word], word, line, col))
            elif word == "q":
                tokens.append(Token("Q", word, line, col))
            elif len(word) == 1 and word.islower():
                tokens.append(Token("IDENT", word, line, col))
            else:
                raise QExprSyntaxError(
                    f"unknown word {word!r}; variables are single lowercase letters", line, col
                )
            col += j - i
            i = j
            continue
        raise QExprSyntaxError(f"unexpected character {ch!r}", line, col)
    if tokens:
        last = tokens[-1]
        tokens.append(Token("EOF", "", last.line, last.column))
    else:
        tokens.append(Token("EOF", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Affine:
    """const + sum coeff*var with integer coefficients."""

    const: int = 0
    terms: tuple[tuple[str, int], ...] = ()

    @classmethod
    def of(cls, const: int = 0, terms: dict[str, int] | None = None) -> Affine:
        items = tuple(sorted((v, c) for v, c in (terms or {}).items() if c))
        return cls(const, items)

    def __add__(self, other: Affine) -> Affine:
        merged = dict(self.terms)
        for v, c in other.terms:
            merged[v] = merged.get(v, 0) + c
        return Affine.of(self.const + other.const, merged)

    def scale(self, k: int) -> Affine:
        return Affine.of(self.const * k, {v: c * k for v, c in self.terms})

    def coeff(self, var: str) -> int:
        return dict(self.terms).get(var, 0)

    @property
    def is_constant(self) -> bool:
        return not self.terms

    def substitute(self, var: str, value: int) -> Affine:
        rest = {v: c for v, c in self.terms if v != var}
        return Affine.of(self.const + self.coeff(var) * value, rest)

    def evaluate(self, env: dict[str, int]) -> int:
        return self.const + sum(c * env[v] for v, c in self.terms)

    def __str__(self) -> str:
        parts = [f"{c}*{v}" if c != 1 else v for v, c in self.terms]
        if self.const or not parts:
            parts.append(str(self.const))
        return "+".join(parts).replace("+-", "-")


@dataclass(frozen=True)
class Node:
    line: int = field(default=0, compare=False, kw_only=True)
    column: int = field(default=0, compare=False, kw_only=True)


@dataclass(frozen=True)
class IntLit(Node):
    value: int


@dataclass(frozen=True)
class Var(Node):
    name: str  # "q" or a bound identifier


@dataclass(frozen=True)
class Pow(Node):
    base: "ExprAst"
    exp: Affine


@dataclass(frozen=True)
class Neg(Node):
    operand: "ExprAst"


@dataclass(frozen=True)
class BinOp(Node):
    left: "ExprAst"
    right: "ExprAst"


class Add(BinOp):
    pass


class Sub(BinOp):
    pass


class Mul(BinOp):
    pass


class Div(BinOp):
    pass


@dataclass(frozen=True)
class Poch(Node):
    """(sign q^base; q^step)_count, count None meaning infinite."""

    sign: int
    base: Affine
    step: int
    count: Affine | None


@dataclass(frozen=True)
class Sum(Node):
    var: str
    lower: int
    body: "ExprAst"


ExprAst = Union[IntLit, Var, Pow, Neg, Add, Sub, Mul, Div, Poch, Sum]


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.scope: list[str] = []
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None) -> QExprSyntaxError:
        tok = tok or self.tok
        if tok.kind == "EOF":
            prev = self.tokens[self.i - 1] if self.i > 0 else None
            after = f" after {prev.text!r}" if prev else ""
            message = f"unexpected end of input{after}; {message}"
        else:
            message = f"unexpected {tok.text!r}; {message}"
        return QExprSyntaxError(message, tok.line, tok.column)

    def advance(self) -> Token:
        tok = self.tok
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def expect(self, kind: str, what: str | None = None) -> Token:
        if self.tok.kind != kind:
            raise self.error(f"expected {what or repr(kind)}")
        return self.advance()

    def at(self, kind: str) -> bool:
        return self.tok.kind == kind

    def enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise QExprSyntaxError(
                f"expression nested deeper than {MAX_DEPTH} levels", self.tok.line, self.tok.column
            )

    def leave(self):
        self.depth -= 1

    # expr := term (("+"|"-") term)*
    def expr(self) -> ExprAst:
        self.enter()
        node = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.advance()
            right = self.term()
            cls = Add if op.kind == "+" else Sub
            node = cls(node, right, line=op.line, column=op.column)
        self.leave()
        return node

    def term(self) -> ExprAst:
        node = self.factor()
        while self.tok.kind in ("*", "/"):
            op = self.advance()
            right = self.factor()
            cls = Mul if op.kind == "*" else Div
            node = cls(node, right, line=op.line, column=op.column)
        return node

    def factor(self) -> ExprAst:
        self.enter()
        try:
            if self.at("-"):
                op = self.advance()
                return Neg(self.factor(), line=op.line, column=op.column)
            start = self.tok
            node = self.atom()
            if self.at("^"):
                self.advance()
                exp = self.power()
                node = Pow(node, exp, line=start.line, column=start.column)
            return node
        finally:
            self.leave()

    def power(self) -> Affine:
        if self.at("INT"):
            return Affine.of(int(self.advance().text))
        if self.at("IDENT"):
            return Affine.of(0, {self.bound(self.advance()): 1})
        if self.at("("):
            self.advance()
            value = self.affine()
            self.expect(")", "')' closing the exponent")
            return value
        raise self.error("expected an integer, a variable or '(' affine ')' after '^'")

    def bound(self, tok: Token) -> str:
        if tok.text not in self.scope:
            raise QExprSyntaxError(f"unbound variable {tok.text!r}", tok.line, tok.column)
        return tok.text

    def affine(self) -> Affine:
        negate = False
        if self.at("-"):
            self.advance()
            negate = True
        total = self.aterm()
        if negate:
            total = total.scale(-1)
        while self.tok.kind in ("+", "-"):
            sign = -1 if self.advance().kind == "-" else 1
            total = total + self.aterm().scale(sign)
        return total

    def aterm(self) -> Affine:
        if self.at("INT"):
            k = int(self.advance().text)
            if self.at("*"):
                self.advance()
                if not self.at("IDENT"):
                    raise self.error("exponent must be affine: expected a variable after '*'")
                return Affine.of(0, {self.bound(self.advance()): k})
            return Affine.of(k)
        if self.at("IDENT"):
            name = self.bound(self.advance())
            if self.at("*"):
                self.advance()
                if not self.at("INT"):
                    raise self.error("exponent must be affine: expected an integer after '*'")
                return Affine.of(0, {name: int(self.advance().text)})
            return Affine.of(0, {name: 1})
        if self.at("("):
            self.advance()
            self.enter()
            inner = self.affine()
            self.leave()
            self.expect(")", "')'")
            if self.at("*"):
                self.advance()
                if not self.at("INT"):
                    raise self.error("exponent must be affine: expected an integer after '*'")
                return inner.scale(int(self.advance().text))
            return inner
        raise self.error("expected an integer or a variable in the exponent")

    def atom(self) -> ExprAst:
        tok = self.tok
        if tok.kind == "INT":
            self.advance()
            return IntLit(int(tok.text), line=tok.line, column=tok.column)
        if tok.kind == "Q":
            self.advance()
            return Var("q", line=tok.line, column=tok.column)
        if tok.kind == "IDENT":
            self.advance()
            return Var(self.bound(tok), line=tok.line, column=tok.column)
        if tok.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")", "')'")
            return node
        if tok.kind == "POCH":
            return self.poch()
        if tok.kind == "SUM":
            return self.sum()
        raise self.error("expected a number, q, a variable, '(', poch(...) or sum(...)")

    def poch(self) -> Poch:
        start = self.advance()
        self.expect("(", "'(' after poch")
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        self.expect("Q", "'q' as the base of the Pochhammer symbol")
        base = Affine.of(1)
        if self.at("^"):
            self.advance()
            base = self.power()
        self.expect(";", "';' after the base")
        self.expect("Q", "'q' as the step of the Pochhammer symbol")
        step = 1
        if self.at("^"):
            self.advance()
            tok = self.expect("INT", "a positive integer step exponent")
            step = int(tok.text)
            if step < 1:
                raise QExprSyntaxError("step exponent must be positive", tok.line, tok.column)
        self.expect(";", "';' after the step")
        if self.at("INF"):
            self.advance()
            count = None
        else:
            count = self.affine()
        self.expect(")", "')' closing poch")
        return Poch(sign, base, step, count, line=start.line, column=start.column)

    def sum(self) -> Sum:
        start = self.advance()
        self.expect("(", "'(' after sum")
        var_tok = self.expect("IDENT", "a summation variable")
        if var_tok.text in self.scope:
            raise QExprSyntaxError(
                f"variable {var_tok.text!r} is already bound", var_tok.line, var_tok.column
            )
        self.expect(",", "','")
        neg = False
        if self.at("-"):
            self.advance()
            neg = True
        lower = int(self.expect("INT", "an integer lower bound").text)
        lower = -lower if neg else lower
        self.expect(",", "','")
        self.expect("INF", "'inf' as the upper bound")
        self.expect(",", "','")
        self.scope.append(var_tok.text)
        try:
            body = self.expr()
        finally:
            self.scope.pop()
        self.expect(")", "')' closing sum")
        return Sum(var_tok.text, lower, body, line=start.line, column=start.column)


def parse(text: str) -> ExprAst:
    p = _Parser(text)
    node = p.expr()
    if not p.at("EOF"):
        raise p.error("expected an operator or the end of input")
    return node


# ---------------------------------------------------------------------------
# valuation lower bounds


def _min_affine(a: Affine, b: Affine) -> Affine:
    # valid lower bound for nonnegative variable values
    names = {v for v, _ in a.terms} | {v for v, _ in b.terms}
    return Affine.of(min(a.const, b.const), {v: min(a.coeff(v), b.coeff(v)) for v in names})


def valuation_bound(node: ExprAst) -> Affine:
    """Affine lower bound on the q-adic valuation of ``node``.

    Valid whenever bound variables are non-negative; the evaluator spot-checks
    the bound on the first instantiations of every sum.
    """
    if isinstance(node, IntLit):
        return Affine.of(0)
    if isinstance(node, Var):
        return Affine.of(1 if node.name == "q" else 0)
    if isinstance(node, Neg):
        return valuation_bound(node.operand)
    if isinstance(node, Pow):
        base = valuation_bound(node.base)
        if base.is_constant:
            return node.exp.scale(base.const)
        if node.exp.is_constant:
            return base.scale(node.exp.const)
        return Affine.of(0)
    if isinstance(node, (Add, Sub)):
        return _min_affine(valuation_bound(node.left), valuation_bound(node.right))
    if isinstance(node, Mul):
        return valuation_bound(node.left) + valuation_bound(node.right)
    if isinstance(node, Div):
        # denominators must be units, which have valuation 0
        return valuation_bound(node.left)
    if isinstance(node, Poch):
        return Affine.of(0)
    if isinstance(node, Sum):
        inner = valuation_bound(node.body)
        return inner.substitute(node.var, node.lower)
    raise TypeError(node)  # pragma: no cover


# ---------------------------------------------------------------------------
# evaluation


def _fail(node: Node, message: str) -> QExprEvalError:
    return QExprEvalError(message, node.line or None, node.column or None)


def _mul(f: Series, g: Series) -> Series:
    # the Cauchy product skips zeros of its first argument; put the sparser first
    if sum(1 for c in f.coeffs if c) > sum(1 for c in g.coeffs if c):
        f, g = g, f
    return S.mul(f, g)


class _Evaluator:
    def __init__(self, order: int):
        if order < 0:
            raise QExprEvalError("order must be non-negative")
        self.order = order

    def ev(self, node: ExprAst, env: dict[str, int]) -> Series:
        N = self.order
        if isinstance(node, IntLit):
            return S.constant(node.value, N)
        if isinstance(node, Var):
            if node.name == "q":
                return S.monomial(1, 1, N)
            return S.constant(env[node.name], N)
        if isinstance(node, Neg):
            return -self.ev(node.operand, env)
        if isinstance(node, Add):
            return self.ev(node.left, env) + self.ev(node.right, env)
        if isinstance(node, Sub):
            return self.ev(node.left, env) - self.ev(node.right, env)
        if isinstance(node, Mul):
            return _mul(self.ev(node.left, env), self.ev(node.right, env))
        if isinstance(node, Div):
            return self.divide(node, env)
        if isinstance(node, Pow):
            return self.power(node, env)
        if isinstance(node, Poch):
            return self.poch(S.one(N), node, env, divide=False)
        if isinstance(node, Sum):
            return self.sum(node, env)
        raise TypeError(node)  # pragma: no cover

    def power(self, node: Pow, env) -> Series:
        e = node.exp.evaluate(env)
        if isinstance(node.base, Var) and node.base.name == "q":
            if e < 0:
                raise _fail(node, f"negative exponent q^{e} after substitution")
            return S.monomial(1, e, self.order)
        if abs(e) > MAX_POWER:
            raise _fail(node, f"exponent {e} exceeds the supported magnitude {MAX_POWER}")
        base = self.ev(node.base, env)
        if e < 0:
            base = self.invert(base, node)
            e = -e
        return S.power(base, e)

    def invert(self, f: Series, node: Node) -> Series:
        try:
            return S.invert(f)
        except SeriesError as exc:
            raise _fail(node, f"division by a non-unit series: {exc}") from None

    def divide(self, node: Div, env) -> Series:
        num = self.ev(node.left, env)
        if isinstance(node.right, Poch):
            return self.poch(num, node.right, env, divide=True)
        return _mul(num, self.invert(self.ev(node.right, env), node))

    def poch(self, f: Series, node: Poch, env, *, divide: bool) -> Series:
        a = node.base.evaluate(env)
        if a < 0:
            raise _fail(node, f"negative base exponent q^{a} after substitution")
        if node.count is None:
            count = INFINITE
        else:
            count = node.count.evaluate(env)
            if count < 0:
                raise _fail(node, f"negative Pochhammer length {count}")
        if a == 0 and node.sign == 1 and (count == INFINITE or count >= 1):
            raise _fail(node, "Pochhammer symbol (1; q^b)_n contains the zero factor (1 - 1)")
        if a == 0 and divide and (count == INFINITE or count >= 1):
            raise _fail(node, "division by (-1; q^b)_n: constant term 2 is not a unit")
        return _times_poch(f, node.sign, a, node.step, count, divide=divide)

    def sum(self, node: Sum, env) -> Series:
        bound = valuation_bound(node.body)
        fixed = {v: c for v, c in bound.terms if v != node.var}
        start = Affine.of(bound.const, fixed).evaluate(env)
        slope = bound.coeff(node.var)
        if slope <= 0:
            raise _fail(
                node,
                f"cannot prove termination: summand valuation bound {bound} "
                f"does not increase with {node.var}",
            )
        total = S.zero(self.order)
        n = node.lower
        probes = 0
        while start + slope * n <= self.order:
            inner = dict(env)
            inner[node.var] = n
            term = self.ev(node.body, inner)
            if probes < SUM_PROBES:
                v = term.valuation()
                if v is not None and v < start + slope * n:
                    raise _fail(
                        node,
                        f"summand at {node.var}={n} has valuation {v}, below the derived bound "
                        f"{start + slope * n}",
                    )
                probes += 1
            total = total + term
            n += 1
        return total


def evaluate(ast: ExprAst, order: int) -> Series:
    return _Evaluator(order).ev(ast, {})


def eval_text(text: str, order: int) -> Series:
    return evaluate(parse(text), order)


def check_identity(lhs_text: str, rhs_text: str, order: int, check_id: str = "identity") -> VerificationReport:
    """Evaluate two expressions and compare them up to ``order``.

    ``expected`` in a mismatch comes from the right-hand side.
    """
    sides = {}
    with timed() as stamp:
        for side, text in (("lhs", lhs_text), ("rhs", rhs_text)):
            try:
                sides[side] = eval_text(text, order)
            except QExprError as exc:
                raise type(exc)(f"{side}: {exc.message}", exc.line, exc.column) from None
        cmp = S.equal_up_to(sides["rhs"], sides["lhs"], order)
        return stamp(from_comparison(check_id, cmp, order))


# ---------------------------------------------------------------------------
# text forms of the registry series


def _de_text(exp: str, denom_count: str) -> str:
    return f"sum(n, 0, inf, poch(-q^2; q^2; n) * q^({exp}) / poch(q; q^2; {denom_count}))"


def catalog(name: str) -> str:
    """Expression text for a registry name such as ``"reg4"`` or ``"degeq:3"``."""
    key = name.strip().lower()
    head, _, arg = key.partition(":")
    fixed = {
        "reg4": "poch(q^4; q^4; inf) / poch(q; q; inf)",
        "ped": "poch(-q^2; q^2; inf) / poch(q; q^2; inf)",
        "cubic": "1 / (poch(q; q; inf) * poch(q^2; q^2; inf))",
        "de1": _de_text("2*n+1", "n+1"),
        "de2": _de_text("4*n+2", "n+1"),
        "de3": _de_text("2*n+1", "n"),
        "dee": _de_text("2*n", "n"),
        "reg4gt1": "(1 - q) * poch(q^4; q^4; inf) / poch(q; q; inf)",
        "deeany": None,
    }
    if key in fixed:
        return fixed[key] if key != "deeany" else catalog("deeatleast:1")
    try:
        k = int(arg)
    except ValueError:
        raise KeyError(f"no catalog text for {name!r}") from None
    if head == "reg":
        return f"poch(q^{k}; q^{k}; inf) / poch(q; q; inf)"
    if head == "degeq":
        return _de_text(f"{2 * k}*n+{k}", "n+1")
    if head == "deexact":
        return _de_text(f"{2 * k}*n+{k}", "n")
    if head == "deeexact":
        return _de_text(f"{2 * k}*n+{2 * k}", "n+1")
    if head == "deegeq":
        return _de_text(f"{2 * k}*n", "n")
    if head == "deeatleast":
        return (
            f"1 + sum(n, 1, inf, poch(-q^2; q^2; n-1) * q^({2 * k}*n)"
            " / ((1 - q^(2*n)) * poch(q; q^2; n)))"
        )
    raise KeyError(f"no catalog text for {name!r}")
