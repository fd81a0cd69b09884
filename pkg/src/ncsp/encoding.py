"""Global encoding maps: linear coefficient vectors and expression trees.

The text grammar used in network files is

    expr   := term (('+' | '^') term)*
    term   := factor ('*' factor)*
    factor := 'x'INT | INT | 't' '(' expr ')' | '(' expr ')'

where '+' is alphabet addition, '^' bitwise XOR (2-bit words only), '*'
field multiplication (fields only) and 't' bit reversal (2-bit words only).
'*' binds tighter than '+' and '^', which associate left at equal
precedence.

A parsed tree that contains no Mul/Xor/BitRev and whose folded constant
term is zero canonicalizes to the Linear variant (coefficients accumulate
via alphabet addition, so ``x1 + x1`` over GF(2) collapses to the zero
coefficient).
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Alphabet
from .errors import AlphabetError, ParseError


# -- expression trees -------------------------------------------------------

@dataclass(frozen=True)
class Var:
    index: int  # 1-based


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Xor:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class BitRev:
    child: "Expr"


Expr = Var | Const | Add | Mul | Xor | BitRev


# -- encoding maps -----------------------------------------------------------

@dataclass(frozen=True)
class Linear:
    """Length-omega coefficient vector; evaluates as the dot product."""

    coefficients: tuple[int, ...]


@dataclass(frozen=True)
class NonLinear:
    expr: Expr
    omega: int


EncodingMap = Linear | NonLinear


def support_vars(m: EncodingMap) -> frozenset[int]:
    """Indices of source messages that syntactically participate in the map."""
    if isinstance(m, Linear):
        return frozenset(i + 1 for i, c in enumerate(m.coefficients) if c != 0)
    out: set[int] = set()
    _walk_vars(m.expr, out)
    return frozenset(out)


def _walk_vars(e: Expr, out: set[int]):
    if isinstance(e, Var):
        out.add(e.index)
    elif isinstance(e, (Add, Mul, Xor)):
        _walk_vars(e.left, out)
        _walk_vars(e.right, out)
    elif isinstance(e, BitRev):
        _walk_vars(e.child, out)


def is_linear(m: EncodingMap, a: Alphabet | None = None) -> bool:
    """Syntactic linearity: true iff the map is in Linear form."""
    return isinstance(m, Linear)


def eval_map(m: EncodingMap, x, a: Alphabet):
    """Evaluate the map on an omega-tuple (or on per-variable numpy arrays).

    ``x`` is a sequence indexed 0..omega-1 holding symbols or equal-shape
    integer arrays; returns a symbol (or array) of the edge data.
    """
    if isinstance(m, Linear):
        if len(x) != len(m.coefficients):
            raise AlphabetError(
                f"tuple length {len(x)} != omega {len(m.coefficients)}")
        acc = 0
        for c, xi in zip(m.coefficients, x):
            if c == 0:
                continue
            acc = a.add(acc, a.scalar(c, xi))
        return acc
    if len(x) != m.omega:
        raise AlphabetError(f"tuple length {len(x)} != omega {m.omega}")
    return _eval_expr(m.expr, x, a)


def _eval_expr(e: Expr, x, a: Alphabet):
    if isinstance(e, Var):
        return x[e.index - 1]
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Add):
        return a.add(_eval_expr(e.left, x, a), _eval_expr(e.right, x, a))
    if isinstance(e, Mul):
        return a.mul(_eval_expr(e.left, x, a), _eval_expr(e.right, x, a))
    if isinstance(e, Xor):
        return a.xor(_eval_expr(e.left, x, a), _eval_expr(e.right, x, a))
    return a.bit_reverse(_eval_expr(e.child, x, a))


# -- parsing -----------------------------------------------------------------

class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, object, int]] = []
        self._scan()
        self.i = 0

    def _scan(self):
        t, n = self.text, len(self.text)
        i = 0
        while i < n:
            c = t[i]
            if c.isspace():
                i += 1
                continue
            start = i
            if c in "+^*()":
                self.tokens.append((c, c, start))
                i += 1
            elif c == "x" and i + 1 < n and t[i + 1].isdigit():
                j = i + 1
                while j < n and t[j].isdigit():
                    j += 1
                self.tokens.append(("var", int(t[i + 1:j]), start))
                i = j
            elif c == "t":
                self.tokens.append(("t", "t", start))
                i += 1
            elif c.isdigit():
                j = i
                while j < n and t[j].isdigit():
                    j += 1
                self.tokens.append(("int", int(t[i:j]), start))
                i = j
            else:
                raise ParseError(f"unexpected character {c!r}", col=start + 1)
        self.tokens.append(("end", None, n))

    def peek(self) -> tuple[str, object, int]:
        return self.tokens[self.i]

    def next(self) -> tuple[str, object, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok


class _Parser:
    def __init__(self, text: str, omega: int, a: Alphabet):
        self.lx = _Lexer(text)
        self.omega = omega
        self.a = a

    def parse(self) -> Expr:
        e = self.expr()
        kind, _, pos = self.lx.peek()
        if kind != "end":
            raise ParseError(f"unexpected {kind!r}", col=pos + 1)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while True:
            kind, _, pos = self.lx.peek()
            if kind == "+":
                self.lx.next()
                e = Add(e, self.term())
            elif kind == "^":
                if self.a.kind != "z4-words":
                    raise ParseError("'^' requires the 2-bit word alphabet", col=pos + 1)
                self.lx.next()
                e = Xor(e, self.term())
            else:
                return e

    def term(self) -> Expr:
        e = self.factor()
        while True:
            kind, _, pos = self.lx.peek()
            if kind == "*":
                if not self.a.is_field:
                    raise ParseError("'*' requires a field alphabet", col=pos + 1)
                self.lx.next()
                e = Mul(e, self.factor())
            else:
                return e

    def factor(self) -> Expr:
        kind, val, pos = self.lx.next()
        if kind == "var":
            if not 1 <= val <= self.omega:
                raise ParseError(f"variable x{val} outside 1..{self.omega}", col=pos + 1)
            return Var(val)
        if kind == "int":
            if not 0 <= val < self.a.q:
                raise ParseError(f"constant {val} outside 0..{self.a.q - 1}", col=pos + 1)
            return Const(val)
        if kind == "t":
            if self.a.kind != "z4-words":
                raise ParseError("t(.) requires the 2-bit word alphabet", col=pos + 1)
            self._expect("(")
            e = self.expr()
            self._expect(")")
            return BitRev(e)
        if kind == "(":
            e = self.expr()
            self._expect(")")
            return e
        raise ParseError(f"expected a factor, found {kind!r}", col=pos + 1)

    def _expect(self, kind: str):
        k, _, pos = self.lx.next()
        if k != kind:
            raise ParseError(f"expected {kind!r}, found {k!r}", col=pos + 1)


def parse_map(text: str, omega: int, a: Alphabet) -> EncodingMap:
    """Parse an encoding-map expression and canonicalize if linear."""
    expr = _Parser(text, omega, a).parse()
    return canonicalize(expr, omega, a)


def canonicalize(expr: Expr, omega: int, a: Alphabet) -> EncodingMap:
    """Fold a sum of scalar terms into the Linear variant.

    A scalar term is a variable, a constant, or ``c*xi`` with ``c`` a
    constant (fields only; '*' never parses on 2-bit words).  Coefficients
    accumulate by alphabet addition, so ``x1 + x1`` over GF(2) collapses to
    the zero coefficient.  A nonzero folded constant or any other operator
    keeps the map in tree form (the Linear variant carries no affine term).
    """
    coeffs = [0] * omega
    const = 0
    stack = [expr]
    while stack:
        e = stack.pop()
        if isinstance(e, Add):
            stack.append(e.left)
            stack.append(e.right)
        elif isinstance(e, Var):
            coeffs[e.index - 1] = a.add(coeffs[e.index - 1], 1)
        elif isinstance(e, Const):
            const = a.add(const, e.value)
        elif isinstance(e, Mul) and isinstance(e.left, Const) and isinstance(e.right, Var):
            i = e.right.index
            coeffs[i - 1] = a.add(coeffs[i - 1], e.left.value)
        elif isinstance(e, Mul) and isinstance(e.left, Var) and isinstance(e.right, Const):
            i = e.left.index
            coeffs[i - 1] = a.add(coeffs[i - 1], e.right.value)
        else:
            return NonLinear(expr, omega)
    if const != 0:
        return NonLinear(expr, omega)
    return Linear(tuple(coeffs))


# -- printing ----------------------------------------------------------------

def map_to_text(m: EncodingMap, a: Alphabet | None = None) -> str:
    """Canonical text form; parses back to a structurally identical map."""
    if isinstance(m, Linear):
        spell_out = a is not None and not a.is_field  # '*' never parses on z4
        terms = []
        for i, c in enumerate(m.coefficients, start=1):
            if c == 0:
                continue
            if c == 1:
                terms.append(f"x{i}")
            elif spell_out:
                terms.extend([f"x{i}"] * c)
            else:
                terms.append(f"{c}*x{i}")
        return " + ".join(terms) if terms else "0"
    return _expr_to_text(m.expr, 0)


def _expr_to_text(e: Expr, parent_prec: int) -> str:
    # precedence: sum ops 1, '*' 2, atoms 3
    if isinstance(e, Var):
        return f"x{e.index}"
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, BitRev):
        return f"t({_expr_to_text(e.child, 0)})"
    if isinstance(e, Mul):
        s = f"{_expr_to_text(e.left, 2)}*{_expr_to_text(e.right, 3)}"
        prec = 2
    else:
        op = "+" if isinstance(e, Add) else "^"
        s = f"{_expr_to_text(e.left, 1)} {op} {_expr_to_text(e.right, 2)}"
        prec = 1
    return f"({s})" if prec < parent_prec else s


def linear_coefficients(m: EncodingMap) -> tuple[int, ...] | None:
    """Coefficient vector of a Linear map, else None."""
    return m.coefficients if isinstance(m, Linear) else None
