"""A tiny expression grammar for rational symbols in the variable z.

Accepted syntax::

    expr   :=  term  (('+' | '-') term)*
    term   :=  signed (('*' | '/') signed)*      (also implicit: 2z, 2(..))
    signed :=  ('+' | '-')* power
    power  :=  atom ('^' integer)?
    atom   :=  number | 'z' | '(' expr ')'

Numbers are decimal floats with optional exponent; a trailing ``i``
makes the literal imaginary (``2i``, ``1.5e-3i``), and a bare ``i`` is
the imaginary unit.  Evaluation happens directly over exact rational
arithmetic, so ``(1+z)/2`` and ``0.5 + 0.5*z`` produce identical
coefficient vectors.
"""

import re

from .errors import ParseError
from .poly import ComplexPoly, RationalFn

_TOKEN = re.compile(r"""
    \s*(?:
        (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?i?|i)
      | (?P<var>z)
      | (?P<op>[+\-*/^()])
    )""", re.VERBOSE)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise ParseError(
                f"unexpected character {rest[0]!r} at position {pos}")
        if m.lastgroup == "number":
            tok = m.group("number")
            if tok.endswith("i"):
                val = 1j * float(tok[:-1] or "1")
            else:
                val = complex(float(tok))
            tokens.append(("num", val))
        elif m.lastgroup == "var":
            tokens.append(("z", None))
        else:
            tokens.append((m.group("op"), None))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) \
            else None

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            kind, _ = self.next()
            rhs = self.term()
            value = value + rhs if kind == "+" else value - rhs
        return value

    def term(self):
        value = self.signed()
        while True:
            nxt = self.peek()
            if nxt in ("*", "/"):
                kind, _ = self.next()
                rhs = self.signed()
                if kind == "/":
                    if rhs.num.degree < 0:
                        raise ParseError("division by the zero function")
                    value = value / rhs
                else:
                    value = value * rhs
            elif nxt in ("z", "("):
                value = value * self.signed()   # implicit product: 2z, 2(..)
            else:
                return value

    def signed(self):
        sign = 1.0
        while self.peek() in ("+", "-"):
            kind, _ = self.next()
            if kind == "-":
                sign = -sign
        return sign * self.power()

    def power(self):
        value = self.atom()
        if self.peek() == "^":
            self.next()
            kind, val = self.next() if self.pos < len(self.tokens) \
                else (None, None)
            if kind != "num" or val.imag != 0 or val.real != int(val.real) \
                    or val.real < 0:
                raise ParseError("exponent must be a nonnegative integer")
            value = value ** int(val.real)
        return value

    def atom(self):
        if self.peek() is None:
            raise ParseError("unexpected end of expression")
        kind, val = self.next()
        if kind == "num":
            return RationalFn(val, reduce=False)
        if kind == "z":
            return RationalFn(ComplexPoly([0.0, 1.0]), reduce=False)
        if kind == "(":
            value = self.expr()
            if self.peek() != ")":
                raise ParseError("missing closing parenthesis")
            self.next()
            return value
        raise ParseError(f"unexpected token {kind!r}")


def parse_rational(text):
    """Parse an expression in z into a RationalFn.

    Raises ParseError on malformed input; the result is fully reduced
    with a monic denominator.
    """
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty expression")
    tokens = _tokenize(text)
    parser = _Parser(tokens)
    value = parser.expr()
    if parser.pos != len(tokens):
        raise ParseError(
            f"unexpected token {parser.peek()!r} after position {parser.pos}")
    # a final reduction pass normalizes representations like (z^2-1)/(z-1)
    return RationalFn(value.num, value.den)
