"""Text syntax for vectors.

Canonical form, one term per basis state::

    1/2*h1(-1)h1(-1)|0> - 3*h2(-2)|0> + 1/4*|0>

The parser also accepts the aliases ``w`` (the standard conformal vector),
``h<i>`` (shorthand for ``h<i>(-1)|0>``), ``T(...)`` (translation),
``kappa`` (the level, as a scalar), parentheses, and products/quotients by
scalars.  A scalar written directly before a state multiplies it
(``1/2|0>``).  A bare scalar term means that multiple of the vacuum.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .fock import GradedVector, canonical, format_scalar

_TOKEN = re.compile(r"\s*(?:(\d+)|(h\d+)|(\|0>)|(kappa|κ|omega|ω|w|T)|([()+\-*/]))")


def format_vector(v: GradedVector) -> str:
    if not v:
        return "0"
    pieces = []
    for state, c in v.sorted_items():
        mono = "".join(f"h{col}(-{m})" for col, m in state) + "|0>"
        mag = abs(c)
        body = mono if mag == 1 else f"{format_scalar(mag)}*{mono}"
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(pieces)


def _tokenize(text):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {pos}: {text[pos:pos + 12]!r}")
        num, hname, vac, word, sym = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif hname is not None:
            out.append(("h", int(hname[1:])))
        elif vac is not None:
            out.append(("vac", None))
        elif word is not None:
            out.append(("word", {"κ": "kappa", "ω": "w", "omega": "w"}.get(word, word)))
        else:
            out.append(("sym", sym))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, voa):
        self.toks = tokens
        self.i = 0
        self.voa = voa

    def peek(self, kind=None, value=None):
        if self.i >= len(self.toks):
            return None
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            return None
        if value is not None and tok[1] != value:
            return None
        return tok

    def take(self, kind=None, value=None):
        tok = self.peek(kind, value)
        if tok is None:
            got = self.toks[self.i] if self.i < len(self.toks) else "end of input"
            raise ParseError(f"expected {value or kind}, got {got}")
        self.i += 1
        return tok

    def need_voa(self, what):
        if self.voa is None:
            raise ParseError(f"{what} needs an algebra configuration")
        return self.voa

    def expr(self):
        sign = 1
        if self.peek("sym", "-"):
            self.take()
            sign = -1
        elif self.peek("sym", "+"):
            self.take()
        acc = _mul(sign, self.term())
        while self.peek("sym", "+") or self.peek("sym", "-"):
            op = self.take()[1]
            rhs = self.term()
            acc = _add(acc, rhs if op == "+" else _mul(-1, rhs))
        return acc

    def term(self):
        acc = self.factor()
        while True:
            if self.peek("sym", "*") or self.peek("sym", "/"):
                op = self.take()[1]
            elif self.peek("vac") or self.peek("h"):
                op = "*"  # juxtaposition, as in 1/2|0>
            else:
                break
            rhs = self.factor()
            if op == "*":
                acc = _mul(acc, rhs)
            else:
                if isinstance(rhs, GradedVector):
                    raise ParseError("cannot divide by a vector")
                if rhs == 0:
                    raise ParseError("division by zero")
                acc = _mul(acc, 1 / rhs)
        return acc

    def factor(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        kind, val = tok
        if kind == "num":
            self.take()
            return Fraction(val)
        if kind == "sym" and val == "-":
            self.take()
            return _mul(-1, self.factor())
        if kind == "sym" and val == "(":
            self.take()
            inner = self.expr()
            self.take("sym", ")")
            return inner
        if kind == "vac":
            self.take()
            return GradedVector.vacuum()
        if kind == "word":
            self.take()
            if val == "kappa":
                return self.need_voa("kappa").level
            if val == "w":
                return self.need_voa("w").omega
            if val == "T":
                self.take("sym", "(")
                inner = self.expr()
                self.take("sym", ")")
                if not isinstance(inner, GradedVector):
                    inner = inner * GradedVector.vacuum()
                return self.need_voa("T").translate(inner)
        if kind == "h":
            return self.monomial()
        raise ParseError(f"unexpected token {tok}")

    def monomial(self):
        parts = []
        while self.peek("h"):
            color = self.take("h")[1]
            if self.voa is not None and not 1 <= color <= self.voa.rank:
                raise ParseError(f"color {color} outside 1..{self.voa.rank}")
            if color < 1:
                raise ParseError("colors start at 1")
            if self.peek("sym", "("):
                self.take()
                self.take("sym", "-")
                m = self.take("num")[1]
                self.take("sym", ")")
                if m < 1:
                    raise ParseError("creation modes must be h(-m) with m >= 1")
                parts.append((color, m))
            else:
                # alias h<i> == h<i>(-1)|0>, only as a complete factor
                if parts:
                    raise ParseError("alias h<i> cannot follow explicit modes")
                return GradedVector.from_state(((color, 1),))
        self.take("vac")
        return GradedVector.from_state(canonical(parts))


def _add(x, y):
    if isinstance(x, GradedVector) or isinstance(y, GradedVector):
        return _vec(x) + _vec(y)
    return x + y


def _mul(x, y):
    if isinstance(x, GradedVector) and isinstance(y, GradedVector):
        raise ParseError("product of two vectors is not a linear expression")
    return x * y


def _vec(x):
    return x if isinstance(x, GradedVector) else Fraction(x) * GradedVector.vacuum()


def parse_vector(text: str, voa=None) -> GradedVector:
    """Parse ``text``; ``voa`` (a HeisenbergVOA) enables the aliases."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty vector literal")
    if tokens == [("num", 0)]:
        return GradedVector.zero()
    p = _Parser(tokens, voa)
    value = p.expr()
    if p.i != len(tokens):
        raise ParseError(f"trailing input starting at token {tokens[p.i]}")
    v = _vec(value)
    if voa is not None:
        voa.check_in_range(v)
    return v
