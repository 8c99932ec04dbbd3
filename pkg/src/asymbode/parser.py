"""Text format for factored transfer functions.

Grammar (whitespace is insignificant)::

    expr     := product ("/" product)*
    product  := unary (("*" | <adjacency>) unary)*
    unary    := ("+" | "-") unary | power
    power    := primary ["^" ["-"] integer]
    primary  := number | "s" | "(" sum ")"
    sum      := expr (("+" | "-") expr)*

``a/b/c`` is read as ``(a/b)/c``, which for products is the same as
``a/(b*c)``.  Adjacency multiplies when the right operand starts with
``s`` or ``(`` (``2s``, ``s(s+1)``, ``(s+1)(s+2)``).  Numbers take
decimal or scientific notation.

Products are kept factored.  Only sums are expanded into polynomials,
and each resulting polynomial factor is then normalised: powers of ``s``
go to the origin exponent, constants go to the gain, and factors of
degree 3 or more (or quadratics with real roots) are split by root
finding into first- and second-order terms.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass

import numpy as np

from .model import PolyTerm, Side, TransferFunction

# root finding acceptance
RESIDUAL_TOL = 1e-8
SNAP_TOL = 1e-9


class ErrorKind(enum.Enum):
    SYNTAX = "Syntax"
    NON_RATIONAL = "NonRational"
    UNFACTORABLE_TERM = "UnfactorableTerm"
    ZERO_COEFFICIENT = "ZeroCoefficient"


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


class ParseError(ValueError):
    def __init__(self, kind: ErrorKind, span: SourceSpan, message: str, text: str = ""):
        super().__init__(f"{kind.value} error at {span.start}:{span.end}: {message}")
        self.kind = kind
        self.span = span
        self.message = message
        self.text = text

    def caret(self) -> str:
        """The input line with a caret marker under the offending span."""
        width = max(self.span.end - self.span.start, 1)
        return f"{self.text}\n{' ' * self.span.start}{'^' * width}"


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    start: int
    end: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(ErrorKind.SYNTAX, SourceSpan(pos, pos + 1), f"unexpected character {text[pos]!r}", text)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), m.start(), m.end()))
        pos = m.end()
    tokens.append(_Token("eof", "", len(text), len(text)))
    return tokens


# Values are factored rational functions: gain * prod(poly_j ** exp_j).
# Polynomials are ascending coefficient arrays.


@dataclass
class _Factor:
    coeffs: np.ndarray
    exp: int
    span: SourceSpan


@dataclass
class _Value:
    gain: float
    factors: list[_Factor]
    span: SourceSpan

    def times(self, other: _Value) -> _Value:
        return _Value(self.gain * other.gain, self.factors + other.factors, _join(self.span, other.span))

    def inverse(self) -> _Value:
        return _Value(1.0 / self.gain, [_Factor(f.coeffs, -f.exp, f.span) for f in self.factors], self.span)

    def power(self, n: int) -> _Value:
        return _Value(self.gain**n, [_Factor(f.coeffs, f.exp * n, f.span) for f in self.factors], self.span)

    def expanded(self) -> tuple[np.ndarray, np.ndarray]:
        num = np.array([self.gain])
        den = np.array([1.0])
        for f in self.factors:
            if f.exp > 0:
                num = _polymul_pow(num, f.coeffs, f.exp)
            elif f.exp < 0:
                den = _polymul_pow(den, f.coeffs, -f.exp)
        return num, den


def _join(a: SourceSpan, b: SourceSpan) -> SourceSpan:
    return SourceSpan(min(a.start, b.start), max(a.end, b.end))


def _polymul_pow(acc: np.ndarray, p: np.ndarray, n: int) -> np.ndarray:
    for _ in range(n):
        acc = np.polynomial.polynomial.polymul(acc, p)
    return acc


def _add(a: _Value, b: _Value, sign: float) -> _Value:
    na, da = a.expanded()
    nb, db = b.expanded()
    P = np.polynomial.polynomial
    if len(da) == 1 and len(db) == 1:
        num = P.polyadd(na / da[0], sign * nb / db[0])
        den = np.array([1.0])
    else:
        num = P.polyadd(P.polymul(na, db), sign * P.polymul(nb, da))
        den = P.polymul(da, db)
    span = _join(a.span, b.span)
    factors = [_Factor(num, 1, span)]
    if len(den) > 1 or den[0] != 1.0:
        factors.append(_Factor(den, -1, span))
    return _Value(1.0, factors, span)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, kind: ErrorKind, tok: _Token, message: str) -> ParseError:
        end = max(tok.end, tok.start + 1) if tok.kind != "eof" else tok.end
        start = min(tok.start, len(self.text))
        return ParseError(kind, SourceSpan(start, min(end, len(self.text))), message, self.text)

    def expect(self, text: str) -> _Token:
        if self.tok.text != text:
            found = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            raise self.error(ErrorKind.SYNTAX, self.tok, f"expected {text!r}, found {found}")
        return self.advance()

    def parse(self) -> _Value:
        if self.tok.kind == "eof":
            raise self.error(ErrorKind.SYNTAX, self.tok, "empty expression")
        value = self.sum()
        if self.tok.kind != "eof":
            raise self.error(ErrorKind.SYNTAX, self.tok, f"unexpected {self.tok.text!r}")
        return value

    # a top-level sum is accepted as well, e.g. "s+1"
    def sum(self) -> _Value:
        value = self.expr()
        while self.tok.text in ("+", "-"):
            sign = 1.0 if self.advance().text == "+" else -1.0
            value = _add(value, self.expr(), sign)
        return value

    def expr(self) -> _Value:
        value = self.product()
        while self.tok.text == "/":
            tok = self.advance()
            divisor = self.product()
            if divisor.gain == 0:
                raise ParseError(ErrorKind.ZERO_COEFFICIENT, _join(SourceSpan(tok.start, tok.end), divisor.span), "division by zero", self.text)
            value = value.times(divisor.inverse())
        return value

    def product(self) -> _Value:
        value = self.unary()
        while True:
            if self.tok.text == "*":
                self.advance()
                value = value.times(self.unary())
            elif self.tok.text == "(" or self.tok.kind == "name":
                value = value.times(self.unary())
            elif self.tok.kind == "number":
                raise self.error(ErrorKind.SYNTAX, self.tok, "missing operator before number")
            else:
                return value

    def unary(self) -> _Value:
        if self.tok.text in ("+", "-"):
            tok = self.advance()
            inner = self.unary()
            if tok.text == "-":
                inner = _Value(-inner.gain, inner.factors, inner.span)
            return inner
        return self.power()

    def power(self) -> _Value:
        base = self.primary()
        if self.tok.text != "^":
            return base
        self.advance()
        negative = False
        if self.tok.text == "-":
            negative = True
            self.advance()
        tok = self.tok
        if tok.kind != "number":
            if tok.kind == "name" or tok.text == "(":
                raise self.error(ErrorKind.NON_RATIONAL, tok, "exponents must be integer literals")
            raise self.error(ErrorKind.SYNTAX, tok, "expected an integer exponent")
        self.advance()
        try:
            n = int(tok.text)
        except ValueError:
            raise self.error(ErrorKind.NON_RATIONAL, tok, f"non-integer exponent {tok.text!r}") from None
        return base.power(-n if negative else n)

    def primary(self) -> _Value:
        tok = self.tok
        span = SourceSpan(tok.start, tok.end)
        if tok.kind == "number":
            self.advance()
            return _Value(float(tok.text), [], span)
        if tok.kind == "name":
            self.advance()
            if tok.text == "s":
                return _Value(1.0, [_Factor(np.array([0.0, 1.0]), 1, span)], span)
            if self.tok.text == "(":
                raise self.error(ErrorKind.NON_RATIONAL, tok, f"unsupported function {tok.text!r}")
            raise self.error(ErrorKind.NON_RATIONAL, tok, f"unknown symbol {tok.text!r}; the variable is 's'")
        if tok.text == "(":
            self.advance()
            if self.tok.text == ")":
                raise self.error(ErrorKind.SYNTAX, self.tok, "empty parentheses")
            inner = self.sum()
            close = self.expect(")")
            full = SourceSpan(tok.start, close.end)
            return _Value(inner.gain, [_Factor(f.coeffs, f.exp, full) for f in inner.factors], full)
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise self.error(ErrorKind.SYNTAX, tok, f"expected a number, 's' or '(', found {found}")


def _trim(coeffs: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(coeffs)
    if len(nz) == 0:
        return coeffs[:0]
    return coeffs[: nz[-1] + 1]


def _split_roots(coeffs: np.ndarray, span: SourceSpan, text: str) -> list[tuple[float, float, float]]:
    """Monic first/second-order factors ``(a0, a1, a2)`` of a polynomial."""
    degree = len(coeffs) - 1
    if degree == 2:
        c, b, a = coeffs
        disc = b * b - 4 * a * c
        if disc < 0:
            return [(c / a, b / a, 1.0)]
        # numerically stable quadratic formula
        q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
        roots = np.array([q / a, c / q if q != 0 else 0.0], dtype=complex)
    else:
        roots = np.roots(coeffs[::-1])
    scale = np.max(np.abs(coeffs))
    P = np.polynomial.polynomial
    if not np.all(np.isfinite(roots)) or np.any(np.abs(P.polyval(roots, coeffs)) > RESIDUAL_TOL * scale):
        raise ParseError(ErrorKind.UNFACTORABLE_TERM, span, "root finding did not converge to acceptable residuals", text)
    reals: list[float] = []
    upper: list[complex] = []
    lower: list[complex] = []
    for z in roots:
        if abs(z.imag) <= SNAP_TOL * abs(z):
            reals.append(float(z.real))
        elif z.imag > 0:
            upper.append(complex(z))
        else:
            lower.append(complex(z))
    if len(upper) != len(lower):
        raise ParseError(ErrorKind.UNFACTORABLE_TERM, span, "complex roots could not be paired into conjugates", text)
    out = []
    for x in sorted(reals):
        if x == 0:
            raise ParseError(ErrorKind.ZERO_COEFFICIENT, span, "factor has a root at the origin that cannot be separated", text)
        out.append((-x, 1.0, 0.0))
    remaining = list(lower)
    for z in sorted(upper, key=lambda z: (z.real, z.imag)):
        j = min(range(len(remaining)), key=lambda j: abs(remaining[j] - z.conjugate()))
        w = remaining.pop(j)
        re_avg = 0.5 * (z.real + w.real)
        im_avg = 0.5 * (z.imag - w.imag)
        out.append((re_avg * re_avg + im_avg * im_avg, -2.0 * re_avg, 1.0))
    return out


def _normalize(value: _Value, text: str) -> TransferFunction:
    gain = value.gain
    origin = 0
    terms: list[PolyTerm] = []
    for f in value.factors:
        if f.exp == 0:
            continue
        coeffs = _trim(np.asarray(f.coeffs, dtype=float))
        if len(coeffs) == 0:
            if f.exp < 0:
                raise ParseError(ErrorKind.ZERO_COEFFICIENT, f.span, "division by zero", text)
            gain = 0.0
            continue
        # strip powers of s
        shift = int(np.flatnonzero(coeffs)[0])
        origin -= shift * f.exp
        coeffs = coeffs[shift:]
        degree = len(coeffs) - 1
        side = Side.NUMERATOR if f.exp > 0 else Side.DENOMINATOR
        mult = abs(f.exp)
        if degree == 0:
            gain *= float(coeffs[0]) ** f.exp
            continue
        if degree == 1:
            terms.append(PolyTerm(float(coeffs[0]), float(coeffs[1]), 0.0, mult, side))
            continue
        if degree == 2 and coeffs[1] ** 2 - 4 * coeffs[2] * coeffs[0] < 0:
            terms.append(PolyTerm(float(coeffs[0]), float(coeffs[1]), float(coeffs[2]), mult, side))
            continue
        gain *= float(coeffs[-1]) ** f.exp
        for a0, a1, a2 in _split_roots(coeffs / coeffs[-1], f.span, text):
            terms.append(PolyTerm(float(a0), float(a1), float(a2), mult, side))
    if gain == 0 or not math.isfinite(gain):
        raise ParseError(ErrorKind.ZERO_COEFFICIENT, value.span, "expression is identically zero or has an infinite gain", text)
    return TransferFunction(float(gain), origin, tuple(terms))


def parse(text: str) -> TransferFunction:
    """Parse an expression such as ``60*(s^2+0.8*s+4)/(s*(s-30)*(s/200+1)^2)``.

    Raises ParseError with a span into ``text`` on failure.
    """
    value = _Parser(text).parse()
    return _normalize(value, text)


def _num(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def _poly_text(t: PolyTerm) -> str:
    parts = []
    for coeff, mono in ((t.a2, "*s^2"), (t.a1, "*s"), (t.a0, "")):
        if coeff == 0:
            continue
        body = _num(abs(coeff)) + mono
        if not parts:
            parts.append(("-" if coeff < 0 else "") + body)
        else:
            parts.append(("-" if coeff < 0 else "+") + body)
    return "".join(parts)


def format(tf: TransferFunction) -> str:  # noqa: A001 - mirrors parse()
    """Canonical text for ``tf``; ``parse(format(tf))`` reproduces it."""
    num = [f"({_poly_text(t)})^{t.multiplicity}" for t in tf.numerator_terms]
    den = [f"({_poly_text(t)})^{t.multiplicity}" for t in tf.denominator_terms]
    if tf.origin_exp > 0:
        den.insert(0, f"s^{tf.origin_exp}")
    elif tf.origin_exp < 0:
        num.insert(0, f"s^{-tf.origin_exp}")
    out = "*".join([_num(tf.gain)] + num)
    if den:
        out += "/(" + "*".join(den) + ")"
    return out
