"""Factored transfer-function model.

A transfer function is held in factored form::

    G(s) = K / s^h * prod(p_i(s)^r_i, numerator) / prod(p_i(s)^r_i, denominator)

where every ``p_i`` is a first-order polynomial ``a1*s + a0`` or a
second-order polynomial ``a2*s^2 + a1*s + a0`` with complex-conjugate
roots.  Everything here is an immutable value.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence


class Side(enum.Enum):
    NUMERATOR = "num"
    DENOMINATOR = "den"


class InvalidTerm(ValueError):
    """Raised when a polynomial term does not have the factored structure."""


@dataclass(frozen=True)
class PolyTerm:
    a0: float
    a1: float
    a2: float = 0.0
    multiplicity: int = 1
    side: Side = Side.DENOMINATOR

    @property
    def order(self) -> int:
        return 2 if self.a2 != 0 else 1

    @property
    def is_numerator(self) -> bool:
        return self.side is Side.NUMERATOR

    def __call__(self, s):
        """Evaluate the bare polynomial (no multiplicity) at ``s``."""
        return (self.a2 * s + self.a1) * s + self.a0


@dataclass(frozen=True)
class TermAttributes:
    order: int
    main_root: complex
    zp_sign: int
    st_sign: int
    critical_freq: float
    highest_coeff: float
    damping: float = 0.0

    @property
    def is_stable(self) -> bool:
        return self.st_sign == 1


@dataclass(frozen=True)
class Violation:
    term_index: int | None
    rule: str
    message: str

    def __str__(self) -> str:
        where = "transfer function" if self.term_index is None else f"term {self.term_index}"
        return f"{self.rule} ({where}): {self.message}"


@dataclass(frozen=True)
class TransferFunction:
    gain: float
    origin_exp: int = 0
    terms: tuple[PolyTerm, ...] = field(default_factory=tuple)

    def __post_init__(self):
        # accept any sequence but store a tuple so the value stays hashable
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def numerator_terms(self) -> tuple[PolyTerm, ...]:
        return tuple(t for t in self.terms if t.is_numerator)

    @property
    def denominator_terms(self) -> tuple[PolyTerm, ...]:
        return tuple(t for t in self.terms if not t.is_numerator)

    @property
    def n_zeros(self) -> int:
        # zeros at the origin (negative h) are counted here
        return sum(t.multiplicity * t.order for t in self.numerator_terms) + max(-self.origin_exp, 0)

    @property
    def n_poles(self) -> int:
        return sum(t.multiplicity * t.order for t in self.denominator_terms) + max(self.origin_exp, 0)

    @property
    def relative_degree(self) -> int:
        return self.n_poles - self.n_zeros

    def __call__(self, s):
        """Evaluate G at a complex point (or numpy array of points)."""
        value = self.gain * s ** (-self.origin_exp) if self.origin_exp else self.gain + 0 * s
        for term in self.terms:
            p = term(s) ** term.multiplicity
            value = value * p if term.is_numerator else value / p
        return value


@dataclass(frozen=True)
class ApproxFunction:
    """The monomial ``k_coeff / s**rel_degree`` valid on ``band``."""

    k_coeff: float
    rel_degree: int
    band: tuple[float, float]

    def __call__(self, s):
        return self.k_coeff / s ** self.rel_degree

    def magnitude(self, omega: float) -> float:
        return abs(self.k_coeff) * omega ** (-self.rel_degree)


def compute_attributes(term: PolyTerm) -> TermAttributes:
    """Order, main root, signs, critical frequency, highest coefficient and damping of a term."""
    a0, a1, a2 = term.a0, term.a1, term.a2
    if a0 == 0:
        raise InvalidTerm(f"{term}: constant coefficient is zero (root at the origin)")
    zp_sign = 1 if term.is_numerator else -1
    if a2 == 0:
        if a1 == 0:
            raise InvalidTerm(f"{term}: first-order term needs a nonzero s coefficient")
        root = complex(-a0 / a1, 0.0)
        st_sign = 1 if root.real <= 0 else -1
        return TermAttributes(
            order=1,
            main_root=root,
            zp_sign=zp_sign,
            st_sign=st_sign,
            critical_freq=abs(a0 / a1),
            highest_coeff=a1,
        )
    disc = a1 * a1 - 4 * a2 * a0
    if disc >= 0:
        raise InvalidTerm(f"{term}: second-order term has real roots (discriminant {disc:g} >= 0)")
    # choose the root with positive imaginary part whatever the sign of a2
    root = (-a1 + 1j * math.sqrt(-disc)) / (2 * a2)
    if root.imag < 0:
        root = root.conjugate()
    st_sign = 1 if root.real <= 0 else -1
    return TermAttributes(
        order=2,
        main_root=root,
        zp_sign=zp_sign,
        st_sign=st_sign,
        critical_freq=math.sqrt(a0 / a2),
        highest_coeff=a2,
        damping=a1 / (2 * math.sqrt(a2 * a0)),
    )


def validate(tf: TransferFunction) -> list[Violation]:
    out = []
    if not math.isfinite(tf.gain) or tf.gain == 0:
        out.append(Violation(None, "ZeroGain", f"gain must be finite and nonzero, got {tf.gain!r}"))
    if not isinstance(tf.origin_exp, int):
        out.append(Violation(None, "NonIntegerOriginExponent", f"got {tf.origin_exp!r}"))
    for i, t in enumerate(tf.terms):
        coeffs = (t.a0, t.a1, t.a2)
        if not all(math.isfinite(c) for c in coeffs):
            out.append(Violation(i, "NonFiniteCoefficient", f"coefficients {coeffs}"))
            continue
        if not isinstance(t.multiplicity, int) or t.multiplicity < 1:
            out.append(Violation(i, "BadMultiplicity", f"multiplicity must be >= 1, got {t.multiplicity!r}"))
        if t.a0 == 0:
            out.append(Violation(i, "RootAtOriginInTerm", "a0 = 0; fold s factors into the origin exponent"))
        if t.a2 == 0 and t.a1 == 0:
            out.append(Violation(i, "DegenerateTerm", "a1 = a2 = 0; constants belong in the gain"))
        if t.a2 != 0 and t.a1 * t.a1 - 4 * t.a2 * t.a0 >= 0:
            out.append(Violation(i, "RealRootsInQuadratic", "a1^2 - 4*a2*a0 >= 0; split into first-order terms"))
    return out


def ensure_valid(tf: TransferFunction) -> TransferFunction:
    problems = validate(tf)
    if problems:
        raise InvalidTerm("; ".join(str(p) for p in problems))
    return tf


def reduced_monomial(tf: TransferFunction, keep_highest: Callable[[int], bool]) -> tuple[float, int]:
    """Collapse every term to ``a0`` or to its highest-order monomial.

    ``keep_highest(i)`` decides, per term index, which one is used.
    Returns ``(K, t)`` with ``G ~ K / s**t``.  Terms are folded in list
    order so every caller gets bit-identical coefficients for the same
    selection.
    """
    k = tf.gain
    t = tf.origin_exp
    for i, term in enumerate(tf.terms):
        if keep_highest(i):
            c = term.a2 if term.order == 2 else term.a1
            degree = term.order * term.multiplicity
        else:
            c = term.a0
            degree = 0
        c = c**term.multiplicity
        if term.is_numerator:
            k *= c
            t -= degree
        else:
            k /= c
            t += degree
    return k, t


def low_freq_approx(tf: TransferFunction) -> ApproxFunction:
    k, t = reduced_monomial(tf, lambda i: False)
    return ApproxFunction(k, t, (0.0, _first_corner(tf)))


def high_freq_approx(tf: TransferFunction) -> ApproxFunction:
    k, t = reduced_monomial(tf, lambda i: True)
    return ApproxFunction(k, t, (_last_corner(tf), math.inf))


def _first_corner(tf: TransferFunction) -> float:
    freqs = [compute_attributes(t).critical_freq for t in tf.terms]
    return min(freqs) if freqs else math.inf


def _last_corner(tf: TransferFunction) -> float:
    freqs = [compute_attributes(t).critical_freq for t in tf.terms]
    return max(freqs) if freqs else 0.0


def arg0(x: float) -> float:
    """Phase of a real constant: 0 if positive, -pi if negative."""
    return 0.0 if x > 0 else -math.pi


def term_roots(term: PolyTerm) -> Sequence[complex]:
    """Both roots of the term (one for first order), for display and checks."""
    a = compute_attributes(term)
    if a.order == 1:
        return (a.main_root,)
    return (a.main_root, a.main_root.conjugate())


__all__ = [
    "ApproxFunction",
    "InvalidTerm",
    "PolyTerm",
    "Side",
    "TermAttributes",
    "TransferFunction",
    "Violation",
    "arg0",
    "compute_attributes",
    "ensure_valid",
    "high_freq_approx",
    "low_freq_approx",
    "reduced_monomial",
    "term_roots",
]
