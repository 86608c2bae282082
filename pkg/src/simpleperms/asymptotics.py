"""Certified evaluation of the asymptotic expansions against exact counts.

Numbers are carried as :class:`HighPrecision` values: an exact rational
midpoint plus a rational bound on its distance from the true value.  All
integers (n!, s_n, [x^n] f_m) enter exactly; the only approximated constant
is e^-2, from a Taylor sum with a certified tail.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import ClaimViolation
from .perm import blocks, is_simple, pattern
from .sequences import all_permutations, s_sequence_checked
from .series import f_m_series

Exact = Union[int, Fraction]

DEFAULT_DIGITS = 30


@dataclass(frozen=True)
class HighPrecision:
    """A real number known to lie within ``error_bound`` of ``value``."""

    value: Fraction
    error_bound: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        object.__setattr__(self, "error_bound", Fraction(self.error_bound))
        if self.error_bound < 0:
            raise ValueError("error bound must be non-negative")

    @classmethod
    def exact(cls, x: Exact) -> HighPrecision:
        return cls(Fraction(x), Fraction(0))

    @staticmethod
    def _lift(other) -> HighPrecision:
        if isinstance(other, HighPrecision):
            return other
        if isinstance(other, (int, Fraction)):
            return HighPrecision.exact(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return HighPrecision(self.value + other.value, self.error_bound + other.error_bound)

    __radd__ = __add__

    def __neg__(self):
        return HighPrecision(-self.value, self.error_bound)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        ea, eb = self.error_bound, other.error_bound
        bound = abs(self.value) * eb + abs(other.value) * ea + ea * eb
        return HighPrecision(self.value * other.value, bound)

    __rmul__ = __mul__

    def reciprocal(self) -> HighPrecision:
        b, e = abs(self.value), self.error_bound
        if b <= e:
            raise ZeroDivisionError("interval contains zero")
        return HighPrecision(1 / self.value, e / (b * (b - e)))

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __abs__(self):
        return HighPrecision(abs(self.value), self.error_bound)

    def __float__(self) -> float:
        return float(self.value)

    @property
    def lo(self) -> Fraction:
        return self.value - self.error_bound

    @property
    def hi(self) -> Fraction:
        return self.value + self.error_bound

    def contains(self, x: Exact) -> bool:
        return abs(Fraction(x) - self.value) <= self.error_bound

    def certainly_below(self, x: Exact) -> bool:
        return self.hi < x

    def certainly_above(self, x: Exact) -> bool:
        return self.lo > x

    def to_decimal(self, digits: int = 12) -> str:
        """Midpoint rounded to ``digits`` significant digits, scientific notation."""
        v = self.value
        if v == 0:
            return "0"
        sign = "-" if v < 0 else ""
        v = abs(v)
        exp = math.floor(math.log10(v.numerator) - math.log10(v.denominator))
        # fix off-by-one from the float log
        while v >= Fraction(10) ** (exp + 1):
            exp += 1
        while v < Fraction(10) ** exp:
            exp -= 1
        mant = round(v / Fraction(10) ** (exp - digits + 1))
        if mant >= 10 ** digits:
            mant //= 10
            exp += 1
        s = str(mant)
        return f"{sign}{s[0]}.{s[1:]}e{exp:+d}" if digits > 1 else f"{sign}{s}e{exp:+d}"

    def __str__(self) -> str:
        return f"{self.to_decimal()} ± {float(self.error_bound):.1e}"


def _round_sig(x: Fraction, digits: int) -> Fraction:
    if x == 0:
        return x
    exp = math.floor(math.log10(abs(x.numerator)) - math.log10(x.denominator))
    while abs(x) >= Fraction(10) ** (exp + 1):
        exp += 1
    while abs(x) < Fraction(10) ** exp:
        exp -= 1
    unit = Fraction(10) ** (exp - digits + 1)
    return round(x / unit) * unit


def exp_rational(x: Exact, digits: int = DEFAULT_DIGITS) -> HighPrecision:
    """e^x to ``digits`` significant digits with a certified error bound.

    Taylor partial sum through x^K; once K + 2 > 2|x| the tail is at most
    twice its first term |x|^(K+1)/(K+1)!.
    """
    x = Fraction(x)
    ax = abs(x)
    target = Fraction(1, 10 ** (digits + 6))
    total = Fraction(0)
    term = Fraction(1)
    k = 0
    while True:
        total += term
        nxt = term * x / (k + 1)
        tail = 2 * abs(nxt)
        if k + 2 > 2 * ax and tail < target * max(abs(total), Fraction(1, 10 ** 6)):
            break
        term = nxt
        k += 1
    rounded = _round_sig(total, digits)
    return HighPrecision(rounded, abs(rounded - total) + tail)


def exp_neg2(digits: int = DEFAULT_DIGITS) -> HighPrecision:
    """e^-2 to ``digits`` significant digits."""
    return exp_rational(-2, digits)


# -- expansions -----------------------------------------------------------------

def simple_factor(n: int, order: int = 2) -> Fraction:
    """1 - 4/n + 2/(n(n-1)), cut after ``order`` correction terms."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    factor = Fraction(1)
    if order >= 1:
        factor -= Fraction(4, n)
    if order >= 2:
        factor += Fraction(2, n * (n - 1))
    return factor


def kaplansky_factor(n: int) -> Fraction:
    return 1 - Fraction(2, n * (n - 1))


def f4_factor(n: int) -> Fraction:
    return 1 - Fraction(4, n * (n - 1))


def main_term(n: int, digits: int = DEFAULT_DIGITS) -> HighPrecision:
    """n!/e^2."""
    return math.factorial(n) * exp_neg2(digits)


def simple_asymptotic(n: int, order: int = 2, digits: int = DEFAULT_DIGITS) -> HighPrecision:
    """(n!/e^2)(1 - 4/n + 2/(n(n-1))) truncated at ``order``; order 0 is n!/e^2."""
    return main_term(n, digits) * simple_factor(n, order)


def kaplansky_asymptotic(n: int, digits: int = DEFAULT_DIGITS) -> HighPrecision:
    """(n!/e^2)(1 - 2/(n(n-1))), for permutations without length-2 blocks."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return main_term(n, digits) * kaplansky_factor(n)


def f4_asymptotic(n: int, digits: int = DEFAULT_DIGITS) -> HighPrecision:
    """(n!/e^2)(1 - 4/(n(n-1))), for permutations without blocks of length <= 4."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return main_term(n, digits) * f4_factor(n)


@dataclass
class ErrorRow:
    """Exact count vs expansion at one n.

    ``residual`` is exact/(n!/e^2) minus the expansion factor and
    ``scaled_residual`` is residual * n^3.  ``relative_error`` is None when
    the exact count is zero.
    """

    n: int
    exact: int
    approx: HighPrecision
    relative_error: HighPrecision | None
    residual: HighPrecision
    scaled_residual: HighPrecision

    @property
    def exact_zero(self) -> bool:
        return self.exact == 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "exact": str(self.exact),
            "approx": self.approx.to_decimal(20),
            "relative_error": None if self.relative_error is None else self.relative_error.to_decimal(12),
            "scaled_residual": self.scaled_residual.to_decimal(12),
            "exact_zero": self.exact_zero,
        }

    def tsv(self) -> str:
        d = self.to_json()
        return "\t".join(str(d[k]) for k in ("n", "exact", "approx", "relative_error", "scaled_residual"))


TSV_HEADER = "n\texact\tapprox\trelative_error\tscaled_residual"


def error_row(n: int, exact: int, factor: Fraction, digits: int = DEFAULT_DIGITS) -> ErrorRow:
    main = main_term(n, digits)
    approx = main * factor
    rel = None if exact == 0 else abs(exact - approx) / abs(exact)
    residual = exact / main - factor
    return ErrorRow(n, exact, approx, rel, residual, residual * n ** 3)


def simple_error_rows(ns: Iterable[int], order: int = 2, digits: int = DEFAULT_DIGITS) -> list[ErrorRow]:
    ns = list(ns)
    s = s_sequence_checked(max(ns))
    return [error_row(n, s[n], simple_factor(n, order), digits) for n in ns]


def kaplansky_check(ns: Iterable[int], digits: int = DEFAULT_DIGITS) -> list[ErrorRow]:
    """Exact [x^n] f_2 against Kaplansky's expansion."""
    ns = list(ns)
    f2 = f_m_series(2, max(ns))
    return [error_row(n, f2[n], kaplansky_factor(n), digits) for n in ns]


def f4_asymptotic_check(ns: Iterable[int], digits: int = DEFAULT_DIGITS) -> list[ErrorRow]:
    """Exact [x^n] f_4 against (n!/e^2)(1 - 4/(n(n-1)))."""
    ns = list(ns)
    f4 = f_m_series(4, max(ns))
    return [error_row(n, f4[n], f4_factor(n), digits) for n in ns]


def fitted_constant(rows: Iterable[ErrorRow]) -> Fraction:
    """Smallest C with |residual| <= C n^-3 over the rows (upper end of each interval)."""
    return max(abs(r.scaled_residual).hi for r in rows)


def median_successive_ratio(rows: list[ErrorRow]) -> float:
    """Median of relative_error[n+1] / relative_error[n]; below 1 means shrinking."""
    rel = [float(r.relative_error.value) for r in rows]
    return statistics.median(b / a for a, b in zip(rel, rel[1:]))


@dataclass
class Headline:
    n: int
    exact: int
    approx: HighPrecision
    relative_error: HighPrecision

    def to_json(self) -> dict:
        return {"n": self.n, "exact": str(self.exact), "approx": self.approx.to_decimal(20),
                "relative_error": self.relative_error.to_decimal(6),
                "relative_error_bound": float(self.relative_error.error_bound)}


def headline(n: int = 20, digits: int = DEFAULT_DIGITS) -> Headline:
    row = simple_error_rows([n], 2, digits)[0]
    return Headline(n, row.exact, row.approx, row.relative_error)


# -- exact block-count claims ------------------------------------------------------

@dataclass
class BootstrapRow:
    n: int
    with_simple_n_minus_1: int
    expected_n_minus_1: int
    with_simple_n_minus_2: int | None = None
    expected_n_minus_2: int | None = None
    also_length_2: int | None = None
    expected_also_length_2: int | None = None


def bootstrap_check(n_max: int = 8) -> list[BootstrapRow]:
    """Brute-force the exact counts used when bootstrapping the expansion.

    For each n: permutations with a simple block of length n-1 number
    4 s_{n-1}; with a simple block of length n-2, 18 s_{n-2}, of which
    8 s_{n-2} also have a block of length 2.  Claims need the block length
    to be at least 4, so rows start at n = 5.
    """
    if n_max > 9:
        raise ValueError("exhaustive check; n_max must be at most 9")
    s = s_sequence_checked(max(n_max, 4))
    rows = []
    for n in range(5, n_max + 1):
        near = far = far_with_pair = 0
        for p in all_permutations(n):
            lengths = set()
            for b in blocks(p):
                if b.length >= n - 2 and b.length < n and is_simple(pattern(b.segment(p))):
                    lengths.add(b.length)
                elif b.length == 2:
                    lengths.add(2)
            near += (n - 1) in lengths
            if n - 2 >= 4 and (n - 2) in lengths:
                far += 1
                far_with_pair += 2 in lengths
        row = BootstrapRow(n, near, 4 * s[n - 1])
        if near != row.expected_n_minus_1:
            raise ClaimViolation(f"n={n}: {near} permutations with a simple (n-1)-block, expected {4 * s[n - 1]}")
        if n - 2 >= 4:
            row.with_simple_n_minus_2, row.expected_n_minus_2 = far, 18 * s[n - 2]
            row.also_length_2, row.expected_also_length_2 = far_with_pair, 8 * s[n - 2]
            if far != 18 * s[n - 2] or far_with_pair != 8 * s[n - 2]:
                raise ClaimViolation(
                    f"n={n}: (n-2)-block counts {far}/{far_with_pair}, expected {18 * s[n - 2]}/{8 * s[n - 2]}")
        rows.append(row)
    return rows
