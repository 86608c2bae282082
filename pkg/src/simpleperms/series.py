"""Exact truncated power series over Python integers.

A :class:`TruncSeries` holds the coefficients of x^0..x^N together with
the truncation order N.  Arithmetic never leaves the integers: division
needs a unit constant term (anything else goes through ``Fraction`` and
must come out integral), composition needs an inner series without a
constant term.

The generating functions built here::

    F(t) = sum k! t^k                 factorial_series
    C    = F^<-1>  (Comtet numbers)   comtet_series / revert
    I    = F / (1 + F)                indecomposable_series
    S(t) = t - 2t^2/(1+t) - C(t)      simple_series
    f_m  = F(x - 2x^2/(1+x) - S_m)    f_m_series
    F_m(x, v)                         bivariate_F_m
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from operator import mul
from typing import Iterable, Sequence, Union

try:
    from gmpy2 import mpz as _bigint
except ImportError:  # pragma: no cover
    _bigint = int

from .errors import (
    CompositionConstantTermNonzero,
    DivisibilityViolation,
    IdentityViolation,
    NonUnitDivisor,
    NotRevertible,
)

__all__ = [
    "TruncSeries", "BivariatePoly", "factorial_series", "revert", "comtet_series",
    "lagrange_com", "indecomposable_series", "simple_series", "simple_series_raw",
    "f_m_series", "bivariate_F_m", "check_ode_identities", "check_structure_identities",
    "IdentityReport", "check_identity",
]

Number = Union[int, Fraction]

# below this length schoolbook multiplication beats packing
_KRONECKER_CUTOFF = 24


# -- raw coefficient-list kernels ---------------------------------------------

def _mul_schoolbook(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    out = [0] * (n + 1)
    for i, x in enumerate(a[:n + 1]):
        if x:
            for j, y in enumerate(b[:n + 1 - i]):
                out[i + j] += x * y
    return out


def _pack(coeffs: Sequence[int], nbytes: int) -> int:
    """Sum c_i * 256^(nbytes*i) for signed c_i, built through two byte strings."""
    width = 8 * nbytes
    modulus = 1 << width
    digits = b"".join((c % modulus).to_bytes(nbytes, "little") for c in coeffs)
    value = int.from_bytes(digits, "little")
    borrow = sum(1 << (width * (i + 1)) for i, c in enumerate(coeffs) if c < 0)
    return value - borrow


def _unpack(value: int, count: int, nbytes: int) -> list[int]:
    width = 8 * nbytes
    half = 1 << (width - 1)
    full = 1 << width
    raw = (value & ((1 << (width * count)) - 1)).to_bytes(nbytes * count, "little")
    out = []
    carry = 0
    for i in range(count):
        d = int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") + carry
        if d >= half:
            d -= full
            carry = 1
        else:
            carry = 0
        out.append(d)
    return out


def _mul(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    """Product of two coefficient lists truncated to degree ``n``."""
    a = list(a[:n + 1])
    b = list(b[:n + 1])
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    if not a or not b:
        return [0] * (n + 1)
    if min(len(a), len(b)) < _KRONECKER_CUTOFF:
        return _mul_schoolbook(a, b, n)
    # |c_k| <= len * max|a| * max|b|; one extra bit for the sign
    bound = max(map(abs, a)) * max(map(abs, b)) * min(len(a), len(b))
    nbytes = (bound.bit_length() + 2 + 7) // 8
    count = min(len(a) + len(b) - 1, n + 1)
    product = _bigint(_pack(a, nbytes)) * _bigint(_pack(b, nbytes))
    out = _unpack(int(product), count, nbytes)
    return out + [0] * (n + 1 - count)


def _compose(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    """a(b(x)) truncated to degree n; requires b[0] == 0 (Horner)."""
    top = min(len(a) - 1, n)
    while top > 0 and a[top] == 0:
        top -= 1
    # the partial sum for step k is multiplied by b^k (valuation >= k)
    # afterwards, so only its first n - k + 1 coefficients matter
    acc = [a[top]]
    for k in range(top - 1, -1, -1):
        acc = _mul(acc, b, n - k)
        acc[0] += a[k]
    return acc + [0] * (n + 1 - len(acc))


def _reciprocal_exact(b: Sequence[int], n: int) -> list[int]:
    """1/b for b[0] in {1, -1}, by the triangular recurrence."""
    b0 = b[0]
    out = [0] * (n + 1)
    out[0] = b0  # 1/b0 == b0 for units
    bb = list(b[:n + 1]) + [0] * max(0, n + 1 - len(b))
    for k in range(1, n + 1):
        s = sum(map(mul, bb[1:k + 1], reversed(out[:k])))
        out[k] = -s * b0
    return out


def _divide(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    if not b or b[0] == 0:
        raise NonUnitDivisor("divisor has zero constant term")
    if b[0] in (1, -1):
        return _mul(a, _reciprocal_exact(b, n), n)
    # non-unit leading term: solve over the rationals, insist on integers
    b0 = Fraction(b[0])
    q: list[Fraction] = []
    for k in range(n + 1):
        ak = a[k] if k < len(a) else 0
        s = sum((b[j] * q[k - j] for j in range(1, min(k, len(b) - 1) + 1)), Fraction(0))
        q.append((ak - s) / b0)
    if any(c.denominator != 1 for c in q):
        raise NonUnitDivisor(f"quotient by series with constant term {b[0]} is not integral")
    return [int(c) for c in q]


# -- series value type -------------------------------------------------------

class TruncSeries:
    """Integer power series known through x^order.

    Binary operations truncate to the smaller order.  ``==`` compares
    coefficients up to the smaller order; :meth:`agrees` makes that order
    explicit.

    >>> x = TruncSeries.x(3)
    >>> x / (1 + x)
    TruncSeries([0, 1, -1, 1], order=3)
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable[int], order: int | None = None):
        coeffs = [int(c) for c in coeffs]
        if order is None:
            order = max(len(coeffs) - 1, 0)
        if order < 0:
            raise ValueError("order must be non-negative")
        coeffs = coeffs[:order + 1]
        coeffs += [0] * (order + 1 - len(coeffs))
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("TruncSeries is immutable")

    # construction
    @classmethod
    def x(cls, order: int) -> TruncSeries:
        return cls([0, 1], order)

    @classmethod
    def constant(cls, c: int, order: int) -> TruncSeries:
        return cls([c], order)

    @classmethod
    def monomial(cls, c: int, k: int, order: int) -> TruncSeries:
        return cls([0] * k + [c], order)

    # access
    def __getitem__(self, k: int) -> int:
        if k < 0 or k > self.order:
            raise IndexError(f"x^{k} is outside order {self.order}")
        return self.coeffs[k]

    def __len__(self) -> int:
        return self.order + 1

    def valuation(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def truncate(self, order: int) -> TruncSeries:
        if order > self.order:
            raise ValueError(f"cannot extend order {self.order} to {order}")
        return TruncSeries(self.coeffs, order)

    # arithmetic
    def _coerce(self, other) -> TruncSeries:
        if isinstance(other, TruncSeries):
            return other
        if isinstance(other, int):
            return TruncSeries.constant(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = min(self.order, other.order)
        return TruncSeries([x + y for x, y in zip(self.coeffs, other.coeffs)], n)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncSeries([other * c for c in self.coeffs], self.order)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return TruncSeries(_mul(self.coeffs, other.coeffs, n), n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = min(self.order, other.order)
        return TruncSeries(_divide(self.coeffs, other.coeffs, n), n)

    def __rtruediv__(self, other):
        if not isinstance(other, int):
            return NotImplemented
        return TruncSeries.constant(other, self.order) / self

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = TruncSeries.constant(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def compose(self, inner: TruncSeries) -> TruncSeries:
        """``self(inner(x))``; ``inner`` must have zero constant term."""
        if inner.coeffs[0] != 0:
            raise CompositionConstantTermNonzero(f"inner constant term is {inner.coeffs[0]}")
        n = min(self.order, inner.order)
        return TruncSeries(_compose(self.coeffs, inner.coeffs, n), n)

    def __call__(self, inner: TruncSeries) -> TruncSeries:
        return self.compose(inner)

    def derivative(self) -> TruncSeries:
        """d/dx; the result is known through x^(order-1)."""
        if self.order == 0:
            return TruncSeries([0], 0)
        return TruncSeries([k * c for k, c in enumerate(self.coeffs)][1:], self.order - 1)

    def shift(self, k: int) -> TruncSeries:
        """Multiply by x^k, keeping the order."""
        return TruncSeries([0] * k + list(self.coeffs), self.order)

    # comparison
    def agrees(self, other: TruncSeries, order: int) -> bool:
        """Coefficient equality through x^order (both must reach that order)."""
        if order > self.order or order > other.order:
            raise ValueError(f"order {order} exceeds a truncation order")
        return self.coeffs[:order + 1] == other.coeffs[:order + 1]

    def first_difference(self, other: TruncSeries, order: int | None = None) -> int | None:
        n = min(self.order, other.order) if order is None else order
        for k in range(n + 1):
            if self.coeffs[k] != other.coeffs[k]:
                return k
        return None

    def __eq__(self, other):
        if isinstance(other, int):
            other = TruncSeries.constant(other, self.order)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.agrees(other, min(self.order, other.order))

    __hash__ = None

    def __repr__(self) -> str:
        return f"TruncSeries({list(self.coeffs)}, order={self.order})"

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
                coef = str(c) if (k == 0 or abs(c) != 1) else ("-" if c < 0 else "")
                terms.append(f"{coef}{'*' if coef not in ('', '-') and mono else ''}{mono}")
        body = " + ".join(terms).replace("+ -", "- ") or "0"
        return f"{body} + O(x^{self.order + 1})"

    # serialization
    def to_json(self, name: str) -> dict:
        return {"name": name, "order": self.order, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, doc: dict | str) -> TruncSeries:
        if isinstance(doc, str):
            doc = json.loads(doc)
        return cls([int(c) for c in doc["coeffs"]], int(doc["order"]))


# -- reversion ----------------------------------------------------------------

def revert(f: TruncSeries) -> TruncSeries:
    """Compositional inverse g with f(g(x)) = g(f(x)) = x through x^order.

    Newton iteration g <- g - (f(g) - x) / f'(g), doubling the number of
    correct coefficients each round.
    """
    n = f.order
    if n < 1 or f.coeffs[0] != 0 or f.coeffs[1] not in (1, -1):
        raise NotRevertible("need f(0) = 0 and a unit linear coefficient")
    g = [0, f.coeffs[1]]
    fprime = [k * c for k, c in enumerate(f.coeffs)][1:]
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        g = g + [0] * (prec + 1 - len(g))
        residual = _compose(f.coeffs[:prec + 1], g, prec)
        residual[1] -= 1
        slope = _compose(fprime[:prec + 1], g, prec)
        step = _divide(residual, slope, prec)
        g = [x - y for x, y in zip(g, step)]
    return TruncSeries(g, n)


@lru_cache(maxsize=8)
def factorial_series(order: int) -> TruncSeries:
    """F(x) = sum_{k>=1} k! x^k."""
    coeffs = [0]
    f = 1
    for k in range(1, order + 1):
        f *= k
        coeffs.append(f)
    return TruncSeries(coeffs, order)


@lru_cache(maxsize=8)
def comtet_series(order: int) -> TruncSeries:
    """C = F^<-1>; its coefficients are the Comtet numbers Com_n."""
    return revert(factorial_series(order))


def lagrange_com(n: int) -> int:
    """Com_n from n * Com_n = [x^(n-1)] B(x)^n with B = sum_k (-1)^k (2!x + 3!x^2 + ...)^k.

    Independent of :func:`revert`; the division by n must be exact.
    """
    if n < 1:
        raise ValueError("n must be positive")
    order = n - 1
    # u = 2!x + 3!x^2 + ... ; B = 1/(1 + u)
    u = [0] + [math.factorial(k + 1) for k in range(1, order + 1)]
    b = TruncSeries([1], order) / TruncSeries([1] + u[1:], order)
    total = (b ** n)[order]
    q, r = divmod(total, n)
    if r:
        raise DivisibilityViolation(f"[x^{order}]B^{n} = {total} is not divisible by {n}")
    return q


# -- generating functions of the structure theory -------------------------------

def indecomposable_series(order: int) -> TruncSeries:
    """I = F / (1 + F), plus-indecomposable permutations."""
    f = factorial_series(order)
    return f / (1 + f)


def simple_series_raw(order: int) -> TruncSeries:
    """t - 2t^2/(1+t) - C(t) with nothing removed at low order."""
    t = TruncSeries.x(order)
    return t - 2 * t * t / (1 + t) - comtet_series(order)


def simple_series(order: int) -> TruncSeries:
    """S(t) = sum_{k>=4} s_k t^k.

    The raw right-hand side already vanishes at t^1..t^3; that is
    asserted rather than patched.
    """
    s = simple_series_raw(order)
    low = s.coeffs[1:4]
    if any(low):
        raise IdentityViolation("S low-order terms", 1 + next(i for i, c in enumerate(low) if c), low, (0, 0, 0))
    return s


def _partial_simple(m: int, order: int) -> TruncSeries:
    """S_m(x) = sum_{j=4}^{m} s_j x^j."""
    s = simple_series(order)
    return TruncSeries([c if k <= m else 0 for k, c in enumerate(s.coeffs)], order)


def f_m_series(m: int | None, order: int) -> TruncSeries:
    """f_m(x) = F(x - 2x^2/(1+x) - S_m(x)).

    Counts permutations whose non-singleton blocks all have length > m.
    ``m=None`` uses the full S, which must collapse to x.
    """
    if m is not None and m < 2:
        raise ValueError("m must be at least 2")
    x = TruncSeries.x(order)
    sm = simple_series(order) if m is None else _partial_simple(m, order)
    u = x - 2 * x * x / (1 + x) - sm
    return factorial_series(order).compose(u)


# -- bivariate series ------------------------------------------------------------

@dataclass(frozen=True)
class BivariatePoly:
    """Polynomial in x and v truncated at x-degree ``x_order``.

    Stored dense in x (``rows[i]`` is the v-polynomial multiplying x^i, as a
    tuple of coefficients) since the v-degree never exceeds the x-degree.
    """

    rows: tuple[tuple[int, ...], ...]
    x_order: int = field(init=False)

    def __post_init__(self):
        rows = tuple(_trim(tuple(r)) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "x_order", len(rows) - 1)

    @classmethod
    def from_terms(cls, terms: dict[tuple[int, int], int], x_order: int) -> BivariatePoly:
        rows = [[0] * (x_order + 1) for _ in range(x_order + 1)]
        for (i, j), c in terms.items():
            if i <= x_order:
                if j >= len(rows[i]):
                    rows[i].extend([0] * (j + 1 - len(rows[i])))
                rows[i][j] += c
        return cls(tuple(tuple(r) for r in rows))

    @property
    def coeffs(self) -> dict[tuple[int, int], int]:
        """Sparse view: (x-degree, v-degree) -> nonzero coefficient."""
        return {(i, j): c for i, row in enumerate(self.rows) for j, c in enumerate(row) if c}

    def x_slice(self, n: int) -> tuple[int, ...]:
        """Coefficients in v of x^n."""
        return self.rows[n]

    def __add__(self, other: BivariatePoly) -> BivariatePoly:
        n = min(self.x_order, other.x_order)
        return BivariatePoly(tuple(_vadd(self.rows[i], other.rows[i]) for i in range(n + 1)))

    def scale(self, c: int) -> BivariatePoly:
        return BivariatePoly(tuple(tuple(c * a for a in r) for r in self.rows))

    def add_constant(self, c: int) -> BivariatePoly:
        rows = list(self.rows)
        rows[0] = _vadd(rows[0], (c,))
        return BivariatePoly(tuple(rows))

    def __mul__(self, other: BivariatePoly) -> BivariatePoly:
        n = min(self.x_order, other.x_order)
        out = [()] * (n + 1)
        for i in range(n + 1):
            if not self.rows[i]:
                continue
            for j in range(n + 1 - i):
                if other.rows[j]:
                    out[i + j] = _vadd(out[i + j], _vmul(self.rows[i], other.rows[j]))
        return BivariatePoly(tuple(out))

    def evaluate_v(self, v: int) -> TruncSeries:
        return TruncSeries([sum(c * v ** j for j, c in enumerate(r)) for r in self.rows], self.x_order)


def _trim(r: tuple[int, ...]) -> tuple[int, ...]:
    k = len(r)
    while k and r[k - 1] == 0:
        k -= 1
    return r[:k]


def _vadd(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for j, c in enumerate(b):
        out[j] += c
    return _trim(tuple(out))


def _vmul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


def bivariate_F_m(m: int, order: int) -> BivariatePoly:
    """F_m(x, v) = sum_k k! (x + 2v x^2/(1 - v x) + v S_m(x))^k."""
    if m < 2:
        raise ValueError("m must be at least 2")
    s = simple_series(order)
    terms = {(1, 0): 1}
    # 2v x^2 / (1 - v x) = sum_{j>=0} 2 v^(j+1) x^(j+2)
    for j in range(order - 1):
        terms[(j + 2, j + 1)] = terms.get((j + 2, j + 1), 0) + 2
    for k in range(4, min(m, order) + 1):
        if s[k]:
            terms[(k, 1)] = terms.get((k, 1), 0) + s[k]
    w = BivariatePoly.from_terms(terms, order)
    # Horner for sum_{k=1}^{order} k! w^k
    acc = BivariatePoly.from_terms({(0, 0): math.factorial(order)}, order)
    for k in range(order - 1, 0, -1):
        acc = (acc * w).add_constant(math.factorial(k))
    return acc * w


# -- identity checks -----------------------------------------------------------

@dataclass
class IdentityReport:
    order: int
    passed: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"order": self.order, "passed": list(self.passed), "ok": True}


def check_identity(name: str, lhs: TruncSeries, rhs: TruncSeries, order: int) -> None:
    """Raise IdentityViolation at the first coefficient where lhs and rhs differ."""
    k = lhs.first_difference(rhs, order)
    if k is not None:
        raise IdentityViolation(name, k, lhs[k], rhs[k])


def check_structure_identities(order: int) -> IdentityReport:
    """Identities of the decomposition theory, as truncated series."""
    report = IdentityReport(order)
    x = TruncSeries.x(order)
    f = factorial_series(order)
    i = indecomposable_series(order)
    s = simple_series(order)
    sf = s.compose(f)

    check_identity("F = x + 2IF + S(F)", f, x + 2 * i * f + sf, order)
    report.passed.append("F = x + 2IF + S(F)")
    check_identity("I = x + IF + S(F)", i, x + i * f + sf, order)
    report.passed.append("I = x + IF + S(F)")
    check_identity("S(F) = (F - F^2)/(1 + F) - x", sf, (f - f * f) / (1 + f) - x, order)
    report.passed.append("S(F) = (F - F^2)/(1 + F) - x")
    check_identity("F = I/(1 - I)", f, i / (1 - i), order)
    report.passed.append("F = I/(1 - I)")
    check_identity("f_inf = F(x - 2x^2/(1+x) - S) = x", f_m_series(None, order), x, order)
    report.passed.append("f_inf = x")
    return report


def check_ode_identities(order: int) -> IdentityReport:
    """The first-order ODEs for F, I, C and theta with denominators cleared."""
    report = IdentityReport(order)
    x = TruncSeries.x(order)
    f = factorial_series(order)
    i = indecomposable_series(order)
    c = comtet_series(order)
    theta = x - (1 + x) * c
    top = order - 1

    # x + xF + x^2 F' = F
    check_identity("x + xF + x^2 F' = F", x + x * f + f.derivative().shift(2), f, top)
    report.passed.append("x + xF + x^2 F' = F")
    # x^2 I' = -I^2 + (1 + x) I - x
    check_identity("x^2 I' = -I^2 + (1+x)I - x", i.derivative().shift(2), -(i * i) + (1 + x) * i - x, top)
    report.passed.append("x^2 I' = -I^2 + (1+x)I - x")
    # C' (x - (1 + x) C) = C^2
    check_identity("C'(x - (1+x)C) = C^2", c.derivative() * theta.truncate(top), (c * c).truncate(top), top)
    report.passed.append("C'(x - (1+x)C) = C^2")
    # (1 + x) theta theta' = -x^2 + (1 + 2x) theta
    lhs = (1 + x).truncate(top) * theta.truncate(top) * theta.derivative()
    rhs = -(x * x) + (1 + 2 * x) * theta
    check_identity("(1+x) theta theta' = -x^2 + (1+2x) theta", lhs, rhs.truncate(top), top)
    report.passed.append("(1+x) theta theta' = -x^2 + (1+2x) theta")
    return report
