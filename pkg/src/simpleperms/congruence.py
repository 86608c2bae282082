"""p-adic valuations and the congruences satisfied by Com_n and s_n.

Checks here raise on the first counterexample; a clean return means every
index in range was verified.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field

from .errors import CongruenceViolation, TheoremViolation, ZeroInput
from .series import TruncSeries, comtet_series
from .sequences import s_sequence_checked

log = logging.getLogger(__name__)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def ord_p(p: int, n: int) -> int:
    """Exponent of the prime p in the nonzero integer n."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n == 0:
        raise ZeroInput("ord_p(0) is undefined")
    n = abs(n)
    if p == 2:
        return (n & -n).bit_length() - 1
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def ord_p_factorial(p: int, m: int) -> int:
    """Legendre: ord_p(m!) = floor(m/p) + floor(m/p^2) + ..."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    total, q = 0, p
    while q <= m:
        total += m // q
        q *= p
    return total


def factorial_lemma_holds(m: int) -> bool:
    """ord_2((m+1)!) >= ceil(m/2) with equality iff m in {1, 2}, and ord_3(m!) <= m - 1.

    Stated for m >= 1 (at m = 0 both halves degenerate).
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    v2 = ord_p_factorial(2, m + 1)
    bound = (m + 1) // 2
    if v2 < bound or (v2 == bound) != (m in (1, 2)):
        return False
    return ord_p_factorial(3, m) <= m - 1


def _carries(p: int, a: int, b: int) -> int:
    carries = carry = 0
    while a or b or carry:
        s = a % p + b % p + carry
        carry = 1 if s >= p else 0
        carries += carry
        a //= p
        b //= p
    return carries


def ord_p_binomial_kummer(p: int, a: int, b: int) -> int:
    """ord_p of C(a+b, a), as the number of carries adding a and b in base p.

    Cross-checked against Legendre's formula on every call.
    """
    if a < 0 or b < 0:
        raise ValueError("a and b must be non-negative")
    carries = _carries(p, a, b)
    legendre = ord_p_factorial(p, a + b) - ord_p_factorial(p, a) - ord_p_factorial(p, b)
    assert carries == legendre, f"Kummer {carries} != Legendre {legendre} for p={p}, a={a}, b={b}"
    return carries


def no_consecutive_ones(m: int) -> bool:
    return m & (m >> 1) == 0


def binomial_3m_m_is_odd(m: int) -> bool:
    """Parity of C(3m, m) three ways; they must agree."""
    by_carries = ord_p_binomial_kummer(2, m, 2 * m) == 0
    by_digits = no_consecutive_ones(m)
    by_value = math.comb(3 * m, m) % 2 == 1
    if not by_carries == by_digits == by_value:
        raise TheoremViolation(
            f"parity of C({3 * m},{m}): carries {by_carries}, digits {by_digits}, direct {by_value}")
    return by_value


@dataclass
class ValuationReport:
    n: int
    valuation: int
    lower_bound: int
    equality_predicted: bool
    equality_observed: bool

    def to_json(self) -> dict:
        return asdict(self)


def check_ord2_theorem(n_max: int, com: TruncSeries | None = None) -> list[ValuationReport]:
    """ord_2(Com_n) >= ceil((n-1)/2), with equality iff C(3m, m) is odd, m = n // 2."""
    if com is None:
        com = comtet_series(n_max)
    if com.order < n_max:
        raise ValueError(f"Comtet series only known to order {com.order}")
    rows = []
    for n in range(1, n_max + 1):
        c = com[n]
        if c == 0:
            log.warning("Com_%d = 0; ord_2 undefined, skipped", n)
            continue
        v = ord_p(2, c)
        bound = n // 2  # == ceil((n - 1) / 2)
        m = n // 2
        predicted = binomial_3m_m_is_odd(m)
        row = ValuationReport(n, v, bound, predicted, v == bound)
        if v < bound:
            raise TheoremViolation(f"ord_2(Com_{n}) = {v} < {bound}")
        if row.equality_predicted != row.equality_observed:
            raise TheoremViolation(
                f"n={n}: equality predicted {predicted} but ord_2 = {v}, bound {bound}")
        rows.append(row)
    return rows


def b_coefficients(k_max: int) -> list[int]:
    """b_k with sum b_k x^k = sum_j (-1)^j (2!x + 3!x^2 + ...)^j."""
    u = TruncSeries([1] + [math.factorial(k + 1) for k in range(1, k_max + 1)], k_max)
    return list((1 / u).coeffs)


def check_b_valuations(k_max: int) -> None:
    """ord_2(b_k) is k/2 (k even), (k+1)/2 (k = 1 mod 4), more (k = 3 mod 4)."""
    for k, b in enumerate(b_coefficients(k_max)):
        v = ord_p(2, b)
        if k % 2 == 0:
            ok = v == k // 2
        elif k % 4 == 1:
            ok = v == (k + 1) // 2
        else:
            ok = v > (k + 1) // 2
        if not ok:
            raise TheoremViolation(f"ord_2(b_{k}) = {v} breaks the parity pattern")


@dataclass
class CongruenceReport:
    name: str
    n_min: int
    n_max: int
    checked: int = 0
    samples: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"name": self.name, "n_min": self.n_min, "n_max": self.n_max,
                "checked": self.checked, "samples": self.samples, "ok": True}


def check_power2_congruence(n_max: int) -> CongruenceReport:
    """s_n = 2 mod 2^((n-1)/2) for odd n, s_n = -2 mod 2^(n/2) for even n (n >= 3)."""
    s = s_sequence_checked(n_max)
    report = CongruenceReport("s_n = +-2 mod 2^k", 3, n_max)
    for n in range(3, n_max + 1):
        if n % 2:
            residue, modulus = 2, 2 ** ((n - 1) // 2)
        else:
            residue, modulus = -2, 2 ** (n // 2)
        if (s[n] - residue) % modulus:
            raise CongruenceViolation(f"s_{n} = {s[n]} is not {residue} mod {modulus}")
        report.checked += 1
        if n <= 12:
            report.samples.append({"n": n, "residue": residue, "modulus": str(modulus)})
    return report


def catalan(n: int) -> int:
    """C_n = C(2n, n) / (n + 1)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return math.comb(2 * n, n) // (n + 1)


def check_catalan_mod3(n_max: int) -> list[CongruenceReport]:
    """Com_n = C_{n-1} mod 3 (n >= 1) and s_n = -C_{n-1} + (-1)^n mod 3 (n > 2)."""
    com = comtet_series(n_max)
    s = s_sequence_checked(n_max)
    first = CongruenceReport("Com_n = C_{n-1} mod 3", 1, n_max)
    for n in range(1, n_max + 1):
        if (com[n] - catalan(n - 1)) % 3:
            raise CongruenceViolation(f"Com_{n} = {com[n]} but C_{n - 1} = {catalan(n - 1)} (mod 3)")
        first.checked += 1
    second = CongruenceReport("s_n = -C_{n-1} + (-1)^n mod 3", 3, n_max)
    for n in range(3, n_max + 1):
        if (s[n] + catalan(n - 1) - (-1) ** n) % 3:
            raise CongruenceViolation(f"s_{n} = {s[n]} breaks the mod 3 congruence")
        second.checked += 1
    return [first, second]


def scan_ord_p(p: int, n_max: int) -> list[tuple[int, int | None]]:
    """Exploratory table of ord_p(Com_n); nothing is asserted."""
    com = comtet_series(n_max)
    return [(n, ord_p(p, com[n]) if com[n] else None) for n in range(1, n_max + 1)]
