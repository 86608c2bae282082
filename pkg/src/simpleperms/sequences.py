"""Integer sequences from the series pipeline, and brute-force oracles for them.

Exhaustive routines walk all n! permutations in lexicographic order and are
capped at n = 10 unless ``allow_large=True`` is passed.  Parallel counting
splits the rank space into contiguous ranges (one per leading value) and
adds the partial counts, so the result never depends on the worker count.
"""

from __future__ import annotations

import json
import logging
import math
import os
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from pathlib import Path
from typing import Callable, Iterator

from .errors import (
    BijectionViolation,
    ClaimViolation,
    CrossCheckFailure,
    MethodDisagreement,
    NoSimpleOfLength3,
    TooLarge,
)
from .perm import (
    Permutation,
    all_markings,
    is_plus_indecomposable,
    is_simple,
    marked_compose,
    marked_decompose,
    minimal_blocks,
)
from .series import (
    bivariate_F_m,
    comtet_series,
    f_m_series,
    indecomposable_series,
    lagrange_com,
    simple_series,
)

log = logging.getLogger(__name__)

BRUTE_FORCE_CAP = 10
CACHE_ENV = "SIMPLEPERMS_CACHE_DIR"
PROVENANCES = ("series", "relation", "brute_force", "newton", "lagrange", "bivariate")


@dataclass
class SequenceTable:
    """A named integer sequence indexed from 1, tagged with how it was computed."""

    name: str
    values: list[tuple[int, int]]
    provenance: str

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        for k, (n, _) in enumerate(self.values, start=1):
            if n != k:
                raise ValueError(f"{self.name}: indices must run 1, 2, ...; found {n} at slot {k}")

    def __getitem__(self, n: int) -> int:
        return self.values[n - 1][1]

    def __len__(self) -> int:
        return len(self.values)

    def as_list(self) -> list[int]:
        return [v for _, v in self.values]

    def check_against(self, other: SequenceTable) -> None:
        """Raise CrossCheckFailure at the first shared index where the tables differ."""
        for (n, a), (_, b) in zip(self.values, other.values):
            if a != b:
                raise CrossCheckFailure(self.name, n, a, b)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "provenance": self.provenance,
            "values": [[n, str(v)] for n, v in self.values],
        }

    @classmethod
    def from_json(cls, doc: dict) -> SequenceTable:
        return cls(doc["name"], [(int(n), int(v)) for n, v in doc["values"]], doc["provenance"])


def _table(name: str, values: list[int], provenance: str) -> SequenceTable:
    return SequenceTable(name, list(enumerate(values, start=1)), provenance)


# -- series-derived sequences ---------------------------------------------------

def s_sequence(N: int, method: str = "series") -> SequenceTable:
    """Numbers of simple permutations s_1..s_N.

    ``series`` reads the coefficients of S(t); ``relation`` uses
    s_n = -Com_n + (-1)^(n+1) * 2 for n >= 4.  s_1, s_2, s_3 = 1, 2, 0.
    """
    head = [1, 2, 0][:N]
    if N <= 3:
        return _table("s", head, method)
    if method == "series":
        s = simple_series(N)
        tail = [s[n] for n in range(4, N + 1)]
    elif method == "relation":
        c = comtet_series(N)
        tail = [-c[n] + (-1) ** (n + 1) * 2 for n in range(4, N + 1)]
    else:
        raise ValueError(f"unknown method {method!r}")
    return _table("s", head + tail, method)


def s_sequence_checked(N: int) -> SequenceTable:
    """s_1..s_N from the series, verified against the Comtet relation."""
    a = s_sequence(N, "series")
    b = s_sequence(N, "relation")
    for (n, x), (_, y) in zip(a.values, b.values):
        if x != y:
            raise MethodDisagreement(f"s[{n}]: series {x} != relation {y}")
    return a


def com_sequence(N: int, method: str = "newton") -> SequenceTable:
    """Coefficients Com_1..Com_N of the compositional inverse of F."""
    if method == "newton":
        c = comtet_series(N)
        values = [c[n] for n in range(1, N + 1)]
    elif method == "lagrange":
        values = [lagrange_com(n) for n in range(1, N + 1)]
    else:
        raise ValueError(f"unknown method {method!r}")
    return _table("com", values, method)


def i_sequence(N: int) -> SequenceTable:
    i = indecomposable_series(N)
    return _table("i", [i[n] for n in range(1, N + 1)], "series")


def fm_sequence(m: int, N: int, method: str = "series") -> SequenceTable:
    """[x^n] f_m for n = 1..N."""
    if method == "series":
        f = f_m_series(m, N)
    elif method == "bivariate":
        f = bivariate_F_m(m, N).evaluate_v(-1)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _table(f"f{m}", [f[n] for n in range(1, N + 1)], method)


# -- exhaustive oracles ---------------------------------------------------------

def _guard(n: int, allow_large: bool = False, cap: int = BRUTE_FORCE_CAP) -> None:
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap and not allow_large:
        raise TooLarge(f"n={n} means {math.factorial(n):,} permutations; cap is {cap}")
    if n > cap:
        log.warning("exhaustive pass over %s permutations of length %d", f"{math.factorial(n):,}", n)


def all_permutations(n: int) -> Iterator[Permutation]:
    """Every permutation of length n, lexicographically."""
    for v in permutations(range(1, n + 1)):
        yield Permutation(v)


def _count_simple_with_first(args: tuple[int, int]) -> int:
    n, first = args
    rest = [v for v in range(1, n + 1) if v != first]
    return sum(1 for tail in permutations(rest) if is_simple((first,) + tail))


def brute_count_simple(n: int, jobs: int = 1, allow_large: bool = False) -> int:
    """Count simple permutations of length n by testing every permutation."""
    _guard(n, allow_large)
    chunks = [(n, first) for first in range(1, n + 1)]
    if jobs <= 1 or n < 8:
        return sum(map(_count_simple_with_first, chunks))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return sum(pool.map(_count_simple_with_first, chunks))


def brute_count_plus_indecomposable(n: int) -> int:
    _guard(n)
    return sum(1 for p in all_permutations(n) if is_plus_indecomposable(p))


def enumerate_simple(n: int, allow_large: bool = False) -> Iterator[Permutation]:
    """Simple permutations of length n in lexicographic order.

    Depth-first over prefixes: a segment that is a proper block stays a
    block whatever follows, so any prefix containing a non-singleton block
    shorter than n is abandoned immediately.
    """
    _guard(n, allow_large)
    if n <= 2:
        yield from all_permutations(n)
        return
    prefix: list[int] = []
    used = [False] * (n + 1)

    def extend_ok() -> bool:
        # new blocks end at the last position; scan leftwards
        k = len(prefix)
        lo = hi = prefix[-1]
        for i in range(k - 2, -1, -1):
            x = prefix[i]
            if x < lo:
                lo = x
            elif x > hi:
                hi = x
            if hi - lo == k - 1 - i and not (i == 0 and k == n):
                return False
        return True

    def walk() -> Iterator[Permutation]:
        if len(prefix) == n:
            yield Permutation(tuple(prefix))
            return
        for v in range(1, n + 1):
            if not used[v]:
                used[v] = True
                prefix.append(v)
                if extend_ok():
                    yield from walk()
                prefix.pop()
                used[v] = False

    yield from walk()


def random_simple(n: int, seed: int | None = None, rng: random.Random | None = None,
                  max_tries: int = 1_000_000) -> Permutation:
    """A uniformly random simple permutation of length n, by rejection.

    Expected number of draws tends to e^2 (about 7.4).
    """
    if n == 3:
        raise NoSimpleOfLength3("there are no simple permutations of length 3")
    if n < 1:
        raise ValueError("n must be positive")
    rng = rng or random.Random(seed)
    values = list(range(1, n + 1))
    for _ in range(max_tries):
        rng.shuffle(values)
        if is_simple(values):
            return Permutation(tuple(values))
    raise RuntimeError(f"no simple permutation after {max_tries} draws")


@lru_cache(maxsize=None)
def _min_block_lengths(n: int) -> tuple[tuple[int, ...], ...]:
    """For each permutation of length n, the sorted lengths of its minimal blocks."""
    return tuple(tuple(sorted(b.length for b in minimal_blocks(p))) for p in all_permutations(n))


def brute_F_m(n: int, m: int) -> tuple[int, ...]:
    """Sum over permutations of length n of (1 + v)^|B_m(p)|, as v-coefficients."""
    _guard(n, cap=8)
    if m < 2:
        raise ValueError("m must be at least 2")
    hist = Counter(sum(1 for k in lengths if k <= m) for lengths in _min_block_lengths(n))
    top = max(hist)
    out = [0] * (top + 1)
    for e, count in hist.items():
        for j in range(e + 1):
            out[j] += count * math.comb(e, j)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def eval_v(poly: tuple[int, ...], v: int) -> int:
    return sum(c * v ** j for j, c in enumerate(poly))


@dataclass
class MinBlockCount:
    n: int
    k: int
    count: int
    bound: int


def count_with_min_block(n: int, k: int) -> MinBlockCount:
    """p_{n,k}: permutations of length n with at least one minimal block of length k.

    Also checks p_{n,k} <= s_k (n-k+1) (n-k+1)!.
    """
    _guard(n, cap=8)
    if not 2 <= k <= n:
        raise ValueError("need 2 <= k <= n")
    count = sum(1 for lengths in _min_block_lengths(n) if k in lengths)
    s_k = s_sequence(k, "series")[k]
    bound = s_k * (n - k + 1) * math.factorial(n - k + 1)
    if count > bound:
        raise ClaimViolation(f"p_{{{n},{k}}} = {count} exceeds {bound}")
    return MinBlockCount(n, k, count, bound)


@dataclass
class MarkedBijectionReport:
    n_max: int
    pairs_checked: int = 0
    by_length: dict[int, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"n_max": self.n_max, "pairs_checked": self.pairs_checked,
                "by_length": {str(k): v for k, v in self.by_length.items()}, "ok": True}


def verify_theorem2(n_max: int) -> MarkedBijectionReport:
    """Round-trip every marked permutation of length <= n_max through the bijection."""
    _guard(n_max, cap=8)
    report = MarkedBijectionReport(n_max)
    for n in range(1, n_max + 1):
        count = 0
        for p in all_permutations(n):
            for marks in all_markings(p):
                image = marked_decompose(p, marks)
                back, back_marks = marked_compose(image.skeleton, image.parts)
                if back != p or back_marks != marks:
                    raise BijectionViolation(f"{p} with marks {sorted(map(str, marks))} does not round-trip")
                if len(marks) != image.mark_count:
                    raise BijectionViolation(
                        f"{p}: |M| = {len(marks)} but r + l - s = {image.mark_count}")
                count += 1
        report.by_length[n] = count
        report.pairs_checked += count
    return report


@dataclass
class CrossValidation:
    N_series: int
    n_brute: int
    checks: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"N_series": self.N_series, "n_brute": self.n_brute, "checks": self.checks, "ok": True}


def cross_validate(N_series: int = 20, n_brute: int = 9, jobs: int = 1,
                   s_table: SequenceTable | None = None) -> CrossValidation:
    """Check series-derived sequences against exhaustive counts.

    ``s_table`` may be supplied to validate a table from elsewhere (e.g. a cache).
    """
    report = CrossValidation(N_series, n_brute)
    s = s_table or s_sequence_checked(N_series)
    for n in range(1, min(n_brute, len(s)) + 1):
        b = brute_count_simple(n, jobs=jobs)
        if b != s[n]:
            raise CrossCheckFailure("s", n, s[n], b)
    report.checks.append(f"s_n series = relation = brute force for n <= {min(n_brute, len(s))}")

    i = i_sequence(8)
    for n in range(1, 9):
        b = brute_count_plus_indecomposable(n)
        if b != i[n]:
            raise CrossCheckFailure("i", n, i[n], b)
    report.checks.append("i_n series = brute force for n <= 8")

    for m in (2, 3, 4):
        f = f_m_series(m, 8)
        big = bivariate_F_m(m, 8)
        for n in range(1, 9):
            poly = brute_F_m(n, m)
            if eval_v(poly, -1) != f[n]:
                raise CrossCheckFailure(f"f{m}", n, f[n], eval_v(poly, -1))
            if big.x_slice(n) != poly:
                raise CrossCheckFailure(f"F{m}(x,v)", n, big.x_slice(n), poly)
    report.checks.append("f_m and F_m(x,v) = brute force for n <= 8, m in {2,3,4}")
    return report


# -- cache ------------------------------------------------------------------------

def cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV, Path.home() / ".cache" / "simpleperms"))


def save_table(table: SequenceTable, directory: Path | None = None) -> Path:
    directory = Path(directory or cache_dir())
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{table.name}.json"
    path.write_text(json.dumps(table.to_json(), indent=1))
    return path


def load_table(name: str, directory: Path | None = None,
               verify: Callable[[SequenceTable], None] | None = None) -> SequenceTable | None:
    """Read a cached table; ``verify`` is always run on what was read."""
    path = Path(directory or cache_dir()) / f"{name}.json"
    if not path.exists():
        return None
    table = SequenceTable.from_json(json.loads(path.read_text()))
    if verify is not None:
        verify(table)
    return table


def verify_s_table(table: SequenceTable) -> None:
    """Re-derive every cached s_n from the Comtet relation."""
    fresh = s_sequence(len(table), "relation")
    table.check_against(fresh)
