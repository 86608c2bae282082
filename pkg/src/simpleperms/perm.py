"""Permutations, blocks, simplicity and substitution decomposition.

Everything is 1-based: a permutation of length n is stored in one-line
notation as a tuple holding each of 1..n exactly once, and a block is a
closed range of positions whose values form a closed range of integers.

>>> p = parse_permutation("67183524")
>>> str(decompose(p))
'(3142)[12, 1, 1, 2413]'
>>> is_simple(parse_permutation("58317462"))
True
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

from .errors import ArityMismatch, EmptyPermutation, NotABijection, NotAMinimalBlock

__all__ = [
    "Permutation", "Block", "Decomposition", "MarkedDecomposition",
    "parse_permutation", "pattern", "blocks", "is_simple", "is_simple_naive",
    "inflate", "decompose", "is_plus_indecomposable", "is_minus_indecomposable",
    "minimal_blocks", "marked_decompose", "marked_compose",
    "is_identity", "is_reversed_identity", "all_markings",
]


@dataclass(frozen=True, order=True)
class Permutation:
    """A permutation of 1..n in one-line notation.

    Ordering is lexicographic on ``values``.
    """

    values: tuple[int, ...]

    def __post_init__(self):
        values = tuple(self.values)
        object.__setattr__(self, "values", values)
        if not values:
            raise EmptyPermutation("a permutation needs at least one entry")
        if sorted(values) != list(range(1, len(values) + 1)):
            raise NotABijection(f"{values} is not a bijection on 1..{len(values)}")

    @property
    def n(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __str__(self) -> str:
        if self.n <= 9:
            return "".join(map(str, self.values))
        return " ".join(map(str, self.values))

    def __repr__(self) -> str:
        return f"Permutation({str(self)!r})"

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    def reverse(self) -> Permutation:
        return Permutation(self.values[::-1])

    def complement(self) -> Permutation:
        """The permutation t -> n + 1 - p(t)."""
        return Permutation(tuple(self.n + 1 - v for v in self.values))


@dataclass(frozen=True, order=True)
class Block:
    """Positions ``start..end`` (inclusive, 1-based) carrying values ``lo..hi``."""

    start: int
    end: int
    lo: int
    hi: int

    def __post_init__(self):
        if not 1 <= self.start <= self.end:
            raise ValueError(f"bad position range {self.start}..{self.end}")
        if self.hi - self.lo != self.end - self.start:
            raise ValueError("value range and position range differ in length")

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    def contains(self, other: Block) -> bool:
        return self.start <= other.start and other.end <= self.end

    def overlaps(self, other: Block) -> bool:
        return self.start <= other.end and other.start <= self.end

    def segment(self, p: Permutation) -> tuple[int, ...]:
        return p.values[self.start - 1:self.end]

    def __str__(self) -> str:
        return f"{self.start}-{self.end}"


_SEPARATORS = re.compile(r"[\s,]+")


def parse_permutation(text: str) -> Permutation:
    """Parse ``"2413"``, ``"2 4 1 3"`` or ``"2,4,1,3"``.

    The contiguous form is only read digit by digit, so it can express
    permutations of length at most 9.
    """
    body = text.strip().strip("()[]<>⟨⟩").strip()
    tokens = [t for t in _SEPARATORS.split(body) if t]
    if not tokens:
        raise EmptyPermutation(f"no entries in {text!r}")
    if len(tokens) == 1 and len(tokens[0]) > 1:
        tokens = list(tokens[0])
    try:
        values = tuple(int(t) for t in tokens)
    except ValueError:
        raise ValueError(f"non-integer entry in {text!r}") from None
    return Permutation(values)


def pattern(values: Iterable[int]) -> Permutation:
    """The permutation order-isomorphic to a sequence of distinct integers."""
    values = list(values)
    rank = {v: i for i, v in enumerate(sorted(values), start=1)}
    return Permutation(tuple(rank[v] for v in values))


def blocks(p: Permutation) -> list[Block]:
    """All blocks of ``p`` (singletons and the whole included), sorted by (start, end)."""
    v = p.values
    n = len(v)
    out = []
    for i in range(n):
        lo = hi = v[i]
        for j in range(i, n):
            x = v[j]
            if x < lo:
                lo = x
            elif x > hi:
                hi = x
            if hi - lo == j - i:
                out.append(Block(i + 1, j + 1, lo, hi))
    return out


def is_simple(p: Permutation | Sequence[int]) -> bool:
    """True iff the only blocks are singletons and the whole permutation.

    Quadratic scan: for each left end keep a running min/max and stop at
    the first proper non-singleton block.  Lengths 1 and 2 count as simple.
    """
    v = p.values if isinstance(p, Permutation) else p
    n = len(v)
    for i in range(n - 1):
        lo = hi = v[i]
        # a window starting at i may not reach the last position when i == 0
        stop = n - 1 if i == 0 else n
        for j in range(i + 1, stop):
            x = v[j]
            if x < lo:
                lo = x
            elif x > hi:
                hi = x
            if hi - lo == j - i:
                return False
    return True


def is_simple_naive(p: Permutation | Sequence[int]) -> bool:
    """Cubic reference: test every proper segment of length >= 2 as a set."""
    v = tuple(p)
    n = len(v)
    for length in range(2, n):
        for i in range(n - length + 1):
            seg = v[i:i + length]
            if max(seg) - min(seg) == length - 1 and len(set(seg)) == length:
                return False
    return True


def inflate(skeleton: Permutation, parts: Sequence[Permutation]) -> Permutation:
    """Substitute ``parts[i]`` for the i-th point of ``skeleton``."""
    if len(parts) != skeleton.n:
        raise ArityMismatch(f"skeleton of length {skeleton.n} needs {skeleton.n} parts, got {len(parts)}")
    sizes = [len(a) for a in parts]
    # offset[v] = total size of parts sitting below skeleton value v
    by_value = sorted(range(skeleton.n), key=lambda i: skeleton[i])
    offset = [0] * skeleton.n
    acc = 0
    for i in by_value:
        offset[i] = acc
        acc += sizes[i]
    values = []
    for i, part in enumerate(parts):
        values.extend(offset[i] + x for x in part)
    return Permutation(tuple(values))


@dataclass(frozen=True)
class Decomposition:
    skeleton: Permutation
    parts: tuple[Permutation, ...]

    def __str__(self) -> str:
        return f"({self.skeleton})[{', '.join(map(str, self.parts))}]"

    def inflate(self) -> Permutation:
        return inflate(self.skeleton, self.parts)


def _prefix_split(v: tuple[int, ...], *, descending: bool) -> int | None:
    """Smallest proper j such that v[:j] is {1..j} (or {n-j+1..n} if descending)."""
    n = len(v)
    lo, hi = n + 1, 0
    for j in range(1, n):
        x = v[j - 1]
        lo = min(lo, x)
        hi = max(hi, x)
        if not descending and hi == j:
            return j
        if descending and lo == n - j + 1:
            return j
    return None


def is_plus_indecomposable(p: Permutation) -> bool:
    """True unless p = (12)[a, b]."""
    return _prefix_split(p.values, descending=False) is None


def is_minus_indecomposable(p: Permutation) -> bool:
    """True unless p = (21)[a, b]."""
    return _prefix_split(p.values, descending=True) is None


def decompose(p: Permutation) -> Decomposition:
    """Unique substitution decomposition with a simple skeleton.

    When the maximal proper blocks are pairwise disjoint they form the
    coarsest block decomposition and its pattern is the skeleton.
    Otherwise the skeleton is 12 or 21 and the first part is the smallest
    possible prefix, which makes it plus (resp. minus) indecomposable.
    """
    n = p.n
    if n == 1:
        return Decomposition(p, (p,))
    proper = [b for b in blocks(p) if b.length < n]
    maximal = [b for b in proper
               if not any(c != b and c.contains(b) for c in proper)]
    if all(a.end < b.start for a, b in zip(maximal, maximal[1:])):
        skeleton = pattern(b.lo for b in maximal)
        parts = tuple(pattern(b.segment(p)) for b in maximal)
        return Decomposition(skeleton, parts)

    v = p.values
    j = _prefix_split(v, descending=False)
    skeleton = Permutation((1, 2))
    if j is None:
        j = _prefix_split(v, descending=True)
        skeleton = Permutation((2, 1))
    assert j is not None, "overlapping maximal blocks imply a 12/21 skeleton"
    return Decomposition(skeleton, (pattern(v[:j]), pattern(v[j:])))


def minimal_blocks(p: Permutation, m: int | None = None) -> list[Block]:
    """Non-singleton blocks minimal under inclusion, of length at most ``m``.

    With ``m=None`` all minimal blocks are returned.  The whole permutation
    counts when it has no smaller non-singleton block (e.g. 12 or 2413).
    """
    if m is not None and m < 2:
        raise ValueError("m must be at least 2")
    nontrivial = [b for b in blocks(p) if b.length >= 2]
    out = []
    for b in nontrivial:
        if m is not None and b.length > m:
            continue
        if any(c != b and b.contains(c) for c in nontrivial):
            continue
        assert is_simple(pattern(b.segment(p))), f"minimal block {b} of {p} is not simple"
        out.append(b)
    return out


def is_identity(p: Permutation) -> bool:
    return all(v == i for i, v in enumerate(p.values, start=1))


def is_reversed_identity(p: Permutation) -> bool:
    n = p.n
    return all(v == n + 1 - i for i, v in enumerate(p.values, start=1))


def _is_cluster_part(a: Permutation) -> bool:
    return a.n >= 2 and (is_identity(a) or is_reversed_identity(a))


def _is_simple_part(a: Permutation) -> bool:
    return a.n >= 4 and is_simple(a)


class MarkedDecomposition(NamedTuple):
    """Image (skeleton; parts) of a marked permutation.

    ``r`` counts simple parts of length >= 4, ``s`` counts cluster parts
    (monotone of length >= 2) and ``l`` is the total length of the cluster
    parts; the number of marks is always ``r + l - s``.
    """

    skeleton: Permutation
    parts: tuple[Permutation, ...]

    @property
    def r(self) -> int:
        return sum(1 for a in self.parts if _is_simple_part(a))

    @property
    def s(self) -> int:
        return sum(1 for a in self.parts if _is_cluster_part(a))

    @property
    def l(self) -> int:  # noqa: E743
        return sum(a.n for a in self.parts if _is_cluster_part(a))

    @property
    def mark_count(self) -> int:
        return self.r + self.l - self.s

    def __str__(self) -> str:
        return f"({self.skeleton}; {', '.join(map(str, self.parts))})"


def marked_decompose(p: Permutation, marks: Iterable[Block]) -> MarkedDecomposition:
    """Collapse marked minimal blocks and marked clusters to single points."""
    marks = sorted(set(marks))
    allowed = set(minimal_blocks(p))
    for b in marks:
        if b not in allowed:
            raise NotAMinimalBlock(f"{b} is not a minimal block of {p}")

    segments = [(b.start, b.end) for b in marks if b.length > 2]
    # chains of overlapping marked pairs: (i, i+1), (i+1, i+2), ...
    pairs = [b.start for b in marks if b.length == 2]
    run_start = None
    for k, s in enumerate(pairs):
        if run_start is None:
            run_start = s
        if k + 1 == len(pairs) or pairs[k + 1] != s + 1:
            segments.append((run_start, s + 1))
            run_start = None
    segments.sort()

    v = p.values
    reps, parts = [], []
    pos = 1
    for start, end in segments + [(p.n + 1, p.n + 1)]:
        while pos < start:
            reps.append(v[pos - 1])
            parts.append(Permutation((1,)))
            pos += 1
        if start > p.n:
            break
        seg = v[start - 1:end]
        reps.append(min(seg))
        parts.append(pattern(seg))
        pos = end + 1
    return MarkedDecomposition(pattern(reps), tuple(parts))


def marked_compose(skeleton: Permutation, parts: Sequence[Permutation]) -> tuple[Permutation, frozenset[Block]]:
    """Inverse of :func:`marked_decompose`: rebuild the permutation and its marks."""
    for a in parts:
        if a.n != 1 and not _is_simple_part(a) and not _is_cluster_part(a):
            raise ValueError(f"part {a} is neither 1, simple of length >= 4, nor monotone")
    p = inflate(skeleton, parts)
    marks = set()
    pos = 1
    for a in parts:
        start, end = pos, pos + a.n - 1
        if _is_simple_part(a):
            seg = p.values[start - 1:end]
            marks.add(Block(start, end, min(seg), max(seg)))
        elif _is_cluster_part(a):
            for i in range(start, end):
                x, y = p.values[i - 1], p.values[i]
                marks.add(Block(i, i + 1, min(x, y), max(x, y)))
        pos = end + 1
    return p, frozenset(marks)


def all_markings(p: Permutation, m: int | None = None) -> Iterable[frozenset[Block]]:
    """Every subset of the minimal blocks of ``p`` (of length <= m)."""
    base = minimal_blocks(p, m)
    for k in range(len(base) + 1):
        for combo in combinations(base, k):
            yield frozenset(combo)
