"""Permutations in one-line notation: containment, symmetries, and the
increasing-run tables behind every rank-capability question.

A permutation of length ``n`` is a tuple holding each of ``1..n`` exactly
once. Positions passed to and returned by functions in this package are
0-based Python indices; the text formats (and every serialized report built
on them) speak 1-based values and positions, matching one-line notation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import UsageError

Perm = tuple[int, ...]

__all__ = [
    "Perm",
    "check_perm",
    "identity",
    "parse_perm",
    "format_perm",
    "pattern_of",
    "deletions",
    "contains",
    "avoids",
    "reverse_complement",
    "direct_sum",
    "lis_tables",
    "RankCapabilityTable",
    "rank_capability",
    "can_act_as_rank",
]


def check_perm(values: Iterable[int]) -> Perm:
    """Return ``values`` as a tuple after checking it permutes 1..n.

    >>> check_perm([2, 1, 3])
    (2, 1, 3)
    """
    p = tuple(values)
    n = len(p)
    if n == 0:
        return p
    seen = [False] * (n + 1)
    for v in p:
        if not isinstance(v, int) or not 1 <= v <= n or seen[v]:
            raise UsageError(f"not a permutation of 1..{n}: {p!r}")
        seen[v] = True
    return p


def identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def parse_perm(text: str) -> Perm:
    """Parse one-line notation.

    Accepts either a compact digit string ("82456173", only possible for
    n <= 9) or space-separated integers ("8 3 2 11 12 5 6 9 10 14 4 1 13 7").
    """
    s = text.strip()
    if not s:
        return ()
    if any(ch.isspace() for ch in s):
        try:
            values = [int(tok) for tok in s.split()]
        except ValueError:
            raise UsageError(f"bad permutation text: {text!r}") from None
    elif s.isdigit():
        values = [int(ch) for ch in s]
    else:
        raise UsageError(f"bad permutation text: {text!r}")
    return check_perm(values)


def format_perm(p: Perm) -> str:
    """One-line text form: compact iff n <= 9, space-separated otherwise."""
    if len(p) <= 9:
        return "".join(str(v) for v in p)
    return " ".join(str(v) for v in p)


def pattern_of(values: Sequence[int]) -> Perm:
    """Order-isomorphic reduction of a distinct-value sequence.

    >>> pattern_of((8, 2, 4, 5))
    (4, 1, 2, 3)
    """
    rank = {v: r for r, v in enumerate(sorted(values), start=1)}
    return tuple(rank[v] for v in values)


def deletions(p: Perm) -> set[Perm]:
    """The set of patterns obtained by deleting one entry of ``p``."""
    return {pattern_of(p[:t] + p[t + 1 :]) for t in range(len(p))}


@lru_cache(maxsize=4096)
def _bound_refs(q: Perm) -> tuple[tuple[int, ...], tuple[int, ...]]:
    # For each pattern slot, the earlier slot holding its tightest lower /
    # upper value bound (-1 when unbounded).
    lo: list[int] = []
    hi: list[int] = []
    for t, qt in enumerate(q):
        lo_t = -1
        hi_t = -1
        for s in range(t):
            if q[s] < qt and (lo_t < 0 or q[s] > q[lo_t]):
                lo_t = s
            if q[s] > qt and (hi_t < 0 or q[s] < q[hi_t]):
                hi_t = s
        lo.append(lo_t)
        hi.append(hi_t)
    return tuple(lo), tuple(hi)


def contains(p: Perm, q: Perm) -> bool:
    """True iff some subsequence of ``p`` is order-isomorphic to ``q``.

    Depth-first matching with an earliest-feasible-position bound; worst case
    O(n^k), which is fine at desk scale and fully general.

    >>> contains((3, 2, 1), (1, 2))
    False
    >>> contains((8, 2, 4, 5, 6, 1, 7, 3), (1, 2, 3, 4, 5))
    True
    """
    k = len(q)
    if k == 0:
        return True
    n = len(p)
    if k > n:
        return False
    lo_ref, hi_ref = _bound_refs(q)
    vals = [0] * k
    big = n + 1

    def descend(t: int, start: int) -> bool:
        stop = n - (k - 1 - t)
        lo = vals[lo_ref[t]] if lo_ref[t] >= 0 else 0
        hi = vals[hi_ref[t]] if hi_ref[t] >= 0 else big
        last = t == k - 1
        for pos in range(start, stop):
            v = p[pos]
            if lo < v < hi:
                if last:
                    return True
                vals[t] = v
                if descend(t + 1, pos + 1):
                    return True
        return False

    return descend(0, 0)


def avoids(p: Perm, q: Perm) -> bool:
    return not contains(p, q)


def reverse_complement(p: Perm) -> Perm:
    """The involution p -> (n+1-p_n)(n+1-p_{n-1})...(n+1-p_1).

    >>> reverse_complement((2, 3, 1, 4))
    (1, 4, 2, 3)
    """
    n1 = len(p) + 1
    return tuple(n1 - v for v in reversed(p))


def direct_sum(p: Perm, q: Perm) -> Perm:
    """Concatenate ``p`` with ``q`` shifted above p's values.

    >>> direct_sum((1, 4, 2, 3), (1, 2))
    (1, 4, 2, 3, 5, 6)
    """
    shift = len(p)
    return p + tuple(v + shift for v in q)


def lis_tables(p: Perm) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(up, down): longest increasing run ending / starting at each index.

    Both are inclusive of the index itself, computed by the O(n^2) dynamic
    program (ample at desk scale).
    """
    n = len(p)
    up = [1] * n
    for t in range(n):
        pt = p[t]
        best = 0
        for s in range(t):
            if p[s] < pt and up[s] > best:
                best = up[s]
        up[t] = best + 1
    down = [1] * n
    for t in range(n - 1, -1, -1):
        pt = p[t]
        best = 0
        for s in range(t + 1, n):
            if p[s] > pt and down[s] > best:
                best = down[s]
        down[t] = best + 1
    return tuple(up), tuple(down)


@dataclass(frozen=True)
class RankCapabilityTable:
    """Which indices can serve as the r-th entry of an occurrence of 12...k.

    An index can act as rank ``r`` exactly when an increasing run of length
    ``r`` ends there and one of length ``k - r + 1`` starts there.
    """

    perm: Perm
    k: int
    up: tuple[int, ...]
    down: tuple[int, ...]

    def can_act(self, pos: int, rank: int) -> bool:
        if not 1 <= rank <= self.k:
            raise UsageError(f"rank must be in 1..{self.k}, got {rank}")
        return self.up[pos] >= rank and self.down[pos] >= self.k - rank + 1

    def capable_positions(self, rank: int) -> tuple[int, ...]:
        return tuple(t for t in range(len(self.perm)) if self.can_act(t, rank))

    def capable_values(self, rank: int) -> tuple[int, ...]:
        return tuple(sorted(self.perm[t] for t in self.capable_positions(rank)))


def rank_capability(p: Perm, k: int) -> RankCapabilityTable:
    if k < 1:
        raise UsageError(f"pattern length k must be >= 1, got {k}")
    up, down = lis_tables(p)
    return RankCapabilityTable(perm=p, k=k, up=up, down=down)


def can_act_as_rank(p: Perm, pos: int, rank: int, k: int) -> bool:
    return rank_capability(p, k).can_act(pos, rank)
