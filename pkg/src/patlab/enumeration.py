"""Exact enumeration of Av_n(Q) for finite classical bases Q.

The engine is a depth-first generating tree: children of an avoider arise by
inserting the new maximum n+1 at each of the n+1 slots, and a branch is cut
as soon as the child contains a basis pattern. Soundness rests on deletion
closure: removing the maximum from an avoider leaves an avoider. A child
needs checking only against occurrences that use the newly inserted maximum,
which must sit at the pattern's own maximum; that restriction is the key
pruning optimization and is validated against the brute-force filter oracle.

Counting mode never materializes permutations. Enumeration mode either
streams nodes to a callback (sequential) or returns sets. The traversal may
fan out subtrees to forked workers for counting; workers share nothing but a
monotone node-budget counter, and per-depth counts are summed, so parallel
and sequential runs agree exactly.
"""

from __future__ import annotations

import multiprocessing
import os
from dataclasses import dataclass
from typing import Callable

from .errors import BudgetExceededError, UsageError
from .patterns import PatternBasis
from .perms import Perm, _bound_refs, contains

__all__ = [
    "DEFAULT_NODE_BUDGET",
    "BRUTE_FORCE_CAP",
    "CountSequence",
    "avoids_basis",
    "enumerate_avoiders",
    "levels_avoiders",
    "walk_avoiders",
    "count_sequence",
    "brute_force_avoiders",
    "brute_force_counts",
]

DEFAULT_NODE_BUDGET = 10**8
BRUTE_FORCE_CAP = 9

_PARALLEL_SPLIT_DEPTH = 6
_PARALLEL_MIN_N = 8
_BUDGET_BATCH = 4096


@dataclass(frozen=True)
class CountSequence:
    """(n, |Av_n(Q)|) pairs with provenance; counts are exact ints."""

    basis_label: str
    counts: tuple[tuple[int, int], ...]
    method: str  # "pruned_tree" | "brute_force"

    def count(self, n: int) -> int:
        for m, c in self.counts:
            if m == n:
                return c
        raise UsageError(f"no count recorded for n={n}")

    def values(self) -> tuple[int, ...]:
        return tuple(c for _, c in self.counts)

    def max_n(self) -> int:
        return self.counts[-1][0] if self.counts else -1

    def csv(self) -> str:
        lines = ["n,count"]
        lines.extend(f"{n},{c}" for n, c in self.counts)
        return "\n".join(lines) + "\n"


def avoids_basis(p: Perm, basis: PatternBasis) -> bool:
    """True iff ``p`` avoids every pattern in the basis."""
    return all(not contains(p, q) for q in basis.patterns)


class _NodeBudget:
    __slots__ = ("remaining", "limit")

    def __init__(self, limit: int):
        self.remaining = limit
        self.limit = limit

    def spend(self, amount: int = 1) -> None:
        self.remaining -= amount
        if self.remaining < 0:
            raise BudgetExceededError(
                f"node budget of {self.limit} exhausted; the request is beyond "
                "desk scale (raise it with --budget or PATLAB_BUDGET)"
            )


def _basis_info(basis: PatternBasis) -> tuple[tuple, ...]:
    info = []
    for q in basis.patterns:
        if len(q) == 0:
            continue
        lo, hi = _bound_refs(q)
        info.append((q, q.index(len(q)), lo, hi, len(q)))
    return tuple(info)


def _insertion_creates(p: Perm, slot: int, q: Perm, m_pos: int, lo_ref, hi_ref, k: int) -> bool:
    """Does inserting a new maximum at ``slot`` of ``p`` create an occurrence
    of ``q``? The new maximum can only play q's own maximum, so we match the
    remaining entries with the prefix strictly before the slot and the suffix
    at or after it."""
    n = len(p)
    if k - 1 > n:
        return False
    if k == 1:
        return True
    vals = [0] * k
    big = n + 2

    def descend(t: int, start: int) -> bool:
        if t < m_pos:
            first = start
            last = slot - m_pos + t
        else:
            first = start if start > slot else slot
            last = n - k + t
        lo = vals[lo_ref[t]] if lo_ref[t] >= 0 else 0
        h = hi_ref[t]
        hi = vals[h] if (h >= 0 and h != m_pos) else big
        for pos in range(first, last + 1):
            v = p[pos]
            if lo < v < hi:
                vals[t] = v
                nxt = t + 1
                if nxt == m_pos:
                    nxt += 1
                if nxt == k:
                    return True
                if descend(nxt, pos + 1):
                    return True
        return False

    t0 = 1 if m_pos == 0 else 0
    return descend(t0, 0)


def _has_empty_pattern(basis: PatternBasis) -> bool:
    return any(len(q) == 0 for q in basis.patterns)


def _visit_tree(
    basis: PatternBasis,
    max_n: int,
    visit: Callable[[Perm], None],
    budget: _NodeBudget,
) -> None:
    """Call ``visit`` on every avoider of length <= max_n, depth first."""
    if _has_empty_pattern(basis):
        return
    info = _basis_info(basis)
    budget.spend()
    visit(())
    if max_n == 0:
        return

    def rec(p: Perm) -> None:
        n1 = len(p) + 1
        for slot in range(n1):
            clean = True
            for q, m_pos, lo, hi, k in info:
                if _insertion_creates(p, slot, q, m_pos, lo, hi, k):
                    clean = False
                    break
            if clean:
                child = p[:slot] + (n1,) + p[slot:]
                budget.spend()
                visit(child)
                if n1 < max_n:
                    rec(child)

    rec(())


def walk_avoiders(
    basis: PatternBasis,
    max_n: int,
    visit: Callable[[Perm], None],
    *,
    node_budget: int | None = None,
) -> None:
    """Stream every avoider of length <= max_n to ``visit`` (sequential)."""
    if max_n < 0:
        raise UsageError(f"max_n must be >= 0, got {max_n}")
    _visit_tree(basis, max_n, visit, _NodeBudget(node_budget or DEFAULT_NODE_BUDGET))


def enumerate_avoiders(
    n: int, basis: PatternBasis, *, node_budget: int | None = None
) -> set[Perm]:
    """Exactly the length-n permutations avoiding the basis."""
    if n < 0:
        raise UsageError(f"n must be >= 0, got {n}")
    out: set[Perm] = set()

    def visit(p: Perm) -> None:
        if len(p) == n:
            out.add(p)

    _visit_tree(basis, n, visit, _NodeBudget(node_budget or DEFAULT_NODE_BUDGET))
    return out


def levels_avoiders(
    basis: PatternBasis, max_n: int, *, node_budget: int | None = None
) -> dict[int, set[Perm]]:
    """All avoiders for every length 0..max_n from a single traversal."""
    if max_n < 0:
        raise UsageError(f"max_n must be >= 0, got {max_n}")
    out: dict[int, set[Perm]] = {n: set() for n in range(max_n + 1)}

    def visit(p: Perm) -> None:
        out[len(p)].add(p)

    _visit_tree(basis, max_n, visit, _NodeBudget(node_budget or DEFAULT_NODE_BUDGET))
    return out


def count_sequence(
    max_n: int,
    basis: PatternBasis,
    *,
    parallel: bool = False,
    node_budget: int | None = None,
) -> CountSequence:
    """Counts of Av_n(Q) for n = 0..max_n, computed without materializing
    permutations; deterministic regardless of the parallel flag."""
    if max_n < 0:
        raise UsageError(f"max_n must be >= 0, got {max_n}")
    limit = node_budget or DEFAULT_NODE_BUDGET
    if parallel and max_n >= _PARALLEL_MIN_N and _fork_available():
        counts = _count_parallel(basis, max_n, limit)
    else:
        counts = _count_sequential(basis, max_n, limit)
    return CountSequence(
        basis_label=basis.label,
        counts=tuple((n, counts[n]) for n in range(max_n + 1)),
        method="pruned_tree",
    )


def _count_sequential(basis: PatternBasis, max_n: int, limit: int) -> list[int]:
    counts = [0] * (max_n + 1)

    def visit(p: Perm) -> None:
        counts[len(p)] += 1

    _visit_tree(basis, max_n, visit, _NodeBudget(limit))
    return counts


# -- parallel counting ------------------------------------------------------

_worker_cfg: dict = {}


def _fork_available() -> bool:
    if os.name != "posix":
        return False
    try:
        multiprocessing.get_context("fork")
        return True
    except ValueError:
        return False


def _init_count_worker(patterns, max_n, shared, limit):
    _worker_cfg["info"] = _basis_info(PatternBasis(patterns))
    _worker_cfg["max_n"] = max_n
    _worker_cfg["shared"] = shared
    _worker_cfg["limit"] = limit


def _count_subtree(root: Perm) -> list[int]:
    """Count strict descendants of ``root`` by depth (worker side)."""
    info = _worker_cfg["info"]
    max_n = _worker_cfg["max_n"]
    shared = _worker_cfg["shared"]
    limit = _worker_cfg["limit"]
    counts = [0] * (max_n + 1)
    pending = 0

    def charge(amount: int) -> None:
        with shared.get_lock():
            shared.value += amount
            if shared.value > limit:
                raise BudgetExceededError(
                    f"node budget of {limit} exhausted; the request is beyond "
                    "desk scale (raise it with --budget or PATLAB_BUDGET)"
                )

    def rec(p: Perm) -> None:
        nonlocal pending
        n1 = len(p) + 1
        for slot in range(n1):
            clean = True
            for q, m_pos, lo, hi, k in info:
                if _insertion_creates(p, slot, q, m_pos, lo, hi, k):
                    clean = False
                    break
            if clean:
                counts[n1] += 1
                pending += 1
                if pending >= _BUDGET_BATCH:
                    charge(pending)
                    pending = 0
                if n1 < max_n:
                    child = p[:slot] + (n1,) + p[slot:]
                    rec(child)

    rec(root)
    if pending:
        charge(pending)
    return counts


def _count_parallel(basis: PatternBasis, max_n: int, limit: int) -> list[int]:
    split = min(_PARALLEL_SPLIT_DEPTH, max_n - 1)
    budget = _NodeBudget(limit)
    counts = [0] * (max_n + 1)
    roots: list[Perm] = []

    def visit(p: Perm) -> None:
        counts[len(p)] += 1
        if len(p) == split:
            roots.append(p)

    _visit_tree(basis, split, visit, budget)
    if not roots:
        return counts
    ctx = multiprocessing.get_context("fork")
    used = limit - budget.remaining
    shared = ctx.Value("q", used)
    procs = min(os.cpu_count() or 1, len(roots))
    try:
        with ctx.Pool(
            processes=procs,
            initializer=_init_count_worker,
            initargs=(basis.patterns, max_n, shared, limit),
        ) as pool:
            chunk = max(1, len(roots) // (4 * procs))
            vectors = pool.map(_count_subtree, roots, chunksize=chunk)
    except (OSError, PermissionError):
        # sandboxed environments without process support: results are
        # identical either way, so fall back quietly
        return _count_sequential(basis, max_n, limit)
    for vec in vectors:
        for n in range(split + 1, max_n + 1):
            counts[n] += vec[n]
    return counts


# -- independent oracle -----------------------------------------------------


def brute_force_avoiders(n: int, basis: PatternBasis) -> set[Perm]:
    """Filter of all n! permutations; the oracle the tree engine answers to."""
    if n < 0:
        raise UsageError(f"n must be >= 0, got {n}")
    if n > BRUTE_FORCE_CAP:
        raise UsageError(
            f"brute force is capped at n={BRUTE_FORCE_CAP} (asked for {n}); "
            "use the generating-tree engine beyond that"
        )
    from itertools import permutations as iter_perms

    values = range(1, n + 1)
    return {p for p in iter_perms(values) if avoids_basis(p, basis)}


def brute_force_counts(max_n: int, basis: PatternBasis) -> CountSequence:
    counts = tuple((n, len(brute_force_avoiders(n, basis))) for n in range(max_n + 1))
    return CountSequence(basis_label=basis.label, counts=counts, method="brute_force")
