#!/usr/bin/env python3
"""EXPERIMENT: the open almost-distant questions, run as neutral surveys.

Two questions, neither asserted:

1. Does the (box=3, removed=4) variant of 1432 count like the monotone
   diagonal classes M(k,j,j)? Tested against k=4 (the right-hand side has
   fixed length, so the matching k is itself part of the question).
2. How do the almost-distant variants of 1342 and 1423 group into empirical
   Wilf classes?

Exits with status 3 (experiment) on success; nothing here is pass/fail.

Usage:  python scripts/survey_open_questions.py [max_n]   (default 8)
"""

from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from patlab import (
    AlmostDistantPattern,
    count_sequence,
    expand_almost_distant,
    monotone_basis,
    survey_almost_distant,
)


def conjecture_1432(max_n: int) -> None:
    print(f"EXPERIMENT 1: (1432, box=3, removed=4) versus M(4,t,t), n <= {max_n}")
    variant = expand_almost_distant(AlmostDistantPattern((1, 4, 3, 2), 3, 4))
    left = count_sequence(max_n, variant).values()
    right = count_sequence(max_n, monotone_basis(4, 1, 1)).values()
    print(f"  variant : {left}")
    print(f"  M(4,t,t): {right}")
    verdict = "match so far" if left == right else f"diverge (first at n={next(n for n in range(max_n + 1) if left[n] != right[n])})"
    print(f"  observation: sequences {verdict} at this range\n")


def survey(pattern: tuple[int, ...], max_n: int) -> None:
    name = "".join(map(str, pattern))
    print(f"EXPERIMENT 2: empirical Wilf groups for almost-distant {name}, n <= {max_n}")
    report = survey_almost_distant(pattern, max_n)
    multi = [g for g in report.groups if len(g[1]) > 1]
    print(f"  {len(report.groups)} groups, {len(multi)} with more than one member")
    for counts, specs in report.groups:
        if len(specs) > 1:
            print(f"  specs {list(specs)}")
            print(f"    counts {list(counts)}")
    print()


def main() -> int:
    max_n = int(sys.argv[1]) if len(sys.argv) > 1 else 8
    conjecture_1432(max_n)
    survey((1, 3, 4, 2), max_n)
    survey((1, 4, 2, 3), max_n)
    print("status: experiment (neutral)")
    return 3


if __name__ == "__main__":
    sys.exit(main())
