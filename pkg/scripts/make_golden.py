#!/usr/bin/env python3
"""Regenerate the golden count files under tests/golden/v1 with the
brute-force oracle (never the tree engine: the goldens exist to check it).

Run from the repository root:  python scripts/make_golden.py
"""

from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from patlab.enumeration import brute_force_avoiders, brute_force_counts
from patlab.patterns import parse_class_expression
from patlab.perms import format_perm

GOLDEN_DIR = pathlib.Path(__file__).resolve().parent.parent / "tests" / "golden" / "v1"

COUNT_CLASSES = {
    "123": 9,
    "M(3,2,2)": 9,
    "M(4,3,3)": 8,
    "D(3,2)": 9,
}

MEMBER_CLASSES = {
    "M(3,2,2)": 5,
}


def main() -> None:
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    for expr, max_n in COUNT_CLASSES.items():
        basis = parse_class_expression(expr)
        seq = brute_force_counts(max_n, basis)
        path = GOLDEN_DIR / f"{expr}.csv"
        path.write_text(seq.csv())
        print(f"wrote {path} ({seq.values()})")
    for expr, n in MEMBER_CLASSES.items():
        basis = parse_class_expression(expr)
        members = sorted(brute_force_avoiders(n, basis))
        path = GOLDEN_DIR / f"{expr}.n{n}.members.txt"
        path.write_text("".join(format_perm(p) + "\n" for p in members))
        print(f"wrote {path} ({len(members)} members)")


if __name__ == "__main__":
    main()
