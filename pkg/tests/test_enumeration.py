"""Generating-tree engine against the brute-force oracle and golden files."""

import math
import pathlib
from itertools import permutations

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from conftest import oracle_avoids_basis, perms
from patlab import (
    BudgetExceededError,
    UsageError,
    avoids_basis,
    brute_force_avoiders,
    brute_force_counts,
    count_sequence,
    distant_monotone_basis,
    enumerate_avoiders,
    levels_avoiders,
    make_basis,
    monotone_basis,
    parse_class_expression,
    parse_perm,
    walk_avoiders,
)

GOLDEN = pathlib.Path(__file__).parent / "golden" / "v1"

CATALAN = (1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862)

# fixed miscellaneous bases for the cross-engine check (no randomness anywhere)
MISC_BASES = [
    ["123"],
    ["321"],
    ["132", "213"],
    ["2413"],
    ["1234", "2143"],
    ["312", "231"],
    ["1324"],
    ["21"],
    ["123", "3214"],
    ["2341", "1432"],
    ["4231", "1234"],
    ["213"],
    ["12345"],
    ["1342", "2413"],
    ["321", "1234"],
    ["231"],
    ["3142", "2413"],
    ["1243", "2134"],
    ["35124"],
    ["123", "321"],
]


def basis_of(patterns):
    return make_basis([parse_perm(s) for s in patterns], label=";".join(patterns))


class TestAvoidsBasis:
    def test_reference_members(self):
        m433 = monotone_basis(4, 3, 3)
        assert avoids_basis(parse_perm("82456173"), m433)
        assert avoids_basis(parse_perm("8 3 2 11 12 5 6 9 10 14 4 1 13 7"), m433)

    def test_empty_basis(self):
        empty = make_basis([])
        for p in permutations(range(1, 5)):
            assert avoids_basis(p, empty)

    @given(perms(6), st.lists(perms(4, min_n=1), max_size=3))
    def test_matches_oracle(self, p, patterns):
        basis = make_basis(patterns)
        assert avoids_basis(p, basis) == oracle_avoids_basis(p, basis.patterns)


class TestCatalanAnchor:
    def test_both_engines(self):
        basis = basis_of(["123"])
        assert count_sequence(9, basis).values() == CATALAN
        assert brute_force_counts(9, basis).values() == CATALAN

    def test_golden_file(self):
        assert (GOLDEN / "123.csv").read_text() == count_sequence(9, basis_of(["123"])).csv()


class TestEngineEquivalence:
    @pytest.mark.parametrize("patterns", MISC_BASES, ids=[";".join(b) for b in MISC_BASES])
    def test_fixed_bases(self, patterns):
        basis = basis_of(patterns)
        levels = levels_avoiders(basis, 6)
        for n in range(7):
            assert levels[n] == brute_force_avoiders(n, basis), (patterns, n)

    def test_monotone_specs_small(self):
        for k in (2, 3):
            for j in range(1, k + 2):
                for i in range(1, k + 2):
                    basis = monotone_basis(k, j, i)
                    levels = levels_avoiders(basis, 6)
                    for n in range(7):
                        assert levels[n] == brute_force_avoiders(n, basis), (k, j, i, n)

    def test_enumerate_single_level(self):
        basis = monotone_basis(3, 2, 2)
        assert enumerate_avoiders(5, basis) == brute_force_avoiders(5, basis)


class TestCountSequence:
    def test_all_factorials_below_shortest_pattern(self):
        basis = monotone_basis(4, 3, 3)  # patterns of length 5
        seq = count_sequence(4, basis)
        assert seq.values() == tuple(math.factorial(n) for n in range(5))

    def test_counts_never_exceed_factorial(self):
        for patterns in MISC_BASES[:6]:
            seq = count_sequence(6, basis_of(patterns))
            for n, c in seq.counts:
                assert c <= math.factorial(n)

    def test_basis_growth_shrinks_classes(self):
        small = count_sequence(7, basis_of(["123"]))
        large = count_sequence(7, basis_of(["123", "3214"]))
        for n in range(8):
            assert large.count(n) <= small.count(n)

    def test_golden_counts(self):
        for name, max_n in [("M(3,2,2)", 9), ("M(4,3,3)", 8), ("D(3,2)", 9)]:
            golden = (GOLDEN / f"{name}.csv").read_text()
            assert count_sequence(max_n, parse_class_expression(name)).csv() == golden

    def test_golden_members(self):
        rows = (GOLDEN / "M(3,2,2).n5.members.txt").read_text().split()
        got = enumerate_avoiders(5, monotone_basis(3, 2, 2))
        assert {parse_perm(r) for r in rows} == got

    def test_csv_shape(self):
        csv = count_sequence(2, basis_of(["21"])).csv()
        assert csv == "n,count\n0,1\n1,1\n2,1\n"

    def test_length_one_pattern_forbids_everything(self):
        seq = count_sequence(3, basis_of(["1"]))
        assert seq.values() == (1, 0, 0, 0)


class TestParallel:
    def test_matches_sequential(self):
        basis = monotone_basis(3, 2, 2)
        seq = count_sequence(8, basis)
        par = count_sequence(8, basis, parallel=True)
        assert par.counts == seq.counts


class TestBudgetsAndCaps:
    def test_node_budget_enforced(self):
        with pytest.raises(BudgetExceededError):
            count_sequence(8, basis_of(["123"]), node_budget=50)

    def test_parallel_budget_enforced(self):
        # the split prefix fits in 2000 nodes, the worker phase does not
        with pytest.raises(BudgetExceededError):
            count_sequence(9, basis_of(["4321"]), node_budget=2000, parallel=True)

    def test_brute_force_cap(self):
        with pytest.raises(UsageError):
            brute_force_avoiders(10, basis_of(["123"]))

    def test_negative_n_rejected(self):
        with pytest.raises(UsageError):
            enumerate_avoiders(-1, basis_of(["123"]))


class TestWalk:
    def test_streams_every_avoider_once(self):
        basis = basis_of(["132", "213"])
        seen = []
        walk_avoiders(basis, 5, seen.append)
        assert len(seen) == len(set(seen))
        by_len = {}
        for p in seen:
            by_len.setdefault(len(p), set()).add(p)
        for n in range(6):
            assert by_len.get(n, set()) == brute_force_avoiders(n, basis)

    def test_zero_length(self):
        basis = basis_of(["12"])
        assert enumerate_avoiders(0, basis) == {()}
        assert brute_force_avoiders(0, basis) == {()}
