"""The rearrangement maps: reference vectors, exhaustive roundtrips on
enumerated classes, and the window/role invariants they rely on."""

import pytest
from hypothesis import given
import hypothesis.strategies as st

from conftest import monotone_counts, monotone_members, perms
from patlab import (
    DomainError,
    UsageError,
    avoids_basis,
    contains,
    invert_F,
    map_F,
    map_G,
    map_H,
    map_H_conjugate,
    monotone_basis,
    naive_reverse_H,
    parse_perm,
    rank_capability,
    reverse_complement,
    role_sets,
)

P14 = parse_perm("8 3 2 11 12 5 6 9 10 14 4 1 13 7")
P14_IMAGE = parse_perm("8 3 2 11 5 14 4 1 9 10 12 13 6 7")


class TestRoleSets:
    def test_fourteen_element_reference(self):
        roles = role_sets(P14, k=4, i=2)
        assert roles.a_values() == (5, 11)
        assert roles.b_values() == (6, 9, 10, 12)
        assert roles.c_values() == (7, 13, 14)
        assert roles.f_by_value() == {6: 7, 9: 13, 10: 13, 12: 13}

    def test_eight_element_literal_definition(self):
        # literal capability reading: 6 reaches rank 3 through 2,4,6,7
        roles = role_sets(parse_perm("82456173"), k=4, i=2)
        assert roles.a_values() == (4,)
        assert roles.b_values() == (5, 6)
        assert roles.c_values() == (7,)

    def test_start_anchor(self):
        roles = role_sets((1, 2, 3), k=2, i=0)
        assert roles.a_positions is None
        assert roles.b_values() == (1, 2)
        assert roles.c_values() == (3,)

    def test_end_anchor(self):
        roles = role_sets((1, 2), k=2, i=1, validate=False)
        assert roles.c_positions is None
        assert all(c is None for _, c in roles.f_map)

    def test_no_capable_entries(self):
        roles = role_sets((3, 2, 1), k=3, i=1)
        assert roles.b_positions == ()

    def test_precondition_checked(self):
        # 213456 contains 21345, one of the four patterns behind M(4,1,1)
        with pytest.raises(DomainError):
            role_sets((2, 1, 3, 4, 5, 6), k=4, i=0)

    def test_step_index_range(self):
        with pytest.raises(UsageError):
            role_sets((1, 2), k=2, i=2)


class TestMapF:
    def test_reference_vector(self):
        res = map_F(P14, k=4, i=2)
        assert res.output == P14_IMAGE
        assert res.pre_checked and res.post_checked

    def test_reference_vector_inverse(self):
        res = invert_F(P14_IMAGE, k=4, i=2)
        assert res.output == P14

    def test_identity_when_no_movers(self):
        p = (4, 3, 2, 1)
        assert map_F(p, k=3, i=1).output == p
        assert invert_F(p, k=3, i=1).output == p

    def test_empty(self):
        assert map_F((), k=3, i=0).output == ()

    @pytest.mark.parametrize("k,i,max_n", [(3, 0, 7), (3, 1, 7), (3, 2, 7), (4, 2, 6)])
    def test_exhaustive_roundtrip(self, k, i, max_n):
        members = monotone_members(k, i + 1, i + 1, max_n)
        target = monotone_basis(k, i + 2, i + 2)
        for n in range(max_n + 1):
            images = set()
            for p in sorted(members[n]):
                w = map_F(p, k, i, validate=False).output
                assert avoids_basis(w, target), (p, w)
                assert invert_F(w, k, i, validate=False).output == p
                images.add(w)
            assert len(images) == len(members[n])

    def test_moved_set_keeps_capability(self):
        # entries able to act as rank i+1 are the same before and after
        k, i = 3, 1
        members = monotone_members(k, i + 1, i + 1, 6)
        for n in range(7):
            for p in sorted(members[n]):
                before = rank_capability(p, k).capable_values(i + 1)
                w = map_F(p, k, i, validate=False).output
                after = rank_capability(w, k).capable_values(i + 1)
                assert before == after, (p, w)

    def test_non_movers_keep_relative_order(self):
        roles = role_sets(P14, k=4, i=2)
        moved = set(roles.b_values())
        kept_in = [v for v in P14 if v not in moved]
        kept_out = [v for v in P14_IMAGE if v not in moved]
        assert kept_in == kept_out

    def test_chain_with_reverse_complement_permutes_first_class(self):
        # applying every step in order, then reverse-complement, must send
        # Av(M(3,1,1)) onto itself bijectively
        k = 3
        members = monotone_members(k, 1, 1, 8)
        for n in range(9):
            image = set()
            for p in members[n]:
                w = p
                for i in range(k):
                    w = map_F(w, k, i, validate=False).output
                image.add(reverse_complement(w))
            assert image == members[n]

    def test_composition_lands_in_next_diagonal(self):
        members = monotone_members(4, 1, 1, 6)
        t2 = monotone_basis(4, 2, 2)
        for p in sorted(members[6]):
            assert avoids_basis(map_F(p, 4, 0, validate=False).output, t2)

    def test_invert_rejects_non_image(self):
        # 21 swapped by F(k=2, i=0) never produces 21 back at the front step
        from patlab import NotInImageError

        # build a permutation outside the image: for k=2, i=0 the image of
        # Av(M(2,1,1)) inside Av(M(2,2,2)) misses something at n=3
        k, i = 2, 0
        src = monotone_members(k, 1, 1, 3)[3]
        image = {map_F(p, k, i, validate=False).output for p in src}
        outside = monotone_members(k, 2, 2, 3)[3] - image
        if outside:
            w = sorted(outside)[0]
            with pytest.raises(NotInImageError):
                invert_F(w, k, i)


class TestMapG:
    def test_singleton_windows_fix_identity(self):
        assert map_G((1, 2, 3), k=3).output == (1, 2, 3)

    def test_increasing_windows_before_reversal(self):
        members = monotone_members(3, 2, 2, 7)
        for n in range(8):
            for p in sorted(members[n]):
                res = map_G(p, 3, "to_21", validate=False)
                for s, e in res.windows:
                    seg = p[s:e]
                    assert all(x < y for x, y in zip(seg, seg[1:])), (p, res.windows)

    def test_decreasing_windows_on_the_way_back(self):
        members = monotone_members(3, 2, 1, 7)
        for n in range(8):
            for p in sorted(members[n]):
                res = map_G(p, 3, "to_22", validate=False)
                for s, e in res.windows:
                    seg = p[s:e]
                    assert all(x > y for x, y in zip(seg, seg[1:])), (p, res.windows)

    @pytest.mark.parametrize("k,max_n", [(3, 7), (4, 6)])
    def test_exhaustive_bijection(self, k, max_n):
        src = monotone_members(k, 2, 2, max_n)
        tgt = monotone_members(k, 2, 1, max_n)
        for n in range(max_n + 1):
            images = set()
            for p in sorted(src[n]):
                w = map_G(p, k, "to_21", validate=False).output
                assert w in tgt[n], (p, w)
                assert map_G(w, k, "to_22", validate=False).output == p
                images.add(w)
            assert images == tgt[n]

    def test_triple_count_equality_small(self):
        for k in (3, 4):
            a = monotone_counts(k, 2, 2, 7)
            b = monotone_counts(k, 2, 1, 7)
            c = monotone_counts(k, k, k + 1, 7)
            assert a == b == c

    def test_direction_validated(self):
        with pytest.raises(UsageError):
            map_G((1, 2), 3, "sideways")
        with pytest.raises(DomainError):
            map_G((2, 1, 3, 4), 3, "to_21")  # 2134 itself is forbidden there


class TestMapH:
    def test_windows_decrease_before_reversal(self):
        members = monotone_members(4, 3, 2, 6)
        for n in range(7):
            for p in sorted(members[n]):
                res = map_H(p, 4, 3, validate=False)
                for s, e in res.windows:
                    seg = p[s:e]
                    assert all(x > y for x, y in zip(seg, seg[1:])), (p, res.windows)

    @pytest.mark.parametrize("k,j,max_n", [(3, 2, 7), (3, 3, 7), (4, 3, 6)])
    def test_exhaustive_injection(self, k, j, max_n):
        src = monotone_members(k, j, j - 1, max_n)
        tgt = monotone_members(k, j, j, max_n)
        for n in range(max_n + 1):
            images = set()
            for p in sorted(src[n]):
                w = map_H(p, k, j, validate=False).output
                assert w in tgt[n], (p, w)
                images.add(w)
            assert len(images) == len(src[n])
            assert len(images) <= len(tgt[n])

    def test_fixed_point_when_nothing_reaches_rank_j(self):
        p = (3, 2, 1)
        assert map_H(p, 4, 3).output == p

    def test_matches_G_inverse_for_j2(self):
        members = monotone_members(3, 2, 1, 6)
        for n in range(7):
            for p in sorted(members[n]):
                assert (
                    map_H(p, 3, 2, validate=False).output
                    == map_G(p, 3, "to_22", validate=False).output
                )

    def test_j_range(self):
        with pytest.raises(UsageError):
            map_H((1, 2), 3, 1)
        with pytest.raises(UsageError):
            map_H((1, 2), 3, 4)

    def test_conjugated_variant_injects(self):
        k, j, max_n = 4, 3, 6
        src = monotone_members(k, j, j + 1, max_n)
        tgt = monotone_members(k, j, j, max_n)
        for n in range(max_n + 1):
            images = {map_H_conjugate(p, k, j, validate=False).output for p in sorted(src[n])}
            assert len(images) == len(src[n])
            assert images <= tgt[n]


class TestNaiveReverse:
    def test_classic_escape(self):
        res = naive_reverse_H(parse_perm("312456"), k=4, j=3)
        assert res.output == parse_perm("314256")
        assert contains(res.output, parse_perm("23145"))
        assert parse_perm("23145") in monotone_basis(4, 3, 2)
        assert res.post_checked is False

    def test_harmless_for_j2(self):
        # for j = 2 the mirrored map is a genuine inverse, so it stays inside
        members = monotone_members(3, 2, 2, 6)
        src_basis = monotone_basis(3, 2, 1)
        for n in range(7):
            for p in sorted(members[n]):
                assert avoids_basis(naive_reverse_H(p, 3, 2, validate=False).output, src_basis)


class TestReportShape:
    def test_map_result_json(self):
        doc = map_F(P14, 4, 2).as_json_dict()
        assert doc["map"] == "F"
        assert doc["input"] == "8 3 2 11 12 5 6 9 10 14 4 1 13 7"
        assert doc["output"] == "8 3 2 11 5 14 4 1 9 10 12 13 6 7"
        assert doc["class_checks"] == {"pre": True, "post": True}
        roles = doc["windows_or_roles"]
        assert roles["B"]["values"] == [12, 6, 9, 10]
        assert {f["from_value"]: f["to_value"] for f in roles["f"]} == {
            6: 7,
            9: 13,
            10: 13,
            12: 13,
        }

    def test_window_json_positions_are_one_based(self):
        res = map_G(parse_perm("123"), 3, "to_21")
        doc = res.as_json_dict()
        assert doc["windows_or_roles"] == {"windows": [{"start": 1, "end": 1, "values": [1]}]}
