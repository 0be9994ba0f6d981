import json

import pytest

from iqtuples import families
from iqtuples.errors import DomainError, HypothesisRejection
from iqtuples.families import (
    FamilyMember,
    FamilyTuple,
    n_membership,
    pi_tuple,
    quadruple,
    quintuple,
    verify_tuple,
)


class TestIdentityChain:
    def test_exact_identities(self):
        for n in (3, 5, 7, 9):
            for k in range(2, 7):
                ell = 4 * k**n - 1
                d = 4 * (1 - 4 * k**n) ** n
                assert d + 1 == 1 - 4 * ell**n
                assert d + 4 == 4 * (1 - ell**n)
                for p in (3, 5, 7, 11):
                    assert d + 4 * p * p == 4 * (p * p - ell**n)

    def test_constructed_tuples_satisfy_identities(self):
        t = quadruple(3, 3, 2)
        assert t.ell == t.U == t.V == 31
        assert t.d == -119164
        assert [m.radicand for m in t.members] == [
            -119164, -119163, -119160, -119128
        ]

    def test_field_equality_scaled_members_have_even_cofactor(self):
        # the d, d+4, d+4p^2 radicands are 4 times an integer, so the field
        # is defined by the square-free part and the cofactor keeps the 2
        for n, k in ((3, 2), (3, 5), (5, 2), (7, 2)):
            t = quintuple(n, k)
            for m in t.members:
                assert m.radicand == m.squarefree_part * m.cofactor**2
                if m.offset != 1:
                    assert m.cofactor % 2 == 0, (n, k, m.offset)

    def test_radicands_beyond_certified_range_are_refused(self):
        # quintuple(7, 3) has |radicands| near 9e27, past the range where
        # primality (and hence square-free parts) can be certified
        from iqtuples.errors import OutOfRangeError
        with pytest.raises(OutOfRangeError):
            quintuple(7, 3)


class TestNMembership:
    def test_examples(self):
        assert n_membership(3, 2)   # h(-31) = 3
        assert n_membership(3, 3)   # h(-107) = 3
        assert n_membership(5, 2)   # h(-127) = 5

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            n_membership(4, 2)
        with pytest.raises(DomainError):
            n_membership(3, 1)


class TestQuadruple:
    def test_small_instance(self):
        t = quadruple(3, 3, 2)
        assert t.kind == "quadruple"
        assert t.offsets == [0, 1, 4, 36]
        assert [m.squarefree_part for m in t.members] == [-31, -119163, -3310, -29782]
        assert [m.cofactor for m in t.members] == [62, 1, 6, 2]
        assert all(m.status == families.STATUS_PENDING for m in t.members)
        assert all(m.class_number is None for m in t.members)

    def test_gcd_rejection(self):
        # k = 4: ell = 255 = 3 * 5 * 17 shares a factor with p = 3
        with pytest.raises(HypothesisRejection) as exc:
            quadruple(3, 3, 4)
        assert "gcd" in str(exc.value)

    def test_general_p_branch_reported(self):
        t = quadruple(3, 7, 2)
        names = [c.check for c in t.hypotheses]
        assert "7 != +-1 (mod d')" in names
        detail = next(c.detail for c in t.hypotheses if "mod d'" in c.check)
        assert "29742" in detail

    def test_non_prime_p_rejected(self):
        with pytest.raises(DomainError):
            quadruple(3, 9, 2)
        with pytest.raises(DomainError):
            quadruple(3, 2, 2)


class TestQuintuple:
    def test_radicands(self):
        t = quintuple(3, 2)
        assert t.offsets == [0, 1, 4, 36, 100]
        assert [m.radicand for m in t.members] == [
            -119164, -119163, -119160, -119128, -119064
        ]

    def test_rejection_names_prime(self):
        with pytest.raises(HypothesisRejection) as exc:
            quintuple(3, 4)
        assert "3" in str(exc.value)

    def test_large_n(self):
        t = quintuple(5, 2)
        assert t.ell == 127
        assert t.d == 4 * (-127) ** 5
        assert t.d == -132153477628

    def test_merges_quadruples(self):
        t5 = quintuple(3, 2)
        t3 = quadruple(3, 3, 2)
        tp5 = quadruple(3, 5, 2)
        assert set(t5.offsets) == set(t3.offsets) | set(tp5.offsets)


class TestPiTuple:
    def test_offsets_to_six(self):
        t = pi_tuple(3, 6, 2)
        assert t.offsets == [0, 1, 4, 36, 100]
        assert t.p_list == [3, 5]

    def test_degenerate_triple(self):
        t = pi_tuple(3, 2, 2)
        assert t.offsets == [0, 1, 4]
        assert t.p_list == []

    def test_includes_offset_484(self):
        t = pi_tuple(3, 12, 2)
        assert t.offsets == [0, 1, 4, 36, 100, 196, 484]
        names = [c.check for c in t.hypotheses]
        assert "11 != +-1 (mod d')" in names

    def test_member_count_is_pi_plus_two(self):
        from iqtuples.arith import primes_up_to
        for m in (2, 3, 6, 12, 20):
            t = pi_tuple(3, m, 2)
            assert len(t.members) == len(primes_up_to(m)) + 2

    def test_strict_rejects(self):
        with pytest.raises(HypothesisRejection):
            pi_tuple(3, 6, 4)

    def test_lenient_drops_with_warning(self):
        t = pi_tuple(3, 6, 4, mode="lenient")
        assert t.offsets == [0, 1, 4]
        assert len(t.warnings) == 2
        assert "dropped p = 3" in t.warnings[0]

    def test_bad_mode(self):
        with pytest.raises(DomainError):
            pi_tuple(3, 6, 2, mode="other")


class TestVerifyTuple:
    def test_quadruple_full_verification(self):
        t = verify_tuple(quadruple(3, 3, 2))
        assert t.all_divisible is True
        m0 = t.members[0]
        assert m0.squarefree_part == -31
        assert m0.class_number == 3
        assert [m.class_number for m in t.members] == [3, 48, 36, 78]

    def test_quintuple_full_verification(self):
        t = verify_tuple(quintuple(3, 2))
        assert t.all_divisible is True
        assert [m.class_number for m in t.members] == [3, 48, 36, 78, 12]
        assert all(m.status == families.STATUS_VERIFIED for m in t.members)

    def test_membership_consistency(self):
        for k in (2, 3, 5):
            t = verify_tuple(quadruple(3, 3, k))
            assert n_membership(3, k) == t.members[0].divisible

    def test_negative_divisibility_detected(self):
        # hand-built tuple, radicand -15 has h = 2, not divisible by 3
        t = FamilyTuple(
            "quadruple", 3, 2, [3], 31, -119164,
            [FamilyMember(0, -15, -15, 1)],
        )
        verify_tuple(t)
        assert t.members[0].class_number == 2
        assert t.members[0].divisible is False
        assert t.all_divisible is False

    def test_budget_marks_unverified(self):
        t = quadruple(3, 3, 2)
        verify_tuple(t, sf_budget=10**4)
        by_offset = {m.offset: m for m in t.members}
        assert by_offset[0].status == families.STATUS_VERIFIED     # |-31| small
        assert by_offset[1].status == families.STATUS_BUDGET       # |-119163| too big
        assert by_offset[1].class_number is None
        assert t.all_divisible is None

    def test_identities_rechecked(self):
        t = quadruple(3, 3, 2)
        t.d += 1  # corrupt
        with pytest.raises(ArithmeticError):
            verify_tuple(t)

    def test_broken_member_decomposition_detected(self):
        t = quadruple(3, 3, 2)
        t.members[0].cofactor = 5
        with pytest.raises(ArithmeticError):
            verify_tuple(t)

    def test_threads_do_not_change_results(self):
        a = verify_tuple(quintuple(3, 2), threads=1)
        b = verify_tuple(quintuple(3, 2), threads=3)
        assert [(m.class_number, m.divisible) for m in a.members] == [
            (m.class_number, m.divisible) for m in b.members
        ]


class TestSerialization:
    def test_json_round_trip(self):
        t = verify_tuple(quintuple(3, 2))
        line = families.to_json_line(t)
        rec = json.loads(line)
        assert rec["schema"] == families.SCHEMA_VERSION
        assert rec["kind"] == "quintuple"
        assert rec["all_divisible"] is True
        back = families.from_json_dict(rec)
        assert families.to_json_line(back) == line

    def test_json_schema_fields(self):
        rec = families.to_json_dict(quadruple(3, 3, 2))
        assert list(rec) == [
            "schema", "kind", "n", "k", "ell", "d", "p_list",
            "hypotheses", "warnings", "members", "all_divisible",
        ]
        for m in rec["members"]:
            assert list(m) == [
                "offset", "radicand", "squarefree_part", "cofactor",
                "class_number", "divisible", "status",
            ]

    def test_rejects_unknown_schema(self):
        rec = families.to_json_dict(quadruple(3, 3, 2))
        rec["schema"] = 99
        with pytest.raises(DomainError):
            families.from_json_dict(rec)

    def test_csv_rows(self):
        t = verify_tuple(quadruple(3, 3, 2))
        rows = families.to_csv_rows(t)
        assert len(rows) == 4
        assert all(len(r) == len(families.CSV_FIELDS) for r in rows)
        assert rows[0][families.CSV_FIELDS.index("squarefree_part")] == -31

    def test_pending_members_serialize_with_nulls(self):
        rec = families.to_json_dict(quadruple(3, 3, 2))
        assert rec["members"][0]["class_number"] is None
        assert rec["all_divisible"] is None
