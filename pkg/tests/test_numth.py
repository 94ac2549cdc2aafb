"""Tests for modular arithmetic, continued fractions, and problem instances."""

from __future__ import annotations

import math

import pytest

from shornoise.numth import (
    ShorInstance,
    convergents,
    find_order,
    gcd,
    mod_pow,
    popcount,
    recover_order,
)


class TestModPow:
    def test_known_values(self) -> None:
        assert mod_pow(7, 4, 15) == 1
        assert mod_pow(2, 10, 1000) == 24
        assert mod_pow(3, 0, 7) == 1
        assert mod_pow(5, 1, 3) == 2

    def test_matches_builtin(self) -> None:
        for base in range(1, 20):
            for exp in range(0, 12):
                for mod in range(2, 9):
                    assert mod_pow(base, exp, mod) == pow(base, exp, mod)

    def test_rejects_bad_arguments(self) -> None:
        with pytest.raises(ValueError):
            mod_pow(2, -1, 5)
        with pytest.raises(ValueError):
            mod_pow(2, 3, 0)


class TestGcd:
    @pytest.mark.parametrize(
        "a, b, expected",
        [(12, 18, 6), (7, 15, 1), (0, 5, 5), (5, 0, 5), (21, 14, 7)],
    )
    def test_known_values(self, a: int, b: int, expected: int) -> None:
        assert gcd(a, b) == expected

    def test_rejects_double_zero(self) -> None:
        with pytest.raises(ValueError):
            gcd(0, 0)


class TestPopcount:
    @pytest.mark.parametrize("a, expected", [(0, 0), (1, 1), (0b1011, 3), (255, 8)])
    def test_known_values(self, a: int, expected: int) -> None:
        assert popcount(a) == expected

    def test_rejects_negative(self) -> None:
        with pytest.raises(ValueError):
            popcount(-1)


class TestFindOrder:
    def test_known_orders(self) -> None:
        assert find_order(7, 15) == 4
        assert find_order(2, 15) == 4
        assert find_order(4, 15) == 2
        assert find_order(14, 15) == 2
        assert find_order(2, 21) == 6
        assert find_order(3, 32) == 8

    def test_order_definition_holds(self) -> None:
        for modulus in (15, 21, 33, 35):
            for base in range(2, modulus):
                if math.gcd(base, modulus) != 1:
                    continue
                r = find_order(base, modulus)
                assert pow(base, r, modulus) == 1
                for k in range(1, r):
                    assert pow(base, k, modulus) != 1

    def test_rejects_shared_factor(self) -> None:
        with pytest.raises(ValueError):
            find_order(5, 15)

    def test_rejects_out_of_range_base(self) -> None:
        with pytest.raises(ValueError):
            find_order(0, 15)
        with pytest.raises(ValueError):
            find_order(15, 15)


class TestConvergents:
    def test_quarter(self) -> None:
        assert convergents(32, 128) == [(0, 1), (1, 4)]

    def test_three_quarters(self) -> None:
        assert convergents(96, 128) == [(0, 1), (1, 1), (3, 4)]

    def test_zero_numerator(self) -> None:
        assert convergents(0, 128) == [(0, 1)]

    def test_generic_fraction(self) -> None:
        assert convergents(85, 128) == [(0, 1), (1, 1), (1, 2), (2, 3), (85, 128)]

    def test_last_convergent_is_reduced_fraction(self) -> None:
        for c, q in [(85, 128), (13, 64), (100, 257), (63, 256), (1, 1024)]:
            h, k = convergents(c, q)[-1]
            g = math.gcd(c, q)
            assert (h, k) == (c // g, q // g)

    def test_all_convergents_in_lowest_terms(self) -> None:
        for c, q in [(85, 128), (77, 300), (123, 456), (17, 1000)]:
            for h, k in convergents(c, q):
                assert math.gcd(h, k) == 1
                assert k >= 1

    def test_denominators_nondecreasing(self) -> None:
        for c, q in [(85, 128), (77, 300), (355, 1130)]:
            ks = [k for _, k in convergents(c, q)]
            assert ks == sorted(ks)

    def test_rejects_bad_arguments(self) -> None:
        with pytest.raises(ValueError):
            convergents(5, 0)
        with pytest.raises(ValueError):
            convergents(-1, 8)
        with pytest.raises(ValueError):
            convergents(9, 8)


class TestRecoverOrder:
    def test_exact_peak(self) -> None:
        assert recover_order(64, 256, 15, 7, multiplier_bound=1) == 4

    def test_zero_outcome_fails_with_tight_bound(self) -> None:
        assert recover_order(0, 256, 15, 7, multiplier_bound=1) is None

    def test_zero_outcome_recovers_with_wide_bound(self) -> None:
        assert recover_order(0, 256, 15, 7, multiplier_bound=4) == 4

    def test_reduced_denominator_needs_multiplier(self) -> None:
        # c = 128 reduces to 1/2, so the order 4 only appears as the
        # multiple 2 * 2.
        assert recover_order(128, 256, 15, 7, multiplier_bound=1) is None
        assert recover_order(128, 256, 15, 7, multiplier_bound=2) == 4

    def test_other_exact_peak(self) -> None:
        assert recover_order(192, 256, 15, 7, multiplier_bound=1) == 4

    def test_returns_smallest_valid_candidate(self) -> None:
        r = recover_order(64, 256, 15, 7, multiplier_bound=64)
        assert r == 4
        assert pow(7, r, 15) == 1

    def test_rejects_bad_arguments(self) -> None:
        with pytest.raises(ValueError):
            recover_order(300, 256, 15, 7)
        with pytest.raises(ValueError):
            recover_order(0, 256, 15, 7, multiplier_bound=0)


class TestShorInstance:
    def test_from_factoring_fifteen(self) -> None:
        inst = ShorInstance.from_factoring(15, 7)
        assert inst.modulus == 15
        assert inst.base == 7
        assert inst.n_qubits == 8
        assert inst.register_size == 256
        assert inst.order == 4
        assert inst.offset == 0
        assert inst.support_count == 64
        assert not inst.synthetic

    def test_register_width_rule(self) -> None:
        # Smallest register whose size is at least modulus squared.
        for modulus, base in [(15, 7), (21, 2), (33, 2), (35, 2)]:
            inst = ShorInstance.from_factoring(modulus, base)
            q = inst.register_size
            assert q >= modulus * modulus
            assert q // 2 < modulus * modulus

    def test_from_factoring_twentyone(self) -> None:
        inst = ShorInstance.from_factoring(21, 2)
        assert inst.n_qubits == 9
        assert inst.register_size == 512
        assert inst.order == 6
        assert inst.support_count == 86

    def test_from_factoring_rejects_shared_factor(self) -> None:
        with pytest.raises(ValueError):
            ShorInstance.from_factoring(15, 5)
        with pytest.raises(ValueError):
            ShorInstance.from_factoring(4, 2)

    def test_synthetic_small_register(self) -> None:
        inst = ShorInstance.synthetic_instance(7, 4)
        assert inst.n_qubits == 7
        assert inst.register_size == 128
        assert inst.order == 4
        assert inst.support_count == 32
        assert inst.synthetic
        assert inst.modulus is None and inst.base is None

    def test_synthetic_with_attached_problem(self) -> None:
        inst = ShorInstance.synthetic_instance(7, 4, modulus=15, base=7)
        assert inst.synthetic
        assert inst.modulus == 15
        assert inst.base == 7

    def test_synthetic_rejects_mismatched_order(self) -> None:
        with pytest.raises(ValueError):
            ShorInstance.synthetic_instance(7, 3, modulus=15, base=7)

    def test_support_count_formula(self) -> None:
        # support_count = floor((q - 1 - l) / r) + 1 for every offset.
        for n_qubits, order in [(3, 3), (4, 5), (5, 7), (7, 4)]:
            q = 1 << n_qubits
            for offset in range(order):
                inst = ShorInstance.synthetic_instance(n_qubits, order, offset=offset)
                assert inst.support_count == (q - 1 - offset) // order + 1

    def test_support_values(self) -> None:
        inst = ShorInstance.synthetic_instance(3, 3, offset=2)
        assert list(inst.support_values()) == [2, 5]
        inst2 = ShorInstance.synthetic_instance(3, 2, offset=1)
        assert list(inst2.support_values()) == [1, 3, 5, 7]

    def test_divisibility_flags(self) -> None:
        full = ShorInstance.from_factoring(15, 7)
        assert full.order_divides_register
        assert full.full_period_support
        ragged = ShorInstance.synthetic_instance(3, 3)
        assert not ragged.order_divides_register
        assert not ragged.full_period_support

    def test_rejects_bad_offsets_and_orders(self) -> None:
        with pytest.raises(ValueError):
            ShorInstance.synthetic_instance(3, 3, offset=3)
        with pytest.raises(ValueError):
            ShorInstance.synthetic_instance(3, 0)
        with pytest.raises(ValueError):
            ShorInstance.synthetic_instance(3, 9)
        with pytest.raises(ValueError):
            ShorInstance.synthetic_instance(0, 1)
