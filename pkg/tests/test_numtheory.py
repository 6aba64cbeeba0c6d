import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from msss.errors import NotInvertible
from msss.numtheory import gcd, gen_prime, is_probable_prime, mod_exp, mod_inv, next_prime

from oracles import naive_mod_exp, scan_inverse, trial_division_factor


class TestModExp:
    def test_worked_values(self):
        assert mod_exp(15, 7, 143) == naive_mod_exp(15, 7, 143) == 115
        assert mod_exp(15, 49, 143) == naive_mod_exp(15, 49, 143) == 80

    def test_zero_exponent(self):
        for x in (0, 1, 15, 142):
            assert mod_exp(x, 0, 143) == 1

    def test_small_modulus_rejected(self):
        with pytest.raises(ValueError):
            mod_exp(10, 3, 1)
        with pytest.raises(ValueError):
            mod_exp(10, 3, 0)

    @given(
        base=st.integers(min_value=0, max_value=2**16),
        exp=st.integers(min_value=0, max_value=2**16),
        modulus=st.integers(min_value=2, max_value=2**16),
    )
    @settings(max_examples=40, deadline=None)
    def test_agrees_with_repeated_multiplication(self, base, exp, modulus):
        assert mod_exp(base, exp, modulus) == naive_mod_exp(base, exp, modulus)

    @given(
        a=st.integers(min_value=0, max_value=10**6),
        b=st.integers(min_value=0, max_value=10**6),
    )
    @settings(max_examples=60, deadline=None)
    def test_exponent_additivity(self, a, b):
        n = 143
        g = 15
        assert mod_exp(g, a, n) * mod_exp(g, b, n) % n == mod_exp(g, a + b, n)


class TestModInv:
    def test_worked_value(self):
        inv = mod_inv(7, 120)
        assert inv == 103
        assert 7 * inv % 120 == 1
        assert inv == scan_inverse(7, 120)

    def test_identity(self):
        assert mod_inv(1, 120) == 1
        assert mod_inv(1, 2) == 1

    def test_not_invertible(self):
        with pytest.raises(NotInvertible):
            mod_inv(6, 120)
        with pytest.raises(NotInvertible):
            mod_inv(0, 97)

    @given(a=st.integers(min_value=1, max_value=10**9), m=st.integers(min_value=2, max_value=10**9))
    @settings(max_examples=80, deadline=None)
    def test_inverse_multiplies_to_one(self, a, m):
        if gcd(a, m) != 1:
            with pytest.raises(NotInvertible):
                mod_inv(a, m)
        else:
            inv = mod_inv(a, m)
            assert 1 <= inv < m
            assert a * inv % m == 1


class TestGcd:
    def test_examples(self):
        assert gcd(7, 120) == 1
        assert gcd(6, 120) == 6
        assert gcd(0, 5) == 5


class TestGenPrime:
    def test_eight_bit(self):
        p = gen_prime(8, random.Random(7))
        assert 128 <= p <= 255
        assert trial_division_factor(p, 256) is None

    def test_four_bit_hits_the_only_candidates(self):
        seen = {gen_prime(4, random.Random(seed)) for seed in range(30)}
        assert seen <= {11, 13}
        assert seen  # at least one draw

    def test_deterministic_under_seed(self):
        a = gen_prime(16, random.Random(1234))
        b = gen_prime(16, random.Random(1234))
        assert a == b
        assert a.bit_length() == 16

    def test_survives_trial_division(self):
        rng = random.Random(99)
        for _ in range(5):
            p = gen_prime(48, rng)
            assert p.bit_length() == 48
            for small in range(2, 1000):
                assert p % small != 0


class TestPrimalityHelpers:
    def test_known_values(self):
        assert is_probable_prime(149)
        assert not is_probable_prime(143)
        assert is_probable_prime(2)
        assert not is_probable_prime(1)
        # a 61-bit Mersenne prime, beyond the trial-division range
        assert is_probable_prime(2**61 - 1)
        assert not is_probable_prime((2**31 - 1) * (2**61 - 1))

    def test_next_prime(self):
        assert next_prime(143) == 149
        assert next_prime(2) == 3
        assert next_prime(13) == 17
        assert next_prime(1) == 2
