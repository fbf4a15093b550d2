import random
from fractions import Fraction

import pytest

from core.error_handler import MathError
from core.ratfun import RatFun
from core.symfun import (
    check_reciprocal_identity,
    expansion_coeffs,
    power_sum,
    reciprocal_extend,
    scale_tuple,
    sigma,
    sigma_all,
    sigma_bruteforce,
    u_coeffs,
)


def test_sigma_small_values():
    assert sigma(2, (1, 2, 3)) == 11
    assert sigma(3, (1, 2, 3)) == 6
    assert sigma(0, (1, 2, 3)) == 1
    assert sigma(-1, (1, 2, 3)) == 0
    assert sigma(4, (1, 2, 3)) == 0
    assert sigma(0, ()) == 1


def test_sigma_all_matches_single_indices():
    xs = (Fraction(1, 2), -3, 5, Fraction(7, 3))
    assert sigma_all(xs) == [sigma(i, xs) for i in range(len(xs) + 1)]


def test_power_sum():
    assert power_sum(2, (1, 2, 3)) == 14
    assert power_sum(-1, (1, 2)) == Fraction(3, 2)
    with pytest.raises(MathError):
        power_sum(0, (1, 2))
    with pytest.raises(MathError):
        power_sum(-2, (1, 0))


def test_reciprocal_extend():
    assert reciprocal_extend((2, Fraction(-1, 3))) == (2, Fraction(-1, 3), Fraction(1, 2), -3)
    with pytest.raises(MathError):
        reciprocal_extend((1, 0))


def test_reciprocal_identity_on_random_tuples():
    rng = random.Random(7)
    for n in range(1, 7):
        for _ in range(100):
            xs = [Fraction(rng.choice([-1, 1]) * rng.randint(1, 20), rng.randint(1, 12))
                  for _ in range(n)]
            for i in range(n + 1):
                check = check_reciprocal_identity(i, xs)
                assert check['equal'], (i, xs)


def test_reciprocal_identity_over_function_field():
    q = RatFun.q()
    check = check_reciprocal_identity(1, (1, 1 + q, q * q))
    assert check['equal']
    assert check['lhs'] == check['rhs']


def test_reciprocal_identity_index_range():
    with pytest.raises(MathError):
        check_reciprocal_identity(3, (1, 2))


def test_expansion_matches_concatenation():
    base = (1, 2, 3)
    extras = (Fraction(1, 2), 5)
    for i in range(6):
        assert expansion_coeffs(i, base, extras) == sigma(i, base + extras)
    with pytest.raises(MathError):
        expansion_coeffs(6, base, extras)


def test_u_coefficients():
    assert u_coeffs(1, (1,)) == (2, 1, 0, 0, 0)
    assert u_coeffs(1, ()) == (0, 1, 0, 0, 0)
    assert u_coeffs(2, (2,)) == (1, Fraction(5, 2), 1, 0, 0)


def test_bruteforce_agrees():
    xs = (3, -1, Fraction(2, 5), 4, 7)
    for i in range(-1, 7):
        assert sigma(i, xs) == sigma_bruteforce(i, xs)


def test_scaling_law():
    xs = (1, Fraction(2, 3), -4)
    lam = Fraction(-5, 2)
    scaled = scale_tuple(xs, lam)
    for i in range(4):
        assert sigma(i, scaled) == lam ** i * sigma(i, xs)
    for e in (1, 2, 3, -1, -2):
        assert power_sum(e, scaled) == lam ** e * power_sum(e, xs)
