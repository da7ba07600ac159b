import random
from fractions import Fraction

import pytest

from app.core.arith import (
    RatPoly,
    binom,
    is_integer_valued,
    lcm_upto,
    log1p_power_coefficients,
    phi_tilde,
    primes_upto,
    to_binomial_basis,
)
from app.db.models import BasisAnchor


def _is_prime_power(m: int) -> bool:
    for p in primes_upto(m):
        if m % p == 0:
            while m % p == 0:
                m //= p
            return m == 1
    return False


@pytest.mark.parametrize("n, expected", [(0, 1), (1, 1), (6, 60), (10, 2520)])
def test_lcm_upto_values(n, expected):
    assert lcm_upto(n) == expected


def test_lcm_steps_are_one_or_prime_powers():
    for n in range(300):
        step, rest = divmod(lcm_upto(n + 1), lcm_upto(n))
        assert rest == 0
        assert step == 1 or _is_prime_power(step)


@pytest.mark.parametrize("n, expected", [(0, 1), (1, 1), (2, 1), (5, 3), (25, 13)])
def test_phi_tilde_values(n, expected):
    assert phi_tilde(n) == expected


def test_phi_tilde_divides_lcm():
    for n in range(301):
        assert lcm_upto(n) % phi_tilde(n) == 0


def test_primes_upto():
    assert primes_upto(1) == []
    assert primes_upto(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    # beyond the initial sieve limit
    assert primes_upto(20011)[-1] == 20011


def test_binom():
    assert binom(4, 2) == 6
    assert binom(0, 0) == 1
    assert binom(6, 3) == 20
    assert binom(3, 5) == 0
    assert binom(3, -1) == 0


def test_ratpoly_arithmetic():
    p = RatPoly([1, 2])          # 1 + 2t
    q = RatPoly([0, 0, 3])       # 3t^2
    assert RatPoly().degree == -1
    assert RatPoly([0, 0]).degree == -1
    assert (p * q).coeffs == [0, 0, 3, 6]
    assert (p + q)(2) == 17
    assert (q - q).is_zero()
    assert q.derivative().coeffs == [0, 6]
    assert q.derivative(3).is_zero()
    assert p.scale(Fraction(1, 2))(1) == Fraction(3, 2)


def test_binomial_basis_examples():
    assert to_binomial_basis(RatPoly()) == []
    assert to_binomial_basis(RatPoly([1])) == [1]
    t_squared = RatPoly([0, 0, 1])
    # t^2 = 1 + 3 (t-1) + 2 (t-1)(t-2)/2
    assert to_binomial_basis(t_squared) == [1, 3, 2]
    # t^2 = -t + 2 t(t+1)/2
    assert to_binomial_basis(t_squared, BasisAnchor.RISING) == [0, -1, 2]


@pytest.mark.parametrize("anchor", list(BasisAnchor))
def test_binomial_basis_round_trip(anchor):
    rng = random.Random(7)
    for _ in range(25):
        degree = rng.randint(0, 8)
        coeffs = [Fraction(rng.randint(-40, 40), rng.randint(1, 9)) for _ in range(degree)]
        coeffs.append(Fraction(rng.randint(1, 40), rng.randint(1, 9)))
        p = RatPoly.from_binomial_basis(coeffs, anchor)
        assert p.degree == degree
        assert to_binomial_basis(p, anchor) == coeffs
        assert RatPoly.from_binomial_basis(to_binomial_basis(p, anchor), anchor) == p


def test_is_integer_valued_examples():
    assert is_integer_valued(RatPoly([0, Fraction(-1, 2), Fraction(1, 2)]))
    assert not is_integer_valued(RatPoly([0, Fraction(1, 2)]))
    assert is_integer_valued(RatPoly([1]))


def test_is_integer_valued_matches_brute_force():
    rng = random.Random(11)
    seen = set()
    for _ in range(40):
        degree = rng.randint(0, 8)
        if rng.random() < 0.5:
            p = RatPoly.from_binomial_basis([rng.randint(-9, 9) for _ in range(degree + 1)])
        else:
            p = RatPoly([Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(degree + 1)])
        brute = all(p(t).denominator == 1 for t in range(-50, 51))
        assert is_integer_valued(p) == brute
        seen.add(brute)
    assert seen == {True, False}


def test_log1p_power_coefficients():
    assert log1p_power_coefficients(0, 3) == [1, 0, 0, 0]
    assert log1p_power_coefficients(1, 4) == [0, 1, Fraction(-1, 2), Fraction(1, 3), Fraction(-1, 4)]
    assert log1p_power_coefficients(2, 4) == [0, 0, Fraction(1, 2), Fraction(-1, 2), Fraction(11, 24)]
