from fractions import Fraction

import pytest

from app.core.arith import RatPoly, binom, is_integer_valued, lcm_upto
from app.core.errors import DomainError, PoleError
from app.core.ratdecomp import (
    build_R,
    decompose,
    derivative_decomposition,
    eval_R,
    eval_R_derivative,
    evaluate_decomposition,
    polynomial_degree,
)
from app.db.models import BasisAnchor, ConstructionId

LOG_DILOG = ConstructionId.LOG_DILOG
TRILOG = ConstructionId.TRILOG
WELL_POISED = ConstructionId.WELL_POISED

POINTS = [Fraction(7, 3), Fraction(-1, 2), Fraction(5), Fraction(-13, 4), Fraction(1, 7)]


def test_eval_R_examples():
    assert eval_R(LOG_DILOG, 0, 2) == Fraction(1, 2)
    assert eval_R(LOG_DILOG, 1, 3) == Fraction(1, 3)
    assert eval_R(TRILOG, 1, 2) == Fraction(1, 6)
    assert eval_R(LOG_DILOG, 2, 1) == 0


@pytest.mark.parametrize("c", list(ConstructionId))
def test_eval_R_rejects_poles(c):
    with pytest.raises(PoleError):
        eval_R(c, 3, 0)
    with pytest.raises(PoleError):
        eval_R(c, 3, -3)


def test_build_R_rejects_negative_n():
    with pytest.raises(DomainError):
        build_R(LOG_DILOG, -1)


def test_log_dilog_n1_decomposition():
    pf = decompose(LOG_DILOG, 1)
    assert pf.pole_order == 1
    assert pf.A(0) == 1
    assert pf.A(1) == -4
    assert pf.poly_part == [1]


@pytest.mark.parametrize("c", [LOG_DILOG, TRILOG])
def test_residue_closed_form(c):
    for n in range(21):
        pf = decompose(c, n)
        for k in range(n + 1):
            if c == LOG_DILOG:
                expected = (-1) ** k * binom(n, k) * binom(n + k, k) ** 2
            else:
                expected = (-1) ** (n + k) * binom(n, k) * binom(n + k, k) ** 3
            assert pf.A(k) == expected, (n, k)


@pytest.mark.parametrize("c", list(ConstructionId))
def test_decomposition_reconstructs_R(c):
    for n in range(9):
        pf = decompose(c, n)
        for t in POINTS:
            assert evaluate_decomposition(pf, t) == eval_R(c, n, t), (n, t)


def test_log_dilog_polynomial_part_integrality():
    for n in range(1, 13):
        pf = decompose(LOG_DILOG, n)
        assert pf.poly_degree == n - 1
        poly = RatPoly.from_binomial_basis(pf.poly_part, BasisAnchor.SHIFTED_FALLING)
        assert is_integer_valued(poly.scale(lcm_upto(n)))
        for k in range(n + 1):
            assert pf.A(k).denominator == 1


def test_trilog_polynomial_degree():
    assert polynomial_degree(TRILOG, 0) == -1
    assert polynomial_degree(TRILOG, 1) == 1
    for n in range(1, 8):
        assert decompose(TRILOG, n).poly_degree == 2 * n - 1


def test_trilog_n2_polynomial_part():
    pf = decompose(TRILOG, 2)
    # (t^3 - 12 t^2 + 67 t - 240) / 4
    assert pf.poly_part == [Fraction(-46), Fraction(19, 2), Fraction(-3), Fraction(3, 2)]


def test_well_poised_n1_coefficients():
    pf = decompose(WELL_POISED, 1)
    assert pf.pole_order == 3
    assert [pf.A(0), pf.A(1)] == [2, 2]
    assert [pf.A(0, 1), pf.A(1, 1)] == [-4, 4]
    assert [pf.A(0, 2), pf.A(1, 2)] == [Fraction(1, 2), Fraction(1, 2)]
    assert pf.poly_part == []


def test_well_poised_n0_is_a_double_pole():
    pf = decompose(WELL_POISED, 0)
    assert pf.A(0) == 0
    assert pf.A(0, 1) == -1
    assert pf.A(0, 2) == 0
    assert pf.poly_part == []


def test_well_poised_symmetry():
    for n in range(1, 16):
        sign = (-1) ** n
        if n < 9:
            for t in POINTS:
                assert eval_R(WELL_POISED, n, -t - n) == sign * eval_R(WELL_POISED, n, t)
        pf = decompose(WELL_POISED, n)
        for k in range(n + 1):
            assert (-1) ** k * pf.A(k) == -((-1) ** (n - k)) * pf.A(n - k)
            assert pf.A(n - k, 1) == sign * pf.A(k, 1)
            assert (-1) ** k * pf.A(k, 2) == -((-1) ** (n - k)) * pf.A(n - k, 2)


def test_well_poised_scaled_integrality():
    for n in range(1, 16):
        pf = decompose(WELL_POISED, n)
        D = lcm_upto(n)
        for k in range(n + 1):
            assert (2 * pf.A(k)).denominator == 1
            assert (2 * D * pf.A(k, 1)).denominator == 1
            assert (2 * D ** 2 * pf.A(k, 2)).denominator == 1
        if n >= 2:
            assert pf.poly_degree == n - 2
            poly = RatPoly.from_binomial_basis(pf.poly_part, BasisAnchor.SHIFTED_FALLING)
            assert is_integer_valued(poly.scale(2 * D ** 3))


def test_derivative_decomposition_log_dilog_n1():
    first = derivative_decomposition(decompose(LOG_DILOG, 1), 1)
    assert first.derivative == 1
    assert first.pole_order == 2
    assert [first.coefficient(0, 2), first.coefficient(1, 2)] == [1, -4]
    assert first.coefficient(0, 1) == 0
    assert first.poly_part == []


@pytest.mark.parametrize("c", [LOG_DILOG, TRILOG])
def test_derivative_decomposition_matches_local_expansion(c):
    for n in range(6):
        pf = decompose(c, n)
        for order in (1, 2):
            derived = derivative_decomposition(pf, order)
            for t in POINTS:
                assert evaluate_decomposition(derived, t) == eval_R_derivative(c, n, t, order), (n, order, t)


def test_derivative_decomposition_chains():
    pf = decompose(TRILOG, 3)
    once_twice = derivative_decomposition(derivative_decomposition(pf, 1), 1)
    assert once_twice == derivative_decomposition(pf, 2)
    with pytest.raises(DomainError):
        derivative_decomposition(derivative_decomposition(pf, 2), 1)
    with pytest.raises(DomainError):
        derivative_decomposition(pf, 3)


def test_eval_R_derivative_at_zero_of_R():
    # R_1(t) = (t-1)^2 / (t (t+1)) has a double zero at t = 1
    assert eval_R_derivative(LOG_DILOG, 1, 1, 1) == 0
    assert eval_R_derivative(LOG_DILOG, 1, 1, 2) == Fraction(1, 2)
    with pytest.raises(PoleError):
        eval_R_derivative(LOG_DILOG, 1, -1, 1)
