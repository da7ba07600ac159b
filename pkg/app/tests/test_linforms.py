from fractions import Fraction

import pytest

from app.core.errors import DomainError
from app.core.linforms import (
    a_explicit,
    a_trilog_at_one,
    a_trilog_explicit,
    coeffs_at_one,
    coeffs_log_dilog,
    coeffs_trilog,
    coeffs_well_poised,
    integrality_report,
    polylog_form,
    thomae_sides,
    well_poised_sum_alternating,
    well_poised_sum_positive,
    z_denominators,
)
from app.core.ratdecomp import decompose
from app.core.recur import theorem_rows
from app.db.models import ConstructionId, RecurrenceName, RowSource

LOG_DILOG = ConstructionId.LOG_DILOG
TRILOG = ConstructionId.TRILOG
WELL_POISED = ConstructionId.WELL_POISED


def _abc(row):
    return row.a, row.b, row.b_tilde


@pytest.mark.parametrize(
    "n, z, expected",
    [
        (0, Fraction(1, 2), (1, 0, 0)),
        (0, Fraction(-1), (1, 0, 0)),
        (1, Fraction(-1), (5, Fraction(-7, 2), -4)),
        (2, Fraction(-1), (55, Fraction(-305, 8), Fraction(-181, 4))),
    ],
)
def test_coeffs_log_dilog_examples(n, z, expected):
    assert _abc(coeffs_log_dilog(n, z)) == expected


@pytest.mark.parametrize("z", [0, 1, 2, Fraction(-3, 2)])
def test_coeffs_log_dilog_rejects_z(z):
    with pytest.raises(DomainError):
        coeffs_log_dilog(2, z)


def test_coeffs_log_dilog_accepts_string_z():
    assert coeffs_log_dilog(1, "-1").a == 5


def test_coeffs_trilog_trivial():
    row = coeffs_trilog(0, Fraction(1, 2))
    assert (row.a, row.b, row.b_tilde, row.b_tilde2) == (1, 0, 0, 0)


def test_coeffs_trilog_rejects_one():
    with pytest.raises(DomainError):
        coeffs_trilog(2, 1)


def test_coeffs_trilog_n1_at_minus_one():
    row = coeffs_trilog(1, -1)
    assert row.a == -9
    assert row.b == Fraction(25, 4)


@pytest.mark.parametrize(
    "n, expected",
    [
        (0, (1, 0, 0)),
        (1, (8, Fraction(13, 2), Fraction(29, 2))),
        (2, (264, Fraction(1737, 8), Fraction(7617, 16))),
    ],
)
def test_coeffs_well_poised_examples(n, expected):
    row = coeffs_well_poised(n)
    assert row.z == -1
    assert _abc(row) == expected


def test_well_poised_polylog_form_cancellations():
    form = polylog_form(decompose(WELL_POISED, 1), -1)
    assert form.coefficients == {1: 0, 2: -8, 3: 0}
    assert form.constant == Fraction(13, 2)


def test_a_explicit_examples():
    assert a_explicit(LOG_DILOG, 2, -1) == 55
    assert a_explicit(LOG_DILOG, 3, -1) == 749
    assert a_explicit(WELL_POISED, 1, -1) == 8
    assert a_trilog_explicit(3, 1) == 5191
    assert a_trilog_at_one(3) == 5191
    with pytest.raises(DomainError):
        a_explicit(WELL_POISED, 1, Fraction(1, 2))


def test_a_matches_closed_forms(sample_z):
    for n in range(13):
        for z in sample_z:
            assert coeffs_log_dilog(n, z).a == a_explicit(LOG_DILOG, n, z), (n, z)
            assert coeffs_trilog(n, z).a == a_explicit(TRILOG, n, z), (n, z)
        assert coeffs_well_poised(n).a == a_explicit(WELL_POISED, n, -1), n


def test_trilog_closed_forms_agree_at_one():
    for n in range(21):
        assert a_trilog_explicit(n, 1) == a_trilog_at_one(n)


def test_thomae_identity():
    for n in range(51):
        left, right = thomae_sides(n)
        assert left == right


def test_well_poised_double_sums_agree():
    assert well_poised_sum_positive(1) == 8
    for n in range(21):
        assert well_poised_sum_alternating(n) == well_poised_sum_positive(n)


def test_z_denominators():
    assert z_denominators(-1) == (1, 2)
    assert z_denominators(Fraction(1, 2)) == (1, 1)
    assert z_denominators(Fraction(1, 3)) == (1, 2)
    assert z_denominators(Fraction(2, 3)) == (2, 1)


def test_coeffs_at_one_log_dilog():
    row = coeffs_at_one(LOG_DILOG, 1)
    assert row.source == RowSource.REGULARIZED
    assert (row.a, row.b_tilde) == (-3, -5)
    assert row.b is None


@pytest.mark.parametrize(
    "n, expected",
    [
        (0, (1, 0, 0)),
        (1, (7, Fraction(23, 2), Fraction(17, 2))),
        (2, (163, Fraction(2145, 8), Fraction(3135, 16))),
    ],
)
def test_coeffs_at_one_trilog(n, expected):
    row = coeffs_at_one(TRILOG, n)
    assert (row.a, row.b_tilde, row.b_tilde2) == expected


def test_coeffs_at_one_matches_thm2_rows():
    rows = theorem_rows(RecurrenceName.THM2, 8)
    for row in rows:
        regularized = coeffs_at_one(TRILOG, row.n)
        assert (regularized.a, regularized.b_tilde, regularized.b_tilde2) == (row.a, row.b_tilde, row.b_tilde2)


def test_coeffs_at_one_rejects_well_poised():
    with pytest.raises(DomainError):
        coeffs_at_one(WELL_POISED, 2)


def test_integrality_examples():
    report = integrality_report(coeffs_log_dilog(1, -1))
    assert report.check("(z1 z2)^n D b").scaled == -7
    assert report.passed

    report = integrality_report(coeffs_well_poised(1))
    assert report.check("a/phi").passed
    assert report.check("a/phi").scaled == 8

    row = theorem_rows(RecurrenceName.THM2, 2)[2]
    report = integrality_report(row)
    assert row.a == 163
    assert report.check("a").passed
    assert report.passed


def test_weak_trilog_scaling_is_informational():
    report = integrality_report(coeffs_trilog(1, -1))
    stated = report.check("(z1 z2)^n D b")
    assert stated.strict is False
    assert stated.passed is False
    assert stated.scaled == Fraction(25, 2)
    assert report.check("z1^n z2^2n D b").passed
    assert report.passed


def test_log_dilog_and_trilog_scalings(sample_z):
    for z in sample_z:
        for n in range(11):
            assert integrality_report(coeffs_log_dilog(n, z)).passed, (n, z)
            assert integrality_report(coeffs_trilog(n, z)).passed, (n, z)


def test_well_poised_inclusions():
    for n in range(11):
        report = integrality_report(coeffs_well_poised(n))
        assert report.passed, n
        assert report.check("2 D^3 b~/phi").passed, n
    for row in theorem_rows(RecurrenceName.THM3, 50):
        assert integrality_report(row).passed, row.n


def test_log_dilog_at_one_integrality():
    for n in range(11):
        assert integrality_report(coeffs_at_one(LOG_DILOG, n)).passed, n


def test_trilog_inclusions_at_one_to_hundred():
    for row in theorem_rows(RecurrenceName.THM2, 100):
        report = integrality_report(row)
        assert report.passed, row.n
        assert report.check("D D2 b~").passed, row.n
        assert report.check("D D2^2 b~~").passed, row.n


def test_cubed_trilog_scaling_is_informational():
    report = integrality_report(theorem_rows(RecurrenceName.THM2, 1)[1])
    cubed = report.check("D^3 b~~")
    assert cubed.strict is False
    assert cubed.passed is False
    assert cubed.scaled == Fraction(17, 2)
    assert report.check("D D2^2 b~~").scaled == 34
    assert report.passed


def test_well_poised_b_tilde_inclusions_are_strict():
    for row in theorem_rows(RecurrenceName.THM3, 50):
        report = integrality_report(row)
        for label in ("2^n D^4 b~", "2 D^3 b~/phi", "2^n D^3 b", "2 D^2 b/phi", "a/phi"):
            check = report.check(label)
            assert check.strict, label
            assert check.passed, (label, row.n)
