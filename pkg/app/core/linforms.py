"""Linear forms in polylogarithms built from the partial-fraction data.

For a decomposition f(t) = sum_{k,s} C_{k,s}/(t+k)^s + sum_j q_j binom(t-1, j)
the series sum_{nu >= 1} z^nu f(nu) equals

    sum_s alpha_s Li_s(z) - beta,
    alpha_s = sum_k C_{k,s} z^(-k),
    beta    = sum_{k,s} C_{k,s} H(k, s) - sum_j q_j w^(j+1),

with H(k, s) = sum_{l=1}^{k} z^(l-k) / l^s and w = z/(1-z). The three
constructions read a, b, b~, b~~ off these coefficients.
"""
import logging
from fractions import Fraction
from typing import Dict, List, Optional

from app.core.arith import (
    binom,
    is_integral,
    lcm_upto,
    log1p_power_coefficients,
    phi_tilde,
)
from app.core.errors import CancellationError, DomainError
from app.core.ratdecomp import decompose, derivative_decomposition
from app.db.models import (
    ConstructionId,
    InclusionCheck,
    IntegralityReport,
    LinearFormCoeffs,
    PartialFraction,
    PolylogForm,
    RowSource,
    parse_rational,
)

logger = logging.getLogger(__name__)

MINUS_ONE = Fraction(-1)


def _check_z(z, allow_one: bool = False) -> Fraction:
    z = parse_rational(z)
    if z == 0:
        raise DomainError("z = 0 gives no linear form")
    if abs(z) > 1:
        raise DomainError(f"z must lie in the closed unit disc, got {z}")
    if z == 1 and not allow_one:
        raise DomainError("z = 1: the series diverges, use the regularised values at z = 1")
    return z


def z_denominators(z) -> tuple:
    """(z1, z2): denominators of 1/z and z/(1-z)"""
    z = _check_z(z)
    return (1 / z).denominator, (z / (1 - z)).denominator


def _partial_sums(z: Fraction, n: int, s: int) -> List[Fraction]:
    sums = [Fraction(0)]
    for k in range(1, n + 1):
        sums.append(sums[-1] / z + Fraction(1, k ** s))
    return sums


def polylog_form(pf: PartialFraction, z) -> PolylogForm:
    z = _check_z(z)
    w = z / (1 - z)
    coefficients: Dict[int, Fraction] = {}
    constant = Fraction(0)
    for s in range(1, pf.pole_order + 1):
        column = [pf.coefficient(k, s) for k in range(pf.n + 1)]
        if not any(column):
            coefficients[s] = Fraction(0)
            continue
        H = _partial_sums(z, pf.n, s)
        alpha = Fraction(0)
        z_power = Fraction(1)
        for k, coefficient in enumerate(column):
            alpha += coefficient * z_power
            constant += coefficient * H[k]
            z_power /= z
        coefficients[s] = alpha

    w_power = w
    for q in pf.poly_part:
        constant -= q * w_power
        w_power *= w

    return PolylogForm(
        construction=pf.construction,
        n=pf.n,
        derivative=pf.derivative,
        z=z,
        coefficients=coefficients,
        constant=constant,
    )


def _require_zero(form: PolylogForm, s: int, label: str) -> None:
    value = form.coefficients.get(s, Fraction(0))
    if value != 0:
        raise CancellationError(f"{label}: coefficient of Li_{s} should vanish, got {value}")


def coeffs_log_dilog(n: int, z) -> LinearFormCoeffs:
    z = _check_z(z)
    pf = decompose(ConstructionId.LOG_DILOG, n)
    form = polylog_form(pf, z)
    tilde = polylog_form(derivative_decomposition(pf, 1), z)
    a = form.coefficients[1]
    _require_zero(tilde, 1, f"log-dilog n={n} r~")
    if tilde.coefficients[2] != a:
        raise CancellationError(f"log-dilog n={n}: r and r~ do not share the leading coefficient")
    return LinearFormCoeffs(
        construction=ConstructionId.LOG_DILOG,
        n=n,
        z=z,
        a=a,
        b=form.constant,
        b_tilde=tilde.constant,
    )


def coeffs_trilog(n: int, z) -> LinearFormCoeffs:
    z = _check_z(z)
    pf = decompose(ConstructionId.TRILOG, n)
    first = derivative_decomposition(pf, 1)
    second = derivative_decomposition(pf, 2)
    form = polylog_form(pf, z)
    tilde = polylog_form(first, z)
    tilde2 = polylog_form(second, z)
    a = form.coefficients[1]
    for derived, s in ((tilde, 2), (tilde2, 3)):
        if derived.coefficients[s] != a:
            raise CancellationError(f"trilog n={n}: derivative form {s - 1} has a different leading coefficient")
    return LinearFormCoeffs(
        construction=ConstructionId.TRILOG,
        n=n,
        z=z,
        a=a,
        b=form.constant,
        b_tilde=tilde.constant,
        b_tilde2=tilde2.constant,
    )


def coeffs_well_poised(n: int) -> LinearFormCoeffs:
    pf = decompose(ConstructionId.WELL_POISED, n)
    form = polylog_form(pf, MINUS_ONE)
    tilde = polylog_form(derivative_decomposition(pf, 1), MINUS_ONE)

    # Li_1(-1), Li_3(-1) drop out of r; Li_1, Li_2, Li_4 drop out of r~
    label = f"well-poised n={n}"
    _require_zero(form, 1, label + " r")
    _require_zero(form, 3, label + " r")
    for s in (1, 2, 4):
        _require_zero(tilde, s, label + " r~")

    # Li_2(-1) = -pi^2/12 and 2 Li_3(-1) = -3 zeta(3)/2
    a = -form.coefficients[2]
    if tilde.coefficients[3] != -2 * a:
        raise CancellationError(f"{label}: r~ leading coefficient {tilde.coefficients[3]} != {-2 * a}")
    return LinearFormCoeffs(
        construction=ConstructionId.WELL_POISED,
        n=n,
        z=MINUS_ONE,
        a=a,
        b=form.constant,
        b_tilde=tilde.constant,
    )


def coeffs_at_one(c: ConstructionId, n: int) -> LinearFormCoeffs:
    """Regularised values at z = 1: a(1), b~(1) and for the trilog also b~~(1).

    At z = 1 the polynomial tails sum_nu binom(nu-1, j) diverge. Continuing in z
    and collecting the finite part, the form of derivative order m gets the
    constant

        sum_{k,s} C^(m)_{k,s} H_k^(s) - sum_{i=1}^{m} sum_j q^(m-i)_j [u^(j+1)] log(1+u)^i / i!

    where q^(d) are the polynomial parts of the derivative forms of lower order.
    """
    c = ConstructionId(c)
    if c == ConstructionId.WELL_POISED:
        raise DomainError("the well-poised construction is fixed at z = -1")
    orders = (1, 2) if c == ConstructionId.TRILOG else (1,)

    base = decompose(c, n)
    forms = [base] + [derivative_decomposition(base, m) for m in orders]
    top = max(orders)
    upto = max((len(f.poly_part) for f in forms), default=0) + 1
    log_powers = {i: log1p_power_coefficients(i, upto) for i in range(1, top + 1)}

    a = sum((base.coefficient(k, 1) for k in range(n + 1)), Fraction(0))
    values: Dict[int, Fraction] = {}
    for m in orders:
        pf = forms[m]
        constant = Fraction(0)
        for s in range(1, pf.pole_order + 1):
            harmonic = Fraction(0)
            for k in range(n + 1):
                if k:
                    harmonic += Fraction(1, k ** s)
                constant += pf.coefficient(k, s) * harmonic
        if any(pf.coefficient(k, 1) for k in range(n + 1)):
            raise CancellationError(f"{c.value} n={n}: Li_1 term survives in derivative form {m}")
        for i in range(1, m + 1):
            lower = forms[m - i]
            for j, q in enumerate(lower.poly_part):
                constant -= q * log_powers[i][j + 1]
        values[m] = constant

    return LinearFormCoeffs(
        construction=c,
        n=n,
        z=Fraction(1),
        a=a,
        b_tilde=values[1],
        b_tilde2=values.get(2),
        source=RowSource.REGULARIZED,
    )


# Closed binomial sums for a_n

def a_log_dilog_explicit(n: int, z) -> Fraction:
    x = -1 / parse_rational(z)
    return sum((binom(n, k) * binom(n + k, k) ** 2 * x ** k for k in range(n + 1)), Fraction(0))


def a_trilog_explicit(n: int, z) -> Fraction:
    x = -1 / parse_rational(z)
    total = sum((binom(n, k) * binom(n + k, k) ** 3 * x ** k for k in range(n + 1)), Fraction(0))
    return total if n % 2 == 0 else -total


def a_trilog_at_one(n: int) -> int:
    """Second closed form of a_n at z = 1"""
    return sum(binom(n, k) ** 2 * binom(n + k, n) * binom(n + 2 * k, n) for k in range(n + 1))


def thomae_sides(n: int) -> tuple:
    left = sum((-1) ** k * binom(n, k) * binom(n + k, k) ** 2 for k in range(n + 1))
    right = (-1) ** n * sum(binom(n + k, k) * binom(n, k) ** 2 for k in range(n + 1))
    return left, right


def well_poised_sum_alternating(n: int) -> int:
    total = 0
    for i in range(n + 1):
        head = binom(n, i) ** 2 * binom(2 * n - i, n)
        for j in range(i, n + 1):
            total += (-1) ** (n + j) * head * binom(n, j) * binom(n + j, n) * binom(n + j - i, n)
    return total


def well_poised_sum_positive(n: int) -> int:
    total = 0
    for i in range(n + 1):
        head = binom(n, i) ** 2 * binom(n + i, n)
        for j in range(n + 1):
            total += head * binom(n, j) ** 2 * binom(i + j, i)
    return total


def a_explicit(c: ConstructionId, n: int, z) -> Fraction:
    c = ConstructionId(c)
    z = parse_rational(z)
    if z == 0:
        raise DomainError("z = 0 is outside the closed forms")
    if c == ConstructionId.LOG_DILOG:
        return a_log_dilog_explicit(n, z)
    if c == ConstructionId.TRILOG:
        return a_trilog_explicit(n, z)
    if z != MINUS_ONE:
        raise DomainError("the well-poised closed form is only defined at z = -1")
    return Fraction(well_poised_sum_positive(n))


# Inclusions

def _inclusion(
    label: str, field: str, factor, value: Optional[Fraction], strict: bool = True, note: Optional[str] = None
) -> Optional[InclusionCheck]:
    if value is None:
        return None
    factor = Fraction(factor)
    scaled = factor * value
    passed = is_integral(scaled)
    if not passed and not strict:
        logger.warning(f"Informational inclusion {label} fails: {factor} * {field} = {scaled}")
    return InclusionCheck(
        label=label, field=field, factor=factor, scaled=scaled, passed=passed, strict=strict, note=note
    )


def _log_dilog_checks(row: LinearFormCoeffs) -> List[Optional[InclusionCheck]]:
    n = row.n
    D = lcm_upto(n)
    if row.z == 1:
        return [
            _inclusion("a", "a", 1, row.a),
            _inclusion("D^2 b~", "b_tilde", D ** 2, row.b_tilde),
        ]
    z1, z2 = z_denominators(row.z)
    return [
        _inclusion("z1^n a", "a", z1 ** n, row.a),
        _inclusion("(z1 z2)^n D b", "b", (z1 * z2) ** n * D, row.b),
        _inclusion("(z1 z2)^n D^2 b~", "b_tilde", (z1 * z2) ** n * D ** 2, row.b_tilde),
    ]


def _trilog_checks(row: LinearFormCoeffs) -> List[Optional[InclusionCheck]]:
    n = row.n
    D, D2 = lcm_upto(n), lcm_upto(2 * n)
    if row.z == 1:
        return [
            _inclusion("a", "a", 1, row.a),
            _inclusion("D D2 b~", "b_tilde", D * D2, row.b_tilde),
            _inclusion("D D2^2 b~~", "b_tilde2", D * D2 ** 2, row.b_tilde2),
            _inclusion("D^3 b~~", "b_tilde2", D ** 3, row.b_tilde2, strict=False, note="D_2n enters b~~ squared"),
        ]
    z1, z2 = z_denominators(row.z)
    # the polynomial part has degree 2n-1, so z2 enters squared
    weak = (z1 * z2) ** n
    scale = z1 ** n * z2 ** (2 * n)
    note = "z2 to the power n only; too weak once the polynomial tail reaches degree 2n-1"
    return [
        _inclusion("z1^n a", "a", z1 ** n, row.a),
        _inclusion("z1^n z2^2n D b", "b", scale * D, row.b),
        _inclusion("z1^n z2^2n D D2 b~", "b_tilde", scale * D * D2, row.b_tilde),
        _inclusion("z1^n z2^2n D D2^2 b~~", "b_tilde2", scale * D * D2 ** 2, row.b_tilde2),
        _inclusion("(z1 z2)^n D b", "b", weak * D, row.b, strict=False, note=note),
        _inclusion("(z1 z2)^n D D2 b~", "b_tilde", weak * D * D2, row.b_tilde, strict=False, note=note),
        _inclusion("(z1 z2)^n D D2^2 b~~", "b_tilde2", weak * D * D2 ** 2, row.b_tilde2, strict=False, note=note),
    ]


def _well_poised_checks(row: LinearFormCoeffs) -> List[Optional[InclusionCheck]]:
    n = row.n
    D = lcm_upto(n)
    phi = Fraction(1, phi_tilde(n))
    literal = "companion scaling applied to b itself"
    return [
        _inclusion("2D a", "a", 2 * D, row.a),
        _inclusion("2^n D^3 b", "b", 2 ** n * D ** 3, row.b),
        _inclusion("2^n D^4 b", "b", 2 ** n * D ** 4, row.b, strict=False, note=literal),
        _inclusion("2^n D^4 b~", "b_tilde", 2 ** n * D ** 4, row.b_tilde),
        _inclusion("a/phi", "a", phi, row.a),
        _inclusion("2 D^2 b/phi", "b", 2 * phi * D ** 2, row.b),
        _inclusion("2 D^3 b/phi", "b", 2 * phi * D ** 3, row.b, strict=False, note=literal),
        _inclusion("2 D^3 b~/phi", "b_tilde", 2 * phi * D ** 3, row.b_tilde),
    ]


def integrality_report(row: LinearFormCoeffs) -> IntegralityReport:
    if row.construction == ConstructionId.LOG_DILOG:
        checks = _log_dilog_checks(row)
    elif row.construction == ConstructionId.TRILOG:
        checks = _trilog_checks(row)
    else:
        checks = _well_poised_checks(row)
    return IntegralityReport(
        construction=row.construction,
        n=row.n,
        z=row.z,
        checks=[check for check in checks if check is not None],
    )
