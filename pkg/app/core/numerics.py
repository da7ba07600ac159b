import logging
from fractions import Fraction
from math import ceil, log10
from typing import Callable, Dict, Optional, Tuple, Union

import mpmath as mp

from app.core.config import settings
from app.core.errors import DivergenceError, DomainError, InsufficientPrecisionError
from app.core.linforms import coeffs_at_one, coeffs_log_dilog
from app.core.ratdecomp import build_R, eval_R_derivative
from app.core.recur import builtin, root_moduli
from app.db.models import ConstantName, ConstructionId, LinearFormCoeffs, RecurrenceName, parse_rational

logger = logging.getLogger(__name__)

REMAINDER_NAMES = {"b": "r", "b_tilde": "r_tilde", "b_tilde2": "r_tilde2"}


def to_mpf(value) -> mp.mpf:
    if isinstance(value, Fraction):
        return mp.mpf(value.numerator) / value.denominator
    if isinstance(value, int):
        return mp.mpf(value)
    return mp.mpf(value)


def _magnitude(value) -> int:
    value = abs(Fraction(value))
    if value <= 1:
        return 0
    return len(str(value.numerator)) - len(str(value.denominator)) + 1


def polylog(s: int, z, digits: int) -> mp.mpf:
    if s not in (1, 2, 3):
        raise DomainError(f"Li_s is only provided for s = 1, 2, 3, got {s}")
    z = parse_rational(z)
    if abs(z) > 1:
        raise DivergenceError(f"Li_{s}({z}) is outside the closed unit disc")
    if s == 1 and z == 1:
        raise DivergenceError("Li_1(1) diverges")
    with mp.workdps(digits + 10):
        if z == 1:
            value = mp.zeta(s)
        elif z == -1:
            # Li_s(-1) = -eta(s)
            value = -mp.altzeta(s)
        else:
            value = mp.polylog(s, to_mpf(z))
        return +value


def zeta_even(k: int, digits: int) -> mp.mpf:
    """zeta(2k) = (-1)^(k-1) (2 pi)^(2k) B_2k / (2 (2k)!)"""
    if k < 1:
        raise DomainError(f"zeta_even needs k >= 1, got {k}")
    with mp.workdps(digits + 10):
        value = (-1) ** (k - 1) * (2 * mp.pi) ** (2 * k) * mp.bernoulli(2 * k) / (2 * mp.factorial(2 * k))
        return +value


def zeta3_accelerated(digits: int) -> mp.mpf:
    """zeta(3) = 5/2 sum_{k>=1} (-1)^(k-1) / (k^3 binom(2k, k))"""
    terms = int(digits * mp.log(10) / mp.log(4)) + 10
    with mp.workdps(digits + 10):
        total = mp.mpf(0)
        central = mp.mpf(1)
        for k in range(1, terms + 1):
            central = central * (4 * k - 2) / k
            term = 1 / (mp.mpf(k) ** 3 * central)
            total += term if k % 2 else -term
        value = 5 * total / 2
        return +value


def constant(name: Union[str, ConstantName], digits: int) -> mp.mpf:
    try:
        name = ConstantName(name)
    except ValueError:
        raise DomainError(f"Unknown constant {name!r}")
    if digits < 1:
        raise DomainError(f"digits must be positive, got {digits}")
    with mp.workdps(digits + 10):
        if name == ConstantName.LOG2:
            value = mp.log(2)
        elif name == ConstantName.PI:
            value = +mp.pi
        elif name == ConstantName.ZETA2:
            value = zeta_even(1, digits)
        elif name == ConstantName.ZETA3:
            value = mp.zeta(3)
        else:
            value = mp.pi ** 2 / 12
        return +value


def target_constants(row: LinearFormCoeffs) -> Dict[str, Callable[[int], mp.mpf]]:
    c = row.construction
    z = row.z
    if c == ConstructionId.WELL_POISED:
        return {
            "b": lambda d: constant(ConstantName.PI2_12, d),
            "b_tilde": lambda d: 3 * mp.zeta(3) / 2,
        }
    if z == 1:
        return {
            "b_tilde": lambda d: polylog(2, 1, d),
            "b_tilde2": lambda d: polylog(3, 1, d),
        }
    return {
        "b": lambda d: polylog(1, z, d),
        "b_tilde": lambda d: polylog(2, z, d),
        "b_tilde2": lambda d: polylog(3, z, d),
    }


def remainder(row: LinearFormCoeffs, digits: int, adaptive: bool = False) -> Dict[str, mp.mpf]:
    """a * L - b for every present b-field, keyed r, r_tilde, r_tilde2.

    ``digits`` is the number of significant digits wanted in each remainder.
    The remainder is the difference of two numbers about |a L| in size, so the
    working precision has to cover that cancellation; with ``adaptive`` the
    precision is raised until it does, otherwise the shortfall is an error.
    """
    guard = settings.GUARD_DIGITS
    targets = target_constants(row)
    results: Dict[str, mp.mpf] = {}
    for field, value in row.b_fields().items():
        if field not in targets:
            raise DomainError(f"{row.construction.value} at z={row.z} has no target constant for {field}")
        working = digits + _magnitude(row.a) + guard
        while True:
            with mp.workdps(working):
                L = targets[field](working)
                product = to_mpf(row.a) * L
                r = product - to_mpf(value)
                if r == 0:
                    lost = working
                elif product == 0:
                    lost = 0
                else:
                    lost = max(0, int(mp.ceil(mp.log10(abs(product) / abs(r)))))
            if working - lost >= digits:
                break
            if not adaptive or working >= settings.MAX_PRECISION_DIGITS:
                raise InsufficientPrecisionError(
                    f"n={row.n} {field}: cancellation of {lost} digits leaves fewer than {digits} at {working} digits"
                )
            working = min(max(2 * working, lost + digits + guard), settings.MAX_PRECISION_DIGITS)
            logger.debug(f"[Remainder] n={row.n} {field}: raising precision to {working} digits")
        with mp.workdps(working):
            results[REMAINDER_NAMES[field]] = +r
    return results


def _direct_sum_inside(c: ConstructionId, n: int, z: Fraction, order: int, digits: int) -> mp.mpf:
    tolerance = mp.mpf(10) ** (-(digits + 5))
    total = mp.mpf(0)
    z_mp = to_mpf(z)
    z_power = mp.mpf(1)
    previous = None
    settled = 0
    for nu in range(1, settings.DIRECT_MAX_TERMS + 1):
        z_power *= z_mp
        term = z_power * to_mpf(eval_R_derivative(c, n, nu, order))
        total += term
        if previous and nu > n + 1:
            ratio = abs(term / previous)
            if ratio < 1 and abs(term) * ratio / (1 - ratio) < tolerance:
                settled += 1
                if settled >= 2:
                    return total
            else:
                settled = 0
        previous = term if term else previous
    raise DivergenceError(f"direct series for n={n}, z={z} did not settle in {settings.DIRECT_MAX_TERMS} terms")


def _direct_sum_alternating(c: ConstructionId, n: int, order: int, digits: int) -> mp.mpf:
    """sum (-1)^nu f(nu) through the Euler transform sum_k (-1)^k Delta^k u_0 / 2^(k+1)"""
    tolerance = mp.mpf(10) ** (-(digits + 5))
    total = mp.mpf(0)
    diagonal = []
    small_in_a_row = 0
    minimum_terms = build_R(c, n).degree + order + 3
    for k in range(settings.EULER_MAX_TERMS):
        u = to_mpf(eval_R_derivative(c, n, k + 1, order))
        # diagonal[i] holds Delta^i u_{k-i}
        updated = [u]
        for i, value in enumerate(diagonal):
            updated.append(updated[i] - value)
        diagonal = updated
        term = diagonal[k] / mp.mpf(2) ** (k + 1)
        total += term if k % 2 == 0 else -term
        small_in_a_row = small_in_a_row + 1 if abs(term) < tolerance else 0
        if small_in_a_row >= 2 and k > minimum_terms:
            # sum_{nu>=1} (-1)^nu f(nu) = -sum_{m>=0} (-1)^m f(m+1)
            return -total
    raise DivergenceError(f"Euler transform for n={n} did not settle in {settings.EULER_MAX_TERMS} terms")


def direct_tail(c: ConstructionId, n: int, z, derivative_order: int, digits: int) -> mp.mpf:
    """Independent oracle: sum_{nu >= 1} z^nu ((-1)^m / m!) R_n^(m)(nu)"""
    c = ConstructionId(c)
    z = parse_rational(z)
    if derivative_order not in (0, 1, 2):
        raise DomainError(f"derivative order must be 0, 1 or 2, got {derivative_order}")
    if z == 1 or abs(z) > 1:
        raise DivergenceError(f"the series over nu diverges at z = {z}")
    if abs(z) == 1 and z != -1:
        raise DomainError(f"only z = -1 is supported on the unit circle, got {z}")
    if z == 0:
        return mp.mpf(0)
    if z == -1:
        # k-th differences of terms growing like nu^degree cancel about 0.3 k + 3 degree digits
        extra = 3 * max(build_R(c, n).degree, 0)
        with mp.workdps(2 * (digits + settings.GUARD_DIGITS) + extra + 10):
            value = _direct_sum_alternating(c, n, derivative_order, digits)
    else:
        with mp.workdps(digits + 2 * settings.GUARD_DIGITS):
            value = _direct_sum_inside(c, n, z, derivative_order, digits)
    logger.debug(f"[Direct] {c.value} n={n} z={z} m={derivative_order}: {mp.nstr(value, 15)}")
    return value


def double_integral(n: int, z, digits: Optional[int] = None) -> mp.mpf:
    """int_0^1 int_0^1 x^n (1-x)^n y^n (1-y)^n / (1 - x + z x y)^(n+1) dx dy"""
    z = parse_rational(z)
    if not 0 < z <= 1:
        raise DomainError(f"the double integral needs 0 < z <= 1, got {z}")
    digits = digits or settings.QUADRATURE_DIGITS
    with mp.workdps(digits + 5):
        z_mp = to_mpf(z)

        def integrand(x, y):
            return (x * (1 - x) * y * (1 - y)) ** n / (1 - x + z_mp * x * y) ** (n + 1)

        value = mp.quad(integrand, [0, 1], [0, 1])
        return +value


def double_integral_identity(n: int, z, digits: Optional[int] = None) -> Tuple[mp.mpf, mp.mpf]:
    """(integral, z^-(n+1) (r~_n(z) - r_n(z) log z)); at z = 1 the regularised r~_n(1)"""
    z = parse_rational(z)
    digits = digits or settings.QUADRATURE_DIGITS
    lhs = double_integral(n, z, digits)
    if z == 1:
        remainders = remainder(coeffs_at_one(ConstructionId.LOG_DILOG, n), digits, adaptive=True)
        with mp.workdps(digits + 5):
            rhs = +remainders["r_tilde"]
    else:
        remainders = remainder(coeffs_log_dilog(n, z), digits, adaptive=True)
        with mp.workdps(digits + 5):
            z_mp = to_mpf(z)
            rhs = (remainders["r_tilde"] - remainders["r"] * mp.log(z_mp)) / z_mp ** (n + 1)
    return lhs, rhs


def working_digits(n: int, name: Union[str, RecurrenceName]) -> int:
    dominant, subdominant = root_moduli(builtin(name))
    return (
        ceil(n * log10(float(dominant)))
        + ceil(n * abs(log10(float(subdominant))))
        + settings.GUARD_DIGITS
    )
