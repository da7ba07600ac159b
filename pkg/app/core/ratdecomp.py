import logging
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, List, Tuple

from app.core.arith import RatPoly, Scalar, forward_difference_heads, to_binomial_basis
from app.core.errors import DomainError, PoleError
from app.db.models import BasisAnchor, ConstructionId, PartialFraction

logger = logging.getLogger(__name__)


def _series_binomial(exponent: int, i: int) -> Fraction:
    result = Fraction(1)
    for j in range(i):
        result = result * (exponent - j) / (j + 1)
    return result


def _truncated_product(left: List[Fraction], right: List[Fraction], terms: int) -> List[Fraction]:
    out = [Fraction(0)] * terms
    for i, x in enumerate(left[:terms]):
        if x == 0:
            continue
        for j in range(terms - i):
            if j >= len(right):
                break
            out[i + j] += x * right[j]
    return out


class FactoredRational:
    """constant * prod_r (t - r)^e with integer exponents, poles where e < 0"""

    def __init__(self, constant: Scalar, factors: Dict[Fraction, int]):
        self.constant = Fraction(constant)
        self.factors = {Fraction(r): e for r, e in factors.items() if e != 0}

    def multiply_factor(self, root: Scalar, exponent: int) -> None:
        root = Fraction(root)
        merged = self.factors.get(root, 0) + exponent
        if merged:
            self.factors[root] = merged
        else:
            self.factors.pop(root, None)

    @property
    def degree(self) -> int:
        return sum(self.factors.values())

    @property
    def poles(self) -> Dict[Fraction, int]:
        return {r: -e for r, e in self.factors.items() if e < 0}

    def __call__(self, t: Scalar) -> Fraction:
        t = Fraction(t)
        exponent_at_t = self.factors.get(t, 0)
        if exponent_at_t < 0:
            raise PoleError(f"t = {t} is a pole of order {-exponent_at_t}")
        if exponent_at_t > 0:
            return Fraction(0)
        value = self.constant
        for root, e in self.factors.items():
            value *= (t - root) ** e
        return value

    def expansion(self, t0: Scalar, terms: int) -> Tuple[int, List[Fraction]]:
        """(v, c) with R(t0 + h) = h^v * sum_{i < terms} c_i h^i + O(h^(v + terms))"""
        t0 = Fraction(t0)
        valuation = self.factors.get(t0, 0)
        series = [self.constant] + [Fraction(0)] * (terms - 1)
        for root, e in self.factors.items():
            if root == t0:
                continue
            d = t0 - root
            # (d + h)^e = sum_i binom(e, i) d^(e-i) h^i
            local = [_series_binomial(e, i) * d ** (e - i) for i in range(terms)]
            series = _truncated_product(series, local, terms)
        return valuation, series


def build_R(c: ConstructionId, n: int) -> FactoredRational:
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")
    c = ConstructionId(c)
    if c == ConstructionId.LOG_DILOG:
        R = FactoredRational(Fraction(1, factorial(n)), {})
        zero_exponent = 2
    elif c == ConstructionId.TRILOG:
        R = FactoredRational(Fraction(1, factorial(n) ** 2), {})
        zero_exponent = 3
    else:
        R = FactoredRational(Fraction((-1) ** (n + 1), factorial(n)), {})
        zero_exponent = 2
        # (t + n/2) may coincide with the pole at -n/2 when n is even
        R.multiply_factor(Fraction(-n, 2), 1)
        for j in range(n + 1, 2 * n + 1):
            R.multiply_factor(-j, 2)

    for j in range(1, n + 1):
        R.multiply_factor(j, zero_exponent)
    pole_exponent = -3 if c == ConstructionId.WELL_POISED else -1
    for k in range(n + 1):
        R.multiply_factor(-k, pole_exponent)
    return R


def eval_R(c: ConstructionId, n: int, t: Scalar) -> Fraction:
    """Exact R_n(t); raises PoleError at t in {0, -1, ..., -n}"""
    return build_R(c, n)(t)


def eval_R_derivative(c: ConstructionId, n: int, t: Scalar, order: int) -> Fraction:
    """((-1)^order / order!) * R_n^(order)(t), also at zeros of R_n"""
    valuation, series = build_R(c, n).expansion(t, order + 1)
    if valuation < 0:
        raise PoleError(f"t = {t} is a pole of R_{n}")
    if order < valuation:
        return Fraction(0)
    coefficient = series[order - valuation]
    return coefficient if order % 2 == 0 else -coefficient


def polynomial_degree(c: ConstructionId, n: int) -> int:
    return max(build_R(c, n).degree, -1)


def _pole_sum(pole_coeffs: List[List[Fraction]], t: Fraction) -> Fraction:
    total = Fraction(0)
    for k, row in enumerate(pole_coeffs):
        for o, coefficient in enumerate(row, start=1):
            if coefficient:
                total += coefficient / (t + k) ** o
    return total


@lru_cache(maxsize=256)
def decompose(c: ConstructionId, n: int) -> PartialFraction:
    c = ConstructionId(c)
    R = build_R(c, n)
    pole_order = 3 if c == ConstructionId.WELL_POISED else 1

    pole_coeffs: List[List[Fraction]] = []
    for k in range(n + 1):
        order_here = R.poles.get(Fraction(-k), 0)
        row = [Fraction(0)] * pole_order
        if order_here:
            _, laurent = R.expansion(-k, order_here)
            # coefficient of h^(-o) sits at index order_here - o
            for o in range(1, order_here + 1):
                row[o - 1] = laurent[order_here - o]
        pole_coeffs.append(row)

    degree = polynomial_degree(c, n)
    poly_part: List[Fraction] = []
    if degree >= 0:
        values = [R(1 + m) - _pole_sum(pole_coeffs, Fraction(1 + m)) for m in range(degree + 1)]
        poly_part = forward_difference_heads(values)

    logger.debug(f"[Decompose] {c.value} n={n}: {n + 1} poles of order {pole_order}, polynomial degree {degree}")
    return PartialFraction(
        construction=c,
        n=n,
        derivative=0,
        pole_order=pole_order,
        pole_coeffs=pole_coeffs,
        poly_part=poly_part,
    )


def derivative_decomposition(pf: PartialFraction, order: int) -> PartialFraction:
    """Decomposition of ((-1)^m / m!) R^(m) with m = pf.derivative + order"""
    if order not in (1, 2):
        raise DomainError(f"derivative order must be 1 or 2, got {order}")
    base = pf.derivative
    total = base + order
    if total > 2:
        raise DomainError(f"derivative forms beyond order 2 are not supported (requested {total})")

    new_order = pf.pole_order + order
    pole_coeffs = []
    for row in pf.pole_coeffs:
        new_row = [Fraction(0)] * new_order
        for o, coefficient in enumerate(row, start=1):
            # d^m/dt^m (t+k)^(-o) = (-1)^m (o)_m (t+k)^(-o-m)
            rising = 1
            for j in range(order):
                rising *= o + j
            new_row[o + order - 1] = coefficient * Fraction(factorial(base) * rising, factorial(total))
        pole_coeffs.append(new_row)

    poly = RatPoly.from_binomial_basis(pf.poly_part, BasisAnchor.SHIFTED_FALLING)
    sign = (-1) ** order
    derived = poly.derivative(order).scale(Fraction(sign * factorial(base), factorial(total)))

    return PartialFraction(
        construction=pf.construction,
        n=pf.n,
        derivative=total,
        pole_order=new_order,
        pole_coeffs=pole_coeffs,
        poly_part=to_binomial_basis(derived),
    )


def evaluate_decomposition(pf: PartialFraction, t: Scalar) -> Fraction:
    return pf.evaluate(t)
