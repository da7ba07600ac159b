import logging
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, List, Sequence, Union

from app.db.database import get_prime_sieve
from app.db.models import BasisAnchor

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


def primes_upto(n: int) -> List[int]:
    if n < 2:
        return []
    return get_prime_sieve().primes_upto(n)


@lru_cache(maxsize=4096)
def lcm_upto(n: int) -> int:
    """D_n = lcm(1, ..., n), with D_0 = D_1 = 1"""
    if n < 0:
        raise ValueError(f"lcm_upto needs n >= 0, got {n}")
    result = 1
    for p in primes_upto(n):
        power = p
        while power * p <= n:
            power *= p
        result *= power
    return result


@lru_cache(maxsize=4096)
def phi_tilde(n: int) -> int:
    """Product of the primes p <= n whose fractional part {n/p} lies in [2/3, 1)"""
    if n < 0:
        raise ValueError(f"phi_tilde needs n >= 0, got {n}")
    result = 1
    for p in primes_upto(n):
        # {n/p} = (n mod p)/p >= 2/3; the upper bound < 1 always holds
        if 3 * (n % p) >= 2 * p:
            result *= p
    return result


def binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def is_integral(value: Scalar) -> bool:
    return Fraction(value).denominator == 1


def forward_difference_heads(values: Sequence[Scalar]) -> List[Fraction]:
    row = [Fraction(v) for v in values]
    heads: List[Fraction] = []
    while row:
        heads.append(row[0])
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
    return heads


class RatPoly:
    """Dense polynomial over Q, coefficients indexed by power of t"""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        values = [Fraction(c) for c in coeffs]
        while values and values[-1] == 0:
            values.pop()
        self.coeffs = values

    @classmethod
    def constant(cls, value: Scalar) -> "RatPoly":
        return cls([value])

    @classmethod
    def linear(cls, root: Scalar) -> "RatPoly":
        return cls([-Fraction(root), 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, t: Scalar) -> Fraction:
        result = Fraction(0)
        for c in reversed(self.coeffs):
            result = result * t + c
        return result

    def __add__(self, other: "RatPoly") -> "RatPoly":
        if not isinstance(other, RatPoly):
            other = RatPoly.constant(other)
        size = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + [Fraction(0)] * (size - len(self.coeffs))
        b = other.coeffs + [Fraction(0)] * (size - len(other.coeffs))
        return RatPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "RatPoly":
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        if not isinstance(other, RatPoly):
            other = RatPoly.constant(other)
        return self + (-other)

    def __mul__(self, other: Union["RatPoly", Scalar]) -> "RatPoly":
        if not isinstance(other, RatPoly):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x == 0:
                continue
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return RatPoly(out)

    __rmul__ = __mul__

    def scale(self, factor: Scalar) -> "RatPoly":
        return RatPoly(c * factor for c in self.coeffs)

    def derivative(self, order: int = 1) -> "RatPoly":
        coeffs = list(self.coeffs)
        for _ in range(order):
            coeffs = [i * c for i, c in enumerate(coeffs)][1:]
        return RatPoly(coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        return f"RatPoly({[str(c) for c in self.coeffs]})"

    @classmethod
    def from_binomial_basis(
        cls, coeffs: Sequence[Scalar], anchor: BasisAnchor = BasisAnchor.SHIFTED_FALLING
    ) -> "RatPoly":
        """Sum_j c_j (t-1)...(t-j)/j!  or  Sum_j c_j t(t+1)...(t+j-1)/j!"""
        total = RatPoly()
        basis = RatPoly.constant(1)
        for j, c in enumerate(coeffs):
            if j > 0:
                root = j if anchor == BasisAnchor.SHIFTED_FALLING else -(j - 1)
                basis = (basis * RatPoly.linear(root)).scale(Fraction(1, j))
            if c:
                total = total + basis.scale(c)
        return total


def to_binomial_basis(
    p: RatPoly, anchor: BasisAnchor = BasisAnchor.SHIFTED_FALLING
) -> List[Fraction]:
    """Coefficients of p in an integer-valued binomial basis, via forward differences"""
    d = p.degree
    if d < 0:
        return []
    if anchor == BasisAnchor.SHIFTED_FALLING:
        # p(1+m) = sum_j c_j binom(m, j)
        return forward_difference_heads([p(1 + m) for m in range(d + 1)])
    # p(-m) = sum_j c_j (-1)^j binom(m, j)
    heads = forward_difference_heads([p(-m) for m in range(d + 1)])
    return [h if j % 2 == 0 else -h for j, h in enumerate(heads)]


def is_integer_valued(p: RatPoly) -> bool:
    return all(is_integral(c) for c in to_binomial_basis(p))


def log1p_power_coefficients(power: int, upto: int) -> List[Fraction]:
    """Coefficients of u^0..u^upto in (log(1+u))^power / power!"""
    log_series = [Fraction(0)] + [Fraction((-1) ** (k + 1), k) for k in range(1, upto + 1)]
    result = [Fraction(1)] + [Fraction(0)] * upto
    for _ in range(power):
        nxt = [Fraction(0)] * (upto + 1)
        for i, x in enumerate(result):
            if x == 0:
                continue
            for j in range(1, upto + 1 - i):
                nxt[i + j] += x * log_series[j]
        result = nxt
    scale = Fraction(1, factorial(power))
    return [c * scale for c in result]
