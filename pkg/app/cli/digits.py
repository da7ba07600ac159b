"""`digits`: evaluate a constant as b/a from a recurrence-generated row."""
import logging
from fractions import Fraction
from math import ceil, log10
from typing import Optional

import mpmath as mp

from app.core.config import settings
from app.core.errors import DomainError
from app.core.numerics import constant, to_mpf
from app.core.recur import builtin, root_moduli, theorem_rows
from app.db.models import ConstantName, RecurrenceName
from app.db.schemas import DigitsReport, format_float

from .dependencies import emit, render_object

logger = logging.getLogger(__name__)

# (constant, recurrence) -> (b-field, scale): constant ~ scale * field / a
ROUTES = {
    (ConstantName.LOG2, RecurrenceName.THM1): ("b", Fraction(-1)),
    (ConstantName.PI2_12, RecurrenceName.THM1): ("b_tilde", Fraction(-1)),
    (ConstantName.PI2_12, RecurrenceName.THM3): ("b", Fraction(1)),
    (ConstantName.ZETA2, RecurrenceName.THM2): ("b_tilde", Fraction(1)),
    (ConstantName.ZETA2, RecurrenceName.THM1): ("b_tilde", Fraction(-2)),
    (ConstantName.ZETA2, RecurrenceName.THM3): ("b", Fraction(2)),
    (ConstantName.ZETA3, RecurrenceName.THM3): ("b_tilde", Fraction(2, 3)),
    (ConstantName.ZETA3, RecurrenceName.THM2): ("b_tilde2", Fraction(1)),
}

DEFAULT_ROUTE = {
    ConstantName.LOG2: RecurrenceName.THM1,
    ConstantName.PI2_12: RecurrenceName.THM1,
    ConstantName.ZETA2: RecurrenceName.THM2,
    ConstantName.ZETA3: RecurrenceName.THM3,
}

CHOICES = [name.value for name in DEFAULT_ROUTE]


def order_for_digits(name: RecurrenceName, digits: int) -> int:
    """n ~ digits / |log10 |lambda_{1,2}||, plus two"""
    _, subdominant = root_moduli(builtin(name))
    return ceil(digits / abs(log10(float(subdominant)))) + 2


def approximate(name: ConstantName, digits: int, via: Optional[RecurrenceName] = None) -> DigitsReport:
    name = ConstantName(name)
    via = RecurrenceName(via) if via else DEFAULT_ROUTE.get(name)
    if (name, via) not in ROUTES:
        raise DomainError(f"{name.value} cannot be read off the {via.value if via else '?'} approximations")
    if digits < 1:
        raise DomainError(f"digits must be positive, got {digits}")
    field, scale = ROUTES[(name, via)]
    n = order_for_digits(via, digits)
    row = theorem_rows(via, n)[-1]
    approximation = scale * getattr(row, field) / row.a

    working = digits + settings.GUARD_DIGITS
    with mp.workdps(working):
        value = to_mpf(approximation)
        reference = constant(name, working)
        error = abs(value - reference)
        achieved = error < mp.mpf(10) ** -digits
    logger.info(f"{name.value} via {via.value}: n={n}, error {mp.nstr(error, 5)}")
    return DigitsReport(
        constant=name.value,
        via=via.value,
        n=n,
        digits=digits,
        approximation=format_float(value, digits + 5),
        reference=format_float(reference, digits + 5),
        error=mp.nstr(error, 5),
        achieved=achieved,
    )


def digits(args) -> int:
    report = approximate(args.constant, args.digits, args.via)
    emit(render_object(report.model_dump()))
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("digits", help="Compute a constant from the recurrences")
    parser.add_argument("--constant", required=True, choices=CHOICES)
    parser.add_argument("--digits", type=int, required=True)
    parser.add_argument("--via", default=None, choices=[r.value for r in RecurrenceName if r != RecurrenceName.APERY_Z2])
    parser.set_defaults(func=digits)
