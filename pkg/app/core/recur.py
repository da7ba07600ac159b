import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import mpmath as mp

from app.core.arith import RatPoly
from app.core.config import settings
from app.core.errors import (
    DomainError,
    InsufficientSequenceError,
    LeadingCoefficientError,
)
from app.db.database import get_recurrence_table
from app.db.models import (
    ConstructionId,
    LinearFormCoeffs,
    Recurrence,
    RecurrenceName,
    RowSource,
    VerifyResult,
    parse_rational,
)

logger = logging.getLogger(__name__)

THEOREM_CONSTRUCTION = {
    RecurrenceName.THM1: ConstructionId.LOG_DILOG,
    RecurrenceName.THM2: ConstructionId.TRILOG,
    RecurrenceName.THM3: ConstructionId.WELL_POISED,
    RecurrenceName.APERY_Z2: ConstructionId.LOG_DILOG,
}

SEQUENCE_FIELDS = ("a", "b", "b_tilde", "b_tilde2")


def _resolve_name(name: Union[str, RecurrenceName]) -> RecurrenceName:
    try:
        return RecurrenceName(name)
    except ValueError:
        choices = ", ".join(item.value for item in RecurrenceName)
        raise DomainError(f"Unknown recurrence {name!r}; expected one of {choices}")


def _expand_terms(entry: Dict) -> List[List[Fraction]]:
    by_shift: Dict[int, RatPoly] = {}
    for term in entry["terms"]:
        poly = RatPoly.constant(term["scale"])
        for factor in term["factors"]:
            poly = poly * RatPoly(factor)
        by_shift[term["shift"]] = poly
    order = entry["order"]
    # x_{n+1}, x_n, x_{n-1}, ...
    shifts = [1 - i for i in range(order + 1)]
    return [by_shift.get(shift, RatPoly()).coeffs for shift in shifts]


def builtin(name: Union[str, RecurrenceName]) -> Recurrence:
    name = _resolve_name(name)
    entry = get_recurrence_table()[name.value]
    return Recurrence(
        name=name,
        order=entry["order"],
        coeff_polys=_expand_terms(entry),
        valid_from=entry["valid_from"],
        char_poly=entry["char_poly"],
    )


def coefficients_at(rec: Recurrence, n: int) -> List[Fraction]:
    return [RatPoly(coeffs)(n) for coeffs in rec.coeff_polys]


def verify(rec: Recurrence, seq: Sequence, n_range) -> VerifyResult:
    """Check the recurrence at every n of n_range (a range or an inclusive (lo, hi) pair)"""
    if isinstance(n_range, tuple):
        n_range = range(n_range[0], n_range[1] + 1)
    values = [parse_rational(x) for x in seq]
    if not n_range:
        return VerifyResult(ok=True)
    lowest, highest = min(n_range), max(n_range)
    if lowest + 1 - rec.order < 0 or highest + 1 >= len(values):
        raise InsufficientSequenceError(
            f"{rec.name.value}: need x_{max(lowest + 1 - rec.order, 0)}..x_{highest + 1}, have {len(values)} terms"
        )
    for n in n_range:
        coefficients = coefficients_at(rec, n)
        total = sum(c * values[n + 1 - i] for i, c in enumerate(coefficients))
        if total != 0:
            logger.debug(f"[Recur] {rec.name.value} fails at n={n}: residual {total}")
            return VerifyResult(ok=False, first_failure=n)
    return VerifyResult(ok=True)


def extend(rec: Recurrence, initial: Sequence, upto: int) -> List[Fraction]:
    values = [parse_rational(x) for x in initial]
    if len(values) < rec.order or len(values) - 1 < rec.valid_from:
        raise InsufficientSequenceError(
            f"{rec.name.value}: extension needs x_0..x_{max(rec.order - 1, rec.valid_from)}, got {len(values)} terms"
        )
    n = len(values) - 1
    while n < upto:
        coefficients = coefficients_at(rec, n)
        leading = coefficients[0]
        if leading == 0:
            raise LeadingCoefficientError(f"{rec.name.value}: leading coefficient vanishes at n={n}")
        tail = sum(c * values[n + 1 - i] for i, c in enumerate(coefficients) if i > 0)
        values.append(-tail / leading)
        n += 1
    return values[: upto + 1]


def initial_data(name: Union[str, RecurrenceName]) -> Dict:
    name = _resolve_name(name)
    entry = get_recurrence_table()["initial_data"][name.value]
    return {key: value if key == "z" else [parse_rational(x) for x in value] for key, value in entry.items()}


def theorem_rows(name: Union[str, RecurrenceName], upto: int) -> List[LinearFormCoeffs]:
    """Table rows n = 0..upto generated from the printed initial data"""
    name = _resolve_name(name)
    rec = builtin(name)
    data = initial_data(name)
    sequences = {field: extend(rec, data[field], upto) for field in SEQUENCE_FIELDS if field in data}
    z = parse_rational(data["z"])
    logger.info(f"[Recur] Extended {name.value} sequences {sorted(sequences)} to n={upto}")
    return [
        LinearFormCoeffs(
            construction=THEOREM_CONSTRUCTION[name],
            n=n,
            z=z,
            source=RowSource.RECURRENCE,
            **{field: values[n] for field, values in sequences.items()},
        )
        for n in range(upto + 1)
    ]


def char_roots(rec: Recurrence, digits: int) -> list:
    if digits < 10:
        raise DomainError(f"char_roots needs at least 10 digits, got {digits}")
    with mp.workdps(digits + 10):
        coefficients = [mp.mpf(c.numerator) / c.denominator for c in rec.char_poly]
        roots = mp.polyroots(coefficients, maxsteps=200, extraprec=2 * digits)
        return sorted(roots, key=lambda root: -abs(root))


def root_moduli(rec: Recurrence, digits: int = 30) -> tuple:
    """(lambda_3, |lambda_{1,2}|): dominant root and the modulus of the next one"""
    roots = char_roots(rec, digits)
    with mp.workdps(digits + 10):
        return abs(roots[0]), abs(roots[1])


def char_poly_log_dilog(z) -> List[Fraction]:
    """z(z-1) L^3 - (3z^2 - 20z + 16) L^2 + z(3z + 8) L - z^2"""
    z = parse_rational(z)
    return [z * (z - 1), -(3 * z * z - 20 * z + 16), z * (3 * z + 8), -z * z]


def leading_char_poly(rec: Recurrence) -> List[Fraction]:
    degree = max(len(coeffs) - 1 for coeffs in rec.coeff_polys)
    return [
        Fraction(coeffs[degree]) if len(coeffs) > degree else Fraction(0)
        for coeffs in rec.coeff_polys
    ]


def is_proportional(left: Sequence, right: Sequence) -> bool:
    left = [parse_rational(x) for x in left]
    right = [parse_rational(x) for x in right]
    if len(left) != len(right):
        return False
    pivot = next((i for i, x in enumerate(right) if x != 0), None)
    if pivot is None or left[pivot] == 0:
        return False
    ratio = left[pivot] / right[pivot]
    return all(x == ratio * y for x, y in zip(left, right))


def _log_abs(value) -> Optional[mp.mpf]:
    if isinstance(value, Fraction):
        if value == 0:
            return None
        return mp.log(abs(mp.mpf(value.numerator))) - mp.log(mp.mpf(value.denominator))
    value = abs(mp.mpf(value))
    return mp.log(value) if value else None


def _least_squares_slope(points: List[tuple], power_correction: bool) -> mp.mpf:
    columns = 3 if power_correction and len(points) > 3 else 2
    rows = []
    for n, y in points:
        row = [mp.mpf(1), mp.mpf(n)]
        if columns == 3:
            row.append(mp.log(n))
        rows.append(row)
    A = mp.matrix(rows)
    b = mp.matrix([y for _, y in points])
    solution, _ = mp.qr_solve(A, b)
    return solution[1]


def growth_exponent(seq: Sequence, window: int = 1, method: str = "regression") -> mp.mpf:
    """Estimate lim |x_n|^(1/n).

    ``regression`` fits log|x_n| = c + n log(lambda) + beta log(n) over the
    second half of the sequence; with window > 1 the fit runs on the maxima of
    consecutive blocks of that length, without the log(n) term. ``root`` returns
    |x_N|^(1/N).
    """
    if len(seq) < 2:
        raise InsufficientSequenceError("growth_exponent needs at least two terms")
    with mp.workdps(30):
        if method == "root":
            last = len(seq) - 1
            return mp.exp(_log_abs(seq[last]) / last)
        if method != "regression":
            raise DomainError(f"Unknown growth estimate method {method!r}")

        start = max(1, len(seq) // 2)
        logs = [(n, _log_abs(seq[n])) for n in range(start, len(seq))]
        logs = [(n, y) for n, y in logs if y is not None]
        if window > 1:
            envelope = []
            for block in range(0, len(logs) - window + 1, window):
                envelope.append(max(logs[block:block + window], key=lambda point: point[1]))
            logs = envelope
        if len(logs) < 2:
            raise InsufficientSequenceError("Too few nonzero terms to fit a growth rate")
        return mp.exp(_least_squares_slope(logs, power_correction=window <= 1))


def decay_exponent(values: Sequence, window: Optional[int] = None) -> mp.mpf:
    return growth_exponent(values, window or settings.ENVELOPE_WINDOW)


def dump_recurrences(path: Optional[Path] = None) -> str:
    payload = {
        name.value: builtin(name).model_dump(mode="json")
        for name in RecurrenceName
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
        logger.info(f"[Recur] Dumped {len(payload)} recurrences to {path}")
    return text


def load_recurrences(path: Path) -> Dict[str, Recurrence]:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"Failed to load recurrences from {path}: {e}")
        raise DomainError(f"Cannot read recurrences from {path}: {e}")
    return {name: Recurrence.model_validate(entry) for name, entry in payload.items()}
