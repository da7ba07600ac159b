from typing import Dict, List, Optional

import mpmath as mp
from pydantic import BaseModel, ConfigDict

from app.db.models import LinearFormCoeffs, format_rational


def format_float(value, digits: int) -> str:
    """Fixed notation at `digits` significant digits, never scientific"""
    return mp.nstr(value, digits, min_fixed=-mp.inf, max_fixed=mp.inf)


TABLE_COLUMNS = [
    "n", "construction", "z", "source",
    "a", "b", "b_tilde", "b_tilde2",
    "r", "r_tilde", "r_tilde2",
]


class TableRow(BaseModel):
    n: int
    construction: str
    z: str
    source: str
    a: str
    b: Optional[str] = None
    b_tilde: Optional[str] = None
    b_tilde2: Optional[str] = None
    r: Optional[str] = None
    r_tilde: Optional[str] = None
    r_tilde2: Optional[str] = None

    model_config = ConfigDict(from_attributes=True)

    @classmethod
    def from_row(cls, row: LinearFormCoeffs, remainders: Dict[str, object], digits: int) -> "TableRow":
        exact = {name: format_rational(value) for name, value in row.b_fields().items()}
        floats = {name: format_float(value, digits) for name, value in remainders.items()}
        return cls(
            n=row.n,
            construction=row.construction.value,
            z=format_rational(row.z),
            source=row.source.value,
            a=format_rational(row.a),
            **exact,
            **floats,
        )


class DigitsReport(BaseModel):
    constant: str
    via: str
    n: int
    digits: int
    approximation: str
    reference: str
    error: str
    achieved: bool


class RootSchema(BaseModel):
    real: str
    imag: str
    modulus: str


class RootsReport(BaseModel):
    recurrence: str
    digits: int
    char_poly: List[str]
    roots: List[RootSchema]
