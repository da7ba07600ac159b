from enum import Enum
from fractions import Fraction
from typing import Annotated, Any, Dict, List, Optional

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    field_validator,
    model_validator,
)

from app.core.errors import PoleError


def parse_rational(value: Any) -> Fraction:
    """Accept Fraction, int or a "p/q" string; floats are rejected to keep values exact"""
    if isinstance(value, bool):
        raise ValueError("Booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip().replace(" ", ""))
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"Invalid rational string {value!r}: {e}")
    raise ValueError(f"Cannot read {type(value).__name__} as an exact rational")


def format_rational(value: Fraction) -> str:
    """Canonical transport form: -p/q, denominator omitted when 1"""
    return str(Fraction(value))


BigRat = Annotated[
    Fraction,
    BeforeValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str, when_used="json"),
]


# Base model configuration
class ExactModel(BaseModel):
    model_config = ConfigDict(
        populate_by_name=True,
        arbitrary_types_allowed=True,
    )


class ConstructionId(str, Enum):
    LOG_DILOG = "log-dilog"
    TRILOG = "trilog"
    WELL_POISED = "well-poised"


class BasisAnchor(str, Enum):
    SHIFTED_FALLING = "shifted-falling"
    RISING = "rising"


class RecurrenceName(str, Enum):
    THM1 = "thm1"
    THM2 = "thm2"
    THM3 = "thm3"
    APERY_Z2 = "apery-z2"


class ConstantName(str, Enum):
    LOG2 = "log2"
    PI = "pi"
    ZETA2 = "zeta2"
    ZETA3 = "zeta3"
    PI2_12 = "pi2_12"


class Suite(str, Enum):
    RECURRENCES = "recurrences"
    INTEGRALITY = "integrality"
    IDENTITIES = "identities"
    ASYMPTOTICS = "asymptotics"
    ORACLES = "oracles"
    ALL = "all"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class RowSource(str, Enum):
    CONSTRUCTION = "construction"
    RECURRENCE = "recurrence"
    REGULARIZED = "regularized"


class PartialFraction(ExactModel):
    """R(t) (or one of its derivative forms) = sum_k sum_o c[k][o-1]/(t+k)^o + P(t)

    ``poly_part`` holds P in the basis (t-1)(t-2)...(t-j)/j!.
    """

    construction: ConstructionId
    n: int = Field(..., ge=0)
    derivative: int = Field(0, ge=0, le=2)
    pole_order: int = Field(..., ge=1)
    pole_coeffs: List[List[BigRat]]
    poly_part: List[BigRat] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_shape(self):
        if len(self.pole_coeffs) != self.n + 1:
            raise ValueError(f"Expected {self.n + 1} pole rows, got {len(self.pole_coeffs)}")
        for row in self.pole_coeffs:
            if len(row) != self.pole_order:
                raise ValueError(f"Pole row has {len(row)} entries, expected {self.pole_order}")
        return self

    def coefficient(self, k: int, order: int) -> Fraction:
        """Coefficient of 1/(t+k)^order (zero outside the stored range)"""
        if order < 1 or order > self.pole_order:
            return Fraction(0)
        return self.pole_coeffs[k][order - 1]

    def A(self, k: int, primes: int = 0) -> Fraction:
        """A_k, A_k', A_k'' counted down from the highest pole order"""
        return self.coefficient(k, self.pole_order - primes)

    @property
    def poly_degree(self) -> int:
        return len(self.poly_part) - 1

    def evaluate_poly(self, t: Fraction) -> Fraction:
        total = Fraction(0)
        basis = Fraction(1)
        for j, coefficient in enumerate(self.poly_part):
            if j > 0:
                basis = basis * (t - j) / j
            total += coefficient * basis
        return total

    def evaluate(self, t: Any) -> Fraction:
        t = parse_rational(t)
        total = Fraction(0)
        for k, row in enumerate(self.pole_coeffs):
            if t + k == 0:
                if any(row):
                    raise PoleError(f"t = {t} is a pole of the decomposition")
                continue
            for o, coefficient in enumerate(row, start=1):
                if coefficient:
                    total += coefficient / (t + k) ** o
        return total + self.evaluate_poly(t)


class LinearFormCoeffs(ExactModel):
    """One row (n; a, b, b~, b~~) of an approximation table"""

    construction: ConstructionId
    n: int = Field(..., ge=0)
    z: BigRat
    a: BigRat
    b: Optional[BigRat] = None
    b_tilde: Optional[BigRat] = None
    b_tilde2: Optional[BigRat] = None
    source: RowSource = RowSource.CONSTRUCTION

    def b_fields(self) -> Dict[str, Fraction]:
        """Present b-fields keyed by field name, in table order"""
        values = {"b": self.b, "b_tilde": self.b_tilde, "b_tilde2": self.b_tilde2}
        return {name: value for name, value in values.items() if value is not None}


class PolylogForm(ExactModel):
    """sum_s coefficients[s] * Li_s(z) - constant"""

    construction: ConstructionId
    n: int
    derivative: int
    z: BigRat
    coefficients: Dict[int, BigRat]
    constant: BigRat


class Recurrence(ExactModel):
    """sum_i coeff_polys[i](n) * x_{n+1-i} = 0 for n >= valid_from"""

    name: RecurrenceName
    order: int = Field(..., ge=2, le=3)
    coeff_polys: List[List[BigRat]] = Field(description="Ascending coefficients in n")
    valid_from: int = Field(..., ge=1)
    char_poly: List[BigRat] = Field(description="Descending coefficients in lambda")

    @model_validator(mode="after")
    def check_order(self):
        if len(self.coeff_polys) != self.order + 1:
            raise ValueError(f"{self.name.value}: need {self.order + 1} coefficient polynomials")
        if len(self.char_poly) != self.order + 1:
            raise ValueError(f"{self.name.value}: characteristic polynomial must have degree {self.order}")
        return self


class VerifyResult(BaseModel):
    ok: bool
    first_failure: Optional[int] = None


class InclusionCheck(ExactModel):
    label: str
    field: str
    factor: BigRat
    scaled: BigRat
    passed: bool
    strict: bool = True
    note: Optional[str] = None


class IntegralityReport(ExactModel):
    construction: ConstructionId
    n: int
    z: BigRat
    checks: List[InclusionCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks if check.strict)

    def check(self, label: str) -> InclusionCheck:
        for item in self.checks:
            if item.label == label:
                return item
        raise KeyError(label)


class CheckResult(BaseModel):
    name: str
    suite: Suite
    passed: bool
    strict: bool = True
    detail: str = ""
    counterexample: Optional[int] = None


class VerificationReport(BaseModel):
    suite: Suite
    max_n: int
    passed: bool
    checks: List[CheckResult]


class RunConfig(ExactModel):
    construction: Optional[ConstructionId] = None
    n_max: int = Field(0, ge=0)
    z: Optional[BigRat] = None
    digits: int = Field(30, ge=1)
    suite: Optional[Suite] = None
    output_format: OutputFormat = OutputFormat.JSON
    output_path: str = "-"

    @field_validator("z")
    @classmethod
    def check_z_disc(cls, value: Optional[Fraction]) -> Optional[Fraction]:
        if value is None:
            return value
        if value == 0 or abs(value) > 1:
            raise ValueError(f"z must satisfy 0 < |z| <= 1, got {value}")
        if value == 1:
            raise ValueError("z = 1 is only reachable through theorem mode (trilog without --z)")
        return value

    @model_validator(mode="after")
    def check_construction_z(self):
        if self.construction == ConstructionId.WELL_POISED and self.z is not None:
            raise ValueError("well-poised construction is fixed at z = -1; --z is not allowed")
        if self.construction == ConstructionId.LOG_DILOG and self.z is None:
            raise ValueError("log-dilog construction requires --z")
        return self

    @property
    def theorem_mode(self) -> bool:
        return self.construction == ConstructionId.TRILOG and self.z is None
