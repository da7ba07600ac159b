import logging
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import mpmath as mp

from app.core.arith import binom, is_integral, lcm_upto
from app.core.config import settings
from app.core.linforms import (
    a_explicit,
    a_trilog_at_one,
    a_trilog_explicit,
    coeffs_at_one,
    coeffs_log_dilog,
    coeffs_trilog,
    coeffs_well_poised,
    integrality_report,
    thomae_sides,
    well_poised_sum_alternating,
    well_poised_sum_positive,
)
from app.core.numerics import (
    constant,
    direct_tail,
    double_integral,
    double_integral_identity,
    polylog,
    remainder,
    target_constants,
    to_mpf,
    working_digits,
    zeta3_accelerated,
    zeta_even,
)
from app.core.ratdecomp import (
    decompose,
    derivative_decomposition,
    eval_R,
    eval_R_derivative,
    polynomial_degree,
)
from app.core.recur import (
    builtin,
    char_poly_log_dilog,
    decay_exponent,
    extend,
    growth_exponent,
    is_proportional,
    leading_char_poly,
    root_moduli,
    theorem_rows,
    verify,
)
from app.db.models import (
    CheckResult,
    ConstantName,
    ConstructionId,
    LinearFormCoeffs,
    RecurrenceName,
    Suite,
    VerificationReport,
)

logger = logging.getLogger(__name__)

LOG_DILOG = ConstructionId.LOG_DILOG
TRILOG = ConstructionId.TRILOG
WELL_POISED = ConstructionId.WELL_POISED

SAMPLE_Z = [Fraction(-1), Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3)]
SAMPLE_T = [Fraction(7, 3), Fraction(-1, 2), Fraction(5), Fraction(-13, 4), Fraction(1, 7)]


def first_failure(ns: Iterable[int], predicate: Callable[[int], bool]) -> Optional[int]:
    for n in ns:
        if not predicate(n):
            return n
    return None


class VerificationService:
    """Runs the exact and numerical checks behind `verify`, one method per suite"""

    # Caps for checks that rebuild decompositions for every n
    IDENTITY_CAP = 20
    RECONSTRUCTION_CAP = 15
    REGULARISED_CAP = 20
    ORACLE_CAP = 8
    QUADRATURE_CAP = 3
    ORACLE_TOLERANCE = mp.mpf(10) ** -20
    QUADRATURE_TOLERANCE = mp.mpf(10) ** -6
    GROWTH_TOLERANCE = {
        RecurrenceName.THM1: 0.02,
        RecurrenceName.THM2: 0.02,
        RecurrenceName.THM3: 0.01,
    }
    DECAY_TOLERANCE = 0.03

    def __init__(self):
        self.suites: Dict[Suite, Callable[[int], List[CheckResult]]] = {
            Suite.RECURRENCES: self.recurrences,
            Suite.INTEGRALITY: self.integrality,
            Suite.IDENTITIES: self.identities,
            Suite.ASYMPTOTICS: self.asymptotics,
            Suite.ORACLES: self.oracles,
        }

    def run(self, suite: Suite, max_n: int) -> VerificationReport:
        suite = Suite(suite)
        selected = list(self.suites) if suite == Suite.ALL else [suite]
        checks: List[CheckResult] = []
        for name in selected:
            logger.info(f"[Verify] Running {name.value} suite up to n={max_n}")
            checks.extend(self.suites[name](max_n))
        passed = all(check.passed for check in checks if check.strict)
        for check in checks:
            if check.passed:
                logger.debug(f"✅ {check.name}")
            elif check.strict:
                logger.error(f"❌ {check.name}: {check.detail} (n={check.counterexample})")
            else:
                logger.warning(f"⚠️ {check.name} (informational): {check.detail}")
        return VerificationReport(suite=suite, max_n=max_n, passed=passed, checks=checks)

    @staticmethod
    def _result(name: str, suite: Suite, failure: Optional[int], detail: str = "", strict: bool = True) -> CheckResult:
        return CheckResult(
            name=name,
            suite=suite,
            passed=failure is None,
            strict=strict,
            detail=detail if failure is None else f"{detail} fails at n={failure}".strip(),
            counterexample=failure,
        )

    # ---------------- recurrences ----------------

    def _recurrence_check(self, name: str, rec_name: RecurrenceName, rows: Sequence[LinearFormCoeffs], max_n: int):
        rec = builtin(rec_name)
        results = []
        n_range = range(rec.valid_from, max_n + 1)
        for field in ("a", "b", "b_tilde", "b_tilde2"):
            values = [getattr(row, field) for row in rows]
            if any(value is None for value in values):
                continue
            outcome = verify(rec, values, n_range)
            results.append(
                self._result(f"{name} {field}", Suite.RECURRENCES, outcome.first_failure,
                             f"{rec_name.value} on n={rec.valid_from}..{max_n}")
            )
        return results

    def recurrences(self, max_n: int) -> List[CheckResult]:
        checks: List[CheckResult] = []
        log_dilog = [coeffs_log_dilog(n, -1) for n in range(max_n + 2)]
        checks += self._recurrence_check("thm1 construction", RecurrenceName.THM1, log_dilog, max_n)

        well_poised = [coeffs_well_poised(n) for n in range(max_n + 2)]
        checks += self._recurrence_check("thm3 construction", RecurrenceName.THM3, well_poised, max_n)

        capped = min(max_n, self.REGULARISED_CAP)
        regularised = [coeffs_at_one(TRILOG, n) for n in range(capped + 2)]
        checks += self._recurrence_check("thm2 regularised", RecurrenceName.THM2, regularised, capped)
        generated = theorem_rows(RecurrenceName.THM2, capped)
        failure = first_failure(
            range(capped + 1),
            lambda n: (generated[n].a, generated[n].b_tilde, generated[n].b_tilde2)
            == (regularised[n].a, regularised[n].b_tilde, regularised[n].b_tilde2),
        )
        checks.append(self._result("thm2 initial data vs regularisation", Suite.RECURRENCES, failure))

        apery = builtin(RecurrenceName.APERY_Z2)
        upto = max(max_n, 100)
        explicit = [a_explicit(LOG_DILOG, n, 1) for n in range(upto + 2)]
        outcome = verify(apery, explicit, range(1, upto + 1))
        checks.append(self._result("apery-z2 explicit a", Suite.RECURRENCES, outcome.first_failure))
        apery_rows = [coeffs_at_one(LOG_DILOG, n) for n in range(capped + 2)]
        checks += self._recurrence_check("apery-z2 regularised", RecurrenceName.APERY_Z2, apery_rows, capped)

        for rec_name, closed_form in (
            (RecurrenceName.THM1, lambda n: a_explicit(LOG_DILOG, n, -1)),
            (RecurrenceName.THM2, a_trilog_at_one),
            (RecurrenceName.THM3, well_poised_sum_positive),
        ):
            extended = extend(builtin(rec_name), [closed_form(n) for n in range(3)], max_n)
            failure = first_failure(range(len(extended)), lambda n: extended[n] == closed_form(n))
            checks.append(self._result(f"{rec_name.value} extend vs closed form", Suite.RECURRENCES, failure))
        return checks

    # ---------------- integrality ----------------

    def _inclusions(self, name: str, rows: Sequence[LinearFormCoeffs]) -> List[CheckResult]:
        """One result per inclusion label, failing at the first row that breaks it"""
        outcome: Dict[str, dict] = {}
        for row in rows:
            for check in integrality_report(row).checks:
                entry = outcome.setdefault(check.label, {"strict": check.strict, "failure": None})
                if not check.passed and entry["failure"] is None:
                    entry["failure"] = row.n
        return [
            self._result(f"{name} {label}", Suite.INTEGRALITY, entry["failure"], strict=entry["strict"])
            for label, entry in outcome.items()
        ]

    def integrality(self, max_n: int) -> List[CheckResult]:
        checks: List[CheckResult] = []
        capped = min(max_n, self.IDENTITY_CAP)

        def residues_integral(n):
            pf = decompose(LOG_DILOG, n)
            D = lcm_upto(n)
            return all(is_integral(pf.A(k)) for k in range(n + 1)) and all(is_integral(D * q) for q in pf.poly_part)

        checks.append(self._result("log-dilog residues and D_n B(t)", Suite.INTEGRALITY,
                                   first_failure(range(min(max_n, 30) + 1), residues_integral)))

        def derivative_integral(n):
            pf = derivative_decomposition(decompose(LOG_DILOG, n), 1)
            return all(is_integral(lcm_upto(n) ** 2 * q) for q in pf.poly_part)

        checks.append(self._result("log-dilog D_n^2 B~(t)", Suite.INTEGRALITY, first_failure(range(capped + 1), derivative_integral)))

        def trilog_polynomials(n):
            base = decompose(TRILOG, n)
            D, D2 = lcm_upto(n), lcm_upto(2 * n)
            first = derivative_decomposition(base, 1)
            second = derivative_decomposition(base, 2)
            return all(is_integral(D * D2 * q) for q in first.poly_part) and all(
                is_integral(D * D2 ** 2 * q) for q in second.poly_part
            )

        checks.append(self._result("trilog derivative polynomial parts", Suite.INTEGRALITY,
                                   first_failure(range(min(max_n, 10) + 1), trilog_polynomials)))

        def well_poised_scaled(n):
            pf = decompose(WELL_POISED, n)
            D = lcm_upto(n)
            poles = all(
                is_integral(2 * pf.A(k)) and is_integral(2 * D * pf.A(k, 1)) and is_integral(2 * D ** 2 * pf.A(k, 2))
                for k in range(n + 1)
            )
            return poles and all(is_integral(2 * D ** 3 * q) for q in pf.poly_part)

        checks.append(self._result("well-poised scaled decomposition", Suite.INTEGRALITY,
                                   first_failure(range(min(max_n, self.RECONSTRUCTION_CAP) + 1), well_poised_scaled)))

        for z in SAMPLE_Z:
            checks += self._inclusions(f"log-dilog z={z}", [coeffs_log_dilog(n, z) for n in range(capped + 1)])
            checks += self._inclusions(f"trilog z={z}", [coeffs_trilog(n, z) for n in range(capped + 1)])
        checks += self._inclusions("trilog z=1", theorem_rows(RecurrenceName.THM2, max_n))
        checks += self._inclusions("well-poised construction", [coeffs_well_poised(n) for n in range(capped + 1)])
        checks += self._inclusions("well-poised extended", theorem_rows(RecurrenceName.THM3, max_n))
        return checks

    # ---------------- identities ----------------

    def identities(self, max_n: int) -> List[CheckResult]:
        checks: List[CheckResult] = []
        capped = min(max_n, self.IDENTITY_CAP)

        def thomae(n):
            left, right = thomae_sides(n)
            return left == right

        checks.append(self._result("thomae transformation", Suite.IDENTITIES, first_failure(range(max_n + 1), thomae)))
        checks.append(self._result(
            "well-poised double sums agree", Suite.IDENTITIES,
            first_failure(range(capped + 1), lambda n: well_poised_sum_alternating(n) == well_poised_sum_positive(n)),
        ))
        checks.append(self._result(
            "trilog closed forms at z=1", Suite.IDENTITIES,
            first_failure(range(max_n + 1), lambda n: a_trilog_explicit(n, 1) == a_trilog_at_one(n)),
        ))
        for z in (Fraction(-1), Fraction(1, 2)):
            checks.append(self._result(
                f"log-dilog a closed form z={z}", Suite.IDENTITIES,
                first_failure(range(capped + 1), lambda n: coeffs_log_dilog(n, z).a == a_explicit(LOG_DILOG, n, z)),
            ))
            checks.append(self._result(
                f"trilog a closed form z={z}", Suite.IDENTITIES,
                first_failure(range(capped + 1), lambda n: coeffs_trilog(n, z).a == a_explicit(TRILOG, n, z)),
            ))
        checks.append(self._result(
            "well-poised a closed form", Suite.IDENTITIES,
            first_failure(range(capped + 1), lambda n: coeffs_well_poised(n).a == a_explicit(WELL_POISED, n, -1)),
        ))

        def residues_closed_form(n):
            pf = decompose(LOG_DILOG, n)
            return all(pf.A(k) == (-1) ** k * binom(n, k) * binom(n + k, k) ** 2 for k in range(n + 1))

        checks.append(self._result("log-dilog residue formula", Suite.IDENTITIES,
                                   first_failure(range(min(max_n, 30) + 1), residues_closed_form)))

        reconstruction_range = range(min(max_n, self.RECONSTRUCTION_CAP) + 1)
        for c in ConstructionId:
            def reconstructs(n, c=c):
                base = decompose(c, n)
                forms = [base, derivative_decomposition(base, 1)]
                if c == TRILOG:
                    forms.append(derivative_decomposition(base, 2))
                return all(
                    form.evaluate(t) == eval_R_derivative(c, n, t, form.derivative)
                    for form in forms
                    for t in SAMPLE_T
                )

            checks.append(self._result(f"{c.value} reconstruction", Suite.IDENTITIES,
                                       first_failure(reconstruction_range, reconstructs)))

            expected_degree = {LOG_DILOG: lambda n: n - 1, TRILOG: lambda n: 2 * n - 1, WELL_POISED: lambda n: n - 2}[c]
            checks.append(self._result(
                f"{c.value} polynomial degree", Suite.IDENTITIES,
                first_failure(
                    reconstruction_range,
                    lambda n, c=c, expected=expected_degree: polynomial_degree(c, n) == max(expected(n), -1)
                    and decompose(c, n).poly_degree == max(expected(n), -1),
                ),
            ))

        def well_poised_symmetry(n):
            pf = decompose(WELL_POISED, n)
            values = all(eval_R(WELL_POISED, n, t) == (-1) ** n * eval_R(WELL_POISED, n, -t - n) for t in SAMPLE_T)
            poles = all(
                (-1) ** k * pf.A(k, primes) == -((-1) ** (n - k)) * pf.A(n - k, primes)
                for k in range(n + 1)
                for primes in (0, 2)
            )
            return values and poles

        checks.append(self._result("well-poised symmetry", Suite.IDENTITIES,
                                   first_failure(reconstruction_range, well_poised_symmetry)))
        return checks

    # ---------------- asymptotics ----------------

    def _remainder_sequences(self, rows: Sequence[LinearFormCoeffs], digits: int) -> Dict[str, list]:
        sequences: Dict[str, list] = {}
        targets = target_constants(rows[0])
        with mp.workdps(digits):
            for field in rows[0].b_fields():
                L = targets[field](digits)
                sequences[field] = [to_mpf(row.a) * L - to_mpf(getattr(row, field)) for row in rows]
        return sequences

    def asymptotics(self, max_n: int) -> List[CheckResult]:
        checks: List[CheckResult] = []
        for rec_name in (RecurrenceName.THM1, RecurrenceName.THM2, RecurrenceName.THM3):
            rec = builtin(rec_name)
            N = settings.ASYMPTOTIC_N[rec_name.value]
            rows = theorem_rows(rec_name, N)
            dominant, subdominant = root_moduli(rec)

            growth = growth_exponent([row.a for row in rows])
            deviation = abs(growth / dominant - 1)
            checks.append(CheckResult(
                name=f"{rec_name.value} growth of a_n",
                suite=Suite.ASYMPTOTICS,
                passed=deviation <= self.GROWTH_TOLERANCE[rec_name],
                detail=f"estimate {mp.nstr(growth, 10)} vs lambda_3 {mp.nstr(dominant, 10)} at N={N}",
            ))

            digits = working_digits(N, rec_name)
            for field, values in self._remainder_sequences(rows, digits).items():
                decay = decay_exponent(values)
                with mp.workdps(30):
                    deviation = abs(mp.log(decay) / mp.log(subdominant) - 1)
                checks.append(CheckResult(
                    name=f"{rec_name.value} decay of {field} remainders",
                    suite=Suite.ASYMPTOTICS,
                    passed=deviation <= self.DECAY_TOLERANCE,
                    detail=f"estimate {mp.nstr(decay, 10)} vs |lambda_1,2| {mp.nstr(subdominant, 10)} at N={N}",
                ))

            with mp.workdps(40):
                product = subdominant ** 2 * dominant
                expected = abs(to_mpf(rec.char_poly[-1]) / to_mpf(rec.char_poly[0]))
                vieta = abs(product - expected) < mp.mpf(10) ** -25
            checks.append(CheckResult(name=f"{rec_name.value} root product", suite=Suite.ASYMPTOTICS, passed=vieta))

        for rec_name in RecurrenceName:
            rec = builtin(rec_name)
            checks.append(CheckResult(
                name=f"{rec_name.value} leading terms match characteristic polynomial",
                suite=Suite.ASYMPTOTICS,
                passed=is_proportional(leading_char_poly(rec), rec.char_poly),
            ))
        checks.append(CheckResult(
            name="log-dilog characteristic polynomial at z=-1",
            suite=Suite.ASYMPTOTICS,
            passed=is_proportional(char_poly_log_dilog(-1), builtin(RecurrenceName.THM1).char_poly),
        ))
        return checks

    # ---------------- oracles ----------------

    def _close(self, left, right, tolerance) -> bool:
        with mp.workdps(60):
            return abs(left - right) < tolerance

    def oracles(self, max_n: int) -> List[CheckResult]:
        checks: List[CheckResult] = []
        digits = 25

        def polylog_series(z):
            return (
                self._close(direct_tail(LOG_DILOG, 0, z, 0, digits), polylog(1, z, digits), self.ORACLE_TOLERANCE)
                and self._close(direct_tail(LOG_DILOG, 0, z, 1, digits), polylog(2, z, digits), self.ORACLE_TOLERANCE)
                and self._close(direct_tail(TRILOG, 0, z, 2, digits), polylog(3, z, digits), self.ORACLE_TOLERANCE)
            )

        checks.append(CheckResult(
            name="polylog vs direct series",
            suite=Suite.ORACLES,
            passed=all(polylog_series(z) for z in SAMPLE_Z),
        ))

        capped = min(max_n, self.ORACLE_CAP)
        cases = [(LOG_DILOG, z, lambda n, z=z: coeffs_log_dilog(n, z)) for z in SAMPLE_Z]
        cases += [(TRILOG, z, lambda n, z=z: coeffs_trilog(n, z)) for z in SAMPLE_Z]
        cases.append((WELL_POISED, Fraction(-1), coeffs_well_poised))
        names = {"r": 0, "r_tilde": 1, "r_tilde2": 2}
        for c, z, build in cases:
            def agrees(n, c=c, z=z, build=build):
                remainders = remainder(build(n), digits, adaptive=True)
                return all(
                    self._close(value, direct_tail(c, n, z, names[key], digits), self.ORACLE_TOLERANCE)
                    for key, value in remainders.items()
                )

            checks.append(self._result(f"{c.value} z={z} remainder vs direct series", Suite.ORACLES,
                                       first_failure(range(capped + 1), agrees)))

        with mp.workdps(60):
            zeta3_ok = abs(constant(ConstantName.ZETA3, 50) - zeta3_accelerated(50)) < mp.mpf(10) ** -48
            zeta2_ok = abs(zeta_even(1, 50) - mp.pi ** 2 / 6) < mp.mpf(10) ** -48
            log2_ok = abs(constant(ConstantName.LOG2, 50) - polylog(1, Fraction(1, 2), 50)) < mp.mpf(10) ** -48
        checks.append(CheckResult(name="zeta(3) by two methods", suite=Suite.ORACLES, passed=zeta3_ok))
        checks.append(CheckResult(name="zeta(2) from Bernoulli numbers", suite=Suite.ORACLES, passed=zeta2_ok))
        checks.append(CheckResult(name="log 2 as Li_1(1/2)", suite=Suite.ORACLES, passed=log2_ok))

        beukers = double_integral(0, 1)
        checks.append(CheckResult(
            name="double integral at n=0, z=1 is zeta(2)",
            suite=Suite.ORACLES,
            passed=self._close(beukers, constant(ConstantName.ZETA2, 20), self.QUADRATURE_TOLERANCE),
            detail=f"integral {mp.nstr(beukers, 15)}",
        ))

        def identity_holds(n):
            lhs, rhs = double_integral_identity(n, Fraction(1, 2))
            return self._close(lhs, rhs, self.QUADRATURE_TOLERANCE)

        checks.append(self._result("double integral identity z=1/2", Suite.ORACLES,
                                   first_failure(range(min(max_n, self.QUADRATURE_CAP) + 1), identity_holds)))

        def target_constant(n):
            row = coeffs_well_poised(n)
            with mp.workdps(60):
                a, b_tilde = to_mpf(row.a), to_mpf(row.b_tilde)
                with_zeta3 = abs(a * 3 * mp.zeta(3) / 2 - b_tilde)
                with_zeta2 = abs(a * 3 * mp.zeta(2) / 2 - b_tilde)
            return with_zeta3 < 1 and with_zeta2 > 1

        checks.append(self._result("well-poised r~ approximates 3 zeta(3)/2, not 3 zeta(2)/2", Suite.ORACLES,
                                   first_failure(range(1, min(max(max_n, 1), 10) + 1), target_constant)))
        return checks


verification_service = VerificationService()
