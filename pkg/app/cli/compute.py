import logging
from typing import List

from app.core.linforms import coeffs_log_dilog, coeffs_trilog, coeffs_well_poised
from app.core.numerics import remainder
from app.core.recur import theorem_rows
from app.db.models import ConstructionId, LinearFormCoeffs, OutputFormat, RecurrenceName, RunConfig
from app.db.schemas import TABLE_COLUMNS, TableRow

from .dependencies import build_config, emit, render

logger = logging.getLogger(__name__)


def table_rows(cfg: RunConfig) -> List[LinearFormCoeffs]:
    if cfg.theorem_mode:
        return theorem_rows(RecurrenceName.THM2, cfg.n_max)
    if cfg.construction == ConstructionId.LOG_DILOG:
        return [coeffs_log_dilog(n, cfg.z) for n in range(cfg.n_max + 1)]
    if cfg.construction == ConstructionId.TRILOG:
        return [coeffs_trilog(n, cfg.z) for n in range(cfg.n_max + 1)]
    return [coeffs_well_poised(n) for n in range(cfg.n_max + 1)]


def compute(args) -> int:
    cfg = build_config(
        construction=args.construction,
        n_max=args.n,
        z=args.z,
        digits=args.digits,
        output_format=args.format,
        output_path=args.out,
    )
    logger.info(f"Computing {cfg.construction.value} rows n=0..{cfg.n_max}")
    table = []
    for row in table_rows(cfg):
        remainders = remainder(row, cfg.digits, adaptive=True)
        table.append(TableRow.from_row(row, remainders, cfg.digits).model_dump())
    emit(render(table, TABLE_COLUMNS, cfg.output_format), cfg.output_path)
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("compute", help="Approximation table for one construction")
    parser.add_argument("--construction", required=True, choices=[c.value for c in ConstructionId])
    parser.add_argument("--z", default=None, help="Rational P/Q, for example --z -1/2")
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--digits", type=int, default=30)
    parser.add_argument("--format", default=OutputFormat.JSON.value, choices=[f.value for f in OutputFormat])
    parser.add_argument("--out", default="-")
    parser.set_defaults(func=compute)
