import logging

from app.db.models import CheckResult, OutputFormat, Suite
from services.verification_service import verification_service

from .dependencies import build_config, emit, render, render_object

logger = logging.getLogger(__name__)

CHECK_COLUMNS = list(CheckResult.model_fields)


def verify(args) -> int:
    cfg = build_config(
        n_max=args.max_n,
        suite=args.suite,
        output_format=args.format,
        output_path=args.out,
    )
    report = verification_service.run(cfg.suite, cfg.n_max)
    if cfg.output_format == OutputFormat.CSV:
        text = render([check.model_dump(mode="json") for check in report.checks], CHECK_COLUMNS, cfg.output_format)
    else:
        text = render_object(report.model_dump(mode="json"))
    emit(text, cfg.output_path)
    failed = [check.name for check in report.checks if check.strict and not check.passed]
    if failed:
        logger.error(f"{len(failed)} check(s) failed: {', '.join(failed)}")
        return 1
    logger.info(f"All {len(report.checks)} checks of suite {cfg.suite.value} passed")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="Run a verification suite")
    parser.add_argument("--suite", required=True, choices=[s.value for s in Suite])
    parser.add_argument("--max-n", dest="max_n", type=int, required=True)
    parser.add_argument("--format", default=OutputFormat.JSON.value, choices=[f.value for f in OutputFormat])
    parser.add_argument("--out", default="-")
    parser.set_defaults(func=verify)
