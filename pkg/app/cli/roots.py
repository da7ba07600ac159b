import mpmath as mp

from app.core.recur import builtin, char_roots
from app.db.models import RecurrenceName, format_rational
from app.db.schemas import RootSchema, RootsReport, format_float

from .dependencies import emit, render_object


def roots(args) -> int:
    rec = builtin(args.recurrence)
    found = char_roots(rec, args.digits)
    with mp.workdps(args.digits + 10):
        schemas = [
            RootSchema(
                real=format_float(mp.re(root), args.digits),
                imag=format_float(mp.im(root), args.digits),
                modulus=format_float(abs(root), args.digits),
            )
            for root in found
        ]
    report = RootsReport(
        recurrence=rec.name.value,
        digits=args.digits,
        char_poly=[format_rational(c) for c in rec.char_poly],
        roots=schemas,
    )
    emit(render_object(report.model_dump()))
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("roots", help="Characteristic roots of a recurrence")
    parser.add_argument("--recurrence", required=True, choices=[r.value for r in RecurrenceName])
    parser.add_argument("--digits", type=int, default=30)
    parser.set_defaults(func=roots)
