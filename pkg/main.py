import json
import logging
import sys
import traceback
from typing import List, Optional

from app.cli import attach_negative_values, build_parser
from app.core.config import settings
from app.core.errors import ApproximationError

logging.basicConfig(
    level=settings.LOG_LEVEL,
    stream=sys.stderr,
    format="%(asctime)s %(levelname)s %(name)s: %(message)s",
)
logger = logging.getLogger(__name__)


def report_error(detail: str) -> None:
    sys.stderr.write(json.dumps({"detail": detail}) + "\n")


# ---------------- Error Handling ----------------
def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    args = parser.parse_args(attach_negative_values(list(argv)))
    try:
        return args.func(args)
    except ApproximationError as e:
        logger.error(f"{type(e).__name__}: {e.detail}")
        report_error(e.detail)
        return e.exit_code
    except Exception as e:
        logger.error(f"Unhandled exception: {e}\n{traceback.format_exc()}")
        report_error("Internal error")
        return 1


if __name__ == "__main__":
    sys.exit(run())
