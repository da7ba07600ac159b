import argparse
import re
from typing import List

from .compute import register as register_compute
from .digits import register as register_digits
from .roots import register as register_roots
from .verify import register as register_verify

RATIONAL_OPTIONS = ("--z",)
NEGATIVE_RATIONAL = re.compile(r"^-\d+(/\d+)?$")


def attach_negative_values(argv: List[str]) -> List[str]:
    # argparse reads "-1/2" as an option flag, so "--z -1/2" becomes "--z=-1/2"
    joined: List[str] = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token in RATIONAL_OPTIONS and i + 1 < len(argv) and NEGATIVE_RATIONAL.match(argv[i + 1]):
            joined.append(f"{token}={argv[i + 1]}")
            i += 2
            continue
        joined.append(token)
        i += 1
    return joined


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polylog-apery",
        description="Exact rational approximations to polylogarithms and zeta values",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Include all commands
    register_compute(subparsers)
    register_verify(subparsers)
    register_digits(subparsers)
    register_roots(subparsers)
    return parser
