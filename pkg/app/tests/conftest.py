import json
from fractions import Fraction

import pytest

from main import run


@pytest.fixture
def sample_z():
    return [Fraction(-1), Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3)]


@pytest.fixture
def cli(capsys):
    """Run the command line entry point, returning (exit code, stdout, stderr)"""

    def invoke(*argv):
        code = run(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return invoke


@pytest.fixture
def cli_json(cli):
    def invoke(*argv):
        code, out, _ = cli(*argv)
        assert code == 0, out
        return json.loads(out)

    return invoke
