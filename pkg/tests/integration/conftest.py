"""
Pytest configuration for integration tests
"""

from dataclasses import dataclass
import io
import json

import pandas as pd
import pytest

from sorbd.cli import main


@dataclass
class CliResult:
    """Exit code and captured streams of one CLI invocation"""
    code: int
    out: str
    err: str

    def table(self) -> pd.DataFrame:
        return pd.read_csv(io.StringIO(self.out))

    def error(self) -> dict:
        """Last JSON line printed to stderr"""
        lines = [line for line in self.err.splitlines() if line.startswith('{')]
        return json.loads(lines[-1])


@pytest.fixture
def run_cli(capsys):
    """Run sorbd.cli.main with the given arguments and capture its output"""
    def _run(*argv: str) -> CliResult:
        capsys.readouterr()
        code = main(list(argv))
        captured = capsys.readouterr()
        return CliResult(code, captured.out, captured.err)
    return _run
