from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

_acceptance_lines = []


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def reliability_text():
    return (FIXTURES / "reliability.nfr").read_text(encoding="utf-8")


@pytest.fixture
def project_text():
    return (FIXTURES / "project.nfr").read_text(encoding="utf-8")


@pytest.fixture
def record_criterion():
    """Collects one PASS/FAIL line per acceptance criterion for the summary."""
    def record(label, passed, seconds):
        _acceptance_lines.append(f"{'PASS' if passed else 'FAIL'}  {label}  ({seconds:.2f}s)")
    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
