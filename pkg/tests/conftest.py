import mpmath
import pytest

from zetagap import pipeline
from zetagap.config import ScanConfig

mpmath.mp.dps = 30

# PASS/FAIL lines collected by the acceptance tests, echoed after the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def zeros_5000():
    """Certified critical-line zeros on (14, 5000]."""
    return pipeline.critical_zeros(14.0, 5000.0, 1e-10)


@pytest.fixture(scope="session")
def zeros_1000(zeros_5000):
    from zetagap.zerofinder import CertifiedZeros

    return CertifiedZeros([z for z in zeros_5000 if z.gamma <= 1000.0], 14.0, 1000.0)


@pytest.fixture(scope="session")
def zprime_20_500():
    return pipeline.zeta_prime_zeros(20.0, 500.0, 4.0, 1e-10)


@pytest.fixture(scope="session")
def scan_1000():
    return pipeline.compute_scan(ScanConfig(t_min=14.0, t_max=1000.0))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
