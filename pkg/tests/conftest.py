import numpy as np
import pytest

from nutfinsler.riemann import MetricSpec


class ConformalSphere(MetricSpec):
    """Round unit 4-sphere in stereographic coordinates, sectional curvature 1."""

    name = "sphere"

    def components(self, x):
        r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]
        c = 4.0 / ((1.0 + r2) * (1.0 + r2))
        return [[c * (1.0 if i == j else 0.0) for j in range(4)] for i in range(4)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def sphere():
    return ConformalSphere()


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion and return the verdict."""
    def record(number, label, value, tolerance, relation="<"):
        ok = value < tolerance if relation == "<" else value > tolerance
        line = (f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {label} = {value:.6g} "
                f"{relation} {tolerance:g}")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
