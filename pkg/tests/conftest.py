import numpy as np
import pytest

from kernel_unitroot import Series, epanechnikov_kernel, uniform_kernel

ACCEPTANCE_LINES = []


@pytest.fixture(params=["uniform", "epanechnikov"])
def kernel(request):
    return {"uniform": uniform_kernel, "epanechnikov": epanechnikov_kernel}[request.param]()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_walk(rng, T, sigma=1.0, x0=0.0):
    return Series(np.concatenate([[x0], x0 + np.cumsum(sigma * rng.standard_normal(T))]))


@pytest.fixture
def criterion():
    """Record a one-line verdict for an acceptance criterion, then return the flag."""

    def record(number, title, passed, detail=""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title}  {detail}".rstrip())
        print(ACCEPTANCE_LINES[-1])
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
