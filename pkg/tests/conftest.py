import numpy as np
import pytest

from polarbench.kernels import CodeSpec, kernel_arikan, kernel_linear

# ell=4 binary kernel used across general-kernel tests (two nested butterflies)
G4 = [[1, 0, 0, 0], [1, 1, 0, 0], [1, 0, 1, 0], [1, 1, 1, 1]]


@pytest.fixture(scope="session")
def arikan():
    return kernel_arikan()


@pytest.fixture(scope="session")
def k4():
    return kernel_linear(G4)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_llr(rng, n, scale=2.0):
    return rng.normal(0.0, scale, n)


def spec_all_free(kernel, m) -> CodeSpec:
    return CodeSpec(kernel, m, {})


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # surface the acceptance verdict lines even under captured output
    try:
        import test_acceptance
    except ImportError:
        return
    lines = getattr(test_acceptance, "ACCEPTANCE_LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
