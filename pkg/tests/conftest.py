import numpy as np
import pytest
from hypothesis import strategies as st


def unit_complex(rng: np.random.Generator, lo: float = 0.3, hi: float = 1.5) -> complex:
    r = rng.uniform(lo, hi)
    return complex(r * np.exp(1j * rng.uniform(0, 2 * np.pi)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def complex_st(lo: float = 0.3, hi: float = 1.5):
    return st.builds(lambda r, th: complex(r * np.exp(1j * th)),
                     st.floats(lo, hi), st.floats(0, 2 * np.pi))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
