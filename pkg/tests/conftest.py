import math

import numpy as np
import pytest

from wernerwolf.boolfn import SignFunction
from wernerwolf.spectrum import AngleConfig, chsh_optimal_angles

SQRT2 = math.sqrt(2)


def naive_beta(f: SignFunction) -> np.ndarray:
    """Direct double sum ``2**-n sum_eps (-1)**(eps . s) f(eps)``, O(4**n)."""
    n = f.n
    out = np.zeros(2**n)
    for s in range(2**n):
        for eps in range(2**n):
            parity = bin(s & eps).count("1") % 2
            out[s] += (-1) ** parity * int(f.values[eps])
    return out / 2**n


def naive_bell(beta, theta) -> complex:
    """``sum_s beta(s) exp(i sum_j theta[j][s_j])`` with explicit loops."""
    n = len(theta)
    total = 0j
    for s in range(2**n):
        phase = sum(theta[j][(s >> j) & 1] for j in range(n))
        total += beta[s] * complex(math.cos(phase), math.sin(phase))
    return total


@pytest.fixture
def chsh():
    return SignFunction(2, [1, 1, 1, -1])


@pytest.fixture
def chsh_angles() -> AngleConfig:
    return chsh_optimal_angles()


# acceptance criterion -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
