import numpy as np
import pytest

from hypercurrent import BathPair, Boxcar, Constant, DoubleDot

FIG2A_T = DoubleDot(0.1, 0.1, 0.0)
FIG2B_T = DoubleDot(6.5, 10.0, 0.0)


def fig2a_baths(delta_mu):
    return BathPair.from_temperatures(0.8, -0.5 * delta_mu, 1.0, 0.5 * delta_mu)


def fig2b_baths(delta_T):
    return BathPair.from_temperatures(5.0 - 0.5 * delta_T, 6.0,
                                      5.0 + 0.5 * delta_T, 0.0)


def random_baths(rng):
    T_L, T_R = rng.uniform(0.2, 5.0, size=2)
    mu_L, mu_R = rng.uniform(-3.0, 3.0, size=2)
    return BathPair.from_temperatures(T_L, mu_L, T_R, mu_R)


def random_transmission(rng):
    kind = rng.integers(3)
    if kind == 0:
        return Constant(float(rng.uniform(0.05, 1.0)))
    if kind == 1:
        lo = float(rng.uniform(-3, 2))
        return Boxcar(float(rng.uniform(0.05, 1.0)), lo, lo + float(rng.uniform(0.2, 4)))
    return DoubleDot(float(rng.uniform(0.05, 5)), float(rng.uniform(0.05, 10)),
                     float(rng.uniform(-2, 2)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# --------------------------------------------------------------------------
# acceptance summary: one line per criterion, printed after the run

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_line():
    def record(number, title, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title}"
        if detail:
            line += f"  ({detail})"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES,
                           key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
