import numpy as np
import pytest

from jcwave.grid import make_grid


@pytest.fixture
def grid():
    return make_grid(512, 16.0)


@pytest.fixture
def big_grid():
    return make_grid(2048, 40.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# ---------------------------------------------------------------- acceptance report

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int("".join(c for c in k if c.isdigit())), k)):
        ok, detail = ACCEPTANCE[key]
        tr.write_line(f"criterion {key:4s} {'PASS' if ok else 'FAIL'}  {detail}")
    crits = {}
    for key, (ok, _) in ACCEPTANCE.items():
        n = int("".join(c for c in key if c.isdigit()))
        crits[n] = crits.get(n, True) and ok
    tr.write_line("")
    for n in sorted(crits):
        tr.write_line(f"CRITERION {n}: {'PASS' if crits[n] else 'FAIL'}")
