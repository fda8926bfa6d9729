import pytest

from fracineq.corpus import DEFAULT_FUNCTIONS, builtin
from fracineq.quad import Interval

UNIT = Interval(0.0, 1.0)
ALPHAS = (1.0, 1.25, 1.5, 2.0, 2.5, 3.0)
LAMBDAS = (0.0, 0.25, 0.5, 0.75, 1.0)
XS = tuple(UNIT.interior_grid(9))


@pytest.fixture(scope="session")
def corpus():
    return {name: builtin(name, UNIT) for name in DEFAULT_FUNCTIONS}


@pytest.fixture(scope="session")
def convex_corpus(corpus):
    return {k: f for k, f in corpus.items() if f.convex}


@pytest.fixture(scope="session")
def poly_corpus(corpus):
    return {k: f for k, f in corpus.items() if f.poly_form is not None}


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
        terminalreporter.write_line(line)
