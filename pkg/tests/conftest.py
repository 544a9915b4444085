from functools import lru_cache

import pytest
import sympy

from ellsurf.exact_algebra import QQ, Poly
from ellsurf.workbench import load_spec
from ellsurf.workbench.specfile import load_expected

FIXTURES = ["E1", "E1p", "E1pp", "E2", "E2p", "E3"]
T = sympy.Symbol("t")


@lru_cache(maxsize=None)
def spec(name):
    return load_spec(name)


@lru_cache(maxsize=None)
def model(name):
    return spec(name).build_model()


@lru_cache(maxsize=None)
def section_model(name):
    return spec(name).section_model()


@lru_cache(maxsize=None)
def expected(name):
    return load_expected(name)


def to_sympy(f: Poly):
    """Oracle conversion of a Poly over QQ to a sympy expression in t."""
    return sum(sympy.Rational(c.numerator, c.denominator) * T ** k for k, c in enumerate(f.c))


def qpoly(coeffs):
    return Poly(QQ, coeffs)


@pytest.fixture(scope="session")
def e2():
    m = section_model("E2")
    s = spec("E2")
    return m, s.points("sections", m), s.points("torsion", m)


@pytest.fixture(scope="session")
def e3():
    m = section_model("E3")
    s = spec("E3")
    return m, s.points("sections", m), s.points("torsion", m)


# -- one summary line per acceptance criterion --------------------------------

_criteria: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    number = getattr(item.function, "criterion", None)
    if number is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        title = (item.function.__doc__ or "").strip().splitlines()[0]
        _criteria[number] = ("PASS" if rep.passed else "SKIP" if rep.skipped else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        status, title = _criteria[n]
        terminalreporter.write_line(f"criterion {n:>2}: {status}  {title}")
