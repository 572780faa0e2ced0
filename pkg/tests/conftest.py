import os

from gmpy2 import mpq
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURES, name)


def rationals(lo=-20, hi=20, max_den=12):
    return st.builds(lambda a, b: mpq(a, b), st.integers(lo * max_den, hi * max_den), st.integers(1, max_den))


def triples(lo=-20, hi=20, max_den=12):
    return st.tuples(rationals(lo, hi, max_den), rationals(lo, hi, max_den), rationals(lo, hi, max_den))


def nonzero_triples(lo=-20, hi=20, max_den=12):
    return triples(lo, hi, max_den).filter(lambda v: any(c != 0 for c in v))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = [mod.RESULTS[k] for k in sorted(mod.RESULTS)] if mod else []
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
