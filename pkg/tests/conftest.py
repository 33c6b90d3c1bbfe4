import time

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("default")

CRITERIA = {
    1: "rotation example reproduces the displayed T",
    2: "u <-> T conversion roundtrips",
    3: "composition formula matches brute force; dispatch table",
    4: "brute-force composition is always isotropic",
    5: "unbounded-graph counterexample and truncation ladder",
    6: "index suite",
    7: "Clifford relations and dimension tables",
    8: "cylinder gluing and closeness to APS",
    9: "seeded sweeps are byte-identical",
}

_criterion_of = {}
_outcomes = {}
_durations = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion exercised by the test")


def pytest_collection_modifyitems(session, config, items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _criterion_of[item.nodeid] = int(m.args[0])


def pytest_runtest_logreport(report):
    n = _criterion_of.get(report.nodeid)
    if n is None:
        return
    ok = _outcomes.setdefault(n, True)
    if report.failed:
        _outcomes[n] = False
    elif report.when == "call":
        _outcomes[n] = ok and report.passed
    if report.when == "call":
        _durations[n] = _durations.get(n, 0.0) + report.duration


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criterion_of:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        if n not in _outcomes:
            verdict = "NOT RUN"
        else:
            verdict = "PASS" if _outcomes[n] else "FAIL"
        dur = _durations.get(n, 0.0)
        terminalreporter.write_line(f"criterion {n}: {verdict:7s} {title} ({dur:.2f}s)")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def stopwatch():
    class Watch:
        def __enter__(self):
            self.t0 = time.perf_counter()
            return self

        def __exit__(self, *exc):
            self.elapsed = time.perf_counter() - self.t0

    return Watch
