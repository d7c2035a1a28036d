import os
import sys

import pytest
from hypothesis import HealthCheck, settings, strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from ferenczi.params import ParameterSchedule, Periodic  # noqa: E402

settings.register_profile("default", max_examples=30, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def stage(max_q=3, max_spacer=3, min_q=2):
    return st.lists(st.integers(0, max_spacer), min_size=min_q, max_size=max_q).map(tuple)


@st.composite
def schedules(draw, max_q=3, max_spacer=3, max_pre=2, max_period=2, min_q=2):
    """Periodic schedules whose tail uses at least two distinct spacers."""
    period = draw(st.lists(stage(max_q, max_spacer, min_q), min_size=1, max_size=max_period))
    values = {v for s in period for v in s}
    if len(values) < 2:
        first = list(period[0])
        first[-1] = (first[-1] + 1) % (max_spacer + 1)
        period[0] = tuple(first)
    pre = draw(st.lists(stage(max_q, max_spacer, min_q), max_size=max_pre))
    return ParameterSchedule(tuple(pre), Periodic(tuple(period)))



# acceptance reporting: one line per criterion, whatever the capture mode

_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion checked by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when == "teardown" or (report.when == "setup" and report.passed):
        return
    n, title = mark.args
    _criteria[n] = (title, _criteria.get(n, (title, True))[1] and report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, ok = _criteria[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}")
