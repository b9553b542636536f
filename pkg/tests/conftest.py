import os
import time

import pytest

from koblitz_gsp.curves import SweepCache, get_curve, order_sweep

os.environ.setdefault("KOBLITZ_GSP_OFFLINE", "1")


def _sweep(tmp_path_factory, label, x_max):
    path = tmp_path_factory.mktemp(f"sweep_{label}") / f"{label}.jsonl"
    cache = SweepCache.open(path, label)
    start = time.perf_counter()
    order_sweep(get_curve(label), x_max, cache)
    return cache, time.perf_counter() - start


@pytest.fixture(scope="session")
def sweep_g1_1e4(tmp_path_factory):
    return _sweep(tmp_path_factory, "e_x3x1", 10**4)[0]


@pytest.fixture(scope="session")
def sweep_g1_1e5(tmp_path_factory):
    return _sweep(tmp_path_factory, "e_x3x1", 10**5)[0]


@pytest.fixture(scope="session")
def sweep_g1b_1e5(tmp_path_factory):
    return _sweep(tmp_path_factory, "e_x3mx1", 10**5)[0]


@pytest.fixture(scope="session")
def sweep_g1_1e6(tmp_path_factory):
    return _sweep(tmp_path_factory, "e_x3x1", 10**6)[0]


@pytest.fixture(scope="session")
def sweep_g2_5000(tmp_path_factory):
    """(cache, seconds) for the genus-2 sweep to 5000."""
    return _sweep(tmp_path_factory, "g2_x5mx1", 5000)


_SLOW_FIXTURES = {"sweep_g1_1e5", "sweep_g1b_1e5", "sweep_g1_1e6", "sweep_g2_5000"}


def pytest_collection_modifyitems(items):
    for item in items:
        if _SLOW_FIXTURES & set(getattr(item, "fixturenames", ())):
            item.add_marker(pytest.mark.slow)


# per-criterion summary for the acceptance module

_CRITERIA: dict[int, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (report.when != "call" and not report.failed):
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault(number, {"title": title, "passed": 0, "failed": []})
    if report.passed:
        entry["passed"] += 1
    elif report.failed:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        e = _CRITERIA[number]
        total = e["passed"] + len(e["failed"])
        status = "FAIL" if e["failed"] else "PASS"
        line = f"criterion {number:>2} {status}  {e['title']} ({e['passed']}/{total} checks)"
        if e["failed"]:
            line += "  failing: " + ", ".join(e["failed"])
        terminalreporter.write_line(line)
