import sys
from collections import OrderedDict
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

CRITERIA = OrderedDict([
    (1, "first-wall classification, mode ii sweep"),
    (2, "first-wall classification, mode i sweep"),
    (3, "brute-force oracle equivalence on a 4x box"),
    (4, "ch3 inequality floor re-derivation on a 10^3 grid"),
    (5, "validity-region parameter chains"),
    (6, "exclusion chain for c = -1, -2"),
    (7, "headline bounds and saturation"),
    (8, "P^3 section-count identities"),
    (9, "core property suites"),
    (10, "byte-determinism of reports"),
])

_outcomes: dict[int, list[tuple[str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion the test belongs to")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number = marker.args[0]
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        if call.excinfo is None:
            status = "passed"
        elif call.excinfo.errisinstance(pytest.skip.Exception):
            status = "skipped"
        else:
            status = "failed"
        _outcomes.setdefault(number, []).append((item.nodeid, status))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number, label in CRITERIA.items():
        results = _outcomes.get(number)
        if not results:
            terminalreporter.write_line(f"criterion {number:>2}: NOT RUN  {label}")
            continue
        failed = [nid for nid, s in results if s == "failed"]
        verdict = "PASS" if not failed else "FAIL"
        detail = f"{len(results) - len(failed)}/{len(results)} checks"
        terminalreporter.write_line(f"criterion {number:>2}: {verdict}  {label} ({detail})")
        for nid in failed:
            terminalreporter.write_line(f"    failed: {nid}")


@pytest.fixture(scope="session", autouse=True)
def _compile_kernels():
    """Compile the scan once so per-cell timings measure the search only."""
    from fractions import Fraction

    from tiltwalls.lattice import ChernData, INTEGRAL_CH2_LATTICE
    from tiltwalls.walls import SearchBox, enumerate_walls

    enumerate_walls(ChernData(0, 4, -8), -2, Fraction(13, 4), 4, SearchBox(1, 1, 1), INTEGRAL_CH2_LATTICE, 1)
