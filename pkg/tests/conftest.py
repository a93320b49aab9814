import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# criterion number -> {"desc": str, "outcomes": [str]}
_ACCEPTANCE: dict[int, dict] = {}

_TITLES = {
    1: "balanced agglomeration: exact clusters and merge order",
    2: "MST clustering: tree stage exact; published tree not minimal",
    3: "correlation greedy: sequence, partition, objective (-10.0, 22.5)",
    4: "partition edit cost 3, relocated items {7, 2, 4}",
    5: "ranking distance 5 and shift histogram",
    6: "consensus: costs (1,2,0), exhaustive search over 2..3 clusters",
    7: "multiset scale: coefficient, interval enumeration, delta oracle",
    8: "nine-user multiset clustering pipeline",
    9: "quality measures: multiset totals, balance, modularity, proximities",
    10: "hierarchy distances: edit 1, two-component (2,1)",
    11: "restructuring: budgets 0..5, three-operation plan",
    12: "property suites: oracles, monotonicity, validation",
}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "acceptance(n, description): ties a test to one acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    n, desc = marker.args
    entry = _ACCEPTANCE.setdefault(
        n, {"desc": _TITLES.get(n, desc), "outcomes": []})
    if hasattr(report, "wasxfail"):
        entry["outcomes"].append("xfail")
    elif report.passed:
        entry["outcomes"].append("passed")
    elif report.failed:
        entry["outcomes"].append("failed")
    else:
        entry["outcomes"].append("skipped")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        entry = _ACCEPTANCE[n]
        outcomes = entry["outcomes"]
        xfails = outcomes.count("xfail")
        if any(o == "failed" for o in outcomes):
            status = "FAIL"
        elif xfails:
            status = f"PARTIAL ({xfails} documented expected failure(s) in source data)"
        else:
            status = "PASS"
        tr.write_line(f"criterion {n:>2}: {status} - {entry['desc']}")
