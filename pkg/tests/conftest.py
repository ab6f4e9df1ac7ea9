import pytest

from oske import simulate
from oske.model import audit_transcript

AUDIT = {"transcripts": 0, "violations": []}
CRITERIA: dict[int, dict] = {}


def _audit(t):
    AUDIT["transcripts"] += 1
    problems = audit_transcript(t)
    if problems:
        AUDIT["violations"].append((t.policy, t.adversary, problems))
        raise AssertionError(f"transcript audit failed ({t.policy} vs {t.adversary}): {problems}")


simulate.observers.append(_audit)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    n, title = marker.args
    entry = CRITERIA.setdefault(n, {"title": title, "passed": 0, "failed": []})
    if report.passed:
        entry["passed"] += 1
    else:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    tr = terminalreporter
    if CRITERIA:
        tr.section("acceptance criteria")
        for n in sorted(CRITERIA):
            e = CRITERIA[n]
            total = e["passed"] + len(e["failed"])
            status = "PASS" if not e["failed"] else "FAIL"
            tr.write_line(f"criterion {n}: {status} ({e['passed']}/{total} checks) {e['title']}")
            for name in e["failed"]:
                tr.write_line(f"    failed: {name}")
    tr.write_line(
        f"transcript audit: {AUDIT['transcripts']} transcripts, {len(AUDIT['violations'])} violations"
    )
