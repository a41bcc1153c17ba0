import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

ROOT = Path(__file__).resolve().parents[1]
PROFILES = ROOT / "profiles"
PROOFS = ROOT / "proofs"

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def root():
    return ROOT


# criterion -> list of (part, passed, note), filled by the acceptance tests
ACCEPTANCE: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.call_report = rep


@pytest.fixture
def criterion(request):
    """Record one part of an acceptance criterion; the line is printed at session end."""
    marker = request.node.get_closest_marker("criterion")
    num, part = marker.args
    yield
    rep = getattr(request.node, "call_report", None)
    passed = rep is not None and rep.passed and not hasattr(rep, "wasxfail")
    note = "" if passed else ("known failure, see ledger" if rep is not None and hasattr(rep, "wasxfail") else "failed")
    ACCEPTANCE.setdefault(num, []).append((part, passed, note))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, part): acceptance criterion part")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[num]
        ok = all(p[1] for p in parts)
        bad = "; ".join(f"{p[0]}: {p[2]}" for p in parts if not p[1])
        desc = ", ".join(p[0] for p in parts)
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  [{desc}]" +
                                    (f"  FAILED PARTS: {bad}" if bad else ""))
