import os

import pytest
from hypothesis import HealthCheck, settings

from solgroup import order

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# Every OrderFact built while the suite runs, for the abelianization sweep.
# Tests marked synthetic_facts feed made-up premises to the rules and are skipped.
FACTS = []
_recording = [True]
_orig_post_init = order.OrderFact.__post_init__


def _recording_post_init(self):
    _orig_post_init(self)
    if _recording[0]:
        FACTS.append(self)


order.OrderFact.__post_init__ = _recording_post_init


def pytest_collection_modifyitems(config, items):
    # the sweep has to see the facts produced by every other test
    last = [it for it in items if "sweep" in it.name]
    items[:] = [it for it in items if it not in last] + last


def pytest_configure(config):
    config.addinivalue_line("markers", "synthetic_facts: premises are invented, not derived")


@pytest.fixture(autouse=True)
def _fact_recording(request):
    _recording[0] = request.node.get_closest_marker("synthetic_facts") is None
    yield
    _recording[0] = True


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        ok, title, dt, budget, note = mod.RESULTS[n]
        line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {title}  ({dt:.2f}s, budget {budget:g}s)"
        tr.write_line(line + (f"  [{note}]" if note else ""))
