import re
from collections import OrderedDict

import pytest

from phylosym.asymptotics import NumericConfig
from phylosym.series import bivariate_F

# acceptance tests are named test_acNN_<slug>; outcomes are folded per criterion
_AC_NAME = re.compile(r"test_ac(\d\d)_(\w+?)(?:\[|$)")
_ac_results: "OrderedDict[int, dict]" = OrderedDict()


@pytest.fixture(scope="session")
def F400():
    return bivariate_F(400)


@pytest.fixture(scope="session")
def F256():
    return bivariate_F(256)


@pytest.fixture(scope="session")
def cfg():
    return NumericConfig()


def pytest_runtest_logreport(report):
    m = _AC_NAME.search(report.nodeid.split("::")[-1])
    if not m or "test_acceptance" not in report.nodeid:
        return
    if report.when != "call" and not report.failed:
        return
    num = int(m.group(1))
    entry = _ac_results.setdefault(num, {"slug": m.group(2), "ok": True, "why": ""})
    if report.failed:
        entry["ok"] = False
        msg = str(report.longrepr.reprcrash.message) if hasattr(report.longrepr, "reprcrash") else str(report.longrepr)
        entry["why"] = msg.splitlines()[0][:160] if msg else ""


def pytest_terminal_summary(terminalreporter):
    if not _ac_results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_ac_results):
        e = _ac_results[num]
        line = f"AC{num:>2} {'PASS' if e['ok'] else 'FAIL'}  {e['slug']}"
        if not e["ok"]:
            line += f"  -- {e['why']}"
        tr.write_line(line)
    passed = sum(e["ok"] for e in _ac_results.values())
    tr.write_line(f"{passed}/{len(_ac_results)} criteria pass")
