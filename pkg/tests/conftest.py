import pytest

# criterion number -> {"title", "ok", "notes"}
_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by the test")


@pytest.fixture
def note(request):
    """Attach key=value details to the criterion summary line."""
    marker = request.node.get_closest_marker("criterion")

    def _note(**values):
        if marker is not None:
            entry = _CRITERIA.setdefault(marker.args[0], {"title": marker.args[1], "ok": True, "notes": {}})
            entry["notes"].update(values)

    return _note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or not (rep.when == "call" or rep.failed):
        return
    num, title = marker.args
    entry = _CRITERIA.setdefault(num, {"title": title, "ok": True, "notes": {}})
    entry["ok"] = entry["ok"] and rep.passed


def _fmt(v):
    return f"{v:.3g}" if isinstance(v, float) else str(v)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        entry = _CRITERIA[num]
        notes = ", ".join(f"{k}={_fmt(v)}" for k, v in entry["notes"].items())
        status = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"AC{num:02d} {status}  {entry['title']}" + (f"  [{notes}]" if notes else ""))
