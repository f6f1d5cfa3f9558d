import numpy as np
import pytest

_CRITERIA = pytest.StashKey[dict]()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def detail(request):
    """Attach a one-line measurement summary to an acceptance test."""
    def record(text):
        request.node._criterion_detail = text
    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        results = item.config.stash.setdefault(_CRITERIA, {})
        results[marker.kwargs["criterion"]] = (
            rep.passed, getattr(item, "_criterion_detail", ""), item.name)


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_CRITERIA, None)
    if not results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for k in sorted(results):
        ok, text, name = results[k]
        terminalreporter.write_line(
            f"criterion {k}: {'PASS' if ok else 'FAIL'}  {name}  {text}".rstrip())
