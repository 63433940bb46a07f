import pytest

from bkv.forms import build_catalog_form
from bkv.shimura import lift_from_partner


@pytest.fixture(scope="session")
def delta_1e4():
    return build_catalog_form("delta", 10**4)


@pytest.fixture(scope="session")
def kz_small():
    return build_catalog_form("kz13_2", 12_100)


@pytest.fixture(scope="session")
def delta_big():
    return build_catalog_form("delta", 10**5 + 2)


@pytest.fixture(scope="session")
def kz_lift_big(kz_small, delta_big):
    return lift_from_partner(kz_small, delta_big, 1, 10**5)


_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    report = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None and (report.when == "call" or report.outcome != "passed"):
        number, title = marker.args
        previous = _ACCEPTANCE.get(number, ("PASS", title))[0]
        status = "PASS" if report.passed and previous == "PASS" else "FAIL"
        _ACCEPTANCE[number] = (status, title)
    return report


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        status, title = _ACCEPTANCE[number]
        terminalreporter.write_line(f"[{status}] #{number:>2} {title}")
