import pytest

from taxograph.dcase import BUNDLED, build_dcase, default_records, default_thesaurus
from taxograph.framework import CurationLog, merge_label_set
from taxograph.graph import SubsetKind, TaxonomyGraph

_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    number, title = marker
    failed = report.failed
    if report.when == "call" or failed:
        previous = _criteria.get(number, (title, "PASS"))[1]
        _criteria[number] = (title, "FAIL" if failed or previous == "FAIL" else "PASS")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, verdict = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {verdict}  {title}")


@pytest.fixture(scope="session")
def thesaurus():
    return default_thesaurus()


@pytest.fixture(scope="session")
def records():
    return CurationLog(default_records())


@pytest.fixture(scope="session")
def dcase(thesaurus, records):
    return build_dcase(thesaurus, records)


@pytest.fixture(scope="session")
def ev0_graph(thesaurus, records):
    """The events graph after D13T2&3 and D16T2, as in the first stage."""
    graph = TaxonomyGraph()
    for name in ("d13t2.txt", "d16t2.txt"):
        source_set = BUNDLED.source_set(name)
        for part in source_set.parts:
            graph, _ = merge_label_set(
                graph, part.labels, source_set.cluster, SubsetKind.EVENT, thesaurus, (), records, source=source_set.id
            )
    return graph
