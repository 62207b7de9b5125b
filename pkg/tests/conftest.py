from pathlib import Path

import pytest

from scriptmine.dtm import build_dtm
from scriptmine.ingest import load_corpus
from scriptmine.preprocess import PreprocessConfig

ROOT = Path(__file__).resolve().parent.parent
TOY_MANIFEST = ROOT / "data" / "toy" / "manifest.txt"
DEMO_MANIFEST = ROOT / "data" / "demo" / "manifest.txt"
# the full nine-book reconstruction is not redistributable; scripts/fetch_corpus.py
# builds it when network access is available
CORPUS_MANIFEST = ROOT / "data" / "corpus" / "manifest.txt"


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(num, name): acceptance criterion with pass/fail reporting"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    status = None
    if report.when == "call":
        status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    elif report.when == "setup" and (report.skipped or report.failed):
        status = "SKIP" if report.skipped else "FAIL"
    if status:
        reporter = item.config.pluginmanager.get_plugin("terminalreporter")
        line = f"[acceptance] criterion {marker.kwargs['num']:>2} {marker.kwargs['name']}: {status}"
        if reporter is not None:
            reporter.write_line(line)
        else:
            print(line)


@pytest.fixture(scope="session")
def toy_corpus():
    return load_corpus(TOY_MANIFEST.parent, TOY_MANIFEST)


@pytest.fixture(scope="session")
def pp_config():
    return PreprocessConfig()


@pytest.fixture(scope="session")
def toy_dtm(toy_corpus, pp_config):
    return build_dtm(toy_corpus, pp_config)


@pytest.fixture(scope="session")
def demo_corpus():
    return load_corpus(DEMO_MANIFEST.parent, DEMO_MANIFEST)


@pytest.fixture(scope="session")
def demo_dtm(demo_corpus, pp_config):
    return build_dtm(demo_corpus, pp_config)
