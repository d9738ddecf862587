import pytest

from scibank.bank import build_bank
from scibank.ingest import parse_survey
from scibank.normalize import clean_corpus

from fixture_data import sample_rows


@pytest.fixture
def sample_researchers():
    researchers, report = parse_survey(sample_rows())
    assert report.rejected == 0
    return researchers


@pytest.fixture
def sample_corpus(sample_researchers):
    return clean_corpus(sample_researchers)


@pytest.fixture
def sample_bank(sample_researchers, sample_corpus):
    return build_bank(sample_researchers, sample_corpus)


def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        status = "PASS" if report.passed else "FAIL"
        print(f"\nACCEPTANCE {name}: {status}", flush=True)
