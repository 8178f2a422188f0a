from __future__ import annotations

import pytest

from caselens import store
from caselens.batcher import batch_cases
from caselens.extractor import build_case_record, default_rulebook

from synth import make_corpus


def pytest_runtest_logreport(report):
    # One visible pass/fail line per acceptance criterion.
    if report.when in ("call", "setup") and "test_acceptance" in report.nodeid:
        if report.when == "setup" and not report.skipped:
            return
        label = report.nodeid.split("::")[-1]
        outcome = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        print(f"\n[acceptance] {outcome}: {label}")


@pytest.fixture(scope="session")
def rulebook():
    return default_rulebook()


def build_records(corpus, rules):
    segments = batch_cases(corpus.document, corpus.org, corpus.year)
    return [build_case_record(s, rules) for s in segments]


@pytest.fixture(scope="session")
def corpus47():
    return make_corpus(47, seed=7)


@pytest.fixture(scope="session")
def records47(corpus47, rulebook):
    return build_records(corpus47, rulebook)


@pytest.fixture(scope="session")
def db47(tmp_path_factory, records47):
    """A 47-case synthetic database built through the real pipeline."""
    path = tmp_path_factory.mktemp("db") / "cases.db"
    handle = store.init_schema(path)
    for record in records47:
        store.upsert_case(handle, record)
    handle.close()
    return path
