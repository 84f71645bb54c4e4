import pytest

from tatemodels.cli import Session, corpus_names, load_job
from tatemodels.dga import Window
from tatemodels.ring import MapPresentation, QuotientRing, RingPresentation

ACCEPTANCE: dict = {}


def make_map(p, gens, rels, kernel):
    R = QuotientRing(RingPresentation.from_strings(p, gens, rels))
    return MapPresentation(R, [R.parse(k) for k in kernel])


_sessions: dict = {}


def corpus_session(name):
    if name not in _sessions:
        doc = load_job(name)
        _sessions[name] = Session(doc, Window(*doc["window"]))
    return _sessions[name]


@pytest.fixture(scope="session")
def corpus():
    return corpus_session


@pytest.fixture(params=corpus_names())
def example(request):
    return corpus_session(request.param)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance")
    for key in sorted(ACCEPTANCE):
        label, ok = ACCEPTANCE[key]
        terminalreporter.write_line(f"{key:>2}. {'PASS' if ok else 'FAIL'}  {label}")
