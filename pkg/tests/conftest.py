import pytest

from augaudit.corpus import TestCase, make_corpus


def case(cid, cat="A", code="", origin=None, version=0):
    return TestCase(cid, origin or cid, version, cat, code)


def grouped_corpus(spec, labels=None):
    """``spec`` maps category -> list of variant counts, one entry per origin."""
    cases = []
    for cat, counts in spec.items():
        for i, k in enumerate(counts):
            oid = f"{cat.lower()}{i:03d}"
            cases.append(case(oid, cat, f"void {oid}() {{}}"))
            for v in range(1, k + 1):
                cases.append(case(f"{oid}_v{v}", cat, f"void {oid}() {{ }}", oid, v))
    return make_corpus(cases, labels=labels)


@pytest.fixture
def small_corpus():
    return grouped_corpus({"A": [2] * 10, "B": [2] * 10})


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
