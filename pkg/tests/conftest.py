import pytest

from zdip.null import generate_table


@pytest.fixture(scope="session")
def small_table():
    """Quick table over a few sizes; good enough for plumbing tests."""
    return generate_table([4, 5, 10, 20, 50, 100, 200], replicates=300, seed=7)


_CRITERIA = {}


class _Criterion:
    def __init__(self, number, title):
        self.number, self.title = number, title
        self.failures, self.notes = [], []

    def check(self, ok, detail):
        if not ok:
            self.failures.append(detail)
        return ok

    def note(self, text):
        self.notes.append(text)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is not None:
            self.failures.append(f"{exc_type.__name__}: {exc}")
        status = "FAIL" if self.failures else "PASS"
        _CRITERIA[self.number] = (status, self.title, self.failures, self.notes)
        if exc_type is None and self.failures:
            raise AssertionError(f"criterion {self.number} failed: " + "; ".join(self.failures))
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, title, failures, notes = _CRITERIA[number]
        tr.write_line(f"criterion {number:>2} {status}: {title}")
        for line in notes:
            tr.write_line(f"      {line}")
        for line in failures:
            tr.write_line(f"      failed: {line}")
