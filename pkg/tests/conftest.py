import pytest

from coxconf.core import FiniteSubset


@pytest.fixture
def s():
    """``s(n, 1, 2)`` builds the subset {1,2} of {1..n}."""
    def make(n, *elements):
        return FiniteSubset.of(n, elements)
    return make


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        terminalreporter.write_line(results[num])
