import pytest

from opkoszul.algebras import AlgebraPresentation, free_algebra

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def record_criterion():
    def record(number: int, title: str, passed: bool, detail: str = ""):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'} {title}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return record


@pytest.fixture(scope="session")
def free_deg1():
    return free_algebra("ass", [("x", 1)], name="free on x")


@pytest.fixture(scope="session")
def free_deg2():
    return free_algebra("ass", [("x", 2)], name="free on x in degree 2")


@pytest.fixture(scope="session")
def two_generator():
    return AlgebraPresentation("ass", [("x", 1), ("y", 3, 2)], {"y": [(1, ["x", "x"])]}, name="dy = xx")


@pytest.fixture(scope="session")
def corpus(free_deg1, free_deg2, two_generator):
    return [free_deg1, free_deg2, two_generator]


@pytest.fixture(scope="session")
def poisson_deg1():
    return free_algebra("poisson:2", [("x", 1)], name="free poisson:2 on x")
