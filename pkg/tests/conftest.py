import warnings

import pytest

from gradcontact.assembly import ContactProblem, MaterialHalfPlane, ProfilePoly, TruncationWarning


def make_problem(a1, a2, nu=0.3, e1=1.0, e2=1.0, Q0=1.0, Q1=0.0, P=1.0, **kw):
    return ContactProblem(
        MaterialHalfPlane(e1, a1, nu), MaterialHalfPlane(e2, a2, nu), ProfilePoly(Q0, Q1), P=P, **kw
    )


@pytest.fixture
def problem():
    return make_problem


@pytest.fixture(autouse=True)
def _quiet_truncation():
    # the tail warning is asserted explicitly where it matters
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        yield


# acceptance lines, echoed again in the terminal summary
ACCEPTANCE = []


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}  [{detail}]"
        ACCEPTANCE.append(line)
        with capsys.disabled():
            print("\n" + line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
