import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from ccnat.cli import load_context  # noqa: E402
from ccnat.syntax import read_one  # noqa: E402


GAMMA_EX = """
(decl x u nat) (decl y u nat) (decl t u nat)
(decl f u (-> nat nat))
(decl p1 r (eq nat t 2))
(decl p2 r (eq nat (f (+ x 3)) (+ x 2)))
(decl p3 r (eq nat (+ (f (+ y t)) 2) y))
(decl p4 r (eq nat (+ y 1) (+ x 2)))
"""


class Scope:
    """A context built from declarations plus a term reader over it."""

    def __init__(self, source: str = ""):
        self.session = load_context(source)

    @property
    def ctx(self):
        return self.session.ctx

    def __call__(self, text: str):
        return self.session.elaborate(read_one(text))


@pytest.fixture
def gamma_ex():
    return Scope(GAMMA_EX)


@pytest.fixture
def empty():
    return Scope()


# -- acceptance report ---------------------------------------------------------------

_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance(capsys):
    """Record one PASS/FAIL line per criterion and echo it past output capture."""

    def record(label: str, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} {label}: {detail}"
        _ACCEPTANCE.append(line)
        with capsys.disabled():
            print(f"\n  {line}", end="")
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
