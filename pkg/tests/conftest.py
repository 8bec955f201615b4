from fractions import Fraction

import pytest

from ttour import _pykernels
from ttour.graph import Instance

try:
    from ttour import _ckernels
except ImportError:  # compiled kernels not built
    _ckernels = None

BACKENDS = [pytest.param(_pykernels, id="python")]
if _ckernels is not None:
    BACKENDS.append(pytest.param(_ckernels, id="cython"))


def make(vertices, edges, T):
    return Instance(list(vertices), [(eid, eid[0], eid[1], Fraction(c)) for eid, c in edges], list(T))


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def P3():
    return make("abc", [("ab", 1), ("bc", 1)], "ac")


@pytest.fixture
def K2():
    return make("ab", [("ab", 1)], "ab")


@pytest.fixture
def K3():
    return make("abc", [("ab", 1), ("bc", 1), ("ca", 1)], "")


@pytest.fixture
def P4C():
    return make("abcd", [("ab", 1), ("bc", 1), ("cd", 1), ("ad", 3)], "ad")


@pytest.fixture
def STAR():
    return make("zuvw", [("zu", 1), ("zv", 1), ("zw", 1)], "uvwz")


def F(*xs):
    return [Fraction(x) for x in xs]


# acceptance criteria register their outcome here; printed once at the end
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {text}")
