import pathlib

import pytest

from ukcs_prep import _kernels_py

DATA = pathlib.Path(__file__).parent / "data"

try:
    from ukcs_prep import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

KERNELS = [pytest.param(_kernels_py, id="python")]
if _kernels_c is not None:
    KERNELS.append(pytest.param(_kernels_c, id="cython"))


@pytest.fixture(params=KERNELS)
def kernels(request):
    return request.param


@pytest.fixture(scope="session")
def data_dir():
    return DATA


def read_lines(path):
    return pathlib.Path(path).read_text(encoding="utf-8").splitlines()


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
