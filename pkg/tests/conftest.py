import os

import pytest
from hypothesis import HealthCheck, settings

from scatplane import build_field
from scatplane._accel import BACKENDS

from reference import ref_for

settings.register_profile(
    "repo",
    deadline=None,
    max_examples=int(os.environ.get("HYPOTHESIS_EXAMPLES", "40")),
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


def tower(q: int, t: int):
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e = 1
    while p**e != q:
        e += 1
    return build_field(p=p, e=e, t=t)


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def T43():
    return tower(4, 3)


@pytest.fixture
def T45():
    return tower(4, 5)


@pytest.fixture
def T54():
    return tower(5, 4)


@pytest.fixture
def ref43(T43):
    return ref_for(T43)


_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def acceptance_record():
    def record(key: str, ok: bool, detail: str):
        _ACCEPTANCE[key] = (ok, detail)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: (int(k.split(".")[0]), k)):
        ok, detail = _ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
