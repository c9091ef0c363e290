import pytest

from hexweave.artifact import default_artifact

ACCEPTANCE = {}


@pytest.fixture(scope="session")
def art():
    return default_artifact()


@pytest.fixture(scope="session")
def table(art):
    return art.table


@pytest.fixture(scope="session")
def patch64(art):
    from hexweave.cht import build_patch
    return build_patch(64, art=art)


@pytest.fixture(scope="session")
def patch32(art):
    from hexweave.cht import build_patch
    return build_patch(32, art=art)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
