import pytest

_ACCEPTANCE_LINES = []


def record_criterion(num: int, label: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    line = f"criterion {num:2d} [{status}] {label}"
    if detail:
        line += f"  ({detail})"
    _ACCEPTANCE_LINES.append((num, line))
    print(line)


@pytest.fixture(scope="session")
def kernels_warm():
    from varlex._kernels import warmup

    warmup()
    return True


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for _, line in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
