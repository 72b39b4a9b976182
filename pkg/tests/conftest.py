"""Shared test plumbing: acceptance-criterion result collection."""

ACCEPTANCE_RESULTS: list[str] = []


def record_criterion(criterion: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    ACCEPTANCE_RESULTS.append(f"[criterion {criterion}] {status}  {detail}".rstrip())


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(line)
