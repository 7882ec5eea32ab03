"""Shared test plumbing: the acceptance-line reporter.

Acceptance tests register one line each; the hook prints them all at the
end of the run so every criterion shows a PASS or FAIL verdict even when
pytest captures stdout.
"""

ACCEPTANCE_RESULTS = []


def record_acceptance(number: int, description: str, ok: bool) -> bool:
    """Store one criterion verdict; returns ok so callers can assert it."""
    ACCEPTANCE_RESULTS.append((int(number), str(description), bool(ok)))
    line = acceptance_line(ACCEPTANCE_RESULTS[-1])
    print(line)
    return bool(ok)


def acceptance_line(entry) -> str:
    number, description, ok = entry
    verdict = "PASS" if ok else "FAIL"
    return f"ACCEPTANCE {number:2d} {verdict}: {description}"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for entry in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(acceptance_line(entry))
