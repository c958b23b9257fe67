from hypothesis import settings

settings.register_profile("covercert", deadline=None, max_examples=100)
settings.load_profile("covercert")


def pytest_terminal_summary(terminalreporter):
    """Repeat the one-line acceptance verdicts after the test summary."""
    try:
        from test_acceptance import ACCEPTANCE_LINES
    except ImportError:
        return
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
