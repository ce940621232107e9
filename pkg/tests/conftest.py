import mpmath
from hypothesis import HealthCheck, settings

mpmath.mp.dps = 40

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("default")


def rel_err(value, reference):
    reference = complex(reference) if isinstance(reference, mpmath.mpc) else float(reference)
    return abs(value - reference) / abs(reference)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
