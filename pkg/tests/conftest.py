"""Shared chain fixtures and the end-of-run acceptance summary block."""

import pytest

from ergofilt import chains, markov

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def acceptance():
    """Recorder for acceptance checks; lines print after the test run."""

    def record(label: str, ok: bool, detail: str):
        _ACCEPTANCE.append((label, ok, detail))

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance checks")
    for label, ok, detail in sorted(_ACCEPTANCE):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {label}: {detail}")


@pytest.fixture(scope="session")
def cycle_chain():
    return chains.build_cycle_walk(11)


@pytest.fixture(scope="session")
def glauber_chain():
    return chains.build_glauber_cycle(chains.GlauberParams.uniform(4, 0.2, 1.0))


@pytest.fixture(scope="session")
def cycle_spec(cycle_chain):
    return markov.spectral_decomposition(cycle_chain)


@pytest.fixture(scope="session")
def glauber_spec(glauber_chain):
    return markov.spectral_decomposition(glauber_chain)
