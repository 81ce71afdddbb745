import numpy as np
import pytest

from revfuse.signal import AudioBuffer

FS = 16000
ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def speechlike():
    """Two seconds of an amplitude-modulated harmonic tone plus light noise."""
    gen = np.random.default_rng(7)
    t = np.arange(2 * FS) / FS
    f0 = 140 + 30 * np.sin(2 * np.pi * 0.7 * t)
    phase = 2 * np.pi * np.cumsum(f0) / FS
    voiced = sum(np.sin(k * phase) / k for k in range(1, 12))
    envelope = 0.5 * (1 + np.sin(2 * np.pi * 3.0 * t)) + 0.05
    x = 0.1 * envelope * voiced + 0.01 * gen.standard_normal(t.size)
    return AudioBuffer(x, FS)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
