import pytest

from polariton_gyro import AtomSpecies, ProbeField, segment_at_xi
from polariton_gyro.config import DEFAULT_GAMMA
from polariton_gyro.constants import CONSTANTS

NA_MASS = 23 * CONSTANTS.amu


@pytest.fixture(scope="session")
def species():
    return AtomSpecies(mass=NA_MASS, dipole_moment=2.1e-29, cross_section=1e-16)


@pytest.fixture(scope="session")
def probe():
    return ProbeField(wavelength=500e-9, beam_area=1e-10)


@pytest.fixture(scope="session")
def make_segment(species, probe):
    def make(xi, length=1e-4, eta=1.0, alpha=100.0, temperature_ratio=0.0, gamma=DEFAULT_GAMMA):
        return segment_at_xi(
            species,
            probe,
            length=length,
            xi=xi,
            eta=eta,
            alpha=alpha,
            gamma=gamma,
            temperature_ratio=temperature_ratio,
        )

    return make


_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record one criterion verdict, echo it, and fail the test when it is negative."""
    results = request.config.stash.setdefault(_ACCEPTANCE, {})

    def record(number, title, ok, detail):
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        results[number] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_ACCEPTANCE, None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in range(1, 11):
        terminalreporter.write_line(results.get(number, f"criterion {number:2d} NOT RUN"))
