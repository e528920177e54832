import pytest

from pt_spectra import Potential, enumerate_eigenvalues


@pytest.fixture(scope="session")
def cubic_records():
    """Shooting eigenvalues n = 0..20 for m=3, a=0."""
    return enumerate_eigenvalues(Potential(3, (0, 0)), 20)


@pytest.fixture(scope="session")
def quartic_records():
    """Shooting eigenvalues n = 0..20 for m=4, a=(1,0,1)."""
    return enumerate_eigenvalues(Potential(4, (1, 0, 1)), 20)
