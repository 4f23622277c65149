import pytest

from sturmspec import convergents, periodic_coefficients, sturmian_band_spectrum


@pytest.fixture(scope="session")
def golden_cf():
    """Golden-mean continued fraction [1, 1, 1, ...] to depth 40."""
    return convergents(periodic_coefficients([], [1], 40))


@pytest.fixture(scope="session")
def fib_spectra(golden_cf):
    """Band spectra of the golden-mean approximants, coupling 1, levels 1..11."""
    return {n: sturmian_band_spectrum(golden_cf, 1.0, n) for n in range(1, 12)}
