import numpy as np
import pytest

from ofdmsync import PreambleSpec, SampleBuffer, generate_preamble


@pytest.fixture(scope="session")
def spec():
    return PreambleSpec()


@pytest.fixture(scope="session")
def preamble(spec):
    return generate_preamble(spec)


@pytest.fixture()
def rng():
    return np.random.default_rng(0xC0FFEE)


def random_buffer(rng, n, sample_rate=20e6):
    samples = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return SampleBuffer(samples, sample_rate)
