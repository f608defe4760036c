import numpy as np
import pytest

from discendo.maps import (Affine, BlaschkeProduct, Compose, Constant, Identity, MoebiusInverse,
                           MoebiusMap, Monomial, Rotation, Scale, Tau)

# Frozen by tests/oracles/geometric_separation.py (50-digit product over pairs)
# for z_n = 1 - 2**(1 - n), n = 1..12.
GEOMETRIC12_DELTA = 0.017703046029561420504
GEOMETRIC12_DELTA_ARGMIN = 7
GEOMETRIC12_MIN_D = 0.0088515230147807102518


def one_of_each():
    """One map of every built-in kind plus a few compositions."""
    b = BlaschkeProduct((0, 0.5, 0.75))
    return [
        Identity(),
        Constant(0.3 - 0.2j),
        Monomial(3),
        Affine(0.5, 0.25),
        Rotation(1.1),
        MoebiusMap(0.4 + 0.3j),
        MoebiusInverse(-0.6j),
        b,
        Tau(),
        Scale(0.5, b),
        Compose(MoebiusMap(0.25), Scale(0.5)),
        Compose(Tau(), MoebiusMap(0.3 - 0.1j)),
        Compose(Rotation(2.0), Compose(b, Monomial(2))),
    ]


def random_disc(rng, size, radius=1.0):
    r = radius * np.sqrt(rng.random(size))
    return r * np.exp(2j * np.pi * rng.random(size))


def random_symbol(rng):
    """A self-map with compact range and an interior fixed point away from 0."""
    s = rng.uniform(0.2, 0.5)
    c = 0.3 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
    n = int(rng.integers(1, 4))
    zeros = tuple(random_disc(rng, n, 0.8))
    return Compose(Affine(s, c), BlaschkeProduct(zeros))


def richardson_derivative(f, z, h):
    """Central differences along the real axis, two Richardson levels."""
    def d(step):
        return (f(z + step) - f(z - step)) / (2 * step)

    d1, d2, d3 = d(h), d(h / 2), d(h / 4)
    r1 = (4 * d2 - d1) / 3
    r2 = (4 * d3 - d2) / 3
    return (16 * r2 - r1) / 15


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def maps_zoo():
    return one_of_each()


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
