import numpy as np
import pytest

from stripforge import integrable
from stripforge.curves import CurvatureProfile, integrate_frame


def trig_profile(h, length, kappa_base=1.2, seedless=True):
    """Smooth non-critical profile with exact sinusoidal jets."""
    n = int(round(length / h)) + 1
    s = h * np.arange(n)

    def waves(amp, omega, phase):
        arg = omega * s + phase
        return (
            amp * np.sin(arg),
            amp * omega * np.cos(arg),
            -amp * omega**2 * np.sin(arg),
            -amp * omega**3 * np.cos(arg),
        )

    k0, k1, k2, k3 = waves(0.4, 0.9, 0.3)
    l0, l1, l2, l3 = waves(0.35, 1.3, 1.1)
    return CurvatureProfile(
        h=h,
        kappa=k0 + kappa_base,
        lam=l0,
        dkappa=k1,
        d2kappa=k2,
        d3kappa=k3,
        dlam=l1,
        d2lam=l2,
        d3lam=l3,
        jet_source="analytic",
    )


@pytest.fixture(scope="session")
def smooth_framed():
    profile = trig_profile(h=0.02, length=10.0)
    return profile, integrate_frame(profile)


@pytest.fixture(scope="session")
def helix_strip():
    return integrable.build_helix(1.0, 1.0, length=6.0, h=1e-3)


@pytest.fixture(scope="session")
def force_free_solution():
    return integrable.solve_spherical_elastica(1.0, 0.8, 0.0, 10.0, 1e-3)


@pytest.fixture(scope="session")
def force_free_strip(force_free_solution):
    return integrable.build_force_free(force_free_solution)


@pytest.fixture(scope="session")
def momentum_solution():
    return integrable.solve_spherical_elastica(3.0, 1.2, 0.0, 10.0, 1e-3)


@pytest.fixture(scope="session")
def momentum_strip(momentum_solution):
    return integrable.build_momentum(momentum_solution)
