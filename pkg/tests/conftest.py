import mpmath as mp
import pytest

from xi_ineq.config import DEFAULT_CONFIG

mp.mp.dps = 35


@pytest.fixture(scope="session")
def cfg():
    return DEFAULT_CONFIG


def xi_reference(sigma: float, t: float = 0.0) -> complex:
    """Independent completed-zeta evaluation through mpmath's Gamma and zeta."""
    s = mp.mpc(sigma, -t)
    v = 0.5 * s * (s - 1) * mp.pi ** (-s / 2) * mp.gamma(s / 2) * mp.zeta(s)
    return complex(v)


def xi_mod_sq_reference(sigma: float, t: float) -> float:
    return abs(xi_reference(sigma, t)) ** 2
