"""Independent ground truth for the completed zeta function.

xi(s) is evaluated from the classical theta-integral representation

    xi(s) = 1/2 + s(s-1)/2 * int_1^inf (x^{s/2-1} + x^{-(s+1)/2}) psi(x) dx,
    psi(x) = sum_{n>=1} exp(-pi n^2 x) = R(sqrt(x)) / 2,

which is entire and manifestly symmetric under s <-> 1-s.  Everything else in
the library is checked against this route; it shares only the theta series R
with the representation code, none of the downstream machinery.

The module also provides the probabilistic objects attached to xi: the density
P_sigma whose characteristic function is xi(sigma-it)/xi(sigma), the symmetric
correlation kernel U_sigma, and the cosine-transform route to |xi|^2 through it.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .config import DEFAULT_CONFIG, EvalConfig
from .errors import DomainError
from .quadrature import (integrate_finite, integrate_oscillatory_cos,
                         integrate_semi_infinite)
from .theta import theta_H, theta_R

# where exp(-pi x) alone is below any double-precision tolerance
_PSI_DECAY = math.pi


def psi_theta(x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """psi(x) = sum exp(-pi n^2 x), reusing the inversion-stable R."""
    return 0.5 * theta_R(math.sqrt(x), cfg)


def xi(s: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """Entire completed-zeta evaluation; satisfies xi(s) = xi(1-s)."""
    s = complex(s)

    def integrand(x):
        return (x ** (0.5 * s - 1.0) + x ** (-0.5 * (s + 1.0))) * psi_theta(x, cfg)

    re = integrate_semi_infinite(lambda x: integrand(x).real, 1.0, _PSI_DECAY, cfg, scale=2.0)
    if s.imag == 0.0:
        integral = complex(re.value, 0.0)
    else:
        im = integrate_semi_infinite(lambda x: integrand(x).imag, 1.0, _PSI_DECAY, cfg, scale=2.0)
        integral = complex(re.value, im.value)
    return 0.5 + 0.5 * s * (s - 1.0) * integral


@lru_cache(maxsize=256)
def xi_real(sigma: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """xi at a real point (real-valued there; cached, it normalizes densities)."""
    return xi(complex(sigma, 0.0), cfg).real


def xi_mod_sq(sigma: float, t: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """|xi(sigma - it)|^2, even in t."""
    value = xi(complex(sigma, -t), cfg)
    return abs(value) ** 2


def char_fn_Xi(sigma: float, t: float, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """xi(sigma - it) / xi(sigma): a characteristic function, so == 1 at t = 0."""
    return xi(complex(sigma, -t), cfg) / xi_real(sigma, cfg)


def density_P(sigma: float, y: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Density of the law whose characteristic function is char_fn_Xi:

        P_sigma(y) = H(e^{-y}) e^{-sigma y} / (2 xi(sigma))      y <= 0
                     H(e^{y}) e^{(1-sigma) y} / (2 xi(sigma))    y > 0
    """
    norm = 2.0 * xi_real(sigma, cfg)
    if y <= 0.0:
        return theta_H(math.exp(-y), cfg) * math.exp(-sigma * y) / norm
    return theta_H(math.exp(y), cfg) * math.exp((1.0 - sigma) * y) / norm


# H(e^z) dies like exp(-pi e^{2z}); beyond this z every H factor underflows
_H_LOG_CUT = 0.5 * math.log(745.0 / math.pi)
# w-range carrying all the mass of H(w)-weighted integrals on [1, inf)
_H_W_CUT = 6.0


def U_sigma(sigma: float, y: float, form: str = "two_term",
            cfg: EvalConfig = DEFAULT_CONFIG, abs_tol: float = None) -> float:
    """Symmetric correlation kernel of density_P.

    two_term:
        e^{sigma y}   int_1^inf H(w) H(e^{y} w)  w^{2 sigma - 1} dw
      + e^{(sigma-1)y} int_1^inf H(w) H(e^{-y} w) w^{1 - 2 sigma} dw

    three_term (the defining split along the real line):
        e^{(1-sigma)y} int_0^inf H(e^{y+z}) H(e^z) e^{2(1-sigma)z} dz
      + e^{(1-sigma)y} int_0^y   H(e^{y-z}) H(e^z) e^{(2 sigma-1)z} dz
      + e^{sigma y}    int_0^inf H(e^{y+z}) H(e^z) e^{2 sigma z} dz

    Both decay like exp(-2 e^y) up to polynomial factors, so acceptance is
    relative by default; the cosine-transform route passes an absolute target
    instead (its tolerance is set by the transform, not by U's tiny tail).
    """
    if y < 0.0:
        raise DomainError(f"U_sigma needs y >= 0, got {y!r}")
    eff_tol = 1e-300 if abs_tol is None else abs_tol
    if form == "two_term":
        ey = math.exp(y)
        p = 2.0 * sigma - 1.0
        one = integrate_finite(
            lambda w: theta_H(w, cfg) * theta_H(ey * w, cfg) * w ** p, 1.0, _H_W_CUT, cfg,
            abs_tol=eff_tol)
        two = integrate_finite(
            lambda w: theta_H(w, cfg) * theta_H(w / ey, cfg) * w ** (-p), 1.0, _H_W_CUT, cfg,
            abs_tol=eff_tol)
        return math.exp(sigma * y) * one.value + math.exp((sigma - 1.0) * y) * two.value
    if form == "three_term":
        z_cut = _H_LOG_CUT + 0.2

        def pair(z, shift, weight):
            return theta_H(math.exp(z + shift), cfg) * theta_H(math.exp(z), cfg) * math.exp(weight * z)

        one = integrate_finite(lambda z: pair(z, y, 2.0 * (1.0 - sigma)), 0.0, z_cut, cfg,
                               abs_tol=eff_tol)
        three = integrate_finite(lambda z: pair(z, y, 2.0 * sigma), 0.0, z_cut, cfg,
                                 abs_tol=eff_tol)
        mid = 0.0
        if y > 0.0:
            mid = integrate_finite(
                lambda z: theta_H(math.exp(y - z), cfg) * theta_H(math.exp(z), cfg)
                * math.exp((2.0 * sigma - 1.0) * z), 0.0, y, cfg, abs_tol=eff_tol).value
        return (math.exp((1.0 - sigma) * y) * (one.value + mid)
                + math.exp(sigma * y) * three.value)
    raise ValueError(f"unknown U_sigma form {form!r}")


# U_sigma(y) is below 1e-30 of its y=0 value beyond this point (its decay is
# doubly exponential; the analytic envelope 96 pi^8 e^{5y-2e^y} is far looser)
_U_SUPPORT = 3.4


def xi_mod_sq_via_U(sigma: float, t: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """|xi(sigma-it)|^2 = (1/2) int_0^inf U_sigma(y) cos(ty) dy."""
    result = integrate_oscillatory_cos(
        lambda y: U_sigma(sigma, y, "two_term", cfg, abs_tol=0.1 * cfg.quad_abs_tol),
        t, 0.0, decay_rate=2.0, cfg=cfg, cutoff=_U_SUPPORT)
    return 0.5 * result.value


def density_Pbar(sigma: float, y: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Density of the difference of two independent draws from density_P:
    U_sigma(|y|) / (4 xi(sigma)^2); symmetric and integrates to 1."""
    return U_sigma(sigma, abs(y), "two_term", cfg) / (4.0 * xi_real(sigma, cfg) ** 2)
