"""Modulus representation of the completed zeta function.

The central identity evaluated here, for real sigma and t, is

    2|xi(sigma-it)|^2 = S_sigma + T_sigma t^2
        + (t^2+(1-sigma)^2)(t^2+sigma^2) int_0^inf W_sigma(x) e^{-sigma x} cos(tx) dx

with W_sigma an exponential-twisted self-convolution of the theta series R.
S_sigma and T_sigma are computed by three independent routes (A: R-integrals,
B: F-series, C: R-integrals with the (0,1) part folded to (1,inf) by theta
inversion); converged values of the three routes must agree, and two published
fixed-truncation recipes of routes B and C are implemented bit-faithfully for
reproduction purposes.

W has the closed form W_sigma(x) = 2^{sigma+3/2} pi^{-1} Hcal_sigma(x) e^{sigma x},
where Hcal_sigma(x) = Gcal_sigma(e^x) e^{-x/2} and

    Gcal_sigma(lam) = sum_{m,n} m^{-sigma-1/2} n^{sigma-3/2} F_sigma(pi m n lam),
    F_sigma(lam)    = 2^{1/2-sigma} * lam * int_0^inf e^{-2 lam cosh u}
                                               cosh((sigma-1/2) u) du.

The same objects reappear in the J/eta parametrization: the t=0 moments a(k),
the power-series coefficients c(k) of |xi|^2 in t^2, and the direct double
integral route used by the positivity scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .config import DEFAULT_CONFIG, EvalConfig
from .errors import ConvergenceError, DomainError
from .quadrature import (integrate_eta_weighted, integrate_finite,
                         integrate_oscillatory_cos, integrate_semi_infinite)
from .theta import (J_tau, divisor_sigma, stable_combo_A, stable_combo_B,
                    theta_R, theta_R_prime, theta_R_prime_truncated,
                    theta_R_truncated)

_EXP_UNDERFLOW = 745.0


@dataclass
class ConstantsReport:
    sigma: float
    s_value: float
    t_value: float
    method: str                      # A_direct | B_series | C_inversion
    truncation: dict = field(default_factory=dict)
    err_est: float = 0.0


@dataclass
class PowerSeriesCoeffs:
    sigma: float
    coeffs: list                     # c_{sigma-1/2}(k), k = 0..K
    K: int


# ---------------------------------------------------------------------------
# F and its first three derivatives
# ---------------------------------------------------------------------------

def _f_poly(d: int, lam: float, c: float) -> float:
    """Polynomial factor of the d-th derivative integrand at cosh(u) = c."""
    if d == 0:
        return lam
    if d == 1:
        return 1.0 - 2.0 * lam * c
    if d == 2:
        return -2.0 * c * (2.0 - 2.0 * lam * c)
    return 4.0 * c * c * (3.0 - 2.0 * lam * c)


def _f_cosh_cutoff(lam: float, cfg: EvalConfig) -> float:
    # 2 lam (cosh u - 1) beyond the working tolerance, with polynomial margin
    target = math.log(40.0 * max(lam, 1.0) / cfg.quad_abs_tol) + 8.0
    return math.acosh(1.0 + target / (2.0 * lam)) + 0.25


def F_sigma(sigma: float, lam: float, deriv: int = 0, form: str = "direct",
            cfg: EvalConfig = DEFAULT_CONFIG, bounds: tuple = (0.001, 20.0)) -> float:
    """F_sigma(lam) (and d/dlam derivatives up to order 3).

    form="direct": the singular-kernel integral with the endpoint singularity
    removed by y = 2(cosh u - 1), valid for every deriv.
    form="eta": the weight-integral form 2^{-(sigma+1/2)} int_1^inf
    lam e^{-2 lam y} eta_{sigma-1/2}(y) dy, deriv=0 only.
    form="raw": the untransformed y-integral on `bounds`, integrable because the
    lower bound stays off the singularity; used by fixed-truncation reproduction.
    """
    if lam <= 0.0:
        raise DomainError(f"F_sigma needs lam > 0, got {lam!r}")
    if deriv not in (0, 1, 2, 3):
        raise DomainError(f"deriv must be in 0..3, got {deriv!r}")
    tau = sigma - 0.5

    if form == "direct":
        if 2.0 * lam > _EXP_UNDERFLOW:
            return 0.0

        def integrand(u):
            c = math.cosh(u)
            return (2.0 ** (-tau) * _f_poly(deriv, lam, c)
                    * math.exp(-2.0 * lam * c) * math.cosh(tau * u))

        # F spans e^{-2 lam} scales; only relative acceptance keeps large lam honest
        return integrate_finite(integrand, 0.0, _f_cosh_cutoff(lam, cfg), cfg,
                                abs_tol=1e-300).value

    if form == "eta":
        if deriv != 0:
            raise ValueError("form='eta' supports deriv=0 only")
        result = integrate_eta_weighted(
            lambda y: lam * math.exp(-2.0 * lam * y), tau, cfg,
            decay_rate=2.0 * lam, scale=lam)
        return 2.0 ** (-(sigma + 0.5)) * result.value

    if form == "raw":
        a, b = bounds

        def integrand(y):
            s = math.sqrt(y * y + 4.0 * y)
            arg = lam * (y + 2.0)
            if arg > _EXP_UNDERFLOW:
                return 0.0
            bracket = (y + 2.0 + s) ** (-tau) + (y + 2.0 - s) ** (-tau)
            return _f_poly(deriv, lam, 0.5 * (y + 2.0)) * math.exp(-arg) * bracket / (2.0 * s)

        return integrate_finite(integrand, a, b, cfg, abs_tol=1e-300).value

    raise ValueError(f"unknown F_sigma form {form!r}")


# ---------------------------------------------------------------------------
# The G-series, its log-variable version Hcal, and W
# ---------------------------------------------------------------------------

def _g_weights(sigma: float, lam: float, deriv: int, cfg: EvalConfig):
    """Per-product weights of the collapsed series
    sum_p sigma_{2 sigma - 1}(p) p^{-sigma-1/2} (pi p)^deriv F^{(deriv)}(pi p lam)."""
    out = []
    for p in range(1, cfg.series_max_terms + 1):
        mu = math.pi * p * lam
        if 2.0 * mu > _EXP_UNDERFLOW:
            break
        w = divisor_sigma(p, 2.0 * sigma - 1.0) * float(p) ** (-sigma - 0.5) * (math.pi * p) ** deriv
        out.append((mu, w))
        # geometric decay e^{-2 pi lam} per step makes a fixed small cap safe
        if p >= 6 and math.exp(-2.0 * (mu - math.pi * lam)) < cfg.series_tol:
            break
    return out


def calG(sigma: float, lam: float, deriv: int = 0,
         cfg: EvalConfig = DEFAULT_CONFIG, abs_tol: float = None) -> float:
    """deriv-th derivative of Gcal_sigma(lam) = sum_{m,n} m^{-sigma-1/2}
    n^{sigma-3/2} F_sigma(pi m n lam).

    The (m, n) sum collapses over the product p = mn with divisor-sum weights,
    and the remaining p-sum is folded inside a single cosh-substituted integral
    so each evaluation costs one adaptive quadrature.  Acceptance is relative
    by default (values span e^{-2 pi lam} scales); callers that only need an
    absolute target, like the cosine transform, pass `abs_tol`.
    """
    if lam <= 0.0:
        raise DomainError(f"calG needs lam > 0, got {lam!r}")
    terms = _g_weights(sigma, lam, deriv, cfg)
    if not terms:
        return 0.0
    tau = sigma - 0.5
    u_max = _f_cosh_cutoff(terms[0][0], cfg)

    def integrand(u):
        c = math.cosh(u)
        acc = 0.0
        for mu, w in terms:
            a = 2.0 * mu * c
            if a > _EXP_UNDERFLOW:
                break
            acc += w * _f_poly(deriv, mu, c) * math.exp(-a)
        return 2.0 ** (-tau) * acc * math.cosh(tau * u)

    return integrate_finite(integrand, 0.0, u_max, cfg,
                            abs_tol=1e-300 if abs_tol is None else abs_tol).value


def calH(sigma: float, x: float, cfg: EvalConfig = DEFAULT_CONFIG,
         abs_tol: float = None) -> float:
    """Hcal_sigma(x) = Gcal_sigma(e^x) e^{-x/2}; decays like exp(-2 pi e^x)."""
    return calG(sigma, math.exp(x), 0, cfg, abs_tol=abs_tol) * math.exp(-0.5 * x)


def calH_derivs_at_0(sigma: float, cfg: EvalConfig = DEFAULT_CONFIG) -> dict:
    """Hcal(0), Hcal'(0) and Hcal'''(0) via the chain rule through Gcal at 1:

        h0 = G(1)
        h1 = G'(1) - G(1)/2
        h3 = G'''(1) + (3/2) G''(1) + (1/4) G'(1) - (1/8) G(1)
    """
    g = [calG(sigma, 1.0, d, cfg) for d in range(4)]
    return {
        "h0": g[0],
        "h1": g[1] - 0.5 * g[0],
        "h3": g[3] + 1.5 * g[2] + 0.25 * g[1] - 0.125 * g[0],
    }


def W_sigma(sigma: float, x: float, form: str = "closed",
            cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Twisted self-convolution of R.

    closed:       2^{sigma+3/2} pi^{-1} Hcal_sigma(x) e^{sigma x}
    convolution:  int_-inf^inf R(e^u) R(e^{x-u}) e^{x+(2 sigma-1) u} du, with
                  both tails killed doubly exponentially; the support lies in
                  |u - x/2| < 3.5, which is the window integrated.
    """
    if x < 0.0:
        raise DomainError(f"W_sigma needs x >= 0, got {x!r}")
    if form == "closed":
        return 2.0 ** (sigma + 1.5) / math.pi * calH(sigma, x, cfg) * math.exp(sigma * x)
    if form == "convolution":
        def integrand(u):
            return (theta_R(math.exp(u), cfg) * theta_R(math.exp(x - u), cfg)
                    * math.exp(x + (2.0 * sigma - 1.0) * u))

        # positive integrand far below quad_abs_tol for x >~ 2: force the
        # relative criterion so tiny values keep relative accuracy
        half = 3.5
        return integrate_finite(integrand, 0.5 * x - half, 0.5 * x + half, cfg,
                                abs_tol=1e-300).value
    raise ValueError(f"unknown W_sigma form {form!r}")


def _w_exp_cutoff(cfg: EvalConfig) -> float:
    # Hcal(x) ~ exp(-2 pi (e^x - 1)); cut when that passes working tolerance
    target = math.log(20.0 / cfg.quad_abs_tol) + 6.0
    return math.log(1.0 + target / (2.0 * math.pi))


def w_cos_transform(sigma: float, t: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """int_0^inf W_sigma(x) e^{-sigma x} cos(tx) dx, through the closed form
    (the integrand is 2^{sigma+3/2} pi^{-1} Hcal_sigma(x))."""
    pref = 2.0 ** (sigma + 1.5) / math.pi
    result = integrate_oscillatory_cos(
        lambda x: pref * calH(sigma, x, cfg, abs_tol=0.1 * cfg.quad_abs_tol), t, 0.0,
        decay_rate=2.0 * math.pi, cfg=cfg, cutoff=_w_exp_cutoff(cfg))
    return result.value


# ---------------------------------------------------------------------------
# The constants S_sigma and T_sigma, three ways
# ---------------------------------------------------------------------------

_R_DECAY = math.pi           # R(y) <= 2 e^{-pi y^2} <= 2 e^{-pi y} for y >= 1
_R_SCALE = 300.0             # safe envelope for the R'^2-type integrands


def _st_method_A(sigma: float, cfg: EvalConfig):
    """R-integral route; the half-line integral is split at 1 and the (0,1)
    part evaluated with the inversion-stable combinations."""
    s = sigma
    R1 = theta_R(1.0, cfg)
    R1p = theta_R_prime(1.0, cfg)
    err = 0.0

    def semi(f, scale=_R_SCALE):
        nonlocal err
        r = integrate_semi_infinite(f, 1.0, _R_DECAY, cfg, scale=scale)
        err += r.err_est
        return r.value

    def low(f):
        nonlocal err
        r = integrate_finite(f, 0.0, 1.0, cfg)
        err += r.err_est
        return r.value

    def combo(y, coef):
        return (y ** (2.0 * s - 2.0) * theta_R(y, cfg)
                * (coef * stable_combo_A(y, cfg) + stable_combo_B(y, cfg)))

    s_value = (
        -s * R1 - R1p + (1.0 - 2.0 * s) * (0.5 * R1 * R1 + R1 * R1p)
        + 2.0 * s * (1.0 - s) * (2.0 * s - 1.0)
        * (semi(lambda y: y ** (-2.0 * s) * theta_R(y, cfg))
           - semi(lambda y: y ** (1.0 - 2.0 * s) * theta_R(y, cfg)))
        - s * (1.0 - s) * (2.0 * s - 1.0)
        * (semi(lambda y: y ** (1.0 - 2.0 * s) * theta_R(y, cfg) ** 2)
           + semi(lambda y: y ** (2.0 * s - 1.0) * theta_R(y, cfg) ** 2))
        - s * (1.0 - s) * (low(lambda y: combo(y, 1.0 - s))
                           + semi(lambda y: combo(y, 1.0 - s)))
    )
    t_value = -(low(lambda y: combo(y, s)) + semi(lambda y: combo(y, s)))
    return s_value, t_value, err


def _st_method_B(sigma: float, cfg: EvalConfig, paper_truncation: bool):
    """F-series route.

    Converged mode collapses (m, n) over products with divisor weights and a
    relative-tail stop.  Fixed-truncation mode follows the published recipe
    bit-faithfully: the literal double sum m, n <= 10 with every F-integral
    forced onto [0.001, 20] (no substitution, no adaptivity past the bounds).
    """
    s = sigma
    coef = s * s + (1.0 - s) ** 2 - 0.25

    def parts(F0, F1, F2, F3, lam):
        t_part = F1 * lam - 0.5 * F0
        s_part = -F3 * lam ** 3 - 1.5 * F2 * lam ** 2 + coef * t_part
        return s_part, t_part

    s_sum = 0.0
    t_sum = 0.0
    if paper_truncation:
        for m in range(1, 11):
            for n in range(1, 11):
                lam = math.pi * m * n
                w = float(m) ** (-s - 0.5) * float(n) ** (s - 1.5)
                F = [F_sigma(s, lam, d, "raw", cfg) for d in range(4)]
                sp, tp = parts(*F, lam)
                s_sum += w * sp
                t_sum += w * tp
        trunc = {"double_sum_cap": 10, "f_integral_bounds": [0.001, 20.0]}
    else:
        for p in range(1, cfg.series_max_terms + 1):
            lam = math.pi * p
            if 2.0 * lam > _EXP_UNDERFLOW:
                break
            w = divisor_sigma(p, 2.0 * s - 1.0) * float(p) ** (-s - 0.5)
            F = [F_sigma(s, lam, d, "direct", cfg) for d in range(4)]
            sp, tp = parts(*F, lam)
            s_sum += w * sp
            t_sum += w * tp
            if p >= 3 and abs(w * sp) <= cfg.series_tol * abs(s_sum) \
                    and abs(w * tp) <= cfg.series_tol * abs(t_sum):
                break
        else:
            raise ConvergenceError("product-sum cap reached in method B")
        trunc = {"product_sum_terms": p, "f_integral_bounds": "adaptive"}

    pref = 2.0 ** (s + 1.5) / math.pi
    err = cfg.quad_rel_tol * (abs(s_sum) + abs(t_sum)) * pref * 10.0
    return pref * s_sum, pref * t_sum, err, trunc


def _st_method_C(sigma: float, cfg: EvalConfig, paper_truncation: bool):
    """Inversion route: same R-integral expansion as method A, with the (0,1)
    piece transformed to (1, inf) by theta inversion, so every integral lives
    on the half-line above 1.

    Fixed-truncation mode clamps R to its first 5 series terms (no inversion)
    and every integral to [1, 10], per the published recipe.
    """
    s = sigma
    if paper_truncation:
        R = lambda y: theta_R_truncated(y, 5)
        Rp = lambda y: theta_R_prime_truncated(y, 5)
        hi = 10.0
        trunc = {"theta_terms": 5, "integral_bounds": [1.0, 10.0]}
    else:
        R = lambda y: theta_R(y, cfg)
        Rp = lambda y: theta_R_prime(y, cfg)
        hi = None
        trunc = {"theta_terms": "adaptive", "integral_bounds": "adaptive"}
    err = 0.0

    def iq(f):
        nonlocal err
        if hi is None:
            r = integrate_semi_infinite(f, 1.0, _R_DECAY, cfg, scale=_R_SCALE)
        else:
            r = integrate_finite(f, 1.0, hi, cfg)
        err += r.err_est
        return r.value

    R1, R1p = R(1.0), Rp(1.0)
    s_value = (
        -s * R1 - R1p + (1.0 - 2.0 * s) * (0.5 * R1 * R1 + R1 * R1p)
        + 2.0 * s * (1.0 - s) * (2.0 * s - 1.0)
        * (iq(lambda y: y ** (-2.0 * s) * R(y)) - iq(lambda y: y ** (1.0 - 2.0 * s) * R(y)))
        - s * (1.0 - s) * (2.0 * s - 1.0)
        * (iq(lambda y: y ** (1.0 - 2.0 * s) * R(y) ** 2)
           + iq(lambda y: y ** (2.0 * s - 1.0) * R(y) ** 2))
        - s * (1.0 - s) * iq(
            lambda y: y ** (2.0 * s - 2.0) * R(y)
            * ((1.0 - s) * (y * R(y) + y - 1.0) + (y * y * Rp(y) + 1.0)))
        + s * (1.0 - s) * iq(
            lambda y: y ** (-2.0 * s) * R(1.0 / y) * (s * R(y) + y * Rp(y)))
    )
    t_value = (
        -iq(lambda y: y ** (2.0 * s - 2.0) * R(y)
            * (s * (y * R(y) + y - 1.0) + (y * y * Rp(y) + 1.0)))
        + iq(lambda y: y ** (-2.0 * s) * R(1.0 / y) * ((1.0 - s) * R(y) + y * Rp(y)))
    )
    return s_value, t_value, err, trunc


def S_T_constants(sigma: float, method: str = "B_series",
                  cfg: EvalConfig = DEFAULT_CONFIG,
                  paper_truncation: bool = False) -> ConstantsReport:
    """The pair (S_sigma, T_sigma) by the requested route.

    Converged tolerances make the three routes agree; `paper_truncation`
    switches routes B and C to their published fixed-truncation recipes (route
    A has no published recipe and rejects the flag).
    """
    if method == "A_direct":
        if paper_truncation:
            raise ValueError("A_direct has no fixed-truncation recipe")
        s_value, t_value, err = _st_method_A(sigma, cfg)
        trunc = {"integral_bounds": "adaptive, split at 1"}
        if not 0.0 < sigma < 1.0:
            # best-effort value: the half-line integral's convergence is only
            # guaranteed inside the strip
            trunc["domain_warning"] = f"sigma={sigma} outside (0,1)"
    elif method == "B_series":
        s_value, t_value, err, trunc = _st_method_B(sigma, cfg, paper_truncation)
    elif method == "C_inversion":
        s_value, t_value, err, trunc = _st_method_C(sigma, cfg, paper_truncation)
    else:
        raise ValueError(f"unknown method {method!r}")
    return ConstantsReport(sigma, s_value, t_value, method, trunc, err)


@lru_cache(maxsize=64)
def constants(sigma: float, cfg: EvalConfig = DEFAULT_CONFIG):
    """Cached converged (S_sigma, T_sigma); the series route is the cheapest."""
    report = S_T_constants(sigma, "B_series", cfg)
    return report.s_value, report.t_value


# ---------------------------------------------------------------------------
# |xi|^2 via the representation, two parametrizations
# ---------------------------------------------------------------------------

def modulus_rhs(sigma: float, t: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """|xi(sigma-it)|^2 as the representation gives it (half the displayed sum)."""
    if not 0.0 < sigma < 1.0:
        raise DomainError(f"modulus_rhs needs sigma in (0,1), got {sigma!r}")
    s_val, t_val = constants(sigma, cfg)
    poly = (t * t + (1.0 - sigma) ** 2) * (t * t + sigma * sigma)
    return 0.5 * (s_val + t_val * t * t + poly * w_cos_transform(sigma, t, cfg))


def _j_inner_cos(tau: float, t: float, y: float, cfg: EvalConfig,
                 log_margin: float = 0.0) -> float:
    """int_1^inf cos(2 t ln x) J_tau(x^2 y) dx, via u = ln x.

    The integrand decays like exp(-2 pi y e^{2u}), so the u-range is tiny.
    """
    lim = _EXP_UNDERFLOW / 20.0 + log_margin   # e^{-37} below any tolerance here
    if 2.0 * math.pi * y >= lim:
        return 0.0
    u_max = 0.5 * math.log(lim / (2.0 * math.pi * y))

    def f(u):
        return J_tau(tau, math.exp(2.0 * u) * y, 0, cfg) * math.exp(u)

    return integrate_oscillatory_cos(f, 2.0 * t, 0.0, decay_rate=1.0, cfg=cfg,
                                     cutoff=u_max).value


def modulus_rhs_via_J(tau: float, t: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """2|xi(tau+1/2-it)|^2 straight from the J/eta parametrization:

        4[(t^2+tau^2+1/4)^2 - tau^2] * int int cos(2t ln x) J(x^2 y) eta(y) dx dy
      + (t^2+2 tau^2+1/4) * int [2y J' + J] eta dy
      - int y [2y^2 J''' + 9y J'' + 6 J'] eta dy
    """
    dbl = integrate_eta_weighted(
        lambda y: _j_inner_cos(tau, t, y, cfg), tau, cfg,
        decay_rate=2.0 * math.pi, scale=1.0).value
    lin = integrate_eta_weighted(
        lambda y: 2.0 * y * J_tau(tau, y, 1, cfg) + J_tau(tau, y, 0, cfg),
        tau, cfg, decay_rate=2.0 * math.pi, scale=30.0).value
    cub = integrate_eta_weighted(
        lambda y: y * (2.0 * y * y * J_tau(tau, y, 3, cfg)
                       + 9.0 * y * J_tau(tau, y, 2, cfg)
                       + 6.0 * J_tau(tau, y, 1, cfg)),
        tau, cfg, decay_rate=2.0 * math.pi, scale=2e4).value
    quartic = 4.0 * ((t * t + tau * tau + 0.25) ** 2 - tau * tau)
    return quartic * dbl + (t * t + 2.0 * tau * tau + 0.25) * lin - cub


# ---------------------------------------------------------------------------
# Power-series coefficients of |xi(sigma-it)|^2 in t^2
# ---------------------------------------------------------------------------

def a_coeff(tau: float, k: int, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """a_tau(k) = 2^{2k+1} int int (ln x)^{2k} J_tau(x^2 y) eta_tau(y) dx dy."""
    if k < 0:
        raise DomainError(f"a_coeff needs k >= 0, got {k!r}")
    margin = 4.0 * k   # polynomial weight u^{2k} shifts the cutoff slightly

    def inner(y):
        lim = _EXP_UNDERFLOW / 20.0 + margin
        if 2.0 * math.pi * y >= lim:
            return 0.0
        u_max = 0.5 * math.log(lim / (2.0 * math.pi * y))

        def f(u):
            return u ** (2 * k) * J_tau(tau, math.exp(2.0 * u) * y, 0, cfg) * math.exp(u)

        return integrate_finite(f, 0.0, u_max, cfg).value

    outer = integrate_eta_weighted(inner, tau, cfg, decay_rate=2.0 * math.pi,
                                   scale=1.0).value
    return 2.0 ** (2 * k + 1) * outer


def c_coeff(tau: float, k: int, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Coefficient of t^{2k} in |xi(tau+1/2-it)|^2; alternates in sign."""
    if k < 0:
        raise DomainError(f"c_coeff needs k >= 0, got {k!r}")
    q = (tau * tau - 0.25) ** 2
    if k == 0:
        lin = integrate_eta_weighted(
            lambda y: (-y ** 3 * J_tau(tau, y, 3, cfg)
                       - 4.5 * y * y * J_tau(tau, y, 2, cfg)
                       - 0.25 * (11.0 - 8.0 * tau * tau) * y * J_tau(tau, y, 1, cfg)
                       + 0.125 * (1.0 + 8.0 * tau * tau) * J_tau(tau, y, 0, cfg)),
            tau, cfg, decay_rate=2.0 * math.pi, scale=1e4).value
        return lin + q * a_coeff(tau, 0, cfg)
    if k == 1:
        lin = integrate_eta_weighted(
            lambda y: y * J_tau(tau, y, 1, cfg) + 0.5 * J_tau(tau, y, 0, cfg),
            tau, cfg, decay_rate=2.0 * math.pi, scale=30.0).value
        return (lin - 0.5 * q * a_coeff(tau, 1, cfg)
                + 2.0 * (tau * tau + 0.25) * a_coeff(tau, 0, cfg))
    sign = -1.0 if k % 2 else 1.0
    return sign / math.factorial(2 * k) * (
        q * a_coeff(tau, k, cfg)
        - 4.0 * k * (2.0 * k - 1.0) * (tau * tau + 0.25) * a_coeff(tau, k - 1, cfg)
        + 2.0 * k * (2.0 * k - 1.0) * (2.0 * k - 2.0) * (2.0 * k - 3.0) * a_coeff(tau, k - 2, cfg))


def power_series_coeffs(sigma: float, K: int,
                        cfg: EvalConfig = DEFAULT_CONFIG) -> PowerSeriesCoeffs:
    """First K+1 coefficients of |xi(sigma-it)|^2 = sum_k c(k) t^{2k}."""
    tau = sigma - 0.5
    return PowerSeriesCoeffs(sigma, [c_coeff(tau, k, cfg) for k in range(K + 1)], K)
