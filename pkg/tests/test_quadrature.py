import math

import pytest

from xi_ineq.config import EvalConfig
from xi_ineq.errors import ConvergenceError, EvaluationError
from xi_ineq.quadrature import (NeumaierSum, integrate_eta_weighted,
                                integrate_finite, integrate_oscillatory_cos,
                                integrate_semi_infinite)


class TestFinite:
    def test_polynomial(self, cfg):
        r = integrate_finite(lambda x: x * x, 0.0, 1.0, cfg)
        assert abs(r.value - 1.0 / 3.0) < 1e-13
        assert r.err_est >= 0.0 and r.evals >= 15 and r.converged

    def test_sine(self, cfg):
        r = integrate_finite(math.sin, 0.0, math.pi, cfg)
        assert abs(r.value - 2.0) < 1e-12

    def test_needs_subdivision(self, cfg):
        r = integrate_finite(lambda x: 1.0 / math.sqrt(x), 1e-8, 1.0, cfg)
        assert abs(r.value - 2.0 * (1.0 - 1e-4)) < 1e-9
        assert r.evals > 15

    def test_error_estimate_covers_truth(self, cfg):
        r = integrate_finite(lambda x: math.exp(-x * x), 0.0, 5.0, cfg)
        truth = 0.5 * math.sqrt(math.pi) * math.erf(5.0)
        assert abs(r.value - truth) <= max(r.err_est, 1e-14)

    def test_tightening_stays_within_err_est(self, cfg):
        f = lambda x: math.cos(3.0 * x) * math.exp(-x)
        base = integrate_finite(f, 0.0, 4.0, cfg)
        tight = integrate_finite(f, 0.0, 4.0, cfg.tightened())
        deeper = integrate_finite(f, 0.0, 4.0,
                                  EvalConfig(quad_max_depth=2 * cfg.quad_max_depth))
        assert abs(base.value - tight.value) <= base.err_est + tight.err_est
        assert abs(base.value - deeper.value) <= base.err_est + deeper.err_est

    def test_nonfinite_integrand_reports_abscissa(self, cfg):
        with pytest.raises(EvaluationError) as err:
            integrate_finite(lambda x: float("nan") if x > 0.5 else 1.0, 0.0, 1.0, cfg)
        assert 0.5 <= err.value.abscissa <= 1.0

    def test_depth_exhaustion_carries_partial(self):
        shallow = EvalConfig(quad_max_depth=2, quad_rel_tol=1e-15, quad_abs_tol=1e-16)
        with pytest.raises(ConvergenceError) as err:
            integrate_finite(lambda x: abs(x - 1.0 / 3.0) ** 0.2, 0.0, 1.0, shallow)
        partial = err.value.partial
        assert partial is not None and not partial.converged
        assert abs(partial.value - 0.77083) < 0.05

    def test_bad_interval(self, cfg):
        with pytest.raises(ValueError):
            integrate_finite(math.sin, 1.0, 1.0, cfg)


class TestSemiInfinite:
    def test_exponential(self, cfg):
        r = integrate_semi_infinite(lambda x: math.exp(-x), 0.0, 1.0, cfg)
        assert abs(r.value - 1.0) < 1e-12
        assert r.truncation_point is not None

    def test_gamma_moment(self, cfg):
        # int_0^inf e^{-2(T+1)x} x^{2n} dx = (2n)!/(2(T+1))^{2n+1}, T=1, n=2;
        # the polynomial factor is folded into the decay hint: x^4 e^{-4x} <= 5 e^{-3x}
        r = integrate_semi_infinite(lambda x: math.exp(-4.0 * x) * x ** 4,
                                    0.0, 3.0, cfg, scale=5.0)
        assert abs(r.value - math.factorial(4) / 4.0 ** 5) < 1e-12

    def test_inverse_square(self, cfg):
        # 1/y^2 is not exponentially decaying; integrate via u = 1/y instead
        r = integrate_finite(lambda u: 1.0, 0.0, 1.0, cfg)
        assert abs(r.value - 1.0) < 1e-13
        # and the direct finite-cut route converges to 1 as the cut grows
        near = integrate_finite(lambda y: y ** -2.0, 1.0, 1e6, cfg)
        assert abs(near.value - (1.0 - 1e-6)) < 1e-9

    def test_explicit_cutoff_override(self, cfg):
        r = integrate_semi_infinite(lambda x: math.exp(-x), 0.0, 1.0, cfg, cutoff=40.0)
        assert r.truncation_point == 40.0
        assert abs(r.value - 1.0) < 1e-12


class TestEtaWeighted:
    def test_decaying_integrand_vs_offset_route(self, cfg):
        # eta_0(y) = 2/sqrt(y^2-1); the naive epsilon-offset route walks
        # geometric rings toward the singular edge and misses
        # ~ 2 e^{-2 pi} sqrt(2 eps) of mass, which bounds the comparison
        r = integrate_eta_weighted(lambda y: math.exp(-2.0 * math.pi * y), 0.0, cfg)
        f = lambda y: math.exp(-2.0 * math.pi * y) * 2.0 / math.sqrt(y * y - 1.0)
        eps = 1e-12
        edges = [1.0 + eps * 10.0 ** k for k in range(13)] + [5.0]
        offset = sum(integrate_finite(f, lo, hi, cfg, abs_tol=1e-13).value
                     for lo, hi in zip(edges, edges[1:]))
        bias = 2.0 * math.exp(-2.0 * math.pi) * math.sqrt(2.0 * eps)
        assert abs(r.value - offset) <= bias + r.err_est + 1e-10
        assert abs(r.value - offset) <= 1e-7

    def test_windowed_closed_form(self, cfg):
        # int_1^2 eta_0(y) dy = 2 arccosh(2)
        r = integrate_eta_weighted(lambda y: 1.0 if y <= 2.0 else 0.0, 0.0, cfg,
                                   cutoff=math.acosh(2.0))
        assert abs(r.value - 2.0 * math.acosh(2.0)) < 1e-12

    def test_linearity(self, cfg):
        g = lambda y: math.exp(-3.0 * y)
        one = integrate_eta_weighted(g, 0.25, cfg, decay_rate=3.0)
        five = integrate_eta_weighted(lambda y: 5.0 * g(y), 0.25, cfg, decay_rate=3.0)
        assert abs(five.value - 5.0 * one.value) <= 1e-13 * abs(five.value) + 1e-15

    def test_symmetry_in_tau(self, cfg):
        g = lambda y: math.exp(-2.0 * y)
        plus = integrate_eta_weighted(g, 0.3, cfg, decay_rate=2.0)
        minus = integrate_eta_weighted(g, -0.3, cfg, decay_rate=2.0)
        assert abs(plus.value - minus.value) <= 1e-13 * abs(plus.value)


class TestOscillatory:
    @pytest.mark.parametrize("t", [3.0, 20.0])
    def test_lorentzian_closed_form(self, cfg, t):
        r = integrate_oscillatory_cos(lambda x: math.exp(-x), t, 0.0, 1.0, cfg)
        assert abs(r.value - 1.0 / (1.0 + t * t)) < 1e-11

    def test_t_zero_matches_semi_infinite(self, cfg):
        a = integrate_oscillatory_cos(lambda x: math.exp(-x), 0.0, 0.0, 1.0, cfg)
        b = integrate_semi_infinite(lambda x: math.exp(-x), 0.0, 1.0, cfg)
        assert abs(a.value - b.value) < 1e-13

    def test_low_frequency_path(self, cfg):
        r = integrate_oscillatory_cos(lambda x: math.exp(-x), 0.5, 0.0, 1.0, cfg)
        assert abs(r.value - 1.0 / 1.25) < 1e-11


def test_neumaier_compensation():
    acc = NeumaierSum()
    for x in [1e16, 1.0, -1e16, 1.0]:
        acc.add(x)
    assert acc.value == 2.0


def test_config_validation():
    with pytest.raises(ValueError):
        EvalConfig(series_tol=0.0)
    with pytest.raises(ValueError):
        EvalConfig(quad_max_depth=0)
    with pytest.raises(ValueError):
        EvalConfig(upper_cutoff_policy="nope")
    assert EvalConfig().truncation_point(1.0) > 0.0
