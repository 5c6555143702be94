import math

import pytest

from conftest import xi_reference
from xi_ineq.quadrature import integrate_finite
from xi_ineq.xi import (U_sigma, char_fn_Xi, density_P, density_Pbar, xi,
                        xi_mod_sq, xi_mod_sq_via_U)

# this oracle at tightened tolerance, cross-checked against the Gamma*zeta route
XI_HALF = 0.49712077818831411
XI_3_4 = 0.49783913388588071

SYMMETRY_GRID = [complex(0.3, 2.0), complex(0.1, -7.5), complex(0.75, 5.0),
                 complex(-0.5, 1.0), complex(0.5, 14.0), complex(0.9, -20.0),
                 complex(0.55, 0.5), complex(2.0, 3.0), complex(0.6, 11.0),
                 complex(0.25, 0.0)]


class TestXi:
    def test_endpoint_values(self, cfg):
        assert abs(xi(0.0, cfg) - 0.5) < 1e-12
        assert abs(xi(1.0, cfg) - 0.5) < 1e-12

    def test_half_line_regression(self, cfg):
        assert abs(xi(0.5, cfg).real - XI_HALF) < 1e-12
        assert abs(xi(0.75, cfg).real - XI_3_4) < 1e-12

    @pytest.mark.parametrize("s", SYMMETRY_GRID)
    def test_functional_symmetry(self, cfg, s):
        lhs, rhs = xi(s, cfg), xi(1.0 - s, cfg)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))

    @pytest.mark.parametrize("s", SYMMETRY_GRID)
    def test_against_gamma_zeta_route(self, cfg, s):
        mine = xi(s, cfg)
        ref = xi_reference(s.real, -s.imag)
        assert abs(mine - ref) <= 1e-11 * max(1.0, abs(ref))

    def test_real_positive_on_unit_segment(self, cfg):
        for sigma in (0.0, 0.2, 0.5, 0.8, 1.0):
            v = xi(complex(sigma, 0.0), cfg)
            assert abs(v.imag) < 1e-14 and v.real > 0.0

    def test_first_zero_bracketed(self, cfg):
        # Xi(1/2 - it) is real; its smallest positive zero sits near 14.1347
        lo, hi = xi(complex(0.5, -14.10), cfg).real, xi(complex(0.5, -14.20), cfg).real
        assert lo > 0.0 > hi


class TestModSq:
    def test_t_zero_is_square(self, cfg):
        assert xi_mod_sq(0.75, 0.0, cfg) == pytest.approx(XI_3_4 ** 2, rel=1e-12)

    @pytest.mark.parametrize("t", [0.5, 3.0, 14.2])
    def test_even_in_t(self, cfg, t):
        a, b = xi_mod_sq(0.6, t, cfg), xi_mod_sq(0.6, -t, cfg)
        assert abs(a - b) <= 1e-13 * abs(a)

    def test_dip_near_first_zero_on_the_line(self, cfg):
        dip = min(xi_mod_sq(0.5, 14.1 + 0.005 * k, cfg) for k in range(15))
        assert dip < 1e-6 * xi_mod_sq(0.5, 0.0, cfg)


class TestCharFn:
    def test_unit_at_zero(self, cfg):
        assert abs(char_fn_Xi(0.75, 0.0, cfg) - 1.0) < 1e-13

    @pytest.mark.parametrize("t", list(range(1, 11)))
    def test_bounded_by_one(self, cfg, t):
        assert abs(char_fn_Xi(0.75, float(t), cfg)) <= 1.0 + 1e-12

    def test_hermitian(self, cfg):
        a = char_fn_Xi(0.6, 2.5, cfg)
        b = char_fn_Xi(0.6, -2.5, cfg)
        assert abs(a - b.conjugate()) < 1e-13


class TestDensityP:
    def test_normalization(self, cfg):
        total = integrate_finite(lambda y: density_P(0.75, y, cfg), -8.0, 8.0, cfg,
                                 abs_tol=1e-11, min_panels=16).value
        assert abs(total - 1.0) < 1e-8

    def test_characteristic_function_match(self, cfg):
        t = 2.0
        re = integrate_finite(lambda y: math.cos(t * y) * density_P(0.75, y, cfg),
                              -8.0, 8.0, cfg, abs_tol=1e-11, min_panels=16).value
        im = integrate_finite(lambda y: math.sin(t * y) * density_P(0.75, y, cfg),
                              -8.0, 8.0, cfg, abs_tol=1e-11, min_panels=16).value
        assert abs(complex(re, im) - char_fn_Xi(0.75, t, cfg)) < 1e-8

    def test_nonnegative_on_grid(self, cfg):
        for k in range(81):
            y = -10.0 + 0.25 * k
            assert density_P(0.75, y, cfg) >= 0.0


class TestUSigma:
    @pytest.mark.parametrize("y", [0.0, 0.5, 1.0, 2.0])
    def test_forms_cross_check(self, cfg, y):
        two = U_sigma(0.75, y, "two_term", cfg)
        three = U_sigma(0.75, y, "three_term", cfg)
        assert abs(two - three) <= 1e-8 * abs(two)
        assert two > 0.0

    @pytest.mark.parametrize("sigma", [0.55, 0.75, 0.9])
    @pytest.mark.parametrize("y", [0.0, 0.5, 1.0, 2.0])
    def test_envelope_bound(self, cfg, sigma, y):
        bound = 96.0 * math.pi ** 8 * math.exp(5.0 * y - 2.0 * math.exp(y))
        assert U_sigma(sigma, y, "two_term", cfg) < bound

    @pytest.mark.parametrize("sigma", [0.55, 0.6, 0.75, 0.9])
    @pytest.mark.parametrize("t", [0.0, 1.0, 2.0, 5.0, 10.0, 20.0])
    def test_cosine_route_equals_oracle(self, cfg, sigma, t):
        route = xi_mod_sq_via_U(sigma, t, cfg)
        oracle = xi_mod_sq(sigma, t, cfg)
        assert abs(route - oracle) <= 1e-6 * abs(oracle)


class TestDensityPbar:
    def test_symmetry(self, cfg):
        assert density_Pbar(0.75, 0.7, cfg) == density_Pbar(0.75, -0.7, cfg)

    def test_normalization(self, cfg):
        half = integrate_finite(lambda y: density_Pbar(0.75, y, cfg), 0.0, 3.4, cfg,
                                abs_tol=1e-10).value
        assert abs(2.0 * half - 1.0) < 1e-7

    def test_is_self_convolution_of_P(self, cfg):
        y0 = 0.5
        conv = integrate_finite(
            lambda z: density_P(0.75, y0 + z, cfg) * density_P(0.75, z, cfg),
            -8.0, 8.0, cfg, abs_tol=1e-10, min_panels=16).value
        assert abs(conv - density_Pbar(0.75, y0, cfg)) < 1e-6
