"""Evaluation configuration: every tolerance, cap and truncation rule in one place."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class EvalConfig:
    """Tolerances and truncation choices shared by series and quadrature code.

    series_tol          relative tail tolerance for series summation
    series_max_terms    hard cap on any summation index
    quad_rel_tol        relative target for adaptive quadrature
    quad_abs_tol        absolute target for adaptive quadrature
    quad_max_depth      bisection depth cap per panel
    upper_cutoff_policy name of the rule mapping a decay rate to a finite
                        truncation point; "tail_below_tol" truncates where the
                        supplied exponential bound pushes the tail integral
                        below quad_abs_tol/10
    """

    series_tol: float = 1e-14
    series_max_terms: int = 100_000
    quad_rel_tol: float = 1e-11
    quad_abs_tol: float = 1e-13
    quad_max_depth: int = 48
    upper_cutoff_policy: str = "tail_below_tol"

    def __post_init__(self):
        for name in ("series_tol", "quad_rel_tol", "quad_abs_tol"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive")
        for name in ("series_max_terms", "quad_max_depth"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.upper_cutoff_policy != "tail_below_tol":
            raise ValueError(f"unknown upper_cutoff_policy {self.upper_cutoff_policy!r}")

    def truncation_point(self, decay_rate: float, scale: float = 1.0) -> float:
        """Smallest X with scale*exp(-decay_rate*X)/decay_rate <= quad_abs_tol/10.

        Callers supply `decay_rate` (and optionally `scale`) such that the
        integrand is eventually bounded by scale*exp(-decay_rate*x).
        """
        if decay_rate <= 0.0:
            raise ValueError("decay_rate must be positive")
        target = self.quad_abs_tol / 10.0
        x = math.log(max(scale, target) / (decay_rate * target)) / decay_rate
        return max(x, 0.0)

    def tightened(self, factor: float = 100.0) -> "EvalConfig":
        """A copy with quadrature tolerances tightened by `factor`."""
        return replace(
            self,
            quad_rel_tol=max(self.quad_rel_tol / factor, 1e-15),
            quad_abs_tol=max(self.quad_abs_tol / factor, 1e-16),
        )


DEFAULT_CONFIG = EvalConfig()

# keys accepted in a flat "key = value" config file, mapped to field types
_FIELD_TYPES = {
    "series_tol": float,
    "series_max_terms": int,
    "quad_rel_tol": float,
    "quad_abs_tol": float,
    "quad_max_depth": int,
    "upper_cutoff_policy": str,
}


def parse_config_text(text: str) -> dict:
    """Parse flat `key = value` lines (# comments, blank lines allowed)."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = value
    return out


def config_from_mapping(mapping: dict, base: EvalConfig | None = None) -> EvalConfig:
    """Build an EvalConfig from string values, starting from `base`."""
    base = base or DEFAULT_CONFIG
    kwargs = {}
    for key, value in mapping.items():
        if key not in _FIELD_TYPES:
            continue
        kwargs[key] = _FIELD_TYPES[key](value)
    return replace(base, **kwargs) if kwargs else base
