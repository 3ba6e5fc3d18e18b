"""Covered-disk estimation: the derivative-weighted region Omega_alpha, polar
grid sweeps of its complement, and pass/fail reports against the predicted
covering radii."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .families import UnivalentMap, disk_automorphism, invert_map

BOUNDARY_EPS = 1e-3


@dataclass(frozen=True)
class OmegaSpec:
    """Region {x : alpha |h'(x0)| (1-|x0|^2) < |h'(x)| (1-|x|^2)}."""

    x0: complex
    alpha: float
    threshold: float

    @classmethod
    def build(cls, h, x0, alpha):
        x0 = complex(x0)
        if not 0.0 < alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if abs(x0) >= 1.0:
            raise ValueError("|x0| must be < 1")
        thr = alpha * abs(h.deriv(x0)) * (1.0 - abs(x0) ** 2)
        return cls(x0=x0, alpha=float(alpha), threshold=float(thr))


@dataclass
class CoveringReport:
    predicted_radius: float
    measured_radius_lower: float
    center: complex
    passed: bool
    grid: tuple
    min_witness: complex
    tolerance: float
    secondary_radius: float | None = None
    complement_points: int = 0

    def to_dict(self):
        return {
            "predicted_radius": self.predicted_radius,
            "measured_radius_lower": self.measured_radius_lower,
            "center": [self.center.real, self.center.imag],
            "pass": self.passed,
            "grid": list(self.grid),
            "min_witness": [self.min_witness.real, self.min_witness.imag],
            "tolerance": self.tolerance,
            "secondary_radius": self.secondary_radius,
            "complement_points": self.complement_points,
        }


def omega_contains(h, spec: OmegaSpec, x):
    if abs(x) >= 1.0:
        raise ValueError("|x| must be < 1")
    return abs(h.deriv(complex(x))) * (1.0 - abs(x) ** 2) > spec.threshold


def grid_tolerance(predicted):
    return 5e-3 * predicted + 1e-6


def covered_radius_estimate(h, spec: OmegaSpec, center, grid=(400, 400)):
    """Sampled lower-estimate of the largest centered disk inside h(Omega).

    Minimum of |h(x) - center| over polar-grid points outside the region,
    clamped by the sampled distance to h of the near-boundary circle."""
    best, witness, bmin, n_out = _min_distance(h, spec.threshold, complex(center), grid)
    if n_out == 0:
        return bmin, complex(np.nan, np.nan)
    if bmin < best:
        return bmin, witness
    return best, witness


def _min_distance(h, threshold, center, grid):
    nr, nt = grid
    if isinstance(h, UnivalentMap):
        return kernels.covered_min_distance(
            h.code, h.params, h.num or None, h.den or None,
            threshold, center, nr, nt, BOUNDARY_EPS)
    # generic map: same sweep through the array interface
    k = np.arange(nr, dtype=float)
    radii = 1.0 - (1.0 - k / nr) ** 2
    ring = np.exp(2j * np.pi * np.arange(nt) / nt)
    best, witness, n_out = np.inf, complex(np.nan, np.nan), 0
    for r in radii:
        x = r * ring
        crit = np.abs(h.deriv_array(x)) * (1.0 - r * r)
        out = crit <= threshold
        if out.any():
            n_out += int(out.sum())
            d = np.abs(h.eval_array(x[out]) - center)
            i = int(np.argmin(d))
            if d[i] < best:
                best, witness = float(d[i]), complex(x[out][i])
    xb = (1.0 - BOUNDARY_EPS) * ring
    bmin = float(np.min(np.abs(h.eval_array(xb) - center)))
    return best, witness, bmin, n_out


def verify_covering_bound(h, x0, alpha, grid=(400, 400)):
    """Check: h(Omega_alpha) covers radius (1-alpha)/4 |h'(x0)|(1-|x0|^2)
    around h(x0)."""
    spec = OmegaSpec.build(h, x0, alpha)
    predicted = (1.0 - alpha) / 4.0 * abs(h.deriv(spec.x0)) * (1.0 - abs(spec.x0) ** 2)
    center = h.eval(spec.x0)
    best, witness, bmin, n_out = _min_distance(h, spec.threshold, center, grid)
    measured = min(best, bmin)
    tol = grid_tolerance(predicted)
    return CoveringReport(
        predicted_radius=predicted,
        measured_radius_lower=measured,
        center=center,
        passed=measured >= predicted - tol,
        grid=tuple(grid),
        min_witness=witness if n_out else complex(np.nan, np.nan),
        tolerance=tol,
        complement_points=n_out,
    )


def verify_shifted_covering_bound(h, x0, alpha, beta, grid=(400, 400)):
    """Check the shifted-center covering radius at beta*h(x0) plus the
    secondary lower bound it dominates."""
    beta = complex(beta)
    if not 0.0 < alpha < abs(beta) < 1.0:
        raise ValueError("need 0 < alpha < |beta| < 1")
    spec = OmegaSpec.build(h, x0, alpha)
    x0 = spec.x0
    center = beta * h.eval(x0)
    x1 = invert_map(h, center, guess=x0)
    d1 = abs(h.deriv(x1)) * (1.0 - abs(x1) ** 2)
    predicted = (abs(beta) - alpha) / (4.0 * abs(beta)) * d1
    secondary = (abs(beta) - alpha) / 4.0 * abs(h.deriv(x0)) * (1.0 - abs(x0) ** 2)
    if predicted < secondary - 1e-12:
        raise AssertionError(
            f"radius chain violated: {predicted} < secondary bound {secondary}")
    best, witness, bmin, n_out = _min_distance(h, spec.threshold, center, grid)
    measured = min(best, bmin)
    tol = grid_tolerance(predicted)
    return CoveringReport(
        predicted_radius=predicted,
        measured_radius_lower=measured,
        center=center,
        passed=measured >= predicted - tol,
        grid=tuple(grid),
        min_witness=witness if n_out else complex(np.nan, np.nan),
        tolerance=tol,
        secondary_radius=secondary,
        complement_points=n_out,
    )


def omega_region_points(h, spec: OmegaSpec, grid=(100, 100)):
    """(x, in_omega) samples for plotting / CSV dumps."""
    nr, nt = grid
    k = np.arange(nr, dtype=float)
    radii = 1.0 - (1.0 - k / nr) ** 2
    ring = np.exp(2j * np.pi * np.arange(nt) / nt)
    x = (radii[:, None] * ring[None, :]).ravel()
    crit = np.abs(h.deriv_array(x)) * (1.0 - np.abs(x) ** 2)
    return x, crit > spec.threshold
