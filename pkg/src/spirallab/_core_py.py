"""Pure-numpy kernels for the built-in disk-map families.

This is the fallback backend; ``spirallab._core`` (Cython) provides the same
functions compiled.  Families are addressed by an integer code so that both
backends can share one dispatch convention:

    0  identity      h(z) = z
    1  koebe         h(z) = z/(1-z)^2
    2  mobius        h(z) = z/(1+c z),            params = [c]
    3  spiral_koebe  h(z) = z(1-z)^(-p),          params = [p, p-1]
    4  half_plane    h(z) = (1-z)/(1+z)
    5  rational      h(z) = N(z)/D(z),            num/den = ascending coeffs

All z-arguments are complex128 ndarrays (scalars go through np.asarray).
"""

import numpy as np
from numpy.polynomial import polynomial as P

BACKEND = "python"

NEWTON_MAX_ITER = 100
NEWTON_TOL = 1e-12
DISK_CLAMP = 1.0 - 1e-9


def _polyval(c, z):
    return P.polyval(z, c)


def eval_map(code, params, num, den, z):
    z = np.asarray(z, dtype=complex)
    if code == 0:
        return z.copy()
    if code == 1:
        return z / (1.0 - z) ** 2
    if code == 2:
        return z / (1.0 + params[0] * z)
    if code == 3:
        p = params[0]
        return z * np.exp(-p * np.log1p(-z))
    if code == 4:
        return (1.0 - z) / (1.0 + z)
    if code == 5:
        return _polyval(num, z) / _polyval(den, z)
    raise ValueError(f"unknown family code {code}")


def eval_deriv(code, params, num, den, z):
    z = np.asarray(z, dtype=complex)
    if code == 0:
        return np.ones_like(z)
    if code == 1:
        return (1.0 + z) / (1.0 - z) ** 3
    if code == 2:
        return 1.0 / (1.0 + params[0] * z) ** 2
    if code == 3:
        p, q = params[0], params[1]
        return np.exp(-(p + 1.0) * np.log1p(-z)) * (1.0 + q * z)
    if code == 4:
        return -2.0 / (1.0 + z) ** 2
    if code == 5:
        n, d = _polyval(num, z), _polyval(den, z)
        n1, d1 = _polyval(P.polyder(num), z), _polyval(P.polyder(den), z)
        return (n1 * d - n * d1) / d**2
    raise ValueError(f"unknown family code {code}")


def eval_deriv2(code, params, num, den, z):
    z = np.asarray(z, dtype=complex)
    if code == 0:
        return np.zeros_like(z)
    if code == 1:
        return 2.0 * (2.0 + z) / (1.0 - z) ** 4
    if code == 2:
        c = params[0]
        return -2.0 * c / (1.0 + c * z) ** 3
    if code == 3:
        p, q = params[0], params[1]
        return p * np.exp(-(p + 2.0) * np.log1p(-z)) * (2.0 + q * z)
    if code == 4:
        return 4.0 / (1.0 + z) ** 3
    if code == 5:
        n, d = _polyval(num, z), _polyval(den, z)
        n1, d1 = _polyval(P.polyder(num), z), _polyval(P.polyder(den), z)
        n2, d2 = _polyval(P.polyder(num, 2), z), _polyval(P.polyder(den, 2), z)
        u = n1 * d - n * d1
        return ((n2 * d - n * d2) * d - 2.0 * d1 * u) / d**3
    raise ValueError(f"unknown family code {code}")


def log_deriv(code, params, num, den, z):
    """Continuous logarithm of h', anchored at log h'(0) = principal value.

    Closed forms exist for codes 0-4 because every factor has positive real
    part on the disk; rational maps need path continuation (handled upstream).
    """
    z = np.asarray(z, dtype=complex)
    if code == 0:
        return np.zeros_like(z)
    if code == 1:
        return np.log1p(z) - 3.0 * np.log1p(-z)
    if code == 2:
        return -2.0 * np.log1p(params[0] * z)
    if code == 3:
        p, q = params[0], params[1]
        return -(p + 1.0) * np.log1p(-z) + np.log1p(q * z)
    if code == 4:
        return np.log(2.0) + 1j * np.pi - 2.0 * np.log1p(z)
    raise ValueError(f"no closed-form log-derivative for family code {code}")


def _closed_invert(code, params, w):
    if code == 0:
        return w.copy()
    if code == 1:
        # rationalized root of w z^2 - (2w+1) z + w = 0; stable as w -> 0
        return 2.0 * w / (2.0 * w + 1.0 + np.sqrt(4.0 * w + 1.0))
    if code == 2:
        return w / (1.0 - params[0] * w)
    if code == 4:
        return (1.0 - w) / (1.0 + w)
    return None


def invert(code, params, num, den, w, guess):
    """Invert h on arrays: closed form where the family has one, else damped
    Newton from ``guess``.  Non-converged entries come back as NaN."""
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    closed = _closed_invert(code, params, w)
    if closed is not None:
        return closed
    z = np.atleast_1d(np.asarray(guess, dtype=complex)) * np.ones_like(w)
    over = np.abs(z) >= DISK_CLAMP
    z[over] *= DISK_CLAMP / np.abs(z[over])
    resid = eval_map(code, params, num, den, z) - w
    active = np.abs(resid) > NEWTON_TOL
    for _ in range(NEWTON_MAX_ITER):
        if not active.any():
            break
        step = resid / eval_deriv(code, params, num, den, z)
        lam = np.ones(z.shape)
        for _ in range(25):
            cand = z - lam * step
            r = np.abs(cand)
            big = r >= DISK_CLAMP
            cand[big] *= DISK_CLAMP / r[big]
            new_resid = eval_map(code, params, num, den, cand) - w
            worse = active & (np.abs(new_resid) >= np.abs(resid)) & (lam > 2.0**-24)
            if not worse.any():
                break
            lam[worse] *= 0.5
        z = np.where(active, cand, z)
        resid = np.where(active, new_resid, resid)
        active = np.abs(resid) > NEWTON_TOL
    z = np.where(active, np.nan + 0j, z)
    return z


def covered_min_distance(code, params, num, den, threshold, center, nr, nt, boundary_eps):
    """Fused covering sweep on a polar grid.

    Radial spacing r_k = 1 - (1 - k/nr)^2 concentrates nodes at the rim.
    Returns (min |h(x)-center| over grid points failing the region inequality
    |h'(x)|(1-|x|^2) > threshold, witness x, min over the circle
    |x| = 1-boundary_eps, number of grid points in the region complement).
    """
    k = np.arange(nr, dtype=float)
    radii = 1.0 - (1.0 - k / nr) ** 2
    theta = 2.0 * np.pi * np.arange(nt) / nt
    ring = np.exp(1j * theta)

    best = np.inf
    witness = complex(np.nan, np.nan)
    n_out = 0
    for r in radii:
        x = r * ring
        crit = np.abs(eval_deriv(code, params, num, den, x)) * (1.0 - r * r)
        out = crit <= threshold
        cnt = int(out.sum())
        if cnt:
            n_out += cnt
            d = np.abs(eval_map(code, params, num, den, x[out]) - center)
            i = int(np.argmin(d))
            if d[i] < best:
                best = float(d[i])
                witness = complex(x[out][i])

    xb = (1.0 - boundary_eps) * ring
    bmin = float(np.min(np.abs(eval_map(code, params, num, den, xb) - center)))
    return best, witness, bmin, n_out
