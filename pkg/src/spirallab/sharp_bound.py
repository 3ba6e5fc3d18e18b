"""Scalar tightness analysis for the perturbation bound: the ratio function
f(t) = ((1-|e^(-r lambda t)|)/|1 - e^(-r lambda t)|)^2, its infimum over t > 0,
the strict inequality margin, and critical points of f."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SharpParams:
    lam: complex
    r: int = 1

    def __post_init__(self):
        if self.lam.real <= 0:
            raise ValueError("Re lambda must be > 0")
        if self.r < 1:
            raise ValueError("r must be >= 1")

    @property
    def a(self):
        return self.lam.real

    @property
    def b(self):
        return self.lam.imag

    @property
    def limit_zero(self):
        # the t -> 0+ limit, also the infimum over t > 0
        return (self.a / abs(self.lam)) ** 2


def f_sharp(p: SharpParams, t):
    """f(t) for t > 0; switches to a series quotient below 1e-6/|lambda| to
    dodge the 0/0 cancellation at the origin."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t must be > 0")
    rt = p.r * t
    out = np.empty(t.shape)
    tiny = t < 1e-6 / abs(p.lam)
    big = ~tiny
    e = np.exp(-p.lam * rt[big])
    num = 1.0 - np.abs(e)
    den = np.abs(1.0 - e)
    out[big] = (num / den) ** 2
    if tiny.any():
        x = rt[tiny]
        # 1 - e^{-a x} = a x (1 - a x / 2 + ...);  |1 - e^{-lam x}| likewise
        num_s = p.a * x * (1.0 - p.a * x / 2.0)
        den_s = abs(p.lam) * x * np.abs(1.0 - p.lam * x / 2.0)
        out[tiny] = (num_s / den_s) ** 2
    return out if out.shape else float(out)


def infimum_f(p: SharpParams, t_max=None, n_grid=20000):
    """Grid + golden-section estimate of inf f; returns the known t->0 limit
    when the grid minimum sits above it (the infimum is not attained)."""
    if p.b == 0:
        return 1.0
    if t_max is None:
        t_max = max(50.0 / (p.a * p.r), 10.0 * 2.0 * np.pi / (abs(p.b) * p.r))
    t = np.geomspace(1e-7 / abs(p.lam), t_max, n_grid)
    vals = f_sharp(p, t)
    i = int(np.argmin(vals))
    lo = t[max(i - 1, 0)]
    hi = t[min(i + 1, n_grid - 1)]
    gmin = min(float(vals[i]), _golden_min(lambda x: f_sharp(p, x), lo, hi))
    return gmin if gmin < p.limit_zero else p.limit_zero


def _golden_min(fn, lo, hi, iters=80):
    phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = fn(d)
    return float(min(fc, fd))


def verify_cor_inequality(p: SharpParams, t_grid=None):
    """Margin report for (1-|e^(-r lam t)|) - |1-e^(-r lam t)| Re(lam)/|lam|.

    Positive everywhere for Im lambda != 0; identically zero for real lambda."""
    if t_grid is None:
        t_grid = np.geomspace(1e-4, 50.0 / (p.a * p.r), 20000)
    t_grid = np.asarray(t_grid, dtype=float)
    e = np.exp(-p.lam * p.r * t_grid)
    margin = (1.0 - np.abs(e)) - np.abs(1.0 - e) * p.a / abs(p.lam)
    i = int(np.argmin(margin))
    return {
        "min_margin": float(margin[i]),
        "argmin_t": float(t_grid[i]),
        "strict": bool(p.b != 0),
    }


class NoRootsInWindow(RuntimeError):
    pass


def _critical_residual(p: SharpParams, t):
    # f'(t) = 0  <=>  a (1+u)(1 - cos th) = b (1-u) sin th, with u = e^(-art),
    # th = brt.  (The squared cosine form admits spurious sign-flipped roots.)
    a, b, r = p.a, p.b, p.r
    u = np.exp(-a * r * t)
    th = b * r * t
    return a * (1.0 + u) * (1.0 - np.cos(th)) - b * (1.0 - u) * np.sin(th)


def _cosine_relation_gap(p: SharpParams, t):
    a, b, r = p.a, p.b, p.r
    e = np.exp(-a * r * t)
    up = a**2 * (1.0 + e) ** 2 - b**2 * (1.0 - e) ** 2
    dn = a**2 * (1.0 + e) ** 2 + b**2 * (1.0 - e) ** 2
    return abs(np.cos(b * r * t) - up / dn)


def critical_points(p: SharpParams, window, n_scan=20000):
    """Interior stationary points of f in the window: roots of the
    transcendental derivative condition, located by scan + bisection.

    Points where the oscillation phase is a full turn (f touches its maximum 1)
    are stationary too but excluded: the closed-form critical value does not
    apply there."""
    if p.b == 0:
        raise NoRootsInWindow("f is constant for real lambda")
    lo, hi = window
    t = np.linspace(lo, hi, n_scan)
    res = _critical_residual(p, t)
    roots = []
    sign = np.sign(res)
    idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    for i in idx:
        a, b = t[i], t[i + 1]
        fa = _critical_residual(p, a)
        for _ in range(200):
            m = 0.5 * (a + b)
            fm = _critical_residual(p, m)
            if fa * fm <= 0:
                b = m
            else:
                a, fa = m, fm
        root = 0.5 * (a + b)
        if _cosine_relation_gap(p, root) < 1e-9:
            roots.append(root)
    if not roots:
        raise NoRootsInWindow(f"no critical points in {window}")
    return roots


def critical_value(p: SharpParams, t):
    """Closed-form f value at an interior critical point."""
    a, b, r = p.a, p.b, p.r
    e = np.exp(-a * r * t)
    return a**2 / (a**2 + b**2) + b**2 * (1.0 - e) ** 2 / (
        (a**2 + b**2) * (1.0 + e) ** 2)
