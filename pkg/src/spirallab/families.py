"""Disk primitives: built-in univalent families, disk automorphisms,
branch-tracked fractional powers of h', Newton inversion and the classical
distortion lower bounds.

A "disk map" anywhere in this package is any object exposing eval/deriv on
scalars and ndarrays; UnivalentMap covers the closed-form families, while
numerically-defined maps (e.g. Koenigs functions) implement the same surface.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels

FAMILY_CODES = {
    "identity": 0,
    "koebe": 1,
    "mobius_spiral": 2,
    "spiral_koebe": 3,
    "half_plane": 4,
    "rational": 5,
}

INVERT_TOL = 1e-10


class PointOutsideDisk(ValueError):
    pass


class NoConvergence(RuntimeError):
    pass


class DerivativeVanishes(ValueError):
    pass


class BranchTrackingError(RuntimeError):
    pass


def _require_in_disk(z):
    if abs(z) >= 1.0:
        raise PointOutsideDisk(f"|z| = {abs(z)} >= 1")


@dataclass(frozen=True)
class UnivalentMap:
    """A univalent map of the unit disk from one of the built-in families."""

    family: str
    params: tuple = ()
    num: tuple = ()
    den: tuple = ()
    spiral_multiplier: complex | None = None
    code: int = field(init=False)

    def __post_init__(self):
        if self.family not in FAMILY_CODES:
            raise ValueError(f"unknown family {self.family!r}")
        object.__setattr__(self, "code", FAMILY_CODES[self.family])
        if self.family == "mobius_spiral" and abs(self.params[0]) >= 1.0:
            raise ValueError("mobius_spiral needs |c| < 1 (pole outside the closed disk)")

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls):
        return cls("identity", spiral_multiplier=1.0)

    @classmethod
    def koebe(cls):
        return cls("koebe", spiral_multiplier=1.0)

    @classmethod
    def mobius_spiral(cls, c):
        # starlike for every |c| < 1; mu-spirallike whenever |c| < Re mu/|mu|
        return cls("mobius_spiral", params=(complex(c),), spiral_multiplier=1.0)

    @classmethod
    def spiral_koebe(cls, theta):
        p = 2.0 * np.exp(-1j * theta) * np.cos(theta)
        return cls("spiral_koebe", params=(p, p - 1.0))

    @classmethod
    def half_plane(cls):
        return cls("half_plane")

    @classmethod
    def rational(cls, num, den):
        num = tuple(complex(c) for c in num)
        den = tuple(complex(c) for c in den)
        if not any(den):
            raise ValueError("zero denominator polynomial")
        return cls("rational", num=num, den=den)

    @property
    def has_closed_inverse(self):
        return self.family in ("identity", "koebe", "mobius_spiral", "half_plane")

    def declared_spirallike(self, mu):
        """Sufficient-condition metadata for mobius_spiral; re-verified by the
        spirallike-margin oracle elsewhere."""
        mu = complex(mu)
        if self.family != "mobius_spiral":
            return None
        return abs(self.params[0]) < mu.real / abs(mu)

    # -- evaluation --------------------------------------------------------

    def _k(self, fn, z):
        return fn(self.code, self.params, self.num or None, self.den or None,
                  np.atleast_1d(np.asarray(z, dtype=complex)))

    def eval(self, z):
        _require_in_disk(z)
        return complex(self._k(kernels.eval_map, z)[0])

    def deriv(self, z):
        _require_in_disk(z)
        return complex(self._k(kernels.eval_deriv, z)[0])

    def deriv2(self, z):
        _require_in_disk(z)
        return complex(self._k(kernels.eval_deriv2, z)[0])

    def eval_array(self, z):
        return np.asarray(self._k(kernels.eval_map, z))

    def deriv_array(self, z):
        return np.asarray(self._k(kernels.eval_deriv, z))

    def deriv2_array(self, z):
        return np.asarray(self._k(kernels.eval_deriv2, z))

    def log_deriv_array(self, z):
        """Continuous log of h' anchored at 0 with the principal value there."""
        if self.family == "rational":
            z = np.atleast_1d(np.asarray(z, dtype=complex))
            return np.array([continued_log_deriv(self, complex(v)) for v in z])
        return np.asarray(self._k(kernels.log_deriv, z))

    def log_deriv(self, z):
        return complex(self.log_deriv_array(np.asarray([z]))[0])

    # -- inversion -----------------------------------------------------------

    def invert(self, w, guess=0j):
        """Solve h(z) = w inside the disk (closed form or damped Newton)."""
        z = self.invert_array(np.asarray([w], dtype=complex), guess=guess)[0]
        if np.isnan(z):
            raise NoConvergence(f"inversion did not converge for w = {w}")
        if abs(self.eval_array(np.asarray([z]))[0] - w) > INVERT_TOL:
            raise NoConvergence(f"w = {w} appears to lie outside the image")
        return complex(z)

    def invert_array(self, w, guess=0j):
        return np.asarray(self._k(
            lambda code, params, num, den, ww: kernels.invert(code, params, num, den, ww, guess),
            w,
        ))

    # -- serialization ---------------------------------------------------------

    @classmethod
    def from_spec(cls, spec):
        fam = spec.get("family")
        if fam == "identity":
            return cls.identity()
        if fam == "koebe":
            return cls.koebe()
        if fam == "mobius_spiral":
            return cls.mobius_spiral(_c(spec["c"]))
        if fam == "spiral_koebe":
            return cls.spiral_koebe(float(spec["theta"]))
        if fam == "half_plane":
            return cls.half_plane()
        if fam == "rational":
            return cls.rational([_c(v) for v in spec["num"]], [_c(v) for v in spec["den"]])
        raise ValueError(f"unknown family in spec: {fam!r}")

    def to_spec(self):
        if self.family == "mobius_spiral":
            c = self.params[0]
            return {"family": self.family, "c": [c.real, c.imag]}
        if self.family == "spiral_koebe":
            p = self.params[0]
            # p = 2 exp(-i theta) cos(theta) = 1 + exp(-2 i theta)
            theta = -np.angle(p - 1.0) / 2.0
            return {"family": self.family, "theta": float(theta)}
        if self.family == "rational":
            return {
                "family": self.family,
                "num": [[c.real, c.imag] for c in self.num],
                "den": [[c.real, c.imag] for c in self.den],
            }
        return {"family": self.family}


def _c(v):
    if isinstance(v, (int, float)):
        return complex(v)
    return complex(v[0], v[1])


def disk_automorphism(x0, z):
    """The involution (x0 - z) / (1 - conj(x0) z); swaps x0 and 0."""
    _require_in_disk(x0)
    if np.ndim(z) == 0:
        _require_in_disk(z)
    return (x0 - z) / (1.0 - np.conj(x0) * z)


def distortion_bounds(z):
    """Lower bounds ((1-|z|)/(1+|z|)^3, |z|/(1+|z|)^2) valid for |g'| and |g|
    of any normalized univalent g."""
    rho = np.abs(z)
    return (1.0 - rho) / (1.0 + rho) ** 3, rho / (1.0 + rho) ** 2


class NormalizedMap:
    """g(z) = (h(phi(z)) - h(x0)) / (h'(x0) (|x0|^2 - 1)) with g(0)=0, g'(0)=1,
    phi the disk automorphism based at x0."""

    def __init__(self, h, x0):
        _require_in_disk(x0)
        self.h = h
        self.x0 = complex(x0)
        self._h_x0 = h.eval(self.x0)
        d = h.deriv(self.x0)
        if d == 0:
            raise DerivativeVanishes(f"h'({x0}) = 0")
        self._scale = d * (abs(self.x0) ** 2 - 1.0)
        if abs(self.eval(0j)) > 1e-10 or abs(self.deriv(0j) - 1.0) > 1e-10:
            raise AssertionError("normalization failed")

    def _phi(self, z):
        return disk_automorphism(self.x0, z)

    def eval(self, z):
        return (self.h.eval(self._phi(complex(z))) - self._h_x0) / self._scale

    def deriv(self, z):
        z = complex(z)
        dphi = (abs(self.x0) ** 2 - 1.0) / (1.0 - np.conj(self.x0) * z) ** 2
        return self.h.deriv(self._phi(z)) * dphi / self._scale

    def eval_array(self, z):
        z = np.asarray(z, dtype=complex)
        return (self.h.eval_array(self._phi(z)) - self._h_x0) / self._scale

    def deriv_array(self, z):
        z = np.asarray(z, dtype=complex)
        dphi = (abs(self.x0) ** 2 - 1.0) / (1.0 - np.conj(self.x0) * z) ** 2
        return self.h.deriv_array(self._phi(z)) * dphi / self._scale


def normalize_at(h, x0):
    return NormalizedMap(h, x0)


def continued_log_deriv(h, x, anchor=0j, steps=64, max_steps=65536):
    """log h'(x) continued from the principal value at the anchor.

    Path: radial leg from the anchor out/in to radius |x| along the anchor's
    ray, then a rotational arc to x (a single radial segment when anchor=0).
    Steps double until every per-step log increment is well inside the
    principal strip.
    """
    x = complex(x)
    anchor = complex(anchor)
    while steps <= max_steps:
        path = _branch_path(anchor, x, steps)
        d = h.deriv_array(path)
        if np.any(d == 0):
            raise DerivativeVanishes("h' vanishes on the continuation path")
        inc = np.log(d[1:] / d[:-1])
        if np.max(np.abs(inc.imag), initial=0.0) < np.pi / 2:
            return complex(np.log(d[0]) + inc.sum())
        steps *= 2
    raise BranchTrackingError("h' winds too fast for the path resolution")


def _branch_path(anchor, x, steps):
    t = np.linspace(0.0, 1.0, steps + 1)
    if anchor == 0:
        return t * x
    r0, r1 = abs(anchor), abs(x)
    a0, a1 = np.angle(anchor), np.angle(x)
    mid = r1 * np.exp(1j * a0)
    leg1 = anchor + t * (mid - anchor)
    da = (a1 - a0 + np.pi) % (2 * np.pi) - np.pi
    leg2 = r1 * np.exp(1j * (a0 + t * da))
    return np.concatenate([leg1, leg2[1:]])


@dataclass(frozen=True)
class BranchedPower:
    """Branch-consistent h'(x)^(1/r), anchored at the principal log at 0."""

    map: object
    r: int
    anchor: complex = 0j

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("root order must be >= 1")

    def __call__(self, x):
        return complex(np.exp(self.log_at(x) / self.r))

    def log_at(self, x):
        if hasattr(self.map, "log_deriv") and self.anchor == 0:
            return self.map.log_deriv(x)
        return continued_log_deriv(self.map, x, anchor=self.anchor)

    def array(self, x):
        if hasattr(self.map, "log_deriv_array") and self.anchor == 0:
            return np.exp(self.map.log_deriv_array(x) / self.r)
        x = np.atleast_1d(np.asarray(x, dtype=complex))
        return np.exp(np.array([self.log_at(complex(v)) for v in x]) / self.r)


def fractional_power(b: BranchedPower, x):
    _require_in_disk(x)
    return b(x)


def newton_invert(h, w, guess=0j, tol=1e-12, max_iter=100):
    """Damped Newton solve of h(z) = w for a generic disk map.

    Iterates are clamped to |z| <= 1 - 1e-9 since images may be unbounded."""
    w = complex(w)
    z = complex(guess)
    if abs(z) >= 1.0 - 1e-9:
        z *= (1.0 - 1e-9) / abs(z)
    resid = h.eval(z) - w
    for _ in range(max_iter):
        if abs(resid) <= tol:
            return z
        d = h.deriv(z)
        if d == 0:
            raise DerivativeVanishes(f"h'({z}) = 0 during inversion")
        step = resid / d
        lam = 1.0
        while True:
            cand = z - lam * step
            if abs(cand) >= 1.0 - 1e-9:
                cand *= (1.0 - 1e-9) / abs(cand)
            new_resid = h.eval(cand) - w
            if abs(new_resid) < abs(resid) or lam <= 2.0**-24:
                break
            lam *= 0.5
        z, resid = cand, new_resid
    if abs(resid) <= INVERT_TOL:
        return z
    raise NoConvergence(f"inversion stalled at |residual| = {abs(resid)}")


def invert_map(h, w, guess=0j):
    """Front door for inversion: closed form / family Newton on UnivalentMap,
    generic damped Newton otherwise."""
    if isinstance(h, UnivalentMap):
        return h.invert(w, guess=guess)
    return newton_invert(h, w, guess=guess)
