"""One-parameter semigroups on the disk: generator oracles, flow integration,
Koenigs functions via the linearization ODE h' f = mu h, and spirallikeness
margins."""

from __future__ import annotations

from dataclasses import dataclass
import warnings

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.integrate import IntegrationWarning, quad

from . import families, ode


class InvalidGenerator(ValueError):
    pass


@dataclass
class Generator:
    """Infinitesimal generator f on the disk.

    kind is 'dilation' (Denjoy-Wolff point tau inside, mu = f'(tau)) or
    'hyperbolic' (tau on the boundary, mu the angular derivative, real > 0).
    """

    func: object
    dfunc: object
    d2func: object
    kind: str
    tau: complex
    mu: complex
    poly: tuple | None = None

    def __post_init__(self):
        self.tau = complex(self.tau)
        self.mu = complex(self.mu)
        if self.kind not in ("dilation", "hyperbolic"):
            raise InvalidGenerator(f"unknown kind {self.kind!r}")
        if self.kind == "dilation":
            if abs(self.tau) >= 1:
                raise InvalidGenerator("dilation type needs |tau| < 1")
            if abs(self.f(self.tau)) > 1e-10:
                raise InvalidGenerator("f(tau) != 0")
            if self.mu.real <= 0:
                raise InvalidGenerator("dilation type needs Re mu > 0")
        else:
            if abs(abs(self.tau) - 1.0) > 1e-12:
                raise InvalidGenerator("hyperbolic type needs |tau| = 1")
            if not (self.mu.imag == 0 and self.mu.real > 0):
                raise InvalidGenerator("hyperbolic type needs real mu > 0")
            self._check_angular_derivative()

    # vectorized evaluation (func/dfunc accept ndarrays for the built-ins)
    def f(self, z):
        return self.func(z)

    def df(self, z):
        return self.dfunc(z)

    def d2f(self, z):
        return self.d2func(z)

    def _check_angular_derivative(self):
        r = 1.0 - 1e-4
        dq = self.f(r * self.tau) / (r * self.tau - self.tau)
        if abs(dq - self.mu) > 0.05 * abs(self.mu):
            raise InvalidGenerator(
                f"angular derivative mismatch: quotient {dq} vs mu {self.mu}")

    @classmethod
    def from_poly(cls, coeffs, kind, tau, mu=None):
        coeffs = np.atleast_1d(np.asarray(coeffs, dtype=complex))
        d1 = P.polyder(coeffs)
        d2 = P.polyder(coeffs, 2)
        if mu is None:
            mu = P.polyval(complex(tau), d1)
        return cls(
            func=lambda z: P.polyval(z, coeffs),
            dfunc=lambda z: P.polyval(z, d1),
            d2func=lambda z: P.polyval(z, d2),
            kind=kind, tau=tau, mu=mu, poly=tuple(coeffs),
        )

    @classmethod
    def from_spec(cls, spec):
        coeffs = [_c(v) for v in spec["poly"]]
        tau = _c(spec.get("tau", 0))
        mu = _c(spec["mu"]) if "mu" in spec else None
        return cls.from_poly(coeffs, spec.get("kind", "dilation"), tau, mu)

    def to_spec(self):
        if self.poly is None:
            raise ValueError("only polynomial generators serialize")
        return {
            "poly": [[c.real, c.imag] for c in self.poly],
            "kind": self.kind,
            "tau": [self.tau.real, self.tau.imag],
            "mu": [self.mu.real, self.mu.imag],
        }


def _c(v):
    if isinstance(v, (int, float)):
        return complex(v)
    return complex(v[0], v[1])


def disk_grid(n_r=40, n_t=64, r_max=1.0 - 1e-3):
    r = np.linspace(r_max / n_r, r_max, n_r)
    t = 2.0 * np.pi * np.arange(n_t) / n_t
    return (r[:, None] * np.exp(1j * t[None, :])).ravel()


def berkson_porta_margin(gen: Generator, grid=None):
    """min over the grid of Re p(z) for f(z) = (z-tau)(1-conj(tau) z) p(z).

    f is accepted as a generator when the margin is >= -1e-9."""
    if grid is None:
        grid = disk_grid()
    z = np.asarray(grid, dtype=complex)
    denom = (z - gen.tau) * (1.0 - np.conj(gen.tau) * z)
    fz = gen.f(z)
    near = np.abs(denom) < 1e-12
    p = np.empty_like(z)
    p[~near] = fz[~near] / denom[~near]
    if near.any():
        # removable point: p(tau) = f'(tau) / (1 - |tau|^2)
        p[near] = gen.df(gen.tau) / (1.0 - abs(gen.tau) ** 2)
    return float(np.min(p.real))


@dataclass
class FlowResult:
    endpoint: complex
    steps: int
    local_error_estimate: float


def flow(gen: Generator, z0, t, tol=1e-10):
    """Endpoint of dz/dt = -f(z) from z0 over [0, t]."""
    if abs(z0) >= 1:
        raise families.PointOutsideDisk(f"|z0| = {abs(z0)} >= 1")
    y, steps, err = ode.integrate(
        lambda y: -gen.f(y), complex(z0), t, tol=tol,
        domain=lambda y: np.all(np.abs(y) < 1.0),
    )
    return FlowResult(endpoint=complex(y), steps=steps, local_error_estimate=err)


def flow_many(gen: Generator, z0s, t, tol=1e-10):
    """Flow a whole sample batch at once (elementwise autonomous system)."""
    z0s = np.asarray(z0s, dtype=complex)
    y, _, _ = ode.integrate(
        lambda y: -gen.f(y), z0s.ravel(), t, tol=tol,
        domain=lambda y: np.all(np.abs(y) < 1.0),
    )
    return y.reshape(z0s.shape)


def _quad_c(fn, epsabs=1e-13):
    # Roundoff warnings near the requested tolerance floor are expected for
    # conjugated integrands; accuracy is enforced downstream by the
    # linearization residual, so don't let QUADPACK spam the caller.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        re = quad(lambda s: fn(s).real, 0.0, 1.0, epsabs=epsabs, epsrel=1e-12, limit=200)[0]
        im = quad(lambda s: fn(s).imag, 0.0, 1.0, epsabs=epsabs, epsrel=1e-12, limit=200)[0]
    return complex(re, im)


class KoenigsMap:
    """Univalent solution of h'(z) f(z) = mu h(z), built by radial quadrature.

    Normalization: h(0)=0, h'(0)=1 for dilation type with tau = 0;
    h(0)=1 for hyperbolic type.  Dilation with tau != 0 is handled by
    conjugating the generator back to the origin first.
    """

    def __init__(self, gen: Generator):
        if gen.kind == "dilation" and gen.tau != 0:
            raise ValueError("use koenigs(); tau != 0 needs conjugation")
        self.gen = gen
        self.mu = gen.mu
        self.kind = gen.kind
        if gen.kind == "hyperbolic":
            f0 = gen.f(np.asarray([0j]))[0]
            if f0 == 0:
                raise InvalidGenerator("hyperbolic generator with f(0) = 0")
            self._log_d0 = np.log(self.mu / f0)

    # scalar core ---------------------------------------------------------

    def _log_ratio(self, z):
        # integral_0^1 (mu z s - f(sz)) / (s f(sz)) ds  [dilation, tau=0]
        z = complex(z)
        if z == 0:
            return 0j

        def phi(s):
            w = s * z
            fw = self.gen.f(np.asarray([w]))[0]
            if fw == 0:
                raise InvalidGenerator(f"f vanishes at {w} away from tau")
            return (self.mu * w - fw) / (s * fw)

        return _quad_c(phi)

    def _log_hyp(self, z):
        z = complex(z)
        if z == 0:
            return 0j

        def phi(s):
            w = s * z
            fw = self.gen.f(np.asarray([w]))[0]
            if fw == 0:
                raise InvalidGenerator(f"f vanishes at {w} inside the disk")
            return self.mu * z / fw

        return _quad_c(phi)

    def eval(self, z):
        z = complex(z)
        if self.kind == "dilation":
            return z * np.exp(self._log_ratio(z))
        return complex(np.exp(self._log_hyp(z)))

    def log_deriv(self, z):
        z = complex(z)
        base = 0j if self.kind == "dilation" else self._log_d0

        def phi(s):
            w = s * z
            fw = self.gen.f(np.asarray([w]))[0]
            dfw = self.gen.df(np.asarray([w]))[0]
            if abs(w) < 1e-12 and self.kind == "dilation":
                # removable: (mu - f')/f -> -f''(0)/mu at 0
                return -z * self.gen.d2f(np.asarray([0j]))[0] / self.mu
            return z * (self.mu - dfw) / fw

        if z == 0:
            return complex(base)
        return complex(base + _quad_c(phi))

    def deriv(self, z):
        z = complex(z)
        if self.kind == "dilation" and abs(z) < 1e-12:
            return 1.0 + 0j
        return self.mu * self.eval(z) / self.gen.f(np.asarray([z]))[0]

    def deriv2(self, z):
        z = complex(z)
        if self.kind == "dilation" and abs(z) < 1e-9:
            return -self.gen.d2f(np.asarray([0j]))[0] / self.mu
        fz = self.gen.f(np.asarray([z]))[0]
        dfz = self.gen.df(np.asarray([z]))[0]
        return self.deriv(z) * (self.mu - dfz) / fz

    def invert(self, w, guess=0j):
        return families.newton_invert(self, w, guess=guess)

    # array conveniences ----------------------------------------------------

    def eval_array(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return np.array([self.eval(v) for v in z.ravel()]).reshape(z.shape)

    def deriv_array(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return np.array([self.deriv(v) for v in z.ravel()]).reshape(z.shape)

    def deriv2_array(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return np.array([self.deriv2(v) for v in z.ravel()]).reshape(z.shape)

    def log_deriv_array(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return np.array([self.log_deriv(v) for v in z.ravel()]).reshape(z.shape)


class _ConjugatedMap:
    """h0 composed with the disk automorphism based at tau (dilation tau != 0)."""

    def __init__(self, h0, tau):
        self.h0 = h0
        self.tau = complex(tau)

    def _phi(self, z):
        return families.disk_automorphism(self.tau, z)

    def _dphi(self, z):
        return (abs(self.tau) ** 2 - 1.0) / (1.0 - np.conj(self.tau) * z) ** 2

    def eval(self, z):
        return self.h0.eval(self._phi(z))

    def deriv(self, z):
        return self.h0.deriv(self._phi(z)) * self._dphi(z)

    def deriv2(self, z):
        z = complex(z)
        d2phi = 2.0 * np.conj(self.tau) * (abs(self.tau) ** 2 - 1.0) \
            / (1.0 - np.conj(self.tau) * z) ** 3
        w = self._phi(z)
        return self.h0.deriv2(w) * self._dphi(z) ** 2 + self.h0.deriv(w) * d2phi

    def eval_array(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return np.array([self.eval(v) for v in z.ravel()]).reshape(z.shape)

    def deriv_array(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return np.array([self.deriv(v) for v in z.ravel()]).reshape(z.shape)

    def invert(self, w, guess=0j):
        return families.newton_invert(self, w, guess=guess)


def koenigs(gen: Generator):
    """Solve h' f = mu h for the generator's Koenigs function."""
    margin = berkson_porta_margin(gen)
    if margin < -1e-9:
        raise InvalidGenerator(f"Berkson-Porta margin {margin} < 0")
    if gen.kind == "dilation" and gen.tau != 0:
        tau = gen.tau

        def phi(z):
            return families.disk_automorphism(tau, z)

        def dphi(z):
            return (abs(tau) ** 2 - 1.0) / (1.0 - np.conj(tau) * z) ** 2

        def d2phi(z):
            return 2.0 * np.conj(tau) * (abs(tau) ** 2 - 1.0) \
                / (1.0 - np.conj(tau) * z) ** 3

        # pull the vector field back to a generator fixing the origin
        g = Generator(
            func=lambda w: dphi(phi(w)) * gen.f(phi(w)),
            dfunc=lambda w: (d2phi(phi(w)) * gen.f(phi(w))
                             + dphi(phi(w)) * gen.df(phi(w))) * dphi(w),
            d2func=lambda w: _second_diff(
                lambda u: dphi(phi(u)) * gen.f(phi(u)), w),
            kind="dilation", tau=0j, mu=gen.mu,
        )
        return _ConjugatedMap(KoenigsMap(g), tau)
    return KoenigsMap(gen)


def _second_diff(fn, z, h=1e-5):
    z = np.asarray(z, dtype=complex)
    return (fn(z + h) - 2.0 * fn(z) + fn(z - h)) / h**2


def schroder_residual(h, gen: Generator, t, samples):
    """max |h(F_t(z)) - e^(-mu t) h(z)| over the samples, F_t the time-t flow."""
    samples = np.asarray(samples, dtype=complex)
    ends = flow_many(gen, samples, t)
    beta = np.exp(-gen.mu * t)
    lhs = h.eval_array(ends)
    rhs = beta * h.eval_array(samples)
    return float(np.max(np.abs(lhs - rhs)))


def spirallike_margin(h, mu, grid=None):
    """min over the grid of Re( mu h(z) / (z h'(z)) ); value Re mu at z = 0.

    h is accepted as mu-spirallike (interior point case, h(0)=0) when the
    margin is >= -1e-9."""
    mu = complex(mu)
    if abs(h.eval(0j)) > 1e-10:
        raise ValueError("interior-point criterion needs h(0) = 0")
    if grid is None:
        grid = disk_grid()
    z = np.asarray(grid, dtype=complex)
    z = z[np.abs(z) > 1e-12]
    vals = mu * h.eval_array(z) / (z * h.deriv_array(z))
    return float(min(np.min(vals.real), mu.real))
