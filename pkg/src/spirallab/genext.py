"""Extension of disk semigroup generators to the ball: the perturbed vector
field, the auxiliary shear-extended map and its block-inverse differential,
the conjugation identity, and full ball-flow integration."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import ode
from .extensions import BallPoint, BallSpace, HomogeneousPolynomial, sup_norm_Q
from .semigroups import Generator


class UnresolvedSingularity(RuntimeError):
    pass


@dataclass
class ExtendedGenerator:
    base: Generator
    lam: complex
    space: BallSpace
    Q: HomogeneousPolynomial
    singularity_radius: float = 1e-4
    check_bound: bool = True

    def __post_init__(self):
        self.lam = complex(self.lam)
        if self.lam.real <= 0:
            raise ValueError("Re lambda must be > 0")
        if not float(self.space.r).is_integer():
            raise ValueError("integer r required when Q is attached")
        if self.Q.degree != self.space.r:
            raise ValueError("Q degree must equal the ball exponent r")
        if self.check_bound and self.Q.terms:
            bound = self.space.r * self.lam.real / 4.0
            est = sup_norm_Q(self.Q, self.space, samples=20_000)
            if est > bound + 1e-12:
                raise ValueError(f"sup|Q| estimate {est} exceeds bound {bound}")

    # (mu - f'(x)) / f(x), removable at the interior Denjoy-Wolff point
    def quotient(self, x):
        gen = self.base
        x = complex(x)
        if gen.kind == "dilation" and abs(x - gen.tau) < self.singularity_radius:
            f2 = complex(gen.d2f(gen.tau))
            return -f2 / (gen.mu + 0.5 * f2 * (x - gen.tau))
        fx = complex(gen.f(x))
        if abs(fx) < 1e-12:
            raise UnresolvedSingularity(
                f"f vanishes at {x} away from the Denjoy-Wolff point")
        return (gen.mu - complex(gen.df(x))) / fx


def extend_generator(g: ExtendedGenerator, p: BallPoint):
    """Vector field value ( f(x)+Q(y), (1/r)(f'(x)+r lam - quotient Q(y)) y )."""
    x, y = p.x, p.y_array
    r = g.space.r
    qv = g.Q.eval(y)
    first = complex(g.base.f(x)) + qv
    second = (complex(g.base.df(x)) + r * g.lam - g.quotient(x) * qv) * y / r
    return first, second


def h_tilde(g: ExtendedGenerator, h, p: BallPoint):
    """(h(x) - h'(x) Q(y)/(r lam), h'(x)^(1/r) y)."""
    x, y = p.x, p.y_array
    r = g.space.r
    L = h.log_deriv(x)
    z = h.eval(x) - np.exp(L) * g.Q.eval(y) / (r * g.lam)
    return BallPoint.of(z, np.exp(L / r) * y)


def _dh_tilde(g: ExtendedGenerator, h, p: BallPoint):
    """Analytic differential of h_tilde as an (m+1)x(m+1) matrix."""
    x, y = p.x, p.y_array
    r, lam, m = g.space.r, g.lam, g.space.m
    L = h.log_deriv(x)
    d1 = np.exp(L)
    d2 = h.deriv2(x)
    qv = g.Q.eval(y)
    qg = g.Q.grad(y)
    D = np.zeros((m + 1, m + 1), dtype=complex)
    D[0, 0] = d1 - d2 * qv / (r * lam)
    D[0, 1:] = -d1 * qg / (r * lam)
    D[1:, 0] = d2 * np.exp(L * (1.0 / r - 1.0)) * y / r
    D[1:, 1:] = np.exp(L / r) * np.eye(m)
    return D


def dh_tilde_inverse(g: ExtendedGenerator, h, p: BallPoint):
    """Closed-form block inverse of the differential of h_tilde.

    The fiber-fiber block is h'^(-1/r) I minus a rank-one correction
    h'' y (x) Q'(y) / (r^2 lam h'^(1+1/r)); by Euler's identity
    Q'(y).y = r Q(y), it collapses to the scalar
    (r lam h' - h'' Q(y))/(r lam h'^(1+1/r)) when m = 1 (and, for any m,
    when acting on vectors parallel to y)."""
    x, y = p.x, p.y_array
    r, lam, m = g.space.r, g.lam, g.space.m
    L = h.log_deriv(x)
    d1 = np.exp(L)
    d2 = h.deriv2(x)
    qg = g.Q.grad(y)
    M = np.zeros((m + 1, m + 1), dtype=complex)
    M[0, 0] = 1.0 / d1
    M[0, 1:] = qg / (r * lam * np.exp(L / r))
    M[1:, 0] = -d2 * y / (r * d1 * d1)
    M[1:, 1:] = np.exp(-L / r) * np.eye(m) \
        - d2 * np.outer(y, qg) / (r * r * lam * np.exp(L * (1.0 + 1.0 / r)))
    return M


def dh_tilde_identity_residual(g: ExtendedGenerator, h, p: BallPoint):
    D = _dh_tilde(g, h, p)
    M = dh_tilde_inverse(g, h, p)
    return float(np.linalg.norm(D @ M - np.eye(g.space.m + 1)))


def conjugation_residual(g: ExtendedGenerator, h, points):
    """max over the sample points of || DH~(p) fhat(p) - ftilde(H~(p)) ||,
    ftilde the diagonal linear field (mu z, (lam + mu/r) w)."""
    mu, r = g.base.mu, g.space.r
    worst = 0.0
    for p in points:
        first, second = extend_generator(g, p)
        vec = np.concatenate([[first], second])
        D = _dh_tilde(g, h, p)
        img = h_tilde(g, h, p)
        target = np.concatenate([[mu * img.x], (g.lam + mu / r) * img.y_array])
        worst = max(worst, float(np.linalg.norm(D @ vec - target)))
    return worst


@dataclass
class BallTrajectory:
    samples: list = field(default_factory=list)  # (t, BallPoint)
    steps: int = 0
    exited: bool = False

    @property
    def endpoint(self):
        return self.samples[-1][1]


def flow_ball(g: ExtendedGenerator, p: BallPoint, T, tol=1e-10, checkpoints=50):
    """Integrate d(x,y)/dt = -fhat(x,y) over [0, T], recording checkpoints.

    A checkpoint with gauge >= 1 marks the trajectory as exited (witness
    against generator-hood); integration stops there."""
    space = g.space

    def rhs(v):
        pt = BallPoint.of(v[0], v[1:])
        first, second = extend_generator(g, pt)
        return -np.concatenate([[first], second])

    def inside(v):
        return bool(space.gauge(v[0], v[1:]) < 1.0)

    v = np.concatenate([[p.x], p.y_array])
    traj = BallTrajectory(samples=[(0.0, p)])
    if not inside(v):
        traj.exited = True
        return traj
    dt = T / checkpoints
    t = 0.0
    for _ in range(checkpoints):
        try:
            v, steps, _ = ode.integrate(rhs, v, dt, tol=tol, domain=inside)
        except ode.LeftDomain:
            traj.exited = True
            break
        traj.steps += steps
        t += dt
        pt = BallPoint.of(v[0], v[1:])
        traj.samples.append((t, pt))
        if not inside(v):
            traj.exited = True
            break
    return traj
