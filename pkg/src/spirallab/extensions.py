"""The ball {|x|^2 + ||y||^r < 1} in C x C^m, Roper-Suffridge / shear-perturbed
extension operators, image-membership tests and invariance sweeps."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .families import BranchedPower, UnivalentMap, newton_invert

INTERIOR_MARGIN = 1e-3
MEMBER_TOL = 1e-9


@dataclass(frozen=True)
class BallSpace:
    r: float
    m: int
    y_norm: str = "euclidean"
    p: float | None = None

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.y_norm not in ("euclidean", "sup", "p_norm"):
            raise ValueError(f"unknown norm {self.y_norm!r}")
        if self.y_norm == "p_norm" and (self.p is None or self.p < 1):
            raise ValueError("p_norm needs p >= 1")

    def norm(self, y):
        y = np.asarray(y, dtype=complex)
        if self.y_norm == "euclidean":
            return np.linalg.norm(y, axis=-1)
        if self.y_norm == "sup":
            return np.max(np.abs(y), axis=-1)
        return np.sum(np.abs(y) ** self.p, axis=-1) ** (1.0 / self.p)

    def gauge(self, x, y):
        return np.abs(x) ** 2 + self.norm(y) ** self.r


@dataclass(frozen=True)
class BallPoint:
    x: complex
    y: tuple

    @classmethod
    def of(cls, x, y):
        return cls(complex(x), tuple(complex(v) for v in np.atleast_1d(y)))

    @property
    def y_array(self):
        return np.asarray(self.y, dtype=complex)


def ball_contains(space: BallSpace, p: BallPoint):
    return bool(space.gauge(p.x, p.y_array) < 1.0)


class DegreeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class HomogeneousPolynomial:
    """Degree-r homogeneous polynomial on C^m, monomial coefficients keyed by
    exponent multi-index."""

    degree: int
    m: int
    terms: tuple  # ((exps, coef), ...)

    def __post_init__(self):
        for exps, _ in self.terms:
            if len(exps) != self.m or sum(exps) != self.degree:
                raise DegreeMismatch(
                    f"bad multi-index {exps} for degree {self.degree}")

    @classmethod
    def build(cls, degree, m, terms):
        items = tuple(sorted((tuple(int(e) for e in k), complex(v))
                             for k, v in dict(terms).items()))
        return cls(degree=int(degree), m=int(m), terms=items)

    @classmethod
    def zero(cls, degree, m):
        return cls.build(degree, m, {})

    @classmethod
    def monomial(cls, degree, m, coef=1.0, index=0):
        exps = [0] * m
        exps[index] = degree
        return cls.build(degree, m, {tuple(exps): coef})

    def scaled(self, c):
        return HomogeneousPolynomial.build(
            self.degree, self.m, {e: v * c for e, v in self.terms})

    def eval(self, y):
        """Q(y); y is (m,) or (..., m), evaluated on the trailing axis."""
        y = np.asarray(y, dtype=complex)
        acc = np.zeros(y.shape[:-1], dtype=complex)
        for exps, coef in self.terms:
            term = np.full(y.shape[:-1], coef, dtype=complex)
            for k, e in enumerate(exps):
                if e:
                    term = term * y[..., k] ** e
            acc += term
        return acc if acc.shape else complex(acc)

    def grad(self, y):
        """Row vector of partial derivatives at y (same trailing-axis layout)."""
        y = np.asarray(y, dtype=complex)
        out = np.zeros(y.shape, dtype=complex)
        for exps, coef in self.terms:
            for k, e in enumerate(exps):
                if not e:
                    continue
                term = np.full(y.shape[:-1], coef * e, dtype=complex)
                for j, ej in enumerate(exps):
                    pw = ej - 1 if j == k else ej
                    if pw:
                        term = term * y[..., j] ** pw
                out[..., k] += term
        return out

    @classmethod
    def from_spec(cls, spec):
        deg = int(spec["degree"])
        terms = {}
        m = None
        for t in spec.get("terms", []):
            exps = tuple(int(e) for e in t["exps"])
            m = len(exps) if m is None else m
            c = t["coef"]
            terms[exps] = complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c)
        if m is None:
            m = int(spec.get("m", 1))
        return cls.build(deg, m, terms)

    def to_spec(self):
        return {
            "degree": self.degree,
            "terms": [{"exps": list(e), "coef": [c.real, c.imag]}
                      for e, c in self.terms],
        }


@dataclass(frozen=True)
class SpiralMatrix:
    """Block-diagonal operator diag(mu, (lambda + mu/r) id) acting on C x C^m."""

    mu: complex
    lam: complex
    r: float

    def __post_init__(self):
        if self.mu.real <= 0 or self.lam.real <= 0:
            raise ValueError("need Re mu > 0 and Re lambda > 0")

    @property
    def fiber_rate(self):
        return self.lam + self.mu / self.r


def _branch(h, r):
    return BranchedPower(h, r) if float(r).is_integer() else _RealPower(h, float(r))


class _RealPower:
    # non-integer r: same anchored log, fractional exponent
    def __init__(self, h, r):
        self.h = h
        self.r = r

    def __call__(self, x):
        return complex(np.exp(self.h.log_deriv(x) / self.r))

    def array(self, x):
        return np.exp(self.h.log_deriv_array(x) / self.r)


def extend_H(h, space: BallSpace, p: BallPoint):
    """(x, y) -> (h(x), h'(x)^(1/r) y)."""
    fac = _branch(h, space.r)(p.x) if space.r != 1 else h.deriv(p.x)
    return BallPoint.of(h.eval(p.x), fac * p.y_array)


def extend_H_arrays(h, space: BallSpace, xs, ys):
    xs = np.asarray(xs, dtype=complex)
    ys = np.asarray(ys, dtype=complex)
    fac = np.exp(h.log_deriv_array(xs) / space.r)
    return h.eval_array(xs), fac[..., None] * ys


def automorphism_phi(Q: HomogeneousPolynomial, z, w, inverse=False):
    """Shear (z, w) -> (z +/- Q(w), w); exact algebraic inverse."""
    w = np.asarray(w, dtype=complex)
    qv = Q.eval(w)
    return (z - qv if inverse else z + qv), w


def muir_extend(h, space: BallSpace, Q: HomogeneousPolynomial, p: BallPoint):
    """(x, y) -> (h(x) + h'(x) Q(y), h'(x)^(1/r) y); equals shear after the
    unperturbed extension."""
    if Q.degree != space.r:
        raise DegreeMismatch(f"Q degree {Q.degree} != space r {space.r}")
    hp = extend_H(h, space, p)
    z, w = automorphism_phi(Q, hp.x, hp.y_array)
    return BallPoint.of(z, w)


def semigroup_action(A: SpiralMatrix, t, z, w):
    """(z, w) -> (e^(-mu t) z, e^(-(lambda + mu/r) t) w)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    w = np.asarray(w, dtype=complex)
    return np.exp(-A.mu * t) * z, np.exp(-A.fiber_rate * t) * w


def conjugated_action(Q: HomogeneousPolynomial, t, z, w):
    """Shear-conjugated starlike action
    (z, w) -> (e^(-t) z + (e^(-t) - e^(-2t)) Q(w), e^(-t) w)."""
    if Q.degree != 2:
        raise DegreeMismatch("the conjugated formula uses Q of degree 2")
    if t < 0:
        raise ValueError("t must be >= 0")
    w = np.asarray(w, dtype=complex)
    et = np.exp(-t)
    return et * z + (et - et * et) * Q.eval(w), et * w


def membership_H(h, space: BallSpace, z, w, guess=0j):
    """Is (z, w) in the image of the unperturbed extension?  False (not an
    exception) when the first-coordinate inversion fails."""
    try:
        if isinstance(h, UnivalentMap):
            x = h.invert(z, guess=guess)
        else:
            x = newton_invert(h, z, guess=guess)
    except Exception:
        return False
    fac = _branch(h, space.r)(x) if space.r != 1 else h.deriv(x)
    y = np.asarray(w, dtype=complex) / fac
    return bool(space.gauge(x, y) < 1.0)


def membership_H_arrays(h, space: BallSpace, zs, ws, guess=0j):
    """Vectorized membership for maps exposing array inversion (the built-in
    families).  Returns a boolean array; failed inversions count as outside."""
    zs = np.asarray(zs, dtype=complex)
    ws = np.asarray(ws, dtype=complex)
    xs = h.invert_array(zs, guess=guess)
    ok = ~np.isnan(xs)
    xs = np.where(ok, xs, 0j)
    resid = np.abs(h.eval_array(xs) - zs)
    ok &= resid <= 1e-8
    fac = np.exp(h.log_deriv_array(xs) / space.r)
    ys = ws / fac[..., None]
    return ok & (space.gauge(xs, ys) < 1.0)


def covering_radius_Rt(h, mu, lam, r, t, z0, guess=0j):
    """(1 - |e^(-lambda t)|^r)/4 * |h'(x1)| (1 - |x1|^2), x1 the preimage of
    the rotated-scaled center e^(-mu t) z0."""
    if complex(lam).real <= 0:
        raise ValueError("Re lambda must be > 0")
    z1 = np.exp(-complex(mu) * t) * z0
    if isinstance(h, UnivalentMap):
        x1 = h.invert(z1, guess=guess)
    else:
        x1 = newton_invert(h, z1, guess=guess)
    contraction = 1.0 - np.abs(np.exp(-complex(lam) * t)) ** r
    return contraction / 4.0 * abs(h.deriv(x1)) * (1.0 - abs(x1) ** 2)


def sample_ball(space: BallSpace, n, rng, margin=INTERIOR_MARGIN):
    """Interior samples: gauge <= 1 - margin by construction."""
    v = rng.uniform(0.0, 1.0 - margin, n)
    phase = np.exp(2j * np.pi * rng.uniform(0.0, 1.0, n))
    xs = np.sqrt(v) * phase
    g = rng.standard_normal((n, space.m)) + 1j * rng.standard_normal((n, space.m))
    dirs = g / space.norm(g)[:, None]
    mag_r = rng.uniform(0.0, 1.0, n) * (1.0 - margin - v)
    ys = dirs * (mag_r ** (1.0 / space.r))[:, None]
    return xs, ys


def sup_norm_Q(Q: HomogeneousPolynomial, space: BallSpace, samples=100_000,
               seed=0, ascent_steps=50, top=10):
    """Estimate of sup_{||y||=1} |Q(y)|: random sphere sweep plus projected
    gradient ascent from the best starts.  An estimate, not a certificate."""
    if not Q.terms:
        return 0.0
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((samples, Q.m)) + 1j * rng.standard_normal((samples, Q.m))
    ys = g / space.norm(g)[:, None]
    vals = np.abs(Q.eval(ys))
    best = float(np.max(vals))
    idx = np.argsort(vals)[-top:]
    for i in idx:
        y = ys[i].copy()
        step = 0.1
        val = abs(Q.eval(y))
        for _ in range(ascent_steps):
            q = Q.eval(y)
            d = q * np.conj(Q.grad(y))  # ascent direction for |Q|^2
            nd = np.linalg.norm(d)
            if nd == 0:
                break
            cand = y + step * d / nd
            cand = cand / space.norm(cand)
            cval = abs(Q.eval(cand))
            if cval > val:
                y, val = cand, cval
                step *= 1.2
            else:
                step *= 0.5
        best = max(best, val)
    return best


def verify_invariance(h, mu, lam, space: BallSpace, Q, times, n_samples=1000,
                      mode="muir", seed=0, n_gamma=16, gamma_frac=0.999,
                      max_witnesses=20):
    """Invariance sweep over random interior points and the given times.

    mode='muir': push each extended point through the shear-conjugated linear
    action and test membership.  mode='gamma': perturb the contracted first
    coordinate along n_gamma directions at gamma_frac of the covering radius.
    """
    mu, lam = complex(mu), complex(lam)
    rng = np.random.default_rng(seed)
    xs, ys = sample_ball(space, n_samples, rng)
    zs, ws = extend_H_arrays(h, space, xs, ys)
    fiber = lam + mu / space.r
    failures = []
    checked = 0
    for t in times:
        w1 = np.exp(-fiber * t) * ws
        if mode == "muir":
            z1 = np.exp(-mu * t) * zs \
                + (np.exp(-mu * t) - np.exp(-fiber * space.r * t)) * Q.eval(ws)
            ok = membership_H_arrays(h, space, z1, w1)
            checked += ok.size
            for i in np.nonzero(~ok)[0][:max_witnesses]:
                failures.append({"t": t, "z": _ri(z1[i]), "w": _ri_vec(w1[i])})
        elif mode == "gamma":
            z1 = np.exp(-mu * t) * zs
            x1 = h.invert_array(z1, guess=0j)
            rt = (1.0 - np.abs(np.exp(-lam * t)) ** space.r) / 4.0 \
                * np.abs(h.deriv_array(x1)) * (1.0 - np.abs(x1) ** 2)
            for k in range(n_gamma):
                gamma = gamma_frac * rt * np.exp(2j * np.pi * k / n_gamma)
                ok = membership_H_arrays(h, space, z1 + gamma, w1)
                checked += ok.size
                for i in np.nonzero(~ok)[0][:max_witnesses]:
                    failures.append({"t": t, "z": _ri(z1[i] + gamma[i]),
                                     "w": _ri_vec(w1[i])})
        else:
            raise ValueError(f"unknown mode {mode!r}")
    return {
        "mode": mode,
        "n_samples": int(n_samples),
        "times": list(map(float, times)),
        "checked": int(checked),
        "failures": len(failures),
        "witnesses": failures[:max_witnesses],
        "pass": not failures,
    }


def _ri(z):
    return [float(np.real(z)), float(np.imag(z))]


def _ri_vec(w):
    return [_ri(v) for v in np.atleast_1d(w)]
