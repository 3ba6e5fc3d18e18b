"""Tests for the ball geometry, extension operators, and invariance sweeps."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spirallab.extensions import (
    BallPoint,
    BallSpace,
    DegreeMismatch,
    HomogeneousPolynomial,
    SpiralMatrix,
    automorphism_phi,
    ball_contains,
    conjugated_action,
    covering_radius_Rt,
    extend_H,
    extend_H_arrays,
    membership_H,
    muir_extend,
    sample_ball,
    semigroup_action,
    sup_norm_Q,
    verify_invariance,
)
from spirallab.families import UnivalentMap


def space(r=2.0, m=1):
    return BallSpace(r=r, m=m)


def q_poly(coef=0.25, r=2, m=1):
    return HomogeneousPolynomial.monomial(int(r), m, coef=coef, index=0)


# -------------------------------------------------------------------- ball

def test_gauge_and_membership():
    sp = space(2.0, 2)
    assert ball_contains(sp, BallPoint.of(0.5, [0.5, 0.5]))  # 0.25+0.5 < 1
    assert not ball_contains(sp, BallPoint.of(0.8, [0.6, 0.6]))


def test_gauge_formula():
    sp = BallSpace(r=3.0, m=1)
    g = sp.gauge(0.5j, np.array([0.5 + 0j]))
    assert abs(g - (0.25 + 0.5**3)) < 1e-14


def test_sample_ball_stays_interior():
    sp = space(2.0, 3)
    rng = np.random.default_rng(41)
    xs, ys = sample_ball(sp, 5000, rng)
    gauges = np.abs(xs) ** 2 + np.sum(np.abs(ys) ** 2, axis=-1)
    assert np.all(gauges < 1.0)
    # and actually fills the ball rather than hugging the center
    assert gauges.max() > 0.9


# ------------------------------------------------------------- polynomials

def test_homogeneous_eval_and_grad():
    Q = HomogeneousPolynomial.build(2, 2, {(1, 1): 0.5})  # 0.5 y1 y2
    y = np.array([2.0 + 0j, 3.0 + 0j])
    assert abs(Q.eval(y) - 3.0) < 1e-14
    g = Q.grad(y)
    assert abs(g[0] - 1.5) < 1e-14 and abs(g[1] - 1.0) < 1e-14


@given(c=st.complex_numbers(max_magnitude=2, allow_nan=False,
                            allow_infinity=False),
       y0=st.complex_numbers(max_magnitude=1, allow_nan=False,
                             allow_infinity=False))
@settings(max_examples=200, deadline=None)
def test_homogeneity_property(c, y0):
    """Q(c y) = c^r Q(y) to 1e-12."""
    Q = HomogeneousPolynomial.build(3, 2, {(2, 1): 0.7, (0, 3): -0.2j})
    y = np.array([y0, 0.4 - 0.3j])
    assert abs(Q.eval(c * y) - c**3 * Q.eval(y)) <= 1e-12


def test_degree_mismatch_raises():
    with pytest.raises(DegreeMismatch):
        HomogeneousPolynomial.build(2, 2, {(1, 2): 1.0})


def test_sup_norm_monomial():
    """sup of |y1^2| over ||y||_2 <= 1 is 1; of |y1 y2| is 1/2."""
    sp = BallSpace(r=2.0, m=2)
    q1 = HomogeneousPolynomial.monomial(2, 2, coef=1.0, index=0)
    q2 = HomogeneousPolynomial.build(2, 2, {(1, 1): 1.0})
    assert abs(sup_norm_Q(q1, sp, samples=20000) - 1.0) < 1e-3
    assert abs(sup_norm_Q(q2, sp, samples=20000) - 0.5) < 1e-3


def test_poly_spec_round_trip():
    Q = HomogeneousPolynomial.build(2, 2, {(1, 1): 0.5 + 0.25j})
    again = HomogeneousPolynomial.from_spec(Q.to_spec())
    y = np.array([0.3 + 0.1j, -0.2j])
    assert abs(again.eval(y) - Q.eval(y)) < 1e-15


# --------------------------------------------------------------- operators

def test_extend_H_koebe_point():
    """H(x,y) = (k(x), k'(x)^{1/2} y) at x=1/2: (2, sqrt(12) y)."""
    sp = space(2.0, 1)
    h = UnivalentMap.koebe()
    p = BallPoint.of(0.5, [0.1])
    hp = extend_H(h, sp, p)
    assert abs(hp.x - 2.0) < 1e-12
    assert abs(hp.y[0] - np.sqrt(12.0) * 0.1) < 1e-12


def test_extend_H_arrays_matches_scalar():
    sp = space(2.0, 2)
    h = UnivalentMap.mobius_spiral(0.3j)
    rng = np.random.default_rng(42)
    xs, ys = sample_ball(sp, 50, rng)
    zs, ws = extend_H_arrays(h, sp, xs, ys)
    for i in range(len(xs)):
        hp = extend_H(h, sp, BallPoint.of(xs[i], ys[i]))
        assert abs(zs[i] - hp.x) < 1e-11
        assert np.max(np.abs(ws[i] - hp.y_array)) < 1e-11


def test_automorphism_round_trip():
    """The shear (z,w) -> (z + Q(w), w) inverts to machine precision; the
    fiber comes back bitwise identical."""
    Q = q_poly(0.25)
    rng = np.random.default_rng(43)
    for _ in range(100):
        z = complex(*rng.normal(size=2))
        w = rng.normal(size=1) + 1j * rng.normal(size=1)
        z1, w1 = automorphism_phi(Q, z, w)
        z2, w2 = automorphism_phi(Q, z1, w1, inverse=True)
        assert abs(z2 - z) <= 1e-14 * max(1.0, abs(z))
        assert np.all(w2 == w)


def test_muir_is_shear_of_extension():
    """muir_extend == shear automorphism composed with the plain extension."""
    sp = space(2.0, 1)
    h = UnivalentMap.koebe()
    Q = q_poly(0.25)
    rng = np.random.default_rng(44)
    xs, ys = sample_ball(sp, 50, rng)
    for i in range(len(xs)):
        p = BallPoint.of(xs[i], ys[i])
        hp = extend_H(h, sp, p)
        mp = muir_extend(h, sp, Q, p)
        zc, wc = automorphism_phi(Q, hp.x, hp.y_array)
        assert abs(mp.x - zc) < 1e-14
        assert np.max(np.abs(mp.y_array - wc)) < 1e-14


def test_semigroup_action_law():
    """A_t A_s = A_{t+s} for the diagonal spiral action, to 1e-14."""
    A = SpiralMatrix(mu=1 + 1j, lam=0.5 - 0.2j, r=2.0)
    z, w = 0.3 + 0.4j, np.array([0.2 - 0.1j])
    s, t = 0.7, 1.3
    z1, w1 = semigroup_action(A, t, z, w)
    z1, w1 = semigroup_action(A, s, z1, w1)
    z2, w2 = semigroup_action(A, s + t, z, w)
    assert abs(z1 - z2) < 1e-14
    assert np.max(np.abs(w1 - w2)) < 1e-14


def test_conjugated_action_law():
    """The sheared action also satisfies the semigroup law, to 1e-14."""
    Q = q_poly(0.25)
    z, w = 0.3 + 0.4j, np.array([0.2 - 0.1j])
    s, t = 0.4, 1.1
    z1, w1 = conjugated_action(Q, t, z, w)
    z1, w1 = conjugated_action(Q, s, z1, w1)
    z2, w2 = conjugated_action(Q, s + t, z, w)
    assert abs(z1 - z2) < 1e-14
    assert np.max(np.abs(w1 - w2)) < 1e-14


def test_conjugated_matches_shear_conjugation():
    """conjugated_action == shear o diagonal(mu=1, lam s.t. fiber matches) o
    shear^{-1} for the degree-2 normalization it implements."""
    Q = q_poly(0.25)
    A = SpiralMatrix(mu=1.0, lam=0.5, r=2.0)  # fiber rate 0.5 + 1/2 = 1
    z, w = 0.2 + 0.1j, np.array([0.3 + 0j])
    t = 0.8
    zi, wi = automorphism_phi(Q, z, w)
    za, wa = semigroup_action(A, t, zi, wi)
    zs, ws = automorphism_phi(Q, za, wa, inverse=True)
    zc, wc = conjugated_action(Q, t, z, w)
    assert abs(zs - zc) < 1e-14
    assert np.max(np.abs(ws - wc)) < 1e-14


# ------------------------------------------------------------- membership

def test_membership_H_koebe():
    sp = space(2.0, 1)
    h = UnivalentMap.koebe()
    assert membership_H(h, sp, 2.0, np.array([1.0 + 0j]))  # image of (1/2, ...)
    assert not membership_H(h, sp, 2.0, np.array([3.0 + 0j]))
    assert not membership_H(h, sp, -0.5, np.array([0.0j]))  # off the image


def test_covering_radius_Rt_identity():
    """h = id: R_t = (1 - e^{-r lam t})/4 * 1 * (1 - |z1|^2), z1 = e^{-t} z0."""
    h = UnivalentMap.identity()
    t, z0 = 1.0, 0.4
    rt = covering_radius_Rt(h, 1.0, 1.0, 2.0, t, z0)
    z1 = np.exp(-1.0) * z0
    expect = (1 - np.exp(-2.0)) / 4.0 * (1 - z1**2)
    assert abs(rt - expect) < 1e-10


# -------------------------------------------------------------- invariance

def test_invariance_muir_small():
    h = UnivalentMap.koebe()
    sp = space(2.0, 1)
    out = verify_invariance(h, 1.0, 1.0, sp, q_poly(0.25), times=[0.1, 1.0],
                            n_samples=500, mode="muir", seed=3)
    assert out["pass"] and out["failures"] == 0
    assert out["checked"] == 1000


def test_invariance_gamma_small():
    h = UnivalentMap.koebe()
    sp = space(2.0, 1)
    out = verify_invariance(h, 1.0, 1.0, sp, q_poly(0.0), times=[0.5],
                            n_samples=100, mode="gamma", seed=4, n_gamma=8)
    assert out["pass"] and out["failures"] == 0


def test_invariance_detects_violation():
    """An oversized shear coefficient must produce failures: the sweep is a
    real oracle, not a rubber stamp."""
    h = UnivalentMap.koebe()
    sp = space(2.0, 1)
    out = verify_invariance(h, 1.0, 1.0, sp, q_poly(5.0), times=[0.05],
                            n_samples=400, mode="muir", seed=5)
    assert out["failures"] > 0 and not out["pass"]
    assert out["witnesses"]