"""Unit and property tests for the univalent map families."""

import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spirallab import kernels
from spirallab import _core_py
from spirallab.families import (
    BranchedPower,
    PointOutsideDisk,
    UnivalentMap,
    continued_log_deriv,
    disk_automorphism,
    distortion_bounds,
    fractional_power,
    invert_map,
    normalize_at,
)

from conftest import random_disk, standard_families

disk_points = st.complex_numbers(max_magnitude=0.9, allow_nan=False,
                                 allow_infinity=False)


# ---------------------------------------------------------------- oracles

def test_koebe_values():
    k = UnivalentMap.koebe()
    # k(1/2) = (1/2)/(1/4) = 2, k'(1/2) = (1+1/2)/(1/2)^3 = 12
    assert abs(k.eval(0.5) - 2.0) < 1e-14
    assert abs(k.deriv(0.5) - 12.0) < 1e-14
    assert abs(k.eval(0.0)) < 1e-14
    assert abs(k.deriv(0.0) - 1.0) < 1e-14
    # k(z) = z/(1-z)^2 at z = i/2: i/2 / (1 - i/2)^2
    z = 0.5j
    assert abs(k.eval(z) - z / (1 - z) ** 2) < 1e-14


def test_mobius_spiral_values():
    h = UnivalentMap.mobius_spiral(0.3)
    z = 0.25 + 0.1j
    assert abs(h.eval(z) - z / (1 + 0.3 * z)) < 1e-14
    assert abs(h.deriv(0.0) - 1.0) < 1e-14


def test_half_plane_values():
    h = UnivalentMap.half_plane()
    # (1-z)/(1+z): 0 -> 1, maps the disk onto the right half plane
    assert abs(h.eval(0.0) - 1.0) < 1e-14
    assert abs(h.eval(0.5) - 1.0 / 3.0) < 1e-14
    zs = random_disk(np.random.default_rng(0), 200, 0.999)
    assert np.all(h.eval_array(zs).real > 0)


def test_spiral_koebe_reduces_to_koebe():
    s = UnivalentMap.spiral_koebe(0.0)
    k = UnivalentMap.koebe()
    zs = random_disk(np.random.default_rng(1), 100)
    assert np.max(np.abs(s.eval_array(zs) - k.eval_array(zs))) < 1e-13


def test_rational_matches_quotient():
    h = UnivalentMap.rational([0, 1], [1, -1])  # z / (1 - z)
    z = 0.3 - 0.2j
    assert abs(h.eval(z) - z / (1 - z)) < 1e-14
    assert abs(h.deriv(z) - 1.0 / (1 - z) ** 2) < 1e-13


def test_outside_disk_raises():
    k = UnivalentMap.koebe()
    with pytest.raises(PointOutsideDisk):
        k.eval(1.5)
    with pytest.raises(PointOutsideDisk):
        k.deriv(1.0 + 0j)


# ------------------------------------------------------------- derivatives

@pytest.mark.parametrize("name", list(standard_families()))
def test_deriv_matches_finite_difference(name):
    h = standard_families()[name]
    zs = random_disk(np.random.default_rng(2), 50, 0.85)
    eps = 1e-6
    for z in zs:
        fd = (h.eval(z + eps) - h.eval(z - eps)) / (2 * eps)
        assert abs(fd - h.deriv(z)) < 1e-6 * max(1.0, abs(h.deriv(z)))
        fd2 = (h.deriv(z + eps) - h.deriv(z - eps)) / (2 * eps)
        assert abs(fd2 - h.deriv2(z)) < 1e-5 * max(1.0, abs(h.deriv2(z)))


def test_array_paths_match_scalar(families):
    zs = random_disk(np.random.default_rng(3), 64)
    for h in families.values():
        ev = h.eval_array(zs)
        dv = h.deriv_array(zs)
        for i, z in enumerate(zs):
            assert abs(ev[i] - h.eval(z)) < 1e-13
            assert abs(dv[i] - h.deriv(z)) < 1e-13


# --------------------------------------------------------------- inversion

@pytest.mark.parametrize("name", list(standard_families()))
def test_invert_round_trip(name):
    h = standard_families()[name]
    zs = random_disk(np.random.default_rng(4), 200, 0.9)
    ws = h.eval_array(zs)
    back = h.invert_array(ws, guess=0j)
    assert np.max(np.abs(back - zs)) < 1e-9


@given(z=disk_points)
@settings(max_examples=200, deadline=None)
def test_koebe_closed_inverse_property(z):
    k = UnivalentMap.koebe()
    assert abs(k.invert(k.eval(z)) - z) < 1e-9


def test_invert_map_generic_newton():
    h = UnivalentMap.mobius_spiral(0.2 + 0.1j)
    z = 0.4 - 0.3j
    assert abs(invert_map(h, h.eval(z), guess=0.3) - z) < 1e-10


# ------------------------------------------------------------ automorphism

@given(x0=st.complex_numbers(max_magnitude=0.95, allow_nan=False,
                             allow_infinity=False),
       z=disk_points)
@settings(max_examples=300, deadline=None)
def test_disk_automorphism_involution(x0, z):
    # phi_{x0}(phi_{x0}(z)) = z
    w = disk_automorphism(x0, z)
    assert abs(disk_automorphism(x0, w) - z) < 1e-12


def test_disk_automorphism_endpoints():
    assert abs(disk_automorphism(0.3 + 0.4j, 0.0) - (0.3 + 0.4j)) < 1e-15
    assert abs(disk_automorphism(0.3 + 0.4j, 0.3 + 0.4j)) < 1e-15


# -------------------------------------------------------------- distortion

def test_distortion_bounds_shape():
    dlo, vlo = distortion_bounds(0.5)
    assert abs(dlo - 0.5 / 1.5**3) < 1e-15
    assert abs(vlo - 0.5 / 1.5**2) < 1e-15


@pytest.mark.parametrize("name", list(standard_families()))
def test_normalized_maps_obey_koebe_distortion(name):
    h = standard_families()[name]
    rng = np.random.default_rng(5)
    x0s = random_disk(rng, 10, 0.8)
    zs = random_disk(rng, 200, 0.95)
    for x0 in x0s:
        g = normalize_at(h, complex(x0))
        vals = np.abs(g.eval_array(zs))
        lo = np.abs(zs) / (1 + np.abs(zs)) ** 2
        hi = np.abs(zs) / (1 - np.abs(zs)) ** 2
        assert np.all(vals >= lo - 1e-12)
        assert np.all(vals <= hi + 1e-12)


# ------------------------------------------------------------------ branch

@pytest.mark.parametrize("name", list(standard_families()))
def test_log_deriv_is_a_true_logarithm(name):
    h = standard_families()[name]
    zs = random_disk(np.random.default_rng(6), 100, 0.9)
    ld = h.log_deriv_array(zs)
    assert np.max(np.abs(np.exp(ld) - h.deriv_array(zs))) < 1e-10
    # anchored at the principal value at the origin
    l0 = h.log_deriv(0.0)
    assert abs(l0 - cmath.log(h.deriv(0.0))) < 1e-12


def test_continued_log_matches_closed_form():
    h = UnivalentMap.koebe()
    zs = random_disk(np.random.default_rng(7), 30, 0.85)
    for z in zs:
        tracked = continued_log_deriv(h, complex(z))
        assert abs(tracked - h.log_deriv(complex(z))) < 1e-9


def test_branch_continuity_along_loop():
    # log h' along a closed loop inside the disk must come back unchanged
    h = UnivalentMap.koebe()
    ts = np.linspace(0, 2 * np.pi, 400)
    path = 0.7 * np.exp(1j * ts)
    logs = h.log_deriv_array(path)
    jumps = np.abs(np.diff(logs))
    assert np.max(jumps) < 0.5
    assert abs(logs[0] - logs[-1]) < 1e-10


def test_branched_power_consistency():
    h = UnivalentMap.koebe()
    b = BranchedPower(h, 2.0)
    zs = random_disk(np.random.default_rng(8), 50, 0.8)
    for z in zs:
        v = fractional_power(b, complex(z))
        assert abs(v * v - h.deriv(complex(z))) < 1e-10


# ----------------------------------------------------------------- backend

def test_backends_agree():
    """Compiled kernels and the pure-python fallback must match bit-for-all
    practical purposes on every family code."""
    rng = np.random.default_rng(9)
    zs = random_disk(rng, 500, 0.9)
    for h in standard_families().values():
        spec = h
        for fn, gn in (
            (kernels.eval_map, _core_py.eval_map),
            (kernels.eval_deriv, _core_py.eval_deriv),
            (kernels.log_deriv, _core_py.log_deriv),
        ):
            a = fn(spec.code, spec.params, spec.num, spec.den, zs)
            b = gn(spec.code, spec.params, spec.num, spec.den, zs)
            assert np.max(np.abs(a - b)) < 1e-12


def test_backend_invert_agrees():
    rng = np.random.default_rng(10)
    zs = random_disk(rng, 200, 0.85)
    h = UnivalentMap.mobius_spiral(0.25j)
    ws = h.eval_array(zs)
    a = kernels.invert(h.code, h.params, h.num, h.den, ws,
                       np.zeros_like(ws))
    b = _core_py.invert(h.code, h.params, h.num, h.den, ws,
                        np.zeros_like(ws))
    assert np.max(np.abs(a - b)) < 1e-9


# --------------------------------------------------------------- ser/deser

def test_spec_round_trip(families):
    for h in families.values():
        again = UnivalentMap.from_spec(h.to_spec())
        zs = random_disk(np.random.default_rng(11), 20)
        assert np.max(np.abs(again.eval_array(zs) - h.eval_array(zs))) < 1e-14


def test_declared_spirallike():
    h = UnivalentMap.mobius_spiral(0.3)
    assert h.declared_spirallike(1.0)
    mu = cmath.exp(0.4j)
    assert UnivalentMap.mobius_spiral(0.9 * mu.real).declared_spirallike(mu)
    assert not UnivalentMap.mobius_spiral(0.99).declared_spirallike(1.0 + 5.0j)
