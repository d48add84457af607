import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blab import (
    BoundaryPoint,
    CayleyMap,
    DiskPoint,
    DomainError,
    automorphism,
    cayley_forward,
    cayley_inverse,
    principal_arg,
    pseudo_hyperbolic_distance as rho,
)
from _support import FROZEN, random_disk

disk_points = st.builds(
    lambda r, t: r * complex(math.cos(t), math.sin(t)),
    st.floats(0.0, 0.999),
    st.floats(-math.pi, math.pi),
)
circle_points = st.floats(-math.pi, math.pi).map(BoundaryPoint.from_angle)


@pytest.mark.parametrize(
    "z, w, expected",
    [(0, 0.5, 0.5), (0.5j, 0.5j, 0.0), (0.3, 0.6, FROZEN["rho_03_06"])],
)
def test_rho_examples(z, w, expected):
    assert rho(z, w) == pytest.approx(expected, abs=1e-15)


def test_rho_is_elementwise_on_arrays():
    z = np.array([0.0, 0.3, 0.5j])
    w = np.array([0.5, 0.6, 0.5j])
    np.testing.assert_allclose(rho(z, w), [0.5, FROZEN["rho_03_06"], 0.0], atol=1e-15)


def test_rho_naive_formula_away_from_the_edge():
    rng = np.random.default_rng(3)
    z, w = random_disk(rng, 2000, 0.9), random_disk(rng, 2000, 0.9)
    naive = np.abs((z - w) / (1 - np.conj(z) * w))
    np.testing.assert_allclose(rho(z, w), naive, rtol=1e-13, atol=1e-15)


def test_rho_rejects_points_outside_the_disk():
    with pytest.raises(DomainError):
        rho(1.0, 0.0)
    with pytest.raises(DomainError):
        rho(0.0, 2j)


@given(disk_points, disk_points)
def test_rho_exactly_symmetric(z, w):
    assert rho(z, w) == rho(w, z)


@given(disk_points, disk_points, disk_points)
def test_rho_triangle_inequality(z, w, u):
    assert rho(z, u) <= rho(z, w) + rho(w, u) + 1e-12


@given(disk_points, disk_points, disk_points)
def test_rho_mobius_invariant(a, z, w):
    assert rho(automorphism(a, z), automorphism(a, w)) == pytest.approx(rho(z, w), abs=1e-12)


@given(disk_points, disk_points)
def test_automorphism_is_an_involution(a, z):
    assert automorphism(a, automorphism(a, z)) == pytest.approx(z, abs=1e-9)


@pytest.mark.parametrize(
    "xi, z, expected",
    [(1, 0, 1), (1, 1 / 3, 2), (1j, 0, 1)],
)
def test_cayley_forward_examples(xi, z, expected):
    assert cayley_forward(CayleyMap(BoundaryPoint.of(xi)), z) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("w, expected", [(1, 0), (2, 1 / 3), (3, 0.5)])
def test_cayley_inverse_examples(w, expected):
    assert cayley_inverse(CayleyMap(BoundaryPoint(1.0, 0.0)), w) == pytest.approx(expected, abs=1e-15)


def test_cayley_rejects_bad_input():
    cmap = CayleyMap(BoundaryPoint(1.0, 0.0))
    with pytest.raises(DomainError):
        cmap.forward(1.0)
    with pytest.raises(DomainError):
        cmap.inverse(-1.0 + 0.5j)


@given(circle_points, disk_points)
def test_cayley_round_trip_and_right_half_plane(xi, z):
    cmap = CayleyMap(xi)
    w = cmap.forward(z)
    assert w.real > 0
    assert cmap.inverse(w) == pytest.approx(z, abs=1e-12)


@given(circle_points, disk_points, disk_points)
@settings(max_examples=200)
def test_half_plane_transfer(xi, z, w):
    cmap = CayleyMap(xi)
    a, b = cmap.forward(z), cmap.forward(w)
    assert abs(a - b) / abs(a + np.conj(b)) == pytest.approx(rho(z, w), abs=1e-12)


@pytest.mark.parametrize(
    "z, expected",
    [(1, 0.0), (1j, math.pi / 2), (-1 - 1j, -3 * math.pi / 4), (-1, math.pi)],
)
def test_principal_arg(z, expected):
    assert principal_arg(z) == pytest.approx(expected, abs=1e-15)


def test_principal_arg_of_zero_is_an_error():
    with pytest.raises(DomainError):
        principal_arg(0)


def test_disk_point_validation():
    assert complex(DiskPoint.of(0.5j)) == 0.5j
    for bad in (1.0, 1j, complex(math.nan, 0), 0.6 + 0.8j):
        with pytest.raises(DomainError):
            DiskPoint.of(bad)


def test_boundary_point_is_renormalized():
    p = BoundaryPoint(1.0 + 1e-13, 0.0)
    assert abs(complex(p)) == 1.0
    with pytest.raises(DomainError):
        BoundaryPoint(0.5, 0.0)
    assert complex(BoundaryPoint.from_angle(math.pi / 2)) == pytest.approx(1j, abs=1e-16)


def test_automorphism_is_accurate_near_the_circle():
    # images that crowd the circle amplify any rounding in the map, so the
    # map is held to about an ulp against a 50-digit reference
    import mpmath as mp

    rng = np.random.default_rng(11)
    a, z = random_disk(rng, 400, 0.99999), random_disk(rng, 400, 0.99999)
    with mp.workdps(50):
        for ak, zk in zip(a, z):
            got = automorphism(ak, zk)
            A, Z = mp.mpc(ak.real, ak.imag), mp.mpc(zk.real, zk.imag)
            exact = (A - Z) / (1 - mp.conj(A) * Z)
            assert float(abs(mp.mpc(got.real, got.imag) - exact)) <= 2.3e-16
