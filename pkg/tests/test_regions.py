import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from blab import (
    BoundaryPoint,
    CayleyMap,
    DegenerateRegionError,
    DomainError,
    StripCone,
    cone_contains,
    cone_tail_stolz_constant,
    cone_to_strip,
    stolz_contains,
)
from _support import DIAMETER_CONE, FROZEN, WIDE_CONE, dyadic, random_disk


def pencil_coordinate(cone, z):
    """1/T of the circle through xi, tangent to the J-family, passing through z.

    The circles J(T) have centre xi (1 - T e^{i theta}) and radius |T|, so a
    point u = conj(xi) z - 1 lies on J(T) exactly when
    1/T = -2 Re(u e^{-i theta}) / |u|^2.
    """
    u = np.conj(complex(cone.xi)) * np.asarray(z) - 1.0
    return -2.0 * np.real(u * np.exp(-1j * cone.theta)) / np.abs(u) ** 2


def inv(t):
    return 0.0 if math.isinf(t) else 1.0 / t


def geometric_contains(cone, z):
    lo, hi = sorted((inv(cone.t1), inv(cone.t2)))
    s = pencil_coordinate(cone, z)
    return (s > lo) & (s < hi), np.minimum(np.abs(s - lo), np.abs(s - hi))


def test_strip_of_the_wide_cone():
    strip = cone_to_strip(WIDE_CONE)
    assert strip.slope_angle == 0.0
    assert (strip.c1, strip.c2) == pytest.approx((-1.0, 1.0), abs=1e-15)
    assert strip.width == pytest.approx(2.0)
    assert not strip.swapped


def test_arc_case_is_degenerate():
    strip = cone_to_strip(StripCone(1.0, math.pi / 2, 1.0, 1.0))
    assert strip.degenerate
    assert strip.c1 == pytest.approx(-1.0, abs=1e-15)


def test_diameter_cone_maps_to_the_real_axis():
    strip = cone_to_strip(DIAMETER_CONE)
    assert strip.c1 == strip.c2 == 0.0


def test_intercept_orientation_is_sorted_and_recorded():
    strip = cone_to_strip(StripCone(1.0, math.pi / 2, -1.0, 1.0))
    assert (strip.c1, strip.c2) == pytest.approx((-1.0, 1.0), abs=1e-15)
    assert strip.swapped
    assert strip.meta["t_order"] == [-1.0, 1.0]


def test_arc_without_finite_image_is_an_error():
    with pytest.raises(DegenerateRegionError):
        cone_to_strip(StripCone(1.0, math.pi / 2, 1e-320, 1.0))


@pytest.mark.parametrize("theta, t", [(math.pi, 1.0), (0.0, 1.0), (1.0, 0.0), (1.0, math.nan)])
def test_invalid_cones(theta, t):
    with pytest.raises(DomainError):
        StripCone(1.0, theta, t, 1.0)


def test_cone_serialization_round_trip():
    cone = StripCone(BoundaryPoint.from_angle(0.3), 1.1, math.inf, -2.5)
    d = json.loads(json.dumps(cone.to_dict()))
    assert d["t1"] == "inf"
    assert StripCone.from_dict(d) == cone


@pytest.mark.parametrize("z, expected", [(0.0, True), (0.5 + 0.8j, False), (0.9, True)])
def test_cone_contains_examples(z, expected):
    assert cone_contains(WIDE_CONE, z) is expected


def test_cone_example_image_point():
    w = CayleyMap().forward(0.5 + 0.8j)
    assert (w.real, w.imag) == pytest.approx(tuple(FROZEN["cone_example_w"]), abs=1e-14)


@pytest.mark.parametrize(
    "cone",
    [
        WIDE_CONE,
        StripCone(1.0, math.pi / 4, 1.0, -1.0),
        StripCone(BoundaryPoint.from_angle(2.0), 2.2, 0.4, 3.0),
        StripCone(BoundaryPoint.from_angle(-1.0), 0.7, -0.5, math.inf),
        StripCone(1j, 1.3, -0.2, -5.0),
    ],
)
def test_membership_matches_the_circle_pencil(cone):
    rng = np.random.default_rng(11)
    z = random_disk(rng, 10_000)
    expected, margin = geometric_contains(cone, z)
    clear = margin > 1e-9
    got = np.asarray(cone_contains(cone, z))
    assert np.array_equal(got[clear], expected[clear])
    assert clear.sum() > 9_900


@pytest.mark.parametrize("t", [1.0, -1.0, 0.3, -4.0])
@pytest.mark.parametrize("theta", [math.pi / 2, math.pi / 4, 2.5])
def test_images_of_the_arcs_are_parallel(theta, t):
    # sample the circle J(t) inside the disk and map it
    centre = 1.0 - t * np.exp(1j * theta)
    pts = centre + abs(t) * np.exp(1j * np.linspace(-math.pi, math.pi, 2001))
    pts = pts[(np.abs(pts) < 0.999) & (np.abs(1.0 - pts) > 1e-3)]
    w = CayleyMap().forward(pts)
    steps = np.diff(w)
    angles = np.angle(steps * np.exp(-1j * (math.pi / 2 - theta)))
    # every chord of the image runs along the direction pi/2 - theta
    assert np.max(np.abs(np.sin(angles))) < 1e-9
    strip = cone_to_strip(StripCone(1.0, theta, t, t))
    np.testing.assert_allclose(strip.offset(w), strip.c1, atol=1e-9)


@given(
    st.floats(-math.pi, math.pi),
    st.floats(0.1, math.pi - 0.1),
    st.sampled_from([1.0, -1.0, 0.5, 2.0, math.inf]),
    st.sampled_from([-1.0, -0.3, 3.0, math.inf]),
    st.floats(0.0, 0.99),
    st.floats(-math.pi, math.pi),
)
def test_rotational_covariance(angle, theta, t1, t2, r, phase):
    if t1 == t2:
        return
    xi = BoundaryPoint.from_angle(angle)
    z = r * complex(math.cos(phase), math.sin(phase))
    rotated = np.conj(complex(xi)) * z
    cone = StripCone(xi, theta, t1, t2)
    base = StripCone(1.0, theta, t1, t2)
    _, margin = geometric_contains(base, rotated)
    if margin < 1e-9:
        return
    assert cone_contains(cone, z) == cone_contains(base, rotated)


def test_strip_shift_covers_both_translates():
    strip = cone_to_strip(StripCone(1.0, math.pi / 4, 1.0, -1.0))
    wide = strip.shifted(1.0)
    assert wide.c1 == pytest.approx(strip.c1 - 1.0)
    assert wide.c2 == pytest.approx(strip.c2)
    assert wide.width == pytest.approx(strip.width + 1.0)
    vertical = cone_to_strip(WIDE_CONE)
    assert vertical.shifted(1.0).width == vertical.width


@pytest.mark.parametrize(
    "xi, c, z, expected",
    [(1.0, 2.0, 0.0, True), (1.0, 1.0, 0.5j, False), (1.0, 1.0, 0.3, True), (1.0, 1.0, 0.999, True)],
)
def test_stolz_examples(xi, c, z, expected):
    assert stolz_contains(xi, c, z) is expected


def test_stolz_rejects_small_aperture():
    with pytest.raises(DomainError):
        stolz_contains(1.0, 0.5, 0.0)


def test_stolz_tail_of_the_dyadic_fixture():
    big_c, h = cone_tail_stolz_constant(WIDE_CONE)
    assert big_c >= 1.0 and h > 0
    z = dyadic(45).zeros
    tail = z[np.abs(1.0 - z) < h]
    assert tail.size > 40
    assert np.all(stolz_contains(1.0, big_c, tail))


def test_diameter_cone_stolz_constant_is_one():
    big_c, h = cone_tail_stolz_constant(DIAMETER_CONE)
    assert big_c == pytest.approx(1.0, abs=0.3)
    x = np.linspace(0.0, 0.999, 500)
    assert np.all(stolz_contains(1.0, 1.0, x))


@pytest.mark.parametrize(
    "cone",
    [StripCone(1.0, math.pi / 4, 1.0, -1.0), WIDE_CONE, StripCone(BoundaryPoint.from_angle(1.0), 2.0, 0.5, -0.7)],
)
def test_stolz_constant_on_sampled_cone_points(cone):
    big_c, h = cone_tail_stolz_constant(cone)
    assert math.isfinite(big_c)
    strip = cone_to_strip(cone)
    rng = np.random.default_rng(5)
    xi = complex(cone.xi)
    # strip points far out in the half-plane, so near xi at many scales
    x = 10.0 ** rng.uniform(0.0, 7.0, 20_000)
    w = x + 1j * (strip.slope * x + rng.uniform(strip.c1, strip.c2, x.size))
    z = cone.cayley.inverse(w)
    z = z[(np.abs(z) < 1.0 - 1e-15) & (np.abs(xi - z) < h)]
    inside, margin = geometric_contains(cone, z)
    pts = z[inside & (margin > 1e-9)]
    assert pts.size > 1000
    assert np.all(stolz_contains(xi, big_c, pts))
