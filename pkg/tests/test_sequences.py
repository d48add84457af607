import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from blab import DomainError, StripCone, ZeroSequence, pseudo_hyperbolic_distance as rho
from blab.jsonio import dumps
from blab.sequences import (
    LemmaAbParams,
    admit_hsc,
    certify_fine,
    consecutive_rho,
    generate_halfplane_geometric,
    generate_radial_geometric,
    generate_random_hsc,
    greedy_fine_subsequence,
    lemma_ab_bounds,
    lemma_ab_c1,
    lemma_ab_c2,
    mediant_monotone,
    shift_ratio_floor,
    tau_cap,
    window_upper,
)
from _support import FROZEN, WIDE_CONE, dyadic, random_cone, sample_lemma_pairs


# -- generators ------------------------------------------------------------


def test_halfplane_generator_example():
    zs = generate_halfplane_geometric(WIDE_CONE, 1.0, 2.0, 5)
    np.testing.assert_allclose(zs.zeros, [1 / 3, 3 / 5, 7 / 9, 15 / 17, 31 / 33], atol=1e-15)
    np.testing.assert_allclose(consecutive_rho(zs), 1 / 3, atol=1e-15)
    assert zs.meta["family"] == "halfplane"


def test_halfplane_generator_edge_cases():
    assert len(generate_halfplane_geometric(WIDE_CONE, 1.0, 2.0, 0)) == 0
    with pytest.raises(DomainError, match="n=1"):
        generate_halfplane_geometric(WIDE_CONE, 1 + 1.5j, 2.0, 5)
    with pytest.raises(DomainError):
        generate_halfplane_geometric(WIDE_CONE, 1.0, 1.0, 5)


def test_halfplane_generator_keeps_the_intercept_on_tilted_strips():
    cone = StripCone(1.0, 1.5708, 1.0, -1.0)
    zs = generate_halfplane_geometric(cone, 1.0, 2.0, 40)
    assert len(zs) == 40
    assert zs.zeros[0] == pytest.approx(1 / 3, abs=1e-5)
    assert np.all(cone_contains_all(cone, zs))


def cone_contains_all(cone, zs):
    from blab import cone_contains

    return np.asarray(cone_contains(cone, zs.zeros))


def test_radial_generator():
    zs = generate_radial_geometric(1j, 0.5, 4)
    np.testing.assert_allclose(zs.zeros, 1j * (1 - 0.5 ** np.arange(1, 5)))
    with pytest.raises(DomainError):
        generate_radial_geometric(1, 1.5, 4)


@pytest.mark.parametrize("seed", range(10))
def test_random_sequences_are_admissible(seed):
    rng = np.random.default_rng(seed)
    cone = random_cone(rng)
    zs = generate_random_hsc(cone, 40, seed)
    adm = admit_hsc(zs, cone)
    assert adm.passed, adm.to_dict()
    assert 0 < adm.delta < 1
    assert zs.meta["seed"] == seed
    np.testing.assert_array_equal(generate_random_hsc(cone, 40, seed).zeros, zs.zeros)


# -- admission -------------------------------------------------------------


def test_admit_dyadic():
    adm = admit_hsc(dyadic(20), WIDE_CONE)
    assert adm.passed
    assert adm.delta == pytest.approx(FROZEN["fixture_rho_x1_x2"], abs=1e-15)
    assert adm.notes == []
    json.loads(dumps(adm))


def test_admit_inverse_squares():
    n = np.arange(2, 42)
    adm = admit_hsc(ZeroSequence(1 - 1 / n**2), WIDE_CONE)
    assert adm.passed
    assert not any("convergence" in note for note in adm.notes)


def test_admit_flags_divergent_looking_sums():
    n = np.arange(2, 41)
    adm = admit_hsc(ZeroSequence(1 - 1 / n), WIDE_CONE)
    assert any("convergence" in note for note in adm.notes)


def test_admit_reports_the_first_monotonicity_violation():
    z = dyadic(10).zeros.copy()
    z[6] = 0.9
    adm = admit_hsc(ZeroSequence(z), WIDE_CONE)
    assert not adm.verdicts["monotone"]
    assert adm.witnesses["monotone"] == 6
    assert not adm.passed


def test_admit_reports_cone_exits_and_rho_steps():
    z = dyadic(6).zeros.astype(complex)
    z[3] = 0.5 + 0.8j
    adm = admit_hsc(ZeroSequence(z), WIDE_CONE)
    assert adm.witnesses["cone"] == 4
    adm = admit_hsc(dyadic(10), WIDE_CONE, delta=0.39)
    assert adm.witnesses["rho_step"] == 1


def test_monotone_check_allows_equal_distances():
    adm = admit_hsc(ZeroSequence([0.5, 0.5, 0.75]), WIDE_CONE)
    assert adm.verdicts["monotone"]


# -- mediants ------------------------------------------------------------------


def test_mediant_examples():
    assert mediant_monotone(0.3, 0.5, 0.2, 0.4) == pytest.approx(tuple(FROZEN["mediant_example"]), abs=1e-15)
    a, b = mediant_monotone(0.4, 0.4, 0.7, 0.7)
    assert a == b
    assert mediant_monotone(0, 0, 0, 0) == (0, 0)
    with pytest.raises(DomainError):
        mediant_monotone(0.5, 0.4, 0.1, 0.2)


@given(st.lists(st.floats(0.0, 1.0, exclude_max=True), min_size=4, max_size=4))
def test_mediant_is_monotone(v):
    a, a2 = sorted(v[:2])
    b, b2 = sorted(v[2:])
    lo, hi = mediant_monotone(a, a2, b, b2)
    assert lo <= hi


# -- greedy selection ----------------------------------------------------------


def test_greedy_dyadic_example():
    zs = dyadic(12)
    idx = greedy_fine_subsequence(zs, 0.5)
    assert idx == [1, 3, 5, 7, 9, 11]
    assert rho(zs.zeros[0], zs.zeros[2]) == pytest.approx(FROZEN["rho_x1_x3"], abs=1e-15)
    assert rho(zs.zeros[2], zs.zeros[4]) == pytest.approx(FROZEN["rho_x3_x5"], abs=1e-15)
    steps = consecutive_rho(zs.subsequence(idx))
    assert np.all((steps >= 0.5) & (steps <= window_upper(0.5, 0.4)))
    assert window_upper(0.5, 0.4) == pytest.approx(0.75)


def test_greedy_edge_cases():
    zs = dyadic(12)
    assert greedy_fine_subsequence(zs, 0.2) == list(range(1, 13))
    assert greedy_fine_subsequence(ZeroSequence([0.5, 0.6]), 0.5) == [1]
    assert greedy_fine_subsequence(ZeroSequence([]), 0.5) == []
    for eps in (0.0, 1.0):
        with pytest.raises(DomainError):
            greedy_fine_subsequence(zs, eps)


@pytest.mark.parametrize("epsilon", [0.3, 0.5, 0.7, 0.9])
def test_greedy_window_on_random_sequences(epsilon):
    rng = np.random.default_rng(int(epsilon * 100))
    for seed in range(25):
        cone = random_cone(rng)
        zs = generate_random_hsc(cone, 40, seed)
        delta = admit_hsc(zs, cone).delta
        idx = greedy_fine_subsequence(zs, epsilon)
        steps = consecutive_rho(zs.subsequence(idx))
        assert np.all(steps >= epsilon - 1e-12)
        assert np.all(steps <= window_upper(epsilon, delta) + 1e-12)


# -- ratio bounds --------------------------------------------------------------


def test_lemma_limits():
    assert lemma_ab_c1(1.0, 0.0, 0.5) == pytest.approx(FROZEN["lemma_c1_limit"], abs=1e-9)
    assert lemma_ab_c2(1.0, 0.0, 0.5, 0.5) == pytest.approx(FROZEN["lemma_c2_limit"], abs=1e-9)
    assert FROZEN["lemma_c2_limit"] == pytest.approx(FROZEN["lemma_c2_limit_closed"], abs=1e-15)


def test_lemma_third_example():
    p = LemmaAbParams.from_pair(0.875, 0.75, 4 / 11, 4 / 11, math.pi / 2, 0.1, 0.359375)
    assert p.failed_conditions() == []
    c1, c2 = lemma_ab_bounds(p)
    assert (c1, c2) == pytest.approx(tuple(FROZEN["lemma_third_example"]), abs=1e-12)
    assert c1 <= 0.5 <= c2 < 1
    assert tau_cap(1.0, 4 / 11) == pytest.approx(1 / 6, abs=1e-12)


def test_lemma_names_failed_conditions():
    p = LemmaAbParams.from_pair(0.875, 0.75, 4 / 11, 4 / 11, math.pi / 2, 0.0, 0.359375)
    with pytest.raises(DomainError, match=r"\(3\)"):
        lemma_ab_bounds(p)
    p = LemmaAbParams.from_pair(0.75, 0.875, 4 / 11, 4 / 11, math.pi / 2, 0.1, 0.359375)
    with pytest.raises(DomainError, match=r"\(0\)"):
        lemma_ab_bounds(p)
    p = LemmaAbParams.from_pair(0.875, 0.75, 0.3, 0.35, math.pi / 2, 0.1, 0.359375)
    assert any(c.startswith("(1)") for c in p.failed_conditions())
    p = LemmaAbParams.from_pair(0.875, 0.75, 4 / 11, 4 / 11, math.pi / 2, 0.1, 0.6)
    assert any(c.startswith("(4)") for c in p.failed_conditions())


def test_lemma_ratio_bracket_on_sampled_pairs():
    rng = np.random.default_rng(2024)
    for alpha, beta, eps, delta, tau, eta in sample_lemma_pairs(rng, 1000):
        p = LemmaAbParams.from_pair(alpha, beta, eps, delta, math.pi / 2, tau, eta)
        assert p.failed_conditions() == []
        c1, c2 = lemma_ab_bounds(p)
        ratio = abs(1 - alpha) / abs(1 - beta)
        assert 0 < c1 <= ratio <= c2 < 1


# -- fine certificates -------------------------------------------------------


def test_certify_dyadic_fixture():
    cert = certify_fine(dyadic(30), WIDE_CONE, 1 / 3, 0.4)
    assert cert.passed
    assert cert.start_n == 1
    assert (cert.c1, cert.c2) == pytest.approx((0.5, 0.5), abs=1e-11)
    assert cert.ctilde1 == pytest.approx(FROZEN["fixture30_ctilde1"], abs=1e-11)
    assert cert.ctilde2 == pytest.approx(FROZEN["fixture30_ctilde2"], abs=1e-11)
    assert cert.tail_sum_bound == pytest.approx(1.0, abs=1e-11)
    assert json.loads(dumps(cert))["pass"] is True


def test_certify_catches_a_constant_modulus_sequence():
    zs = ZeroSequence(0.9 * np.exp(1j * 0.01 * np.arange(10)))
    cert = certify_fine(zs, WIDE_CONE, 0.001, 0.5)
    assert not cert.verdicts["monotone"]
    assert cert.witnesses["monotone"] == 1
    assert not cert.passed


def test_certify_window_violation():
    cert = certify_fine(dyadic(30), WIDE_CONE, 0.35, 0.4)
    assert not cert.verdicts["rho_window"]
    assert cert.witnesses["rho_window"] > 1


def fine_random_truncations():
    rng = np.random.default_rng(99)
    found = []
    seed = 0
    while len(found) < 10:
        cone = random_cone(rng)
        zs = generate_random_hsc(cone, 60, seed)
        seed += 1
        delta = admit_hsc(zs, cone).delta
        eps = max(0.5, delta)
        sub = zs.subsequence(greedy_fine_subsequence(zs, eps))
        if len(sub) < 8:
            continue
        cert = certify_fine(sub, cone, eps, window_upper(eps, delta))
        if cert.passed:
            found.append((sub, cert))
    return found


@pytest.fixture(scope="module")
def fine_truncations():
    return fine_random_truncations()


def test_certified_partial_sums_respect_the_bound(fine_truncations):
    for sub, cert in fine_truncations:
        dist = np.abs(1.0 - sub.zeros)
        assert np.cumsum(dist)[-1] <= cert.sum_bound + 1e-12
        tail = dist[cert.start_n - 1:]
        assert np.sum(tail) <= cert.tail_sum_bound + 1e-12
        assert 0 < cert.c1 <= cert.c2 < 1 and 0 < cert.ctilde1 <= cert.ctilde2 < 1


def test_re_phi_and_distance_ratios_agree_along_the_tail():
    # Re phi(z_n)/Re phi(z_{n+1}) against |1 - z_{n+1}|/|1 - z_n|: their quotient tends to 1
    zs = generate_random_hsc(StripCone(1.0, 1.2, 1.0, -2.0), 80, 5)
    w = (1 + zs.zeros) / (1 - zs.zeros)
    dist = np.abs(1 - zs.zeros)
    q = (w.real[:-1] / w.real[1:]) / (dist[1:] / dist[:-1])
    assert np.max(np.abs(q[-10:] - 1.0)) < 0.05


def test_shift_ratio_floor():
    assert shift_ratio_floor(dyadic(30)) > 2
    assert shift_ratio_floor(ZeroSequence([0.5, 0.5, 0.5])) == 2.0
    for seed in range(5):
        assert shift_ratio_floor(generate_random_hsc(WIDE_CONE, 40, seed)) >= 0
    with pytest.raises(DomainError):
        shift_ratio_floor(ZeroSequence([0.9, 0.5]))
