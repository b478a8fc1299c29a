import math

import numpy as np
import pytest

from nlpot import Path
from nlpot.exceptions import BadRadiiError, PathMismatchError
from nlpot.packing import (
    BlockingRadii,
    Packing,
    approach_paths,
    blocking_metric,
    blocking_radii,
    contact_graph,
    divergence_check,
    lens_volume,
    psi,
)

LAST = 20


@pytest.fixture
def dyadic_chain():
    """Intervals [2^-(k+1), 2^-k] for k = 0..LAST, tangent in a chain accumulating at 0."""
    k = np.arange(LAST + 1)
    p = Packing((0.75 * 2.0**-k)[:, None], 0.25 * 2.0**-k)
    return p, contact_graph(p)


@pytest.mark.parametrize(
    "distance,expected",
    [(0.0, 2.0), (1.0, 2.0), (3.0, 1.0), (4.0, 0.0), (6.0, 0.0)],
)
def test_psi_branches(distance, expected):
    assert psi(2.0, [distance, 0.0], [0.0, 0.0]) == pytest.approx(expected)


def test_psi_examples_relative_to_r():
    r = 0.3
    anchor = np.array([1.0, -1.0])
    direction = np.array([0.6, 0.8])
    assert psi(r, anchor + 0.5 * r * direction, anchor) == pytest.approx(r)
    assert psi(r, anchor + 1.5 * r * direction, anchor) == pytest.approx(0.5 * r)
    assert psi(r, anchor + 3.0 * r * direction, anchor) == 0.0


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_psi_is_1_lipschitz(seed):
    rng = np.random.default_rng(seed)
    z = rng.uniform(-3, 3, size=(500, 3))
    w = rng.uniform(-3, 3, size=(500, 3))
    r = rng.uniform(0.1, 2.0)
    gap = np.abs(psi(r, z, np.zeros(3)) - psi(r, w, np.zeros(3)))
    assert np.all(gap <= np.linalg.norm(z - w, axis=1) + 1e-12)


def test_blocking_radii_on_dyadic_chain(dyadic_chain):
    p, cg = dyadic_chain
    br = blocking_radii(p, cg, [0.0], n_max=50, unit=1.0)
    assert br.radii[0] == 1.0
    assert len(br) == 8
    assert br.truncated
    assert "no centre" in br.reason
    assert all(b < a / 2 for a, b in zip(br.radii, br.radii[1:]))
    assert br.certified
    assert br.verify(p, cg)


def test_blocking_radii_stop_at_n_max(dyadic_chain):
    p, cg = dyadic_chain
    br = blocking_radii(p, cg, [0.0], n_max=3, unit=1.0)
    assert len(br) == 3
    assert not br.truncated
    assert br.reason is None


def test_default_unit_is_half_the_largest_distance(dyadic_chain):
    p, cg = dyadic_chain
    br = blocking_radii(p, cg, [0.0], n_max=2)
    assert br.unit == pytest.approx(0.375)
    assert br.verify(p, cg)


def test_anchor_inside_a_ball_truncates():
    # the anchor sits inside the last ball
    p = Packing([[3.0], [1.0]], [1.0, 1.0])
    br = blocking_radii(p, contact_graph(p), [1.2], n_max=10, unit=1.0)
    assert br.truncated
    assert br.radii == (1.0,)
    assert "touches" in br.reason


def test_verify_rejects_tampered_radii(dyadic_chain):
    p, cg = dyadic_chain
    br = blocking_radii(p, cg, [0.0], n_max=4, unit=1.0)
    loose = BlockingRadii(br.anchor, br.unit, (1.0, 0.6), (True, True), False)
    assert not loose.verify(p, cg)
    # the edge between the first two intervals crosses from B(2 * 0.4) to outside B(1)
    crossing = BlockingRadii(br.anchor, 0.5, (1.0, 0.4), (True, True), False)
    assert not crossing.verify(p, cg)


def test_single_term_metric(dyadic_chain):
    p, cg = dyadic_chain
    br = blocking_radii(p, cg, [0.0], n_max=1, unit=1.0)
    bm = blocking_metric(p, cg, br)
    assert np.all((bm.phi >= 0) & (bm.phi <= 1))
    assert bm.phi.tolist() == [1.0] * (LAST + 1)
    assert np.all(bm.metric > 0)
    assert bm.metric == pytest.approx(1e-6 * 2 * (p.r_out[:-1] + p.r_out[1:]))


def test_blocking_metric_supports_and_norm(dyadic_chain):
    p, cg = dyadic_chain
    br = blocking_radii(p, cg, [0.0], n_max=50, unit=1.0)
    bm = blocking_metric(p, cg, br)
    assert bm.supports_disjoint
    assert np.all(bm.metric >= bm.dphi)
    assert np.all(bm.metric > 0)
    assert bm.norm_d == pytest.approx(sum(bm.decomposition), rel=1e-9)
    active = bm.support_index >= 0
    assert np.all(bm.dphi[~active] <= 1e-15)
    # phi_1 is constant on the whole chain
    assert math.isnan(bm.constants[0])
    assert np.all(np.isfinite(bm.constants[1:])) and bm.constant > 0


def test_blocking_metric_needs_certified_radii(dyadic_chain):
    p, cg = dyadic_chain
    empty = BlockingRadii((0.0,), 1.0, (), (), True, "none")
    with pytest.raises(BadRadiiError):
        blocking_metric(p, cg, empty)
    uncertified = BlockingRadii((0.0,), 1.0, (1.0, 0.1), (True, False), False)
    with pytest.raises(BadRadiiError):
        blocking_metric(p, cg, uncertified)


def test_divergence_along_the_chain(dyadic_chain):
    p, cg = dyadic_chain
    br = blocking_radii(p, cg, [0.0], n_max=50, unit=1.0)
    bm = blocking_metric(p, cg, br)
    (path,) = approach_paths(cg, p.centers, br.anchor)
    assert path.vertices == tuple(range(LAST + 1))
    (profile,) = divergence_check(cg, bm.metric, bm.phi, [path], br, p.centers)
    assert profile.telescoping_ok
    assert profile.length >= profile.increment
    assert profile.reaches_target
    assert np.all(np.diff(profile.partial_sums) > 0)
    assert np.all(np.diff(profile.term_sums) >= 0)
    assert profile.term_sums[-1] == pytest.approx(profile.phi_values[-1])
    harmonic = sum(1 / j for j in range(1, len(br) + 1))
    assert profile.harmonic == pytest.approx(harmonic)
    assert profile.phi_values[-1] >= harmonic - profile.slack - 1e-12
    assert profile.slack == pytest.approx(1 / 8)


def test_divergence_check_rejects_paths_missing_the_anchor(dyadic_chain):
    p, cg = dyadic_chain
    br = blocking_radii(p, cg, [0.0], n_max=3, unit=1.0)
    bm = blocking_metric(p, cg, br)
    with pytest.raises(PathMismatchError):
        divergence_check(cg, bm.metric, bm.phi, [Path((0, 1, 2))], br, p.centers)


@pytest.mark.parametrize(
    "a,t,big_r,expected",
    [
        (1.0, 0.0, 3.0, math.pi),
        (1.0, 5.0, 3.0, 0.0),
        (4.0, 0.5, 3.0, 9 * math.pi),
    ],
)
def test_lens_volume_extremes(a, t, big_r, expected):
    assert lens_volume(2, [a], [t], big_r)[0] == pytest.approx(expected)


def test_lens_volume_of_two_unit_disks():
    # two unit disks at distance 1 overlap in 2 pi / 3 - sqrt(3) / 2
    expected = 2 * math.pi / 3 - math.sqrt(3) / 2
    assert lens_volume(2, [1.0], [1.0], 1.0)[0] == pytest.approx(expected)


def test_lens_volume_of_intervals():
    assert lens_volume(1, [1.0, 1.0], [2.5, 0.5], 2.0).tolist() == pytest.approx([0.5, 2.0])
