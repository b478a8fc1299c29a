import math

import pytest

from nlpot.capmod import (
    TrendThresholds,
    classify_capacity_trend,
    classify_null_trend,
    classify_resolving_trend,
    decay_exponent,
    parabolic_index_estimate,
)
from nlpot.exceptions import ConfigError
from nlpot.generators import FamilySpec


@pytest.mark.parametrize(
    "radii,values,expected",
    [
        ([2, 4, 8, 16], [1.2, 1.05, 1.01, 1.005], "nonparabolic-trend"),
        ([4, 16, 64, 256], [1 / math.log(r) for r in (4, 16, 64, 256)], "parabolic-trend"),
        ([2, 4], [1.0, 0.05], "parabolic-trend"),
        ([2, 4], [1.0, 0.8], "inconclusive"),
        ([4, 8, 16], [1.0, 0.9, 0.85], "inconclusive"),
        ([4], [1.0], "inconclusive"),
    ],
)
def test_capacity_trend(radii, values, expected):
    assert classify_capacity_trend(radii, values) == expected


def test_capacity_trend_thresholds_are_configurable():
    radii, values = [2, 4], [1.0, 0.97]
    assert classify_capacity_trend(radii, values) == "inconclusive"
    relaxed = TrendThresholds(flat_decrease=0.05)
    assert classify_capacity_trend(radii, values, relaxed) == "nonparabolic-trend"


@pytest.mark.parametrize(
    "values,expected",
    [
        ([1.0, 1e-2, 5e-4], "null-trend"),
        ([1.0, 0.02], "null-trend"),
        ([1.33, 1.14, 1.07], "not-null-trend"),
        ([1.0, 0.99, 0.985], "not-null-trend"),
    ],
)
def test_null_trend(values, expected):
    assert classify_null_trend([2, 3, 4][: len(values)], values) == expected


@pytest.mark.parametrize(
    "values,expected",
    [
        ([1.0, 0.5, 0.2], "resolving-trend"),
        ([1.0, 0.9, 0.8], "not-resolving-trend"),
        ([1.0, 0.3, 0.4], "not-resolving-trend"),
        ([1.0, 1.0, 0.5], "resolving-trend"),
        ([1.0], "not-resolving-trend"),
    ],
)
def test_resolving_trend(values, expected):
    assert classify_resolving_trend(values) == expected


def test_decay_exponent():
    radii = [2, 4, 8, 16]
    assert decay_exponent(radii, [r**-2.0 for r in radii]) == pytest.approx(2.0)
    assert decay_exponent([1, 2, 4], [3.0, 3.0, 3.0]) == pytest.approx(0.0)
    assert math.isnan(decay_exponent([1, 2], [1.0, 0.5]))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"nonparabolic_ratio": 0.0},
        {"flat_decrease": 1.5},
        {"null_ratio": 1.0},
        {"loglog_slope": 0.1},
        {"parabolic_ratio": 0.6},
    ],
)
def test_threshold_validation(kwargs):
    with pytest.raises(ConfigError):
        TrendThresholds(**kwargs)


def test_binary_tree_is_nonparabolic_on_the_grid():
    estimate = parabolic_index_estimate(FamilySpec("tree", {"branching": 2}), [1.5, 2.0], [4, 6, 8])
    assert [row.verdict for row in estimate.rows] == ["nonparabolic-trend"] * 2
    assert [row.p for row in estimate.rows] == [1.5, 2.0]
    assert estimate.upper is None
    assert estimate.lower == 2.0


@pytest.mark.parametrize("grid", [[], [1.0, 2.0], [2.0, 9.0]])
def test_index_grid_validation(grid):
    with pytest.raises(ConfigError):
        parabolic_index_estimate(FamilySpec("lattice"), grid, [2, 4])


@pytest.mark.slow
def test_square_lattice_is_parabolic_for_large_exponents():
    estimate = parabolic_index_estimate(FamilySpec("lattice", {"d": 2}), [3.0], [4, 8, 16, 32])
    assert estimate.rows[0].verdict == "parabolic-trend"
    assert estimate.upper == 3.0
    assert estimate.rows[0].curve.is_nonincreasing()


@pytest.mark.slow
def test_square_lattice_index_is_two():
    estimate = parabolic_index_estimate(
        FamilySpec("lattice", {"d": 2}), [1.5, 2.0, 3.0], [8, 16, 32, 64, 128]
    )
    assert [row.verdict for row in estimate.rows] == [
        "nonparabolic-trend",
        "parabolic-trend",
        "parabolic-trend",
    ]
    assert (estimate.lower, estimate.upper) == (1.5, 2.0)


@pytest.mark.slow
def test_cubic_lattice_index_is_three():
    estimate = parabolic_index_estimate(
        FamilySpec("lattice", {"d": 3}), [2.0, 3.0], [2, 4, 8, 12, 16, 20]
    )
    by_p = {row.p: row for row in estimate.rows}
    assert by_p[2.0].verdict == "nonparabolic-trend"
    assert by_p[2.0].curve.capacities[-1] >= 0.5 * by_p[2.0].curve.capacities[0]
    assert by_p[3.0].verdict == "parabolic-trend"
    assert (estimate.lower, estimate.upper) == (2.0, 3.0)


@pytest.mark.slow
@pytest.mark.parametrize("p,radii", [(2.0, [4, 6, 8, 10]), (3.0, [6, 10, 12, 13])])
def test_tree_times_line_is_nonparabolic(p, radii):
    estimate = parabolic_index_estimate(FamilySpec("product", {"branching": 3}), [p], radii)
    assert estimate.rows[0].verdict == "nonparabolic-trend"
    assert estimate.rows[0].curve.is_nonincreasing()
