from nlpot.capmod import capacity_curve, classify_capacity_trend, tree_capacity
from nlpot.generators import FamilySpec
from nlpot.potential import SolverConfig


def main():
    family = FamilySpec.parse("tree:branching=2")
    radii = [4, 6, 8]
    curve = capacity_curve(family, 2.0, radii, SolverConfig(p=2.0, tolerance=1e-12))
    for radius, value in zip(curve.radii, curve.capacities):
        assert abs(value - tree_capacity(2, radius, 2.0)) < 1e-8
    assert classify_capacity_trend(curve.radii, curve.capacities) == "nonparabolic-trend"
