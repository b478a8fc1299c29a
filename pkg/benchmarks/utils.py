from dataclasses import dataclass

import numpy as np

from nlpot.generators import FamilySpec
from nlpot.potential import DirichletProblem


@dataclass
class ProblemSize:
    family: str
    radius: int


def capacitor_problem(size: ProblemSize) -> DirichletProblem:
    """Centre pinned to 1, sphere of the exhaustion ball pinned to 0."""
    ex = FamilySpec.parse(size.family).exhaustion(size.radius)
    boundary = np.concatenate([[ex.center], ex.sphere])
    values = np.concatenate([[1.0], np.zeros(ex.sphere.size)])
    return DirichletProblem(ex.graph, boundary, values)
