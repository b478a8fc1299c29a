from nlpot.potential._energy import (
    dirichlet_energy,
    energy_directional_derivative,
    energy_laplacian_identity_residual,
    harmonic_residual,
    p_laplacian,
    pairing,
    signed_power,
)
from nlpot.potential._liouville import (
    BoundaryScheme,
    OscillationProfile,
    boundary_data,
    liouville_probe,
)
from nlpot.potential._solver import (
    DirichletProblem,
    SolverConfig,
    solve_dirichlet,
    solve_dirichlet_exact,
)

__all__ = (
    "BoundaryScheme",
    "DirichletProblem",
    "OscillationProfile",
    "SolverConfig",
    "boundary_data",
    "dirichlet_energy",
    "energy_directional_derivative",
    "energy_laplacian_identity_residual",
    "harmonic_residual",
    "liouville_probe",
    "p_laplacian",
    "pairing",
    "signed_power",
    "solve_dirichlet",
    "solve_dirichlet_exact",
)
