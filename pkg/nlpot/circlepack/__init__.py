from nlpot.circlepack._pack import (
    CirclePackConfig,
    DiskPacking,
    angle_sum,
    angle_sums,
    geometric_boundary_radii,
    layout,
    pack_disk,
    tangency_residual,
)
from nlpot.circlepack._triangulation import (
    Triangulation,
    from_generated,
    read_triangulation,
    triangulation,
    write_triangulation,
)

__all__ = (
    "CirclePackConfig",
    "DiskPacking",
    "Triangulation",
    "angle_sum",
    "angle_sums",
    "from_generated",
    "geometric_boundary_radii",
    "layout",
    "pack_disk",
    "read_triangulation",
    "tangency_residual",
    "triangulation",
    "write_triangulation",
)
