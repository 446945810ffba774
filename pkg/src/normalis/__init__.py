"""Double-normal pairs of finite point sets in the plane and on the sphere."""

from .constructions import (
    LayeredParams,
    cube_vertices,
    seven_point_example,
    five_point_strict,
    layered_construction,
    near_extremal,
    octahedron_vertices,
    pad_with_interior_points,
    planar_odd_extremal,
    regular_polygon,
    rhombicuboctahedron_vertices,
    symmetric_circle_set,
)
from .double_normal import (
    DiameterGraph,
    DoubleNormalGraph,
    Mode,
    StructureReport,
    audit_basic_claims,
    diameter_graph,
    double_normal_graph,
    red_blue_decomposition,
)
from .exceptions import *  # noqa: F401,F403
from .geometry import (
    CapPosition,
    PointSet,
    SlabPosition,
    Space,
    Tolerance,
    arc_cross,
    minor_cap_classify,
    slab_classify,
)
from .graph import GeoGraph
from .spherical import (
    CrossingReport,
    EulerAudit,
    LiftResult,
    OriginCase,
    SphereDoubleNormals,
    SphericalDelaunay,
    SphericalGabrielGraph,
    Tiling,
    crossing_classes,
    delaunay_tiling,
    euler_audit,
    reduce_to_gprime,
    sphere_double_normals,
    strict_gabriel,
    weak_gabriel,
)
from .verify import (
    AnnealingSearch,
    BoundReport,
    SearchState,
    Theorem,
    bound_formula,
    check_bound,
    oracle_double_normals,
    random_search,
)

__version__ = "0.1.0"
