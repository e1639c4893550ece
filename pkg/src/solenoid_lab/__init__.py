"""solenoid-lab: expanding solid-torus dynamics on glued torus pairs.

Library layers: torus geometry, the expanding embedding and its periodic and
sampled sets, the two-chart gluing algebra, the assembled global model, and
quantitative diagnostics. The cli module exposes all of it as subcommands.
"""

__version__ = "0.1.0"

from .analysis import (
    DimensionReport,
    HyperbolicityReport,
    box_dimension,
    cone_check,
    entropy_estimate,
    lyapunov_exponents,
)
from .lens import (
    BoundaryAngles,
    GluingMatrix,
    complete_gluing,
    h1_order,
    loop_class,
    smith_diagonal,
    transfer_boundary,
)
from .model import (
    BraidGeometry,
    GlobalModel,
    ManifoldPoint,
    OrbitFate,
    OrbitOutcome,
    braid_winding,
    build_model,
    random_manifold_points,
)
from .solenoid import (
    CloudMeta,
    PointCloud,
    SolenoidMap,
    attractor_fiber_distance,
    make_solenoid_map,
    periodic_points,
    sample_attractor,
)
from .torus import TorusPoint, torus_distance

__all__ = [
    "__version__",
    "BoundaryAngles",
    "BraidGeometry",
    "CloudMeta",
    "DimensionReport",
    "GlobalModel",
    "GluingMatrix",
    "HyperbolicityReport",
    "ManifoldPoint",
    "OrbitFate",
    "OrbitOutcome",
    "PointCloud",
    "SolenoidMap",
    "TorusPoint",
    "attractor_fiber_distance",
    "box_dimension",
    "braid_winding",
    "build_model",
    "complete_gluing",
    "cone_check",
    "entropy_estimate",
    "h1_order",
    "loop_class",
    "lyapunov_exponents",
    "make_solenoid_map",
    "periodic_points",
    "random_manifold_points",
    "sample_attractor",
    "smith_diagonal",
    "torus_distance",
    "transfer_boundary",
]
