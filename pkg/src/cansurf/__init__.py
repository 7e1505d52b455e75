"""cansurf: crudely almost normal surfaces on triangulated 3-manifolds.

Build tetrahedral triangulations from gluing tables, encode surfaces
transverse to them up to normal isotopy, explore the graph of encodings
connected by elementary moves and pinches under a weight budget, and
extract free generators of that graph's fundamental group as replayable
move sequences.
"""

from .bounds import (
    BoundsConfig,
    area_constant,
    delta_constant,
    parse_config,
    weight_budget,
)
from .errors import (
    CansurfError,
    NotApplicableError,
    ParseError,
    PartialGraphError,
    SemanticError,
)
from .moves import (
    DEFAULT_MOVE_SET,
    CatalogSphere,
    Move,
    Neighbor,
    SphereCatalog,
    apply,
    apply_with_inverse,
    default_catalog,
    extend_catalog,
    neighbors,
    parse_move,
    pinch,
)
from .movegraph import (
    GeneratorSet,
    Limits,
    MoveGraph,
    build,
    export,
    export_dot,
    export_json,
    generators,
    import_json,
    replay,
)
from .surface import (
    CRUDELY_ALMOST_NORMAL,
    CRUDELY_NORMAL,
    Surface,
    empty_surface,
    enumerate_surfaces,
    noncrossing_matchings,
    parse_surface,
    vertex_link,
)
from .triangulation import Triangulation, barycentric_subdivide, parse_triangulation

__version__ = "0.1.0"

__all__ = [
    "BoundsConfig",
    "CansurfError",
    "CatalogSphere",
    "CRUDELY_ALMOST_NORMAL",
    "CRUDELY_NORMAL",
    "DEFAULT_MOVE_SET",
    "GeneratorSet",
    "Limits",
    "Move",
    "MoveGraph",
    "Neighbor",
    "NotApplicableError",
    "ParseError",
    "PartialGraphError",
    "SemanticError",
    "SphereCatalog",
    "Surface",
    "Triangulation",
    "apply",
    "apply_with_inverse",
    "area_constant",
    "barycentric_subdivide",
    "build",
    "default_catalog",
    "delta_constant",
    "empty_surface",
    "enumerate_surfaces",
    "export",
    "export_dot",
    "export_json",
    "extend_catalog",
    "generators",
    "import_json",
    "neighbors",
    "noncrossing_matchings",
    "parse_config",
    "parse_move",
    "parse_surface",
    "parse_triangulation",
    "pinch",
    "replay",
    "vertex_link",
    "weight_budget",
]
