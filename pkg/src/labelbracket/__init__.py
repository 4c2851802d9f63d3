"""Label-bracket state sums of knot, virtual knot and knotoid diagrams."""

from .algebra import ExponentDomainError, LaurentPoly, parse_poly
from .diagram import (
    Diagram,
    DiagramError,
    DiagramParseError,
    Kind,
    PlanarityError,
    StructuralError,
    parse_diagram,
    serialize,
    writhe,
)
from .labelgraph import (
    FormalSum,
    LabelGraph,
    Web,
    canonical_key,
    circle_count,
    sum_add,
    validate,
)
from .moves import (
    MoveSpec,
    NoMatchError,
    apply_move,
    braid_closure,
    enumerate_move_sites,
)
from .reducer import match_r1, match_r2, reduce, verify_r3
from .specialize import (
    UnsupportedError,
    arrow,
    arrow_value,
    jones,
    jones_value,
    kuperberg,
    kuperberg_web,
    reduce_web,
)
from .statesum import CapacityError, smooth, state_sum

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "Diagram",
    "DiagramError",
    "DiagramParseError",
    "ExponentDomainError",
    "FormalSum",
    "Kind",
    "LabelGraph",
    "LaurentPoly",
    "MoveSpec",
    "NoMatchError",
    "PlanarityError",
    "StructuralError",
    "UnsupportedError",
    "Web",
    "apply_move",
    "arrow",
    "arrow_value",
    "braid_closure",
    "canonical_key",
    "circle_count",
    "enumerate_move_sites",
    "jones",
    "jones_value",
    "kuperberg",
    "kuperberg_web",
    "match_r1",
    "match_r2",
    "parse_diagram",
    "parse_poly",
    "reduce",
    "reduce_web",
    "serialize",
    "smooth",
    "state_sum",
    "sum_add",
    "validate",
    "verify_r3",
    "writhe",
]
