"""Exact line arrangements, their hypergraphs, and coloring/guarding algorithms."""

from .arrangement import Arrangement, Cell, DualGraph, Vertex, build, dual_graph, zones
from .constructions import (
    ChainInstance,
    Gadget,
    WitnessSet,
    chain_L,
    convex_position,
    gadget_G,
    greedy_witness,
    random_simple,
    verify_chain_geometry,
    verify_chain_property,
    verify_witness,
)
from .geometry import (
    LineEq,
    Point,
    Rational,
    Snapshot,
    flatten,
    format_rational,
    intersect,
    is_simple,
    parse_rational,
    reflect_y,
    side,
    snapshots,
)
from .heuristics import (
    AlgorithmTrace,
    SweepColoringResult,
    alternating_convex_coloring,
    greedy_maximal_is_lines,
    iterated_is_coloring,
    pair_cell_cover,
    parity_cell_coloring,
    refined_cell_cover,
    sweep_vertex_coloring,
    vertex_guards,
)
from .hypergraph import (
    Certificate,
    Hypergraph,
    ValidationReport,
    cell_zone,
    exact_chromatic_number,
    exact_max_independent_set,
    exact_min_vertex_cover,
    forall_proper_colorings,
    line_cell,
    proper_colorings,
    validate,
    vertex_cell,
)
from .render import render_svg

__version__ = "0.1.0"

__all__ = [
    "AlgorithmTrace",
    "Arrangement",
    "Cell",
    "Certificate",
    "ChainInstance",
    "DualGraph",
    "Gadget",
    "Hypergraph",
    "LineEq",
    "Point",
    "Rational",
    "Snapshot",
    "SweepColoringResult",
    "ValidationReport",
    "Vertex",
    "WitnessSet",
    "alternating_convex_coloring",
    "build",
    "cell_zone",
    "chain_L",
    "convex_position",
    "dual_graph",
    "exact_chromatic_number",
    "exact_max_independent_set",
    "exact_min_vertex_cover",
    "flatten",
    "forall_proper_colorings",
    "format_rational",
    "gadget_G",
    "greedy_maximal_is_lines",
    "greedy_witness",
    "intersect",
    "is_simple",
    "iterated_is_coloring",
    "line_cell",
    "pair_cell_cover",
    "parity_cell_coloring",
    "parse_rational",
    "proper_colorings",
    "random_simple",
    "reflect_y",
    "refined_cell_cover",
    "render_svg",
    "side",
    "snapshots",
    "sweep_vertex_coloring",
    "validate",
    "verify_chain_geometry",
    "verify_chain_property",
    "verify_witness",
    "vertex_cell",
    "vertex_guards",
    "zones",
    "__version__",
]
