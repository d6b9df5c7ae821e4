"""Directed multigraphs as presentations of graph algebras: simplicity of the
algebra and of its gauge-fixed core, periods, skew products, voltages, and
covering maps.
"""

__version__ = "0.1.0"

from .algebra import (
    BratteliDiagram,
    Classification,
    CoreDecomposition,
    CoreVerdict,
    Kind,
    Reason,
    SimplicityVerdict,
    af_core_decomposition,
    af_core_simple,
    bratteli,
    classify,
    crossed_product_report,
    csimple,
)
from .covering import (
    CoveringMorphism,
    Decomposition,
    MonodromyPresentation,
    NotACoveringError,
    decompose,
    has_unique_walk_lifting,
    is_regular,
    lift_forest,
    lift_walk,
    parse_covering_map,
    verify_covering,
)
from .graph import (
    INF,
    Edge,
    GraphError,
    GraphMorphism,
    MultiGraph,
    NotConnectedError,
    NotRowFiniteError,
    ParseError,
    ReducedWalk,
    SignedEdge,
    SpanningTree,
    parse_graph,
    path,
    reduce_walk,
    serialize_graph,
    spanning_tree,
    tree_from_edges,
)
from .groups import Cyclic, GroupError, Integers, PermutationGroup, Subgroup, parse_group
from .iso import find_isomorphism, is_isomorphism
from .skew import (
    ComponentSkew,
    SkewGraph,
    ZWindow,
    component_as_skew,
    component_count,
    relative_skew,
    same_component,
    z_component_cofinal,
    z_window,
)
from .structure import (
    NotStronglyConnectedError,
    aperiodic_power,
    cofinal_sc_subgraph,
    condition_K,
    eventual_loop_threshold,
    is_cofinal,
    path_threshold,
    period,
    saturated_closure,
)
from .voltage import (
    VoltageLabeling,
    are_cohomologous,
    coboundary,
    local_voltage_group,
    ones,
    parse_labels,
    t_voltage,
    walk_voltage,
)

__all__ = [
    "__version__",
    "BratteliDiagram",
    "Classification",
    "ComponentSkew",
    "CoreDecomposition",
    "CoreVerdict",
    "CoveringMorphism",
    "Cyclic",
    "Decomposition",
    "Edge",
    "GraphError",
    "GraphMorphism",
    "GroupError",
    "INF",
    "Integers",
    "Kind",
    "MonodromyPresentation",
    "MultiGraph",
    "NotACoveringError",
    "NotConnectedError",
    "NotRowFiniteError",
    "NotStronglyConnectedError",
    "ParseError",
    "PermutationGroup",
    "Reason",
    "ReducedWalk",
    "SignedEdge",
    "SimplicityVerdict",
    "SkewGraph",
    "SpanningTree",
    "Subgroup",
    "VoltageLabeling",
    "ZWindow",
    "af_core_decomposition",
    "af_core_simple",
    "aperiodic_power",
    "are_cohomologous",
    "bratteli",
    "classify",
    "coboundary",
    "cofinal_sc_subgraph",
    "component_as_skew",
    "component_count",
    "condition_K",
    "crossed_product_report",
    "csimple",
    "decompose",
    "eventual_loop_threshold",
    "find_isomorphism",
    "has_unique_walk_lifting",
    "is_cofinal",
    "is_isomorphism",
    "is_regular",
    "lift_forest",
    "lift_walk",
    "local_voltage_group",
    "ones",
    "parse_covering_map",
    "parse_graph",
    "parse_group",
    "parse_labels",
    "path",
    "path_threshold",
    "period",
    "reduce_walk",
    "relative_skew",
    "same_component",
    "saturated_closure",
    "serialize_graph",
    "spanning_tree",
    "t_voltage",
    "tree_from_edges",
    "verify_covering",
    "walk_voltage",
    "z_component_cofinal",
    "z_window",
]
