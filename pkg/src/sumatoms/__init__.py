"""Finite-group sumset structure: boundaries, atoms, quotient digraphs,
and classification of sets with small product growth."""

from .classify import (
    Case,
    CaseIIIWitness,
    CaseIIWitness,
    CaseIWitness,
    ClassificationResult,
    CorollaryVerdict,
    HypothesisReport,
    MannVerdict,
    TranscriptEntry,
    TwoCosetVerdict,
    check_corollary_bound,
    classify,
    detect_geometric_progression,
    find_case_ii_subgroup,
    find_case_iii_witness,
    hypothesis_holds,
    verify_mann,
    verify_two_coset_theorem,
)
from .digraphs import (
    ArcAtomVerdict,
    ArcCutReport,
    DirectedGraph,
    TransitivityVerdict,
    arc_atom_cardinality_check,
    arc_connectivity,
    arc_connectivity_exhaustive,
    arc_connectivity_flow,
    bidirected_clique,
    build_quotient_graph,
    contains_k4_star,
    directed_cycle,
    every_arc_in_oriented_triangle,
    format_graph_dump,
    is_antisymmetric,
    is_octahedron_underlying,
    is_strongly_connected,
    is_symmetric,
    max_induced_arcs,
    oriented_octahedron,
    oriented_rook,
    outgoing_arcs,
    verify_translation_transitivity,
)
from .errors import (
    DisconnectedGraphError,
    GraphTooLargeError,
    GroupMismatchError,
    NotGeneratingError,
    NotSeparableError,
    OracleCapError,
    ParseError,
    PreconditionError,
    SizeCapError,
    SumatomsError,
    ValidationError,
)
from .family import (
    ExampleInstance,
    ScanRow,
    build_example,
    classify_example,
    sophie_germain_scan,
    verify_example,
)
from .groups import (
    DEFAULT_ORDER_CAP,
    FiniteGroup,
    GroupSubset,
    direct_product,
    double_coset_size,
    enumerate_subgroups,
    generated_subgroup,
    load_group_table,
    make_cyclic,
    make_dihedral,
    make_semidirect,
    restrict_to_subgroup,
    right_coset_decomposition,
)
from .sumsets import (
    FragmentDiagram,
    FragmentReport,
    IntersectionVerdict,
    NormalizeReport,
    boundary,
    check_intersection_property,
    find_atoms,
    find_fragments,
    fragment_diagram,
    is_k_separable,
    isoperimetric_number,
    maximal_left_period,
    normalize,
    oracle_atoms,
    product_set,
    remainder,
)

__version__ = "0.1.0"
