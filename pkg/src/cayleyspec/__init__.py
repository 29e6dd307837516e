"""Exact spectra and eigenbases of Cayley color graphs.

Groups are given as cyclic groups, abelian products, dihedral groups,
split extensions of a cyclic normal subgroup, or permutation groups with
a designated splitting.  Colors (edge weight functions on the group)
produce Cayley color graphs; spectra come from closed-form expressions
over irreducible representations and every result can be certified
against an independently assembled adjacency matrix.
"""

from .errors import (
    CapacityExceeded,
    CayleyError,
    ConfigError,
    DimensionMismatch,
    HypothesesViolated,
    InvalidAction,
    IrrepValidationFailed,
    IrrepsUnavailable,
    LayerNotInvariant,
    NotClassFunction,
)
from .groups import (
    AbelianProductGroup,
    ConjugacyClass,
    CyclicGroup,
    DihedralGroup,
    FiniteGroup,
    MetacyclicGroup,
    PermutationGroup,
    SemidirectProductGroup,
    SplitExtensionGroup,
    Transversal,
    conjugacy_classes,
    conjugation_orbits_on_k,
    construct_group,
    is_generating_set,
    left_transversal_ordering,
)
from .irreps import (
    FourierBlock,
    IrrepSet,
    IrrepValidationReport,
    PMatrix,
    UnitaryIrrep,
    build_p_matrix,
    builtin_irreps,
    ensure_trusted,
    fourier_transform,
    irreps_abelian,
    irreps_cyclic,
    irreps_dihedral,
    irreps_metacyclic,
    unit_root,
    validate_irrep_set,
)
from .cayley import (
    AdjacencyMatrix,
    BlockDecomposition,
    ColorFunction,
    ConnectionSet,
    adjacency_matrix,
    beta_blocks,
    classify_connection_set,
    color_from_set,
    export_edge_list,
    layers_from_set,
    nonnormal_family,
    read_edge_list,
)
from .spectra import (
    BlockDiagonalization,
    HypothesisReport,
    SpectralLine,
    Spectrum,
    block_diagonalize,
    check_split_hypotheses,
    cluster_eigenvalues,
    spectrum_metacyclic,
    spectrum_normal,
    spectrum_split,
)
from .verify import (
    VerificationReport,
    certify,
    compare_spectra,
    regular_rep_matrix,
    trace_identities,
    verify_basis,
    verify_block_reconstruction,
    verify_eigenpairs,
)

__version__ = "0.1.0"

__all__ = [
    "AbelianProductGroup",
    "AdjacencyMatrix",
    "BlockDecomposition",
    "BlockDiagonalization",
    "CapacityExceeded",
    "CayleyError",
    "ColorFunction",
    "ConfigError",
    "ConjugacyClass",
    "ConnectionSet",
    "CyclicGroup",
    "DihedralGroup",
    "DimensionMismatch",
    "FiniteGroup",
    "FourierBlock",
    "HypothesesViolated",
    "HypothesisReport",
    "InvalidAction",
    "IrrepSet",
    "IrrepValidationFailed",
    "IrrepValidationReport",
    "IrrepsUnavailable",
    "LayerNotInvariant",
    "MetacyclicGroup",
    "NotClassFunction",
    "PMatrix",
    "PermutationGroup",
    "SemidirectProductGroup",
    "SpectralLine",
    "Spectrum",
    "SplitExtensionGroup",
    "Transversal",
    "UnitaryIrrep",
    "VerificationReport",
    "adjacency_matrix",
    "beta_blocks",
    "block_diagonalize",
    "build_p_matrix",
    "builtin_irreps",
    "certify",
    "check_split_hypotheses",
    "classify_connection_set",
    "cluster_eigenvalues",
    "color_from_set",
    "compare_spectra",
    "conjugacy_classes",
    "conjugation_orbits_on_k",
    "construct_group",
    "ensure_trusted",
    "export_edge_list",
    "fourier_transform",
    "irreps_abelian",
    "irreps_cyclic",
    "irreps_dihedral",
    "irreps_metacyclic",
    "is_generating_set",
    "layers_from_set",
    "left_transversal_ordering",
    "nonnormal_family",
    "read_edge_list",
    "regular_rep_matrix",
    "spectrum_metacyclic",
    "spectrum_normal",
    "spectrum_split",
    "trace_identities",
    "unit_root",
    "validate_irrep_set",
    "verify_basis",
    "verify_block_reconstruction",
    "verify_eigenpairs",
]
