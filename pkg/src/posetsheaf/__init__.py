"""Combinatorial and symbolic toolkit for finite coverings: Alexandrov
posets, Birkhoff lattices, partition spaces with their classifying maps,
sheaves as poset diagrams, and the exactly glued Toeplitz-cube quantum
projective space."""

from .errors import DomainError, InputError, PosetsheafError, ResourceError
from .poset import (
    FinitePoset,
    FinitePreorder,
    TopoReport,
    UpperSet,
    alexandrov_opens,
    hasse_edges,
    is_monotone,
    opposite,
    to_dot,
    topo_report,
    up_set,
)
from .lattice import (
    BirkhoffPair,
    DLattice,
    FreenessVerdict,
    birkhoff,
    birkhoff_reconstruct,
    free_distributive_lattice,
    generate_sublattice,
    is_free_on,
    lattice_isomorphic,
    meet_irreducibles,
    upper_set_lattice,
)
from .projspace import (
    OpenSetRep,
    ProjPoint,
    TameSurjection,
    act_tame,
    basic_open,
    compose_tame,
    function_from_lattice_morphism,
    homeo_permutation,
    identity_tame,
    phi_embed,
    point,
    proj_poset,
    shift_down,
    transposition,
)
from .covering import (
    CoveringSpec,
    PartitionSpace,
    covering_lattice,
    partition_space,
    support,
    verify_lattice_iso,
    xi,
)
from .sheaf import (
    CoveringMorphism,
    IdealCoveringModel,
    PDiagram,
    PatternView,
    R_of,
    alpha_for_morphism,
    check_sheaf_condition,
    covering_morphism,
    covering_to_sheaf,
    limit_over,
    morphisms_equivalent,
    pattern_view,
    pushforward,
    reindex_kernels,
    sheaf_to_covering,
)
from .toeplitz import (
    CircleElem,
    GaussRat,
    MixedTensor,
    ToeplitzElem,
    compact_unit,
    section,
    symbol,
    t_mul,
    t_star,
)
from .multipullback import (
    FreenessReport,
    PullbackTuple,
    cocycle_check,
    extend_partial,
    is_member,
    phi_quotient,
    separator_sigma_mI,
    verify_freeness,
    witness_TmI,
    witness_xI,
)

__version__ = "0.1.0"
