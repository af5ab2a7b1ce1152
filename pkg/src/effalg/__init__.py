"""Finite lattice effect algebra toolkit.

Validate partial Cayley tables against the effect algebra axioms, derive the
order and lattice structure, compute sharp/meager elements, blocks and
centers, decompose elements into sharp and meager parts, and rebuild each
algebra from its (sharp, meager, h) triple with an isomorphism check.
"""

from .core import (
    UNDEFINED,
    AxiomViolation,
    EffectAlgebra,
    InternalInconsistencyError,
    IsotropicProfile,
    StructureError,
    SumTable,
    TheoremViolationError,
    ValidationError,
    atoms,
    check_axioms,
    complement_of,
    derive_order,
    isotropic_index,
    ortho_sum,
    validate,
)
from .decomp import (
    AtomSupport,
    Decomposition,
    SharpEnvelope,
    basic_decomposition,
    hat_via_atoms,
    is_sharply_dominating,
    meager_atom_support,
    sharp_envelope,
)
from .eat import EATParseError, ParseIssue, parse_eat, serialize_eat
from .gen import (
    GenSpec,
    GenSpecError,
    are_isomorphic,
    boolean_algebra,
    chain,
    enumerate_small,
    generate,
    hsum,
    mo,
    parse_genspec,
    product,
    standard_suite,
)
from .lattice import (
    Bounds,
    NotLatticeError,
    OrderStructure,
    bounds,
    compatibility_matrix,
    is_compatible,
    is_lattice,
    order_structure,
)
from .laws import LAW_IDS, LAWS, LawConfig, LawReport, check_all, check_law
from .substructures import (
    BifullResult,
    BlockSet,
    CenterSet,
    MeagerStructure,
    SharpSet,
    blocks,
    center,
    compatibility_center,
    is_bifull,
    is_full_sub_lattice,
    is_sub_effect_algebra,
    is_sub_lattice_effect_algebra,
    is_sup_bifull,
    meager_elements,
    restrict,
    sharp_elements,
)
from .triple import (
    IsoResult,
    MeagerPart,
    TeaAlgebra,
    Triple,
    build_tea,
    build_tea_restricted,
    existence_lemma_holds,
    extract_triple,
    map_R,
    map_S,
    map_hat,
    map_pi,
    phi,
    verify_iso,
    verify_iso_restricted,
)

__version__ = "0.1.0"
