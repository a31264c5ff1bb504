"""Exact-arithmetic toolkit for Heegner divisors on modular curves, the
diagonal pullback decomposition of special divisors, and machine-checkable
nontriviality certificates for the Ceresa and modified-diagonal cycles."""

from .certify import Certificate, certify, explain, large_level_bound
from .heegner import (
    BQForm,
    CongruenceError,
    HeegnerDivisor,
    HeegnerIndex,
    class_number,
    eichler_relation_sides,
    enumerate_heegner_divisor,
    heegner_r_values,
    hurwitz_class_number,
    special_divisor_index,
)
from .lattices import (
    DiscElement,
    GramLattice,
    full_matrix_lattice,
    q_mod1,
    smith_normal_form,
    trace_zero_lattice,
)
from .modcurves import (
    CurveProfile,
    LevelBoundError,
    cover_degree_over_x0,
    cover_profile,
    fricke_quotient_genus,
    minus_newspace_dim,
    psl2_order,
    sl2_order,
    x0_profile,
)
from .newforms import (
    NewformClient,
    NewformRecord,
    PayloadError,
    TransientFetchError,
    WitnessIndeterminate,
    default_client,
    witness_minus_rank1,
)
from .pullback import (
    AmbientGenerator,
    DivisorClass,
    PullbackDecomposition,
    apply_decomposition,
    chow_heegner_divisor,
    decompose_heegner,
    pullback_divisor,
    reduce_omega_to_cusp,
    verify_decomposition,
)
from .repcount import scalar_rep_count

__version__ = "0.1.0"

__all__ = [
    "AmbientGenerator",
    "BQForm",
    "Certificate",
    "CongruenceError",
    "CurveProfile",
    "DiscElement",
    "DivisorClass",
    "GramLattice",
    "HeegnerDivisor",
    "HeegnerIndex",
    "LevelBoundError",
    "NewformClient",
    "NewformRecord",
    "PayloadError",
    "PullbackDecomposition",
    "TransientFetchError",
    "WitnessIndeterminate",
    "apply_decomposition",
    "certify",
    "chow_heegner_divisor",
    "class_number",
    "cover_degree_over_x0",
    "cover_profile",
    "decompose_heegner",
    "default_client",
    "eichler_relation_sides",
    "enumerate_heegner_divisor",
    "explain",
    "fricke_quotient_genus",
    "full_matrix_lattice",
    "heegner_r_values",
    "hurwitz_class_number",
    "large_level_bound",
    "minus_newspace_dim",
    "psl2_order",
    "pullback_divisor",
    "q_mod1",
    "reduce_omega_to_cusp",
    "scalar_rep_count",
    "sl2_order",
    "smith_normal_form",
    "special_divisor_index",
    "trace_zero_lattice",
    "verify_decomposition",
    "witness_minus_rank1",
    "x0_profile",
]
