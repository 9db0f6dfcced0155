"""Synchronized block operators that realize prescribed two-level eigenstates."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .numerics import (
    GaussianInt,
    GaussianRational,
    TargetState,
    check_ratio,
    gaussian_gcd,
    is_plus_minus_i,
    phase_classify,
    ratio_from_state,
    state_from_ratio,
)
from .design import (
    CouplingClass,
    DesignParams,
    EffectiveBlock,
    SpectralSpec,
    Verdict,
    VerdictKind,
    eig2,
    eigen_residual,
    magic_state,
    realize,
    realize_asymmetric_common_k,
    realize_complex_symmetric,
    realize_generalized,
    realize_hermitian,
    realize_hermitian_from_amplitudes,
    realize_real_coupling,
    realize_zero_gap,
    reduce,
    taxonomy_verdict,
    taxonomy_verdict_from_square,
)
from .graphs import RegularGraph, circulant_offsets, circulant_regular, verify_regular, weighted_regular_block
from .coupling import (
    Alphabet,
    CouplingBlock,
    algebraic_regularity,
    lattice_member,
    matching_coupling,
    rank_one_coupling,
    zero_coupling,
)
from .assembly import (
    BlockOperator,
    SynchronizedBasis,
    assemble,
    embed_state,
    hermitian_matching_operator,
    operator_from_design,
    restrict_to_sync,
)
from .spectral import (
    Propagator,
    collision_check,
    eig_full,
    evolve,
    leakage_scan,
    perturbation_preserves_sync,
    reducing_check,
    verify_eigenpair,
)
from .discrete import (
    DiscreteDesign,
    approximate_ratio,
    discrete_design_from_ratio,
    discrete_operator,
    exact_verify_discrete,
    projective_distance,
)
