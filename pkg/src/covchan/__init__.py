"""Covariant and symmetric quantum channels on qutrits (and qudits)."""
from ._backend import BACKEND
from .basis import CoherenceVector, HermitianBasis, coherence_vector, density_from_coherence, gell_mann_basis
from .capacity import (
    CapacityReport,
    Ensemble,
    closed_form_capacity,
    covariant_capacity,
    group_average_check,
    holevo_quantity,
    min_output_entropy,
    von_neumann_entropy,
)
from .channel import (
    Channel,
    Classification,
    NotCPError,
    affine_rep,
    apply,
    apply_affine,
    channels_equal,
    choi,
    classify,
    completely_mixing_channel,
    identity_channel,
    kraus_from_choi,
    map_from_choi,
    mix_kraus,
    transpose_channel,
)
from .covariance import (
    IntertwinerSolution,
    SchurError,
    check_covariance,
    check_symmetry,
    completeness,
    normalize_tp,
    solution_channel,
    solve_intertwiners_finite,
    solve_intertwiners_lie,
    solve_symmetric_finite,
)
from .groups import (
    FiniteGroupRep,
    LieAlgebraRep,
    hadamard,
    hadamard_group,
    irrep_multiplicity,
    pauli_group,
    s3_reps,
    su3_rep,
)
from .zoo import (
    ConstraintError,
    CPWarning,
    FamilySpec,
    declared_symmetries,
    family,
    family_tp_constraint,
    make_family,
    su3_family_cp_interval,
)

__version__ = "0.1.0"
