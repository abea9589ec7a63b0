"""Reflection positivity toolkit for finite spin chains."""

__version__ = "0.1.0"

from .chain import (
    PAULI,
    ChainFrame,
    DenseOperator,
    PauliString,
    QuantumState,
    assemble,
    expectation,
    partial_trace,
    reduced_density,
    tensor,
    term,
)
from .config import (
    DEFAULT_TOL,
    ClaimViolation,
    DimensionError,
    PreconditionError,
    RpChainError,
    Tolerances,
)
from .fermions import a_matrix, a_matrix_pd, covariance_formula, covariance_from_ground_state
from .models import (
    TfimModel,
    build_cluster_state,
    cluster_purification_demo,
    gibbs_ground_limit,
    gibbs_rp,
    gibbs_state,
    tfim_decomposition,
    tfim_ground_state,
)
from .purify import canonical_purification, cone_coordinates, schmidt, uniqueness_oracle
from .rotation import (
    angular_momentum,
    build_srp_invariant_observable,
    perron_frobenius_check,
    random_strict_rp_density,
    strictify,
)
from .rp import RpCertificate, check_rp, cone_membership, perturb_state, strict_rp_test_observable
from .symmetry import (
    ReflectionFrame,
    RotationFrame,
    align_to_cone,
    apply_J,
    conjugate_by_J,
    cone_matrix,
    rotate,
)
