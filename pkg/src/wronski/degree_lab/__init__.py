"""Cells b(k), the F^i walk, thorn targets and real preimage counts."""

from .cells import (
    BKValidationError,
    BKVector,
    FStepError,
    JacobiDelta,
    MultiIndexK,
    SignUncertifiedError,
    ThornTarget,
    adaptive_seed_chain,
    adaptive_walk,
    apply_F,
    base_cell,
    chi,
    coefficient_ranking,
    geometric_schedule,
    jacobi_delta,
    kcond,
    lowest_coefficient,
    new_root_slope,
    perturb_point,
    ranking_from_rows,
    seed_chain,
    thorn_chain,
    thorn_roots,
    validate_bk,
    wronskian_roots_coords,
)
from .elimination import EliminationError, EliminationResult, RepeatedSolutionError, eliminate_big_cell
from .preimages import (
    DegreeInconsistencyError,
    NonGenericTargetError,
    PreimageReport,
    Solution,
    bk_rows,
    degree_signed_sum,
    preimage_solve,
    random_planted_target,
    random_real_rooted_target,
    random_target,
    sharpness_check,
    signed_sum_reports,
    solution_sign,
)
