from sketchlab.analysis.bounds import (
    BOUND_VARIANTS,
    BoundInput,
    BoundOutput,
    best_lowrank_r1,
    lowrank_approx_bound,
    robust_bound,
    robust_bound_r_equals_n1,
    robust_bound_r_equals_r0,
    tensor_approx_bound,
    tensor_robust_bound,
)
from sketchlab.analysis.lemmas import (
    LemmaCheck,
    LemmaReport,
    oblique_projection,
    orthonormal_complement,
    validate_gordon,
    validate_square_gaussian_law,
    validate_truncated_haar,
)
