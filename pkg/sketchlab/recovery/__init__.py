from sketchlab.recovery.matrix_sketch import (
    RecoveredFactors,
    RecoveryResult,
    SketchModel,
    SketchPair,
    make_sketches,
    noiseless_output,
    qr_factors,
    recover,
    recover_naive,
    recover_qr,
    recovery_error,
    relative_error,
    y_tilde_has_full_rank,
)
from sketchlab.recovery.tensor_sketch import (
    TensorRecoveryResult,
    TensorSketchModel,
    TensorSketchPair,
    effective_fourier_sketch,
    make_tensor_sketches,
    recover_slicewise,
    recover_tensor,
    recover_tensor_with_flags,
)
