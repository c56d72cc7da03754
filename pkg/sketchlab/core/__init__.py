from sketchlab.core.linalg import (
    SvdResult,
    as_dense,
    frobenius,
    full_svd,
    numerical_rank,
    pseudo_inverse,
    qr,
    sigma_k,
    sigma_min_nonzero,
    singular_values,
    spectral_norm,
    svd,
)
from sketchlab.core.sampling import (
    Seed,
    derive_stream,
    sample_complex_gaussian,
    sample_gaussian,
    sample_haar_unitary,
    sample_real_gaussian,
)
