from sketchlab.tensors.tensor3 import Tensor3, TSVDFactors
from sketchlab.tensors.tproduct import (
    bcirc,
    conj_transpose,
    fold,
    fourier_singular_values,
    identity_tensor,
    mode3_fft,
    mode3_ifft,
    singular_tube_norms,
    t_product,
    t_product_fft,
    t_product_ref,
    t_svd,
    tensor_frobenius,
    truncate_tsvd,
    tubal_rank,
    unfold,
)
