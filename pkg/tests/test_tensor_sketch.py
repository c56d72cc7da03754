import numpy as np
import pytest

from sketchlab.core.sampling import Seed, sample_complex_gaussian
from sketchlab.errors import ShapeError
from sketchlab.recovery.matrix_sketch import recover
from sketchlab.recovery.tensor_sketch import (
    TensorSketchModel,
    effective_fourier_sketch,
    make_tensor_sketches,
    recover_slicewise,
    recover_tensor,
    recover_tensor_with_flags,
)
from sketchlab.simulation.generators import gen_lowtubal_tensor, scale_to_frobenius
from sketchlab.tensors.tensor3 import Tensor3
from sketchlab.tensors.tproduct import mode3_fft, tensor_frobenius


def draw_model(n, r0, n3, r, seed, eps=0.0):
    x0 = scale_to_frobenius(gen_lowtubal_tensor(n, n, n3, r0, seed.child("x0")), 1.0)
    s = sample_complex_gaussian(r, n, seed.child("S"))
    s_tilde = sample_complex_gaussian(r, n, seed.child("S~"))
    z = z_tilde = None
    if eps:
        z = scale_to_frobenius(Tensor3(sample_complex_gaussian(r, n * n3, seed.child("Z")).reshape(r, n, n3)), eps)
        z_tilde = scale_to_frobenius(
            Tensor3(sample_complex_gaussian(r, n * n3, seed.child("Z~")).reshape(r, n, n3)), eps
        )
    return TensorSketchModel(x0, s, s_tilde, z, z_tilde)


def test_noiseless_tensor_recovery_is_exact(residual):
    model = draw_model(20, 3, 4, 6, Seed(3))
    pair = make_tensor_sketches(model)
    result = recover_tensor_with_flags(pair.y, pair.y_tilde, model.s)
    assert residual(result.x, model.x0) <= 1e-8
    assert result.methods == ("qr",) * 4
    assert not result.y_tilde_full_rank


def test_fourier_slices_carry_the_matrix_sketch():
    model = draw_model(12, 2, 5, 4, Seed(5))
    y = make_tensor_sketches(model).y
    y_hat = mode3_fft(y).data
    x_hat = mode3_fft(model.x0).data
    s_eff = effective_fourier_sketch(model.s, 5)
    for k in range(5):
        np.testing.assert_allclose(s_eff[:, :, k], model.s, atol=1e-12)
        np.testing.assert_allclose(y_hat[:, :, k], model.s @ x_hat[:, :, k], atol=1e-10)


def test_single_slice_reduces_to_matrix_recovery(residual):
    for trial in range(30):
        r = 3 + trial % 8
        model = draw_model(15, 2, 1, r, Seed(1, trial), eps=0.01 if trial % 2 else 0.0)
        pair = make_tensor_sketches(model)
        matrix = recover(pair.y.frontal(0), pair.y_tilde.frontal(0), model.s).x
        assert residual(recover_tensor(pair.y, pair.y_tilde, model.s).frontal(0), matrix) <= 1e-10


def test_threaded_slices_match_serial():
    model = draw_model(15, 2, 6, 5, Seed(8), eps=0.05)
    pair = make_tensor_sketches(model)
    serial = recover_tensor_with_flags(pair.y, pair.y_tilde, model.s)
    threaded = recover_tensor_with_flags(pair.y, pair.y_tilde, model.s, workers=4)
    np.testing.assert_allclose(serial.x.data, threaded.x.data, rtol=0, atol=1e-12)
    assert serial.slice_full_rank == threaded.slice_full_rank


def test_noise_error_is_small():
    model = draw_model(20, 3, 4, 8, Seed(11), eps=1e-3)
    pair = make_tensor_sketches(model)
    err = np.linalg.norm((recover_tensor(pair.y, pair.y_tilde, model.s) - model.x0).data.ravel())
    assert err < 0.1


def test_slicewise_recovery_with_shared_and_fresh_sketches(residual):
    seed = Seed(12)
    x0 = Tensor3.from_slices(
        [gen_lowtubal_tensor(10, 10, 1, 2, seed.child(k)).frontal(0) for k in range(3)]
    )
    shared = sample_complex_gaussian(4, 10, seed.child("S"))
    shared_tilde = sample_complex_gaussian(4, 10, seed.child("S~"))
    y = Tensor3.from_slices([shared @ x0.frontal(k) for k in range(3)])
    y_tilde = Tensor3.from_slices([shared_tilde @ x0.frontal(k).conj().T for k in range(3)])
    assert residual(recover_slicewise(y, y_tilde, shared), x0) <= 1e-8
    assert residual(recover_slicewise(y, y_tilde, [shared] * 3), x0) <= 1e-8
    with pytest.raises(ShapeError):
        recover_slicewise(y, y_tilde, [shared] * 2)


def test_shape_checks():
    model = draw_model(8, 1, 2, 3, Seed(2))
    pair = make_tensor_sketches(model)
    with pytest.raises(ShapeError):
        recover_tensor(pair.y, pair.y_tilde, sample_complex_gaussian(4, 8, Seed(0)))
    with pytest.raises(ShapeError):
        TensorSketchModel(model.x0, model.s, model.s_tilde, z=Tensor3.zeros(3, 8, 3))


def test_error_splits_over_fourier_slices():
    model = draw_model(12, 2, 5, 5, Seed(14), eps=0.05)
    pair = make_tensor_sketches(model)
    diff = recover_tensor(pair.y, pair.y_tilde, model.s) - model.x0
    diff_hat = mode3_fft(diff).data
    per_slice = sum(np.linalg.norm(diff_hat[:, :, k]) ** 2 for k in range(5))
    assert per_slice == pytest.approx(tensor_frobenius(diff) ** 2, rel=1e-9)


def test_zero_row_sketch_gives_zero_tensor():
    model = draw_model(10, 2, 3, 4, Seed(15), eps=0.01)
    y_tilde = make_tensor_sketches(model).y_tilde
    x = recover_tensor(Tensor3.zeros(4, 10, 3), y_tilde, model.s)
    np.testing.assert_array_equal(x.data, np.zeros((10, 10, 3)))
