import numpy as np
import pytest

from sketchlab.core.sampling import Seed
from sketchlab.errors import DomainError
from sketchlab.io.tensor_file import save_tensor_file
from sketchlab.simulation.data_compare import STRATEGIES, compare_strategies, run_data_tensor_comparison
from sketchlab.simulation.generators import gen_lowtubal_tensor, scale_to_frobenius
from sketchlab.tensors.tensor3 import Tensor3


@pytest.fixture
def tensor_path(tmp_path):
    path = tmp_path / "synthetic.tns"
    save_tensor_file(gen_lowtubal_tensor(16, 14, 4, 2, Seed(21), "real"), path)
    return path


def test_noiseless_tensor_strategy_is_exact(tensor_path):
    report = run_data_tensor_comparison(tensor_path, 6, 0.0, 0.0, Seed(1))
    assert report.input_is_real
    assert report.shape == (16, 14, 4)
    assert [item.strategy for item in report.outcomes] == list(STRATEGIES)
    assert report.outcome("tensor").error_frobenius <= 1e-8


def test_sketch_storage_counts(tensor_path):
    report = run_data_tensor_comparison(tensor_path, 6, 0.01, 0.01, Seed(2))
    counts = {item.strategy: item.sketch_matrix_count for item in report.outcomes}
    assert counts == {"tensor": 1, "slicewise-fresh": 4, "slicewise-shared": 1}
    assert report.outcome("slicewise-fresh").sketch_matrix_bytes == 4 * 6 * (16 + 14) * 16
    assert report.outcome("tensor").sketch_data_bytes == 6 * (16 + 14) * 4 * 16
    assert all(item.error_frobenius > 0 for item in report.outcomes)
    with pytest.raises(KeyError):
        report.outcome("sparse")


def test_report_dictionary(tensor_path):
    payload = run_data_tensor_comparison(tensor_path, 6, 0.01, 0.01, Seed(3)).as_dict()
    assert payload["shape"] == [16, 14, 4]
    assert payload["real_part_taken"] is True
    assert payload["master_seed"] == 3
    assert {item["strategy"] for item in payload["outcomes"]} == set(STRATEGIES)


def test_comparison_is_seeded(gaussian_tensor):
    x0 = scale_to_frobenius(gaussian_tensor(8, 8, 3), 1.0)
    first = compare_strategies(x0, 4, 0.01, 0.01, Seed(4))
    second = compare_strategies(x0, 4, 0.01, 0.01, Seed(4))
    assert first == second


def test_zero_tensor_and_bad_rank(tmp_path):
    path = tmp_path / "zero.tns"
    save_tensor_file(Tensor3.zeros(3, 3, 2), path)
    with pytest.raises(DomainError):
        run_data_tensor_comparison(path, 2, 0.0, 0.0, Seed(0))
    with pytest.raises(DomainError):
        compare_strategies(Tensor3(np.ones((3, 3, 2))), 0, 0.0, 0.0, Seed(0))


def test_real_input_reports_discarded_imaginary_part(tensor_path):
    report = run_data_tensor_comparison(tensor_path, 6, 0.01, 0.01, Seed(5))
    assert all(item.imag_frobenius > 0 for item in report.outcomes)
    assert all(item["imag_frobenius"] > 0 for item in report.as_dict()["outcomes"])


def test_complex_input_has_no_imaginary_report(gaussian_tensor):
    x0 = scale_to_frobenius(gaussian_tensor(8, 8, 3), 1.0)
    assert all(item.imag_frobenius is None for item in compare_strategies(x0, 4, 0.01, 0.01, Seed(6)))
