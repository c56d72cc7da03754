from sketchlab.simulation.data_compare import (
    STRATEGIES,
    DataComparisonReport,
    StrategyOutcome,
    compare_strategies,
    run_data_tensor_comparison,
)
from sketchlab.simulation.experiments import (
    BoundValidation,
    Cell,
    ExperimentResult,
    run_approx_experiment,
    run_bound_validation,
    run_cells,
    run_matrix_experiment,
    run_tensor_experiment,
)
from sketchlab.simulation.generators import (
    gen_approx_lowrank_matrix,
    gen_lowrank_matrix,
    gen_lowtubal_tensor,
    scale_to_frobenius,
)
from sketchlab.simulation.run_state import RunState
from sketchlab.simulation.spec import EXPERIMENT_KINDS, ExperimentSpec, ResultRow, TrialRecord
