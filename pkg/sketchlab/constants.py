# Numerical tolerances
REL_TOL = 1e-12  # rank decisions: singular values below REL_TOL * sigma_max count as zero
RANK_REL_TOL = 1e-10  # generator rank checks
TUBE_REL_TOL = 1e-12  # nonzero singular tube threshold, relative to the largest tube

# Experiment defaults (desk-scale version of the published protocol)
DEFAULT_N = 100
DEFAULT_R0 = 10
DEFAULT_TRIALS = 50
DEFAULT_NOISE_GRID = (1e-4, 1e-3, 1e-2, 1e-1)
DEFAULT_N3_SWEEP_NOISE = 0.01
DEFAULT_WORKERS = 1
DEFAULT_APPROX_DECAY = 0.5
DEFAULT_DELTA = 0.05  # delta1 = delta2 = epsilon for bound checks

NOISE_MODES = ("real", "complex")
FIELD_MODES = ("real-target", "complex-target")
DEFAULT_NOISE_MODE = "real"
DEFAULT_FIELD_MODE = "complex-target"

# Seed role tags, hashed into the substream index of every draw
ROLE_S = "S"
ROLE_S_TILDE = "S~"
ROLE_Z = "Z"
ROLE_Z_TILDE = "Z~"
ROLE_X0 = "X0"

# Statistical pass rule for Monte Carlo checks: 3-sigma binomial half-width + slack
SIGMA_MULTIPLIER = 3.0
ABS_SLACK = 0.005

# Results
CSV_HEADER = (
    "kind",
    "n1",
    "n2",
    "n3",
    "r0",
    "r",
    "eps1",
    "eps2",
    "trials",
    "noise_mode",
    "median_rel_err",
    "median_abs_err",
    "p25_rel_err",
    "p75_rel_err",
    "rank_flag_failures",
    "master_seed",
)
FLOAT_FORMAT = ".17g"

# Heatmap rendering
HEATMAP_CMAP = "viridis"
HEATMAP_PANEL_SIZE = 3.2  # inches per panel
HEATMAP_TEXT_COLOR = "#f5f5f5"
HEATMAP_GRID_COLOR = "#2d2d2d"

# TNS1 tensor file
TNS_MAGIC = b"TNS1"
TNS_HEADER_SIZE = 17
TNS_DTYPE_REAL = 0
TNS_DTYPE_COMPLEX = 1
TNS_MAX_DIM = 2**32 - 1

# CLI
EXIT_OK = 0
EXIT_SPEC = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4
LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"
