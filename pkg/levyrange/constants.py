"""Constants used throughout the levyrange package."""

# Exit codes (CLI contract)
EXIT_SUCCESS = 0
EXIT_REJECT = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_SPEC_FILE = 65
EXIT_NUMERIC = 70

# Output formats
OUTPUT_FORMATS = ("human", "structured")
DEFAULT_OUTPUT_FORMAT = "human"

# Bernstein tester defaults: logarithmic grid 1e-3..1e3
DEFAULT_GRID_LO = 1e-3
DEFAULT_GRID_HI = 1e3
DEFAULT_GRID_POINTS = 200
DEFAULT_MAX_ORDER = 6
MIN_GRID_DECADES = 4.0

# Drift extrapolation over u = 2**k
DRIFT_LIMIT_K_MIN = 10
DRIFT_LIMIT_K_MAX = 30
DRIFT_LIMIT_TOL = 1e-6

# Growth condition: x_j = 2**-j
GROWTH_J_MIN = 5
GROWTH_J_MAX = 40
GROWTH_RUN_LENGTH = 10
GROWTH_FACTOR = 1.2

# G-function criterion grid (t axis)
DEFAULT_G_GRID_LO = 1e-4
DEFAULT_G_GRID_HI = 1e4
DEFAULT_G_GRID_POINTS = 400
G_PRIME_TOL = 1e-10
TAIL_MARGIN = 1e-3

# Closing positivity test for stable convolutions
POSITIVITY_GRID_POINTS = 400

# Frobenius series
DEFAULT_SERIES_TERMS = 200
SERIES_TAIL_TOL = 1e-8
RESONANCE_TOL = 1e-6

# Simulation
DEFAULT_N_PATHS = 10_000
DEFAULT_STEP_DT = 1e-3
DEFAULT_SEED = 0
DEFAULT_SMALL_JUMP_CUTOFF = 1e-4
MIN_HORIZON = 30.0
HORIZON_DRIFT_FACTOR = 20.0
SUPPORT_TOLERANCE = 1e-2
KS_SIGNIFICANCE = 1e-3
SE_BAND = 3.0

# Stream ids for the per-path generator rule SeedSequence(seed, spawn_key=(stream, path))
STREAM_DIRECT = 0
STREAM_PREFIX = 1
STREAM_COPY = 2

# Law spec families accepted in YAML files
PROCESS_TYPES = ("drift", "bm_drift", "compound_poisson", "stable_subordinator", "composite", "power_sum")
LAW_TYPES = (
    "stable",
    "stable_convolution",
    "point_mass",
    "inverse_gamma",
    "compound_poisson",
    "background",
)
RANGE_METHODS = ("auto", "general", "finite-k", "growth", "stable")
