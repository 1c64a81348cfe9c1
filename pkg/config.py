"""
Toolkit Configuration
Controls numerical tolerances, size caps, output and logging
"""

import os
from pathlib import Path

from dotenv import load_dotenv

BASE_DIR = Path(__file__).resolve().parent

load_dotenv(BASE_DIR / '.env')

TOOL_VERSION = '1.0.0'

# =============================================================================
# LOGGING SETTINGS
# =============================================================================

# Root log level for the command line (DEBUG, INFO, WARNING, ERROR)
LOG_LEVEL = os.environ.get('SYK_LOG_LEVEL', 'INFO').upper()

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

# =============================================================================
# PERMUTATION SETTINGS
# =============================================================================

# Largest replica count searched exhaustively (8! = 40320 compositions)
MAX_ENUMERATION_N = 8

# =============================================================================
# SPECIAL FUNCTION SETTINGS
# =============================================================================

# Pivots below this magnitude make the Pfaffian numerically zero
PFAFFIAN_PIVOT_THRESHOLD = 1e-13

# Antisymmetry tolerance accepted for skew matrices
SKEW_TOLERANCE = 1e-12

# =============================================================================
# FOCK SPACE SETTINGS
# =============================================================================

# Largest number of Majorana modes built as explicit operators (2^10 dimension)
MAX_FOCK_MODES = 20

# Largest number of Majorana modes per replica copy for the cyclic operator
MAX_CYCLIC_COPY_MODES = 12

# =============================================================================
# PHASE SOLVER SETTINGS
# =============================================================================

# Number of theta grid points used to bracket roots of mu(theta)
THETA_GRID_POINTS = 2048

# Relative tolerance on theta roots
ROOT_RTOL = 1e-12

# =============================================================================
# SADDLE DYNAMICS SETTINGS
# =============================================================================

# integrate() requires dt <= RK_STEP_FACTOR / sqrt(U (2J + U))
RK_STEP_FACTOR = 0.01

# Shooting targets the unstable coordinate this many kink times after t0
SHOOTING_PROBE_KINK_TIMES = 16.0

SHOOTING_MAX_ITERATIONS = 8

# =============================================================================
# TRAJECTORY SETTINGS
# =============================================================================

# Largest physical Majorana count 2*L*N simulated as a state vector
MAX_TRAJECTORY_MODES = 16

# Largest measurement strength squared mu*dt
MAX_STRENGTH_SQUARED = 0.1

# Exhaustive outcome enumeration is limited to this many measurement events
MAX_ENUMERATED_EVENTS = 16

# Batches used for the batch-means standard error
ESTIMATOR_BATCHES = 20

# Worker processes for trajectory ensembles (1 runs sequentially)
WORKERS = int(os.environ.get('SYK_WORKERS', '1'))

# =============================================================================
# OUTPUT SETTINGS
# =============================================================================

DEFAULT_OUTPUT_DIR = os.environ.get('SYK_OUTPUT_DIR', str(BASE_DIR / 'out'))

DEFAULT_SEED = int(os.environ.get('SYK_SEED', '20240607'))

# csv, arrow or parquet (csv is always written)
OUTPUT_FORMAT = os.environ.get('SYK_OUTPUT_FORMAT', 'csv').lower()

CSV_FLOAT_FORMAT = '%.17g'

MANIFEST_NAME = 'manifest.json'

# =============================================================================
# PRODUCTION SETTINGS
# =============================================================================

# In production only warnings and errors are logged

PRODUCTION_MODE = os.environ.get('SYK_PRODUCTION_MODE', 'false').lower() == 'true'

if PRODUCTION_MODE:
    LOG_LEVEL = 'WARNING'
