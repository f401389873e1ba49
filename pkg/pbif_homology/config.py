import os
from dotenv import load_dotenv

load_dotenv()

# -----------------------------------------------------------------------------
# Global Configuration
# -----------------------------------------------------------------------------

VERSION = "0.3.0"

# Analytical grids
WINDOW = (-3.0, 3.0, -3.0, 3.0)  # x_min, x_max, y_min, y_max
GRID_SIZE = 201
NUM_LEVELS = 50

# Bifurcation sweep: start, stop, count
H_RANGE = (-1.0, 1.0, 21)
TRANSITION_CELLS = 3

# Density families
Q1 = 1.0
D11 = 1.0
KAPPA = 1.0
RIM = 1.0
CRATER_RATE = 2.0  # time-scale factor of the crater SDE; the stationary density does not depend on it

# Simulation
DT = 0.01
BURN_IN = 10_000
STRIDE = 10
NUM_SAMPLES = 5_000
CRATER_SAMPLES = 40_000  # crater family: the rim must come out level in the KDE

# Topological consistency estimator
SUBSAMPLE_SIZE = 500
EPSILON = 1e-5
R_BOUNDS = (0.1, 0.8)

# Environment variables
SEED = int(os.getenv("PBIF_SEED", 0))
WORKERS = int(os.getenv("PBIF_WORKERS", 1))
LOG_LEVEL = os.getenv("PBIF_LOG_LEVEL", "INFO")
