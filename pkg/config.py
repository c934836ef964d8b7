"""
Configuration settings for the hyperpotential toolkit.
"""
import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Numeric Comparison
DEFAULT_TOL = float(os.getenv("HYPERPOTENTIAL_TOL", "1e-10"))
POLE_TOL = 1e-12  # distance to a nonpositive integer counted as a Gamma pole
DEGREE_DECIMALS = 12  # numeric degrees are keyed after rounding to this many decimals

# Quadrature Configuration
QUAD_EPSREL = float(os.getenv("HYPERPOTENTIAL_QUAD_EPSREL", "1e-10"))
QUAD_EPSABS = 1e-14
QUAD_LIMIT = 200
PROFILE_EPSREL = 1e-12
DOUBLE_INTEGRAL_CUTOFF = 40.0  # outer radius beyond which the heat-kernel expansion is used

# Finite Differences
FD_STEP = float(os.getenv("HYPERPOTENTIAL_FD_STEP", "0.05"))
FD_RICHARDSON_LEVELS = 2
POTENTIAL_STEP = 1e-3

# Clifford Algebra
MAX_CLIFFORD_DIM = 13  # m + 1, so m <= 12

# Verification Sweeps
VERIFY_DIMS = [2, 3, 4, 5]
DIRAC_RANGE = (-4, 4)
LAPLACE_RANGE = (-2, 2)
BOUNDARY_RANGE = 6
LOG_ORDERS = 6
CROSS_KERNEL_RANGE = (-2, 2)

# Output
OUTPUT_FORMATS = ["json", "text"]
MODES = ["exact", "numeric"]

# Logging Configuration
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
