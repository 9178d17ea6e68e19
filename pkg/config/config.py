import os
from dotenv import load_dotenv

load_dotenv()  # Automatically loads from `.env` or `.env.local`


def _float_list(raw: str) -> list[float]:
    """Parse a comma separated list of floats, ignoring blanks."""
    return [float(item) for item in raw.split(",") if item.strip()]


LOGGING_LEVEL = os.getenv("LOGGING_LEVEL", "INFO").upper()

## Problem defaults
CFS_DEFAULT_EPSILON = float(os.getenv("CFS_DEFAULT_EPSILON", "1e-2"))
CFS_DEFAULT_N_POINTS = int(os.getenv("CFS_DEFAULT_N_POINTS", "101"))
# Dense sample used to validate eps + mu*b > 0 at construction
CFS_VALIDATION_SAMPLES = int(os.getenv("CFS_VALIDATION_SAMPLES", "2001"))

## Verification sweeps
CFS_H_LIST = _float_list(os.getenv("CFS_H_LIST", "0.05,0.025,0.0125,0.00625,0.003125"))
CFS_EPSILON_SWEEP = _float_list(os.getenv("CFS_EPSILON_SWEEP", "1e-1,1e-2,1e-3,1e-4"))
CFS_EXACTNESS_TOL = float(os.getenv("CFS_EXACTNESS_TOL", "1e-10"))
CFS_QUAD_TOL = float(os.getenv("CFS_QUAD_TOL", "1e-12"))

## Solver settings
CFS_PICARD_TOL = float(os.getenv("CFS_PICARD_TOL", "1e-12"))
CFS_PICARD_MAX_ITER = int(os.getenv("CFS_PICARD_MAX_ITER", "100"))
CFS_PIVOT_FLOOR = float(os.getenv("CFS_PIVOT_FLOOR", "1e-300"))

## Output
CFS_OUTPUT_FORMAT = os.getenv("CFS_OUTPUT_FORMAT", "csv").lower()
