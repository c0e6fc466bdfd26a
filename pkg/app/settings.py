import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

ROOT_DIR = Path(__file__).resolve().parent.parent


def read_int_list(s: str) -> list[int]:
    return [int(part) for part in s.split(",") if part.strip()]


LOGGING_CONFIG_PATH = Path(
    os.getenv("LOGGING_CONFIG_PATH", str(ROOT_DIR / "logging.yaml")),
)

# default kernel parallelism for the cli; 1 means single-threaded
DECOMP_THREADS = int(os.getenv("DECOMP_THREADS", "1"))

DEFAULT_LAMBDA = float(os.getenv("DEFAULT_LAMBDA", "10"))
DEFAULT_MU = float(os.getenv("DEFAULT_MU", "100"))
DEFAULT_DELTA = float(os.getenv("DEFAULT_DELTA", "20"))
DEFAULT_EPS = float(os.getenv("DEFAULT_EPS", "0.5"))
DEFAULT_N_STEP = int(os.getenv("DEFAULT_N_STEP", "50"))
DEFAULT_LEVELS = read_int_list(os.getenv("DEFAULT_LEVELS", "3,3,4"))

CHAMBOLLE_TAU = float(os.getenv("CHAMBOLLE_TAU", "0.248"))
CHAMBOLLE_MAX_ITER = int(os.getenv("CHAMBOLLE_MAX_ITER", "200"))
CHAMBOLLE_TOL = float(os.getenv("CHAMBOLLE_TOL", "1e-4"))

DEFAULT_LP_FILTER = os.getenv("DEFAULT_LP_FILTER", "9-7")
DEFAULT_DFB_FILTER = os.getenv("DEFAULT_DFB_FILTER", "pkva12")
DEFAULT_WAVELET = os.getenv("DEFAULT_WAVELET", "db4")
