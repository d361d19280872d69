"""Runtime configuration for rolltree.

Settings are read from the environment (optionally populated from a ``.env``
file) once at import time.
"""

import logging
import os
from typing import Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

# Load environment variables
load_dotenv()

THREADS_ENV_VAR = "ROLLTREE_THREADS"

DEFAULT_THREADS = int(os.getenv(THREADS_ENV_VAR, "1"))
LOG_LEVEL = os.getenv("ROLLTREE_LOG_LEVEL", "INFO").upper()
DEFAULT_SEED = int(os.getenv("ROLLTREE_SEED", "0"))

# Largest feature count the 7-tuple enumeration oracle accepts (p**7 trees)
ORACLE_MAX_P = int(os.getenv("ROLLTREE_ORACLE_MAX_P", "5"))

MODEL_FORMAT_VERSION = 1

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def resolve_threads(flag_value: Optional[int] = None) -> int:
    """Resolve the worker thread count.

    Args:
        flag_value: Value given on the command line, if any.

    Returns:
        int: The flag value when set, else ``ROLLTREE_THREADS``, else 1.
    """
    if flag_value is not None:
        threads = flag_value
    else:
        raw = os.getenv(THREADS_ENV_VAR)
        threads = int(raw) if raw else DEFAULT_THREADS

    if threads < 1:
        logger.warning(f"Ignoring non-positive thread count {threads}; using 1")
        return 1
    return threads
