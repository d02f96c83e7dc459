"""Runtime configuration; environment variables override the defaults, flags override both."""
import logging
import os

import psutil

from magic.search import DEFAULT_NODE_BUDGET

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
MANIFEST_NAME = "run-manifest.json"

logger = logging.getLogger(__name__)


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"ignoring {name}={raw!r}: not an integer")
        return default
    return value if value > 0 else default


def default_workers() -> int:
    """MAGIC_WORKERS, else the machine's logical CPU count."""
    return _int_env("MAGIC_WORKERS", psutil.cpu_count(logical=True) or 1)


def default_node_budget() -> int:
    return _int_env("MAGIC_NODE_BUDGET", DEFAULT_NODE_BUDGET)


def log_level() -> str:
    return os.getenv("MAGIC_LOG_LEVEL", "INFO").upper()
