import logging
import sys

from app import config
from app.cli import run

# Configure logging once for every subcommand
logging.basicConfig(
    level=config.log_level(),
    format=config.LOG_FORMAT
)

if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))

# Usage: python main.py <command> --builtin c24 [flags]; python main.py --help lists commands
