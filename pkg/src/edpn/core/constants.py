"""Constants for edpn."""

from pathlib import Path

# Project root: core/ -> edpn/ -> src/ -> project root
PROJECT_ROOT = Path(__file__).parent.parent.parent.parent

# Default paths
CONFIG_DIR = PROJECT_ROOT / "config"
LOGS_DIR = PROJECT_ROOT / "logs"

# Simulation defaults
DEFAULT_STEP_BUDGET = 1000
DEFAULT_STATE_BUDGET = 100_000
DEFAULT_MAX_FIRINGS = 4
STEP_BUDGET_ENV = "EDPN_STEP_BUDGET"

EVENT_LIFETIMES = ("step", "persistent")
CONFLICT_POLICIES = ("lexicographic", "error-on-conflict")

# URI scheme selecting embedded fixtures on the command line
FIXTURE_SCHEME = "fixtures:"

# CLI exit codes
EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_BUDGET = 3
EXIT_CONFLICT = 4
EXIT_COMPOSITION = 5
