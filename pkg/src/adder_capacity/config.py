"""Configuration, constants, and enums for adder-capacity."""

import os
import copy
import logging
from enum import Enum
from typing import Any, Dict, Optional

import yaml

# Import version from single source of truth
from .__about__ import __version__
from .cache import get_cache_manager
from .errors import ConfigError

VERSION = __version__

# Log file location
LOG_PATH = os.path.join(os.path.expanduser("~"), '.adder-capacity/adder_capacity.log')

# Logging constants
LOG_FILE_MAX_BYTES = 548576  # 0.5 MB - maximum size of log file before rotation
LOG_FILE_BACKUP_COUNT = 5  # Number of backup log files to keep

# Infinite series evaluation
SERIES_REL_TOL = 1e-13  # stop once terms are below rel_tol * |partial sum|
SERIES_MAX_TERMS = 200000  # hard ceiling before SeriesConvergenceError
SERIES_STABILITY_WINDOW = 8  # consecutive negligible terms required to stop
POISSON_INDEX_MARGIN = 50  # Poisson series may only stop past index 2*gamma + margin

# Exact small-case tables backing the log-gamma path
EXACT_FACTORIAL_MAX = 20
EXACT_BINOMIAL_MAX = 30

# Tolerances
PROBABILITY_SUM_TOL = 1e-12  # |sum(p) - 1| allowed for an input distribution
BITS_ROUNDING_TOL = 1e-12  # negative bound values above -tol are rounding noise

# Exact oracle
ENUMERATION_CAP = 1000000  # max compositions enumerated before refusing

# Monte Carlo simulator
ENTROPY_SUPPORT_CAP = 100000  # max C(S+Q-1, S) for histogram entropy estimation
JACKKNIFE_BLOCKS = 50
SIMULATION_BATCH_SIZE = 262144  # samples drawn per generator call

# Golden-section search for gamma*
GAMMA_STAR_BRACKET = (0.1, 10.0)
GAMMA_STAR_TOL = 1e-8

# Binomial log-ratio sequence: exact sum up to this N, +-sigma window beyond
LEMMA2_EXACT_MAX_N = 100000
LEMMA2_WINDOW_SIGMAS = 12.0

# Default figure grid
GRID_GAMMA_MIN = 0.1
GRID_GAMMA_MAX = 10.0
GRID_GAMMA_STEP = 0.05

# Output formatting
CSV_SIGNIFICANT_DIGITS = 6
JSON_SIGNIFICANT_DIGITS = 12

# Exit code for unexpected (non-library) errors; 0-5 are reserved for command outcomes
INTERNAL_ERROR_EXIT_CODE = 70

# Verification suites
VERIFY_SEED = 20140601
LEMMA1_CASES = 200
CONSISTENCY_Q = 400


class OutputFormat(str, Enum):
    table = "table"
    json = "json"
    csv = "csv"


class Side(str, Enum):
    upper = "upper"
    lower = "lower"


class Mode(str, Enum):
    coordinated = "coordinated"
    uncoordinated = "uncoordinated"


class Regime(str, Enum):
    finite = "finite"
    asymptotic = "asymptotic"


class Estimator(str, Enum):
    plug_in = "plug-in"
    miller_madow = "miller-madow"
    pointwise_mi = "pointwise-mi"


class VerifySuite(str, Enum):
    lemma1 = "lemma1"
    lemma2 = "lemma2"
    consistency = "consistency"


# Keys accepted in a --config YAML file, with their defaults and types
DEFAULT_CONFIG: Dict[str, Dict[str, Any]] = {
    'series': {
        'rel_tol': SERIES_REL_TOL,
        'max_terms': SERIES_MAX_TERMS,
        'stability_window': SERIES_STABILITY_WINDOW,
    },
    'oracle': {
        'enumeration_cap': ENUMERATION_CAP,
    },
    'simulation': {
        'batch_size': SIMULATION_BATCH_SIZE,
        'jackknife_blocks': JACKKNIFE_BLOCKS,
        'entropy_support_cap': ENTROPY_SUPPORT_CAP,
    },
    'gamma_star': {
        'tol': GAMMA_STAR_TOL,
    },
}

_cache_manager = get_cache_manager()


def _merge_section(section: str, values: Any, path: str) -> Dict[str, Any]:
    defaults = DEFAULT_CONFIG[section]
    if values is None:
        return dict(defaults)
    if not isinstance(values, dict):
        raise ConfigError(f"config file:{path} section '{section}' must be a mapping")

    merged = dict(defaults)
    for key, value in values.items():
        if key not in defaults:
            raise ConfigError(f"config file:{path} unknown key '{section}.{key}'. "
                              f"Known keys: {', '.join(sorted(defaults))}")
        expected = type(defaults[key])
        if isinstance(value, str):
            # PyYAML reads exponent literals without a dot ("1e-13") as strings
            try:
                value = float(value)
            except ValueError:
                pass
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"config file:{path} key '{section}.{key}' must be numeric, got {value!r}")
        if expected is int and not float(value).is_integer():
            raise ConfigError(f"config file:{path} key '{section}.{key}' must be an integer, got {value!r}")
        merged[key] = expected(value)
    return merged


def load_config(path: Optional[str] = None, force_reload: bool = False) -> Dict[str, Dict[str, Any]]:
    """Load numeric settings, overlaying an optional YAML file on the defaults.

    Parsed files are cached by path; the cache is invalidated when the file
    modification time changes.

    Args:
        path: YAML file to read, or None for the built-in defaults
        force_reload: If True, bypass the cache and re-read the file

    Returns:
        Configuration dictionary with every section of DEFAULT_CONFIG

    Raises:
        ConfigError: If the file is missing, unreadable or has unknown/invalid keys
    """
    if path is None:
        return copy.deepcopy(DEFAULT_CONFIG)

    if not os.path.isfile(path):
        raise ConfigError(f"config file:{path} not found")

    current_mtime = os.path.getmtime(path)
    if not force_reload:
        cached = _cache_manager.get('config', path)
        if cached is not None and cached[0] == current_mtime:
            return copy.deepcopy(cached[1])

    try:
        with open(path, 'r') as config_file:
            raw = yaml.safe_load(config_file) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"Error parsing config file:{path}. Error: {e}")
    except OSError as e:
        raise ConfigError(f"Error loading config file:{path}. Error: {e}")

    if not isinstance(raw, dict):
        raise ConfigError(f"config file:{path} must contain a mapping at top level")

    unknown = set(raw) - set(DEFAULT_CONFIG)
    if unknown:
        raise ConfigError(f"config file:{path} unknown section(s): {', '.join(sorted(unknown))}")

    config = {section: _merge_section(section, raw.get(section), path) for section in DEFAULT_CONFIG}
    logging.debug(f"Loaded configuration from {path}")

    _cache_manager.set('config', path, (current_mtime, config))
    return copy.deepcopy(config)


def clear_config_cache():
    """Clear the configuration cache."""
    _cache_manager.clear('config')
