"""Numerically stable primitives shared by every bound.

Everything here works in natural-log space; conversion to bits happens once,
in the bound modules. Weights are carried as log-weights and exponentiated
at the last moment so products like p^y stay representable for Q, S in the
hundreds.
"""

import math
import logging
import operator
from dataclasses import dataclass
from typing import Any, Callable, Dict, NewType, Optional

import numpy as np
from scipy.special import gammaln

from .config import (
    SERIES_REL_TOL, SERIES_MAX_TERMS, SERIES_STABILITY_WINDOW, POISSON_INDEX_MARGIN,
    EXACT_FACTORIAL_MAX, EXACT_BINOMIAL_MAX,
)
from .errors import ConfigError, DomainError, SeriesConvergenceError

# Natural-log-scale nonnegative weight; -inf encodes weight 0
LogWeight = NewType('LogWeight', float)

LN2 = math.log(2.0)
LOG2E = 1.0 / LN2

_EXACT_LOG_FACTORIALS = tuple(math.log(math.factorial(i)) for i in range(EXACT_FACTORIAL_MAX + 1))


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for infinite sums."""

    rel_tol: float = SERIES_REL_TOL
    max_terms: int = SERIES_MAX_TERMS
    stability_window: int = SERIES_STABILITY_WINDOW

    def __post_init__(self):
        if not (0.0 < self.rel_tol < 1.0):
            raise ConfigError(f"SeriesControl.rel_tol must lie in (0, 1), got {self.rel_tol}")
        if self.max_terms < 1:
            raise ConfigError(f"SeriesControl.max_terms must be >= 1, got {self.max_terms}")
        if self.stability_window < 1:
            raise ConfigError(f"SeriesControl.stability_window must be >= 1, got {self.stability_window}")

    @classmethod
    def from_config(cls, config: Optional[Dict[str, Dict[str, Any]]]) -> 'SeriesControl':
        """Build a SeriesControl from the 'series' section of a loaded config."""
        if not config:
            return cls()
        series = config.get('series', {})
        return cls(
            rel_tol=float(series.get('rel_tol', SERIES_REL_TOL)),
            max_terms=int(series.get('max_terms', SERIES_MAX_TERMS)),
            stability_window=int(series.get('stability_window', SERIES_STABILITY_WINDOW)),
        )


@dataclass(frozen=True)
class SeriesResult:
    """Value of a truncated series and the number of terms it consumed."""

    value: float
    terms: int


class CompensatedSum:
    """Running sum with an error-free-transformation carry (Neumaier)."""

    def __init__(self):
        self._sum = 0.0
        self._carry = 0.0

    def add(self, value: float) -> None:
        total = self._sum + value
        if abs(self._sum) >= abs(value):
            self._carry += (self._sum - total) + value
        else:
            self._carry += (value - total) + self._sum
        self._sum = total

    @property
    def value(self) -> float:
        return self._sum + self._carry


def _as_count(n: Any, name: str) -> int:
    try:
        n = operator.index(n)
    except TypeError:
        raise DomainError(f"{name} must be an integer, got {n!r}")
    if n < 0:
        raise DomainError(f"{name} must be >= 0, got {n}")
    return n


def log_factorial(n: int) -> float:
    """Natural log of n!; exact table up to 20, log-gamma beyond."""
    n = _as_count(n, 'n')
    if n <= EXACT_FACTORIAL_MAX:
        return _EXACT_LOG_FACTORIALS[n]
    return math.lgamma(n + 1.0)


def log_factorial_vector(n: int) -> np.ndarray:
    """Array of ln(i!) for i = 0..n, consistent with log_factorial."""
    n = _as_count(n, 'n')
    values = gammaln(np.arange(n + 1, dtype=np.float64) + 1.0)
    head = min(n, EXACT_FACTORIAL_MAX) + 1
    values[:head] = _EXACT_LOG_FACTORIALS[:head]
    return values


def log_binomial(n: int, k: int) -> float:
    """Natural log of C(n, k)."""
    n = _as_count(n, 'n')
    k = _as_count(k, 'k')
    if k > n:
        raise DomainError(f"log_binomial requires k <= n, got n={n}, k={k}")
    # symmetric by construction
    k = min(k, n - k)
    if n <= EXACT_BINOMIAL_MAX:
        return math.log(math.comb(n, k))
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k)


def _check_probability(p: float) -> float:
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"probability must lie in [0, 1], got {p}")
    return p


def binomial_pmf_log(n: int, i: int, p: float) -> LogWeight:
    """ln of C(n,i) p^i (1-p)^(n-i); -inf when the pmf is exactly 0."""
    n = _as_count(n, 'n')
    i = _as_count(i, 'i')
    if i > n:
        raise DomainError(f"binomial_pmf_log requires i <= n, got n={n}, i={i}")
    p = _check_probability(p)

    if p == 0.0:
        return LogWeight(0.0 if i == 0 else -math.inf)
    if p == 1.0:
        return LogWeight(0.0 if i == n else -math.inf)
    return LogWeight(log_binomial(n, i) + i * math.log(p) + (n - i) * math.log1p(-p))


def binomial_logpmf_vector(n: int, p: float) -> np.ndarray:
    """Vector of binomial_pmf_log(n, i, p) for i = 0..n."""
    n = _as_count(n, 'n')
    p = _check_probability(p)

    out = np.full(n + 1, -np.inf)
    if p == 0.0:
        out[0] = 0.0
        return out
    if p == 1.0:
        out[n] = 0.0
        return out

    lf = log_factorial_vector(n)
    i = np.arange(n + 1, dtype=np.float64)
    out[:] = lf[n] - lf - lf[::-1] + i * math.log(p) + (n - i) * math.log1p(-p)
    return out


def poisson_pmf_log(gamma: float, i: int) -> LogWeight:
    """ln of gamma^i e^-gamma / i!."""
    gamma = check_load(gamma)
    i = _as_count(i, 'i')
    return LogWeight(i * math.log(gamma) - gamma - log_factorial(i))


def check_load(gamma: float) -> float:
    """Validate a load gamma = S/Q; rejects gamma <= 0 and non-finite values."""
    try:
        gamma = float(gamma)
    except (TypeError, ValueError):
        raise DomainError(f"gamma must be a real number, got {gamma!r}")
    if not math.isfinite(gamma) or gamma <= 0.0:
        raise DomainError(f"gamma must be finite and > 0, got {gamma}")
    return gamma


def compensated_sum(values) -> float:
    """Correctly rounded sum of a finite sequence."""
    return math.fsum(values)


def truncated_series_sum(
    term: Callable[[int], float],
    ctrl: Optional[SeriesControl] = None,
    min_index: float = 0.0,
) -> SeriesResult:
    """Sum term(0) + term(1) + ... until the tail is negligible.

    Stops once stability_window consecutive terms satisfy
    |term| <= rel_tol * |partial sum| and the current index exceeds
    min_index. Poisson-weighted callers pass min_index = 2*gamma + 50 so the
    sum never stops before the Poisson mode.

    Args:
        term: Maps an index i >= 0 to the i-th term
        ctrl: Truncation policy (defaults to SeriesControl())
        min_index: Index the stop rule must pass before it may fire

    Returns:
        SeriesResult with the compensated sum and the number of terms consumed

    Raises:
        SeriesConvergenceError: If max_terms is reached first or a term is not finite
    """
    ctrl = ctrl or SeriesControl()
    acc = CompensatedSum()
    quiet = 0

    for i in range(ctrl.max_terms):
        value = term(i)
        if not math.isfinite(value):
            raise SeriesConvergenceError(f"series term {i} is not finite ({value})")
        acc.add(value)

        if abs(value) <= ctrl.rel_tol * abs(acc.value):
            quiet += 1
        else:
            quiet = 0

        if quiet >= ctrl.stability_window and i > min_index:
            logging.debug(f"series converged after {i + 1} terms, value={acc.value!r}")
            return SeriesResult(value=acc.value, terms=i + 1)

    raise SeriesConvergenceError(
        f"series did not converge within max_terms={ctrl.max_terms} "
        f"(partial sum {acc.value!r})"
    )


def poisson_min_index(gamma: float) -> float:
    """Index a Poisson(gamma)-weighted series must pass before it may stop."""
    return 2.0 * gamma + POISSON_INDEX_MARGIN


def poisson_weighted_sum(
    gamma: float,
    f: Callable[[int], float],
    ctrl: Optional[SeriesControl] = None,
) -> SeriesResult:
    """Sum over i >= 0 of Poisson(gamma; i) * f(i)."""
    gamma = check_load(gamma)

    def term(i: int) -> float:
        weight = math.exp(poisson_pmf_log(gamma, i))
        if weight == 0.0:
            return 0.0
        return weight * f(i)

    return truncated_series_sum(term, ctrl, min_index=poisson_min_index(gamma))
