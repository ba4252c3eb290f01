"""Capacity bounds for uncoordinated transmission.

Each user treats the other S-1 users as noise and all users share one input
law p. The single-user mutual information reduces, through the likelihood
ratio p(y|x_j)/p(y) = y_j/(S p_j), to a sum of binomial expectations:

    I(X;Y) = sum_j p_j sum_{i<S} Binom(S-1, i; p_j) log2((i+1)/(S p_j))
"""

import math
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammaln

from .cache import get_cache_manager
from .channel import BoundValue, ChannelConfig, InputDistribution
from .config import (
    Side, Mode, Regime, GAMMA_STAR_BRACKET, GAMMA_STAR_TOL,
    LEMMA2_EXACT_MAX_N, LEMMA2_WINDOW_SIGMAS,
)
from .coordinated import coord_upper_asymptotic, coord_upper_finite
from .errors import DistributionError, DomainError, OptimizerError
from .numerics import (
    LOG2E, SeriesControl, binomial_logpmf_vector, check_load, compensated_sum,
    poisson_weighted_sum,
)

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2

_GOLDEN_MAX_ITERATIONS = 200

_cache_manager = get_cache_manager()


@dataclass(frozen=True)
class GammaStarResult:
    """Maximizer of the uniform-input relative rate and its value."""

    gamma_star: float
    c_star: float
    iterations: int
    bracket_width: float


def _expected_log2_ratio(n: int, p: float, scale: float) -> float:
    """sum_{i=0}^{n} Binom(n, i; p) log2((i+1)/scale)."""
    weights = np.exp(binomial_logpmf_vector(n, p))
    log_ratio = np.log2((np.arange(n + 1, dtype=np.float64) + 1.0) / scale)
    return compensated_sum(weights * log_ratio)


def single_user_mi(cfg: ChannelConfig, dist: InputDistribution) -> float:
    """I(X;Y) in bits for one user against S-1 interferers sharing dist.

    Frequencies with p_j = 0 contribute exactly 0.
    """
    dist.check_length(cfg)
    S = cfg.S

    # the formula only depends on the multiset of p_j values
    values, counts = np.unique(dist.as_array(), return_counts=True)
    contributions = []
    for p_j, count in zip(values, counts):
        if p_j == 0.0:
            continue
        p_j = float(p_j)
        contributions.append(int(count) * p_j * _expected_log2_ratio(S - 1, p_j, S * p_j))
    return max(compensated_sum(contributions), 0.0)


def uc_sum_rate(cfg: ChannelConfig, dist: InputDistribution) -> BoundValue:
    """S * I(X;Y) at the given common distribution."""
    bits = cfg.S * single_user_mi(cfg, dist)
    return BoundValue(bits, Side.lower, Mode.uncoordinated, Regime.finite)


def uc_upper_finite(cfg: ChannelConfig) -> BoundValue:
    """min(log2 C(S+Q-1, S), (Q-1) log2 e)."""
    bits = min(coord_upper_finite(cfg).bits, (cfg.Q - 1) * LOG2E)
    return BoundValue(bits, Side.upper, Mode.uncoordinated, Regime.finite)


def uc_upper_asymptotic(gamma: float) -> BoundValue:
    """min((gamma+1) log2(gamma+1) - gamma log2 gamma, log2 e), per subchannel."""
    bits = min(coord_upper_asymptotic(gamma).bits, LOG2E)
    return BoundValue(bits, Side.upper, Mode.uncoordinated, Regime.asymptotic)


def uc_upper_crossover() -> float:
    """Load where the two branches of uc_upper_asymptotic meet."""
    def gap(gamma: float) -> float:
        return (gamma + 1.0) * math.log2(gamma + 1.0) - gamma * math.log2(gamma) - LOG2E

    return brentq(gap, 0.1, 10.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def uc_unif_asymptotic(gamma: float, ctrl: Optional[SeriesControl] = None) -> BoundValue:
    """gamma * sum_i Poisson(gamma; i) log2((i+1)/gamma), per subchannel."""
    gamma = check_load(gamma)
    series = poisson_weighted_sum(gamma, lambda i: math.log2((i + 1.0) / gamma), ctrl)
    return BoundValue(gamma * series.value, Side.lower, Mode.uncoordinated, Regime.asymptotic)


def uc_unif_finite(cfg: ChannelConfig) -> BoundValue:
    """Uniform-input sum rate S * sum_{i<S} Binom(S-1, i; 1/Q) log2((i+1)/gamma)."""
    bits = cfg.S * _expected_log2_ratio(cfg.S - 1, 1.0 / cfg.Q, cfg.gamma)
    return BoundValue(bits, Side.lower, Mode.uncoordinated, Regime.finite)


def find_gamma_star(
    tol: float = GAMMA_STAR_TOL,
    ctrl: Optional[SeriesControl] = None,
    bracket: Tuple[float, float] = GAMMA_STAR_BRACKET,
) -> GammaStarResult:
    """Golden-section search for the maximizer of uc_unif_asymptotic.

    Args:
        tol: Final bracket width
        ctrl: Series truncation policy for each evaluation
        bracket: Initial search interval

    Returns:
        GammaStarResult with the bracket midpoint as gamma_star

    Raises:
        DomainError: If tol is not positive
        OptimizerError: If an endpoint dominates both interior probes, so the
            bracket does not hold an interior maximum
    """
    if not tol > 0:
        raise DomainError(f"tol must be > 0, got {tol}")

    a, b = min(bracket), max(bracket)

    def f(gamma: float) -> float:
        return uc_unif_asymptotic(gamma, ctrl).bits

    h = b - a
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    fa, fb, fc, fd = f(a), f(b), f(c), f(d)
    if max(fa, fb) > max(fc, fd):
        raise OptimizerError(
            f"bracket [{a}, {b}] has no interior maximum: endpoint values "
            f"({fa:.6g}, {fb:.6g}) exceed interior values ({fc:.6g}, {fd:.6g})"
        )

    iterations = 0
    while b - a > tol:
        if iterations >= _GOLDEN_MAX_ITERATIONS:
            raise OptimizerError(f"golden-section search did not reach tol={tol} "
                                 f"in {iterations} iterations")
        iterations += 1
        if fc > fd:
            b, d, fd = d, c, fc
            c = a + INV_PHI_SQUARE * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)

    gamma_star = 0.5 * (a + b)
    c_star = f(gamma_star)
    logging.debug(f"gamma* = {gamma_star!r}, c* = {c_star!r} after {iterations} iterations")
    return GammaStarResult(gamma_star=gamma_star, c_star=c_star,
                           iterations=iterations, bracket_width=b - a)


def cached_gamma_star(ctrl: Optional[SeriesControl] = None, tol: float = GAMMA_STAR_TOL) -> GammaStarResult:
    """gamma* computed once per (tolerance, series policy)."""
    return _cache_manager.get_or_set(
        'gamma_star', (tol, ctrl),
        lambda: find_gamma_star(tol, ctrl),
    )


def distorted_distribution(cfg: ChannelConfig, gamma_star: float) -> InputDistribution:
    """p_1 = ... = p_{Q-1} = gamma*/S and p_Q = 1 - (Q-1) gamma*/S.

    Raises:
        DistributionError: If S < gamma* (Q-1), which would make p_Q negative
    """
    gamma_star = check_load(gamma_star)
    Q, S = cfg.Q, cfg.S
    if Q == 1:
        return InputDistribution(p=(1.0,))
    if S < gamma_star * (Q - 1):
        raise DistributionError(
            f"distorted distribution requires S >= gamma*(Q-1): "
            f"S={S} < {gamma_star:.6g}*{Q - 1}"
        )
    light = gamma_star / S
    heavy = max(1.0 - (Q - 1) * light, 0.0)
    return InputDistribution(p=(light,) * (Q - 1) + (heavy,))


def uc_distorted_finite(cfg: ChannelConfig, gamma_star: float) -> BoundValue:
    """Sum rate of the distorted distribution, light and heavy parts summed separately."""
    dist = distorted_distribution(cfg, gamma_star)
    Q, S = cfg.Q, cfg.S
    if Q == 1:
        return BoundValue(0.0, Side.lower, Mode.uncoordinated, Regime.finite)

    light = gamma_star * (Q - 1) * _expected_log2_ratio(S - 1, gamma_star / S, gamma_star)
    p_heavy = dist.p[-1]
    heavy = 0.0
    if p_heavy > 0.0:
        heavy = S * p_heavy * _expected_log2_ratio(S - 1, p_heavy, S * p_heavy)
    return BoundValue(light + heavy, Side.lower, Mode.uncoordinated, Regime.finite)


def distorted_residual(cfg: ChannelConfig, gamma_star: float) -> float:
    """(gamma - gamma*)/S * (1/(2(1 - gamma*/gamma)) + 1/2) * log2 e.

    The heavy frequency's per-subchannel contribution, which vanishes as Q
    grows. Requires gamma > gamma*.
    """
    gamma = cfg.gamma
    if gamma <= gamma_star:
        raise DomainError(f"distorted residual requires gamma > gamma*, got {gamma} <= {gamma_star}")
    share = 1.0 - gamma_star / gamma
    return (gamma - gamma_star) / cfg.S * (0.5 / share + 0.5) * LOG2E


def uc_lower_asymptotic(
    gamma: float,
    ctrl: Optional[SeriesControl] = None,
    gamma_star_tol: float = GAMMA_STAR_TOL,
) -> BoundValue:
    """uc_unif_asymptotic below gamma*, the constant c* from gamma* on."""
    gamma = check_load(gamma)
    star = cached_gamma_star(ctrl, gamma_star_tol)
    if gamma < star.gamma_star:
        bits = uc_unif_asymptotic(gamma, ctrl).bits
    else:
        bits = star.c_star
    return BoundValue(bits, Side.lower, Mode.uncoordinated, Regime.asymptotic)


def uc_lower_finite(
    cfg: ChannelConfig,
    ctrl: Optional[SeriesControl] = None,
    gamma_star_tol: float = GAMMA_STAR_TOL,
) -> BoundValue:
    """Best of the uniform and (when admissible) distorted finite sum rates."""
    bits = uc_unif_finite(cfg).bits
    star = cached_gamma_star(ctrl, gamma_star_tol)
    if cfg.S >= star.gamma_star * (cfg.Q - 1):
        bits = max(bits, uc_distorted_finite(cfg, star.gamma_star).bits)
    return BoundValue(bits, Side.lower, Mode.uncoordinated, Regime.finite)


def lemma2_limit(p: float) -> float:
    """1/(2p) + 1/2."""
    return 0.5 / p + 0.5


def _check_lemma2_args(p: float, N: int) -> Tuple[float, int]:
    p = float(p)
    if not (0.0 < p <= 1.0):
        raise DomainError(f"lemma2 requires 0 < p <= 1, got p={p}")
    if int(N) != N or N < 1:
        raise DomainError(f"lemma2 requires an integer N >= 1, got N={N}")
    N = int(N)
    if p * N < 1.0:
        raise DomainError(f"lemma2 requires pN >= 1, got pN={p * N}")
    return p, N


def lemma2_evaluate(p: float, N: int) -> Tuple[float, float]:
    """G(p, N) = N sum_i Binom(N, i; p) ln((i+1)/(pN)) in nats, with an error bound.

    Exact over i = 0..N for N up to LEMMA2_EXACT_MAX_N; beyond that only a
    +-12 sigma window around the mean is summed and the missing binomial mass
    is folded into the returned bound.

    Returns:
        (value, error_bound); error_bound is 0 for the exact path
    """
    p, N = _check_lemma2_args(p, N)
    mu = p * N

    if N <= LEMMA2_EXACT_MAX_N:
        weights = np.exp(binomial_logpmf_vector(N, p))
        i = np.arange(N + 1, dtype=np.float64)
        return N * compensated_sum(weights * np.log((i + 1.0) / mu)), 0.0

    if p == 1.0:
        return N * math.log1p(1.0 / N), 0.0

    sigma = math.sqrt(N * p * (1.0 - p))
    lo = max(0, int(math.floor(mu - LEMMA2_WINDOW_SIGMAS * sigma)))
    hi = min(N, int(math.ceil(mu + LEMMA2_WINDOW_SIGMAS * sigma)))
    i = np.arange(lo, hi + 1, dtype=np.float64)
    log_weights = (gammaln(N + 1.0) - gammaln(i + 1.0) - gammaln(N - i + 1.0)
                   + i * math.log(p) + (N - i) * math.log1p(-p))
    weights = np.exp(log_weights)

    value = N * compensated_sum(weights * np.log((i + 1.0) / mu))
    tail = max(0.0, 1.0 - compensated_sum(weights))
    worst = max(abs(math.log(1.0 / mu)), abs(math.log((N + 1.0) / mu)))
    bound = N * tail * worst
    logging.debug(f"lemma2 window [{lo}, {hi}] for N={N}, p={p}: tail mass {tail:.3g}")
    return value, bound


def lemma2_sequence(p: float, N: int) -> float:
    """Finite-N value G(p, N) in nats; tends to 1/(2p) + 1/2."""
    return lemma2_evaluate(p, N)[0]
