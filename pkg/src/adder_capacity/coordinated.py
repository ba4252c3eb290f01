"""Capacity bounds for coordinated transmission.

Coordinated users are decoded jointly, so the sum capacity is max H(Y) over
independent input laws. The upper bound counts the possible outputs; the
lower bound is H(Y) when every user picks a frequency uniformly.
"""

import math
from typing import Optional

import numpy as np

from .channel import BoundValue, ChannelConfig
from .config import Side, Mode, Regime
from .numerics import (
    LN2, SeriesControl, check_load, compensated_sum, binomial_logpmf_vector,
    log_binomial, log_factorial_vector, poisson_weighted_sum, log_factorial,
)


def coord_upper_finite(cfg: ChannelConfig) -> BoundValue:
    """log2 C(S+Q-1, S): the number of compositions of S into Q parts."""
    bits = log_binomial(cfg.S + cfg.Q - 1, cfg.S) / LN2
    return BoundValue(bits, Side.upper, Mode.coordinated, Regime.finite)


def coord_upper_asymptotic(gamma: float) -> BoundValue:
    """(gamma+1) log2(gamma+1) - gamma log2(gamma), per subchannel."""
    gamma = check_load(gamma)
    bits = (gamma + 1.0) * math.log2(gamma + 1.0) - gamma * math.log2(gamma)
    return BoundValue(bits, Side.upper, Mode.coordinated, Regime.asymptotic)


def coord_lower_finite(cfg: ChannelConfig) -> BoundValue:
    """Exact H(Y) in bits when every user is uniform over the Q frequencies.

    H(Y) = Q * sum_i Binom(S, i; 1/Q) log2(i!) - log2(S! / Q^S)
    """
    Q, S = cfg.Q, cfg.S
    lf = log_factorial_vector(S)
    weights = np.exp(binomial_logpmf_vector(S, 1.0 / Q))
    expected_log_factorial = compensated_sum(weights * lf)

    # log(S!/Q^S) split to avoid overflow
    log_ratio = lf[S] - S * math.log(Q)
    bits = (Q * expected_log_factorial - log_ratio) / LN2
    return BoundValue(bits, Side.lower, Mode.coordinated, Regime.finite)


def coord_lower_asymptotic(gamma: float, ctrl: Optional[SeriesControl] = None) -> BoundValue:
    """sum_i Poisson(gamma; i) log2(i!) - gamma log2(gamma/e), per subchannel."""
    gamma = check_load(gamma)
    series = poisson_weighted_sum(gamma, lambda i: log_factorial(i) / LN2, ctrl)
    bits = series.value - gamma * (math.log2(gamma) - 1.0 / LN2)
    return BoundValue(bits, Side.lower, Mode.coordinated, Regime.asymptotic)


def coord_large_gamma_asymptote(gamma: float) -> BoundValue:
    """Reference curve 1/2 log2(2 pi e gamma), valid as gamma grows.

    Clamped at 0 for gamma < 1/(2 pi e), where the expression is negative.
    """
    gamma = check_load(gamma)
    bits = 0.5 * math.log2(2.0 * math.pi * math.e * gamma)
    return BoundValue(max(bits, 0.0), Side.lower, Mode.coordinated, Regime.asymptotic)
