"""Brute-force enumeration of the channel on small instances.

The receiver's output alphabet is the set of compositions of S into Q parts.
Enumerating it gives the exact output law, the exact entropy and the exact
single-user mutual information, which serve as ground truth for the
closed-form bounds.
"""

import itertools
import math
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, Sequence, Tuple

from .channel import ChannelConfig, InputDistribution
from .config import ENUMERATION_CAP, PROBABILITY_SUM_TOL
from .errors import DistributionError, EnumerationLimitError
from .numerics import LN2, compensated_sum, log_factorial, binomial_pmf_log

Composition = Tuple[int, ...]


def compositions(length: int, total: int) -> Iterator[Composition]:
    """Yield every length-tuple of nonnegative integers summing to total.

    Order is lexicographic in (y_1, ..., y_Q). Stars and bars: each choice of
    length - 1 bar slots among total + length - 1 positions is one composition.
    """
    slots = total + length - 1
    for bars in itertools.combinations(range(slots), length - 1):
        parts = []
        prev = -1
        for bar in bars:
            parts.append(bar - prev - 1)
            prev = bar
        parts.append(slots - prev - 1)
        yield tuple(parts)


def composition_count(length: int, total: int) -> int:
    """C(total + length - 1, total)."""
    return math.comb(total + length - 1, total)


def _check_cap(length: int, total: int, cap: int) -> int:
    count = composition_count(length, total)
    if count > cap:
        logging.warning(f"Refusing enumeration of {count} compositions (cap {cap})")
        raise EnumerationLimitError(
            f"C(S+Q-1, S) = {count} compositions of S={total} into Q={length} parts "
            f"exceeds the enumeration cap {cap}"
        )
    logging.debug(f"Enumerating {count} compositions of {total} into {length} parts")
    return count


@dataclass(frozen=True)
class OutputDistribution:
    """Exact law of the output vector y for one (Q, S) instance."""

    Q: int
    S: int
    entries: Dict[Composition, float] = field(default_factory=dict)

    def __post_init__(self):
        for y in self.entries:
            if len(y) != self.Q or sum(y) != self.S or min(y) < 0:
                raise DistributionError(f"every key sums to S violated: {y} for Q={self.Q}, S={self.S}")
        if len(self.entries) > composition_count(self.Q, self.S):
            raise DistributionError("entry count <= C(S+Q-1, S) violated")
        total = math.fsum(self.entries.values())
        if abs(total - 1.0) > PROBABILITY_SUM_TOL:
            raise DistributionError(f"probabilities sum to 1 violated: sum = {total!r}")

    @property
    def support_size(self) -> int:
        return len(self.entries)


def output_probability(out: OutputDistribution, y: Sequence[int]) -> float:
    """p(y); 0 for compositions outside the support."""
    return out.entries.get(tuple(int(v) for v in y), 0.0)


def _log_multinomial_pmf(y: Composition, log_p: Sequence[float], log_s_factorial: float) -> float:
    value = log_s_factorial
    for count, lp in zip(y, log_p):
        if count:
            value += count * lp - log_factorial(count)
    return value


def enumerate_output_distribution(
    cfg: ChannelConfig,
    dist: InputDistribution,
    cap: int = ENUMERATION_CAP,
) -> OutputDistribution:
    """Full multinomial output law p(y) = S!/prod(y_j!) prod(p_j^y_j).

    Compositions with probability exactly 0 (a positive count on a frequency
    with p_j = 0) are left out of the entries.

    Raises:
        EnumerationLimitError: If C(S+Q-1, S) exceeds cap
    """
    dist.check_length(cfg)
    _check_cap(cfg.Q, cfg.S, cap)

    zero = [p == 0.0 for p in dist.p]
    log_p = [-math.inf if z else math.log(p) for p, z in zip(dist.p, zero)]
    log_s_factorial = log_factorial(cfg.S)

    entries = {}
    for y in compositions(cfg.Q, cfg.S):
        if any(count and z for count, z in zip(y, zero)):
            continue
        entries[y] = math.exp(_log_multinomial_pmf(y, log_p, log_s_factorial))
    return OutputDistribution(Q=cfg.Q, S=cfg.S, entries=entries)


def exact_entropy(out: OutputDistribution) -> float:
    """Plug-in entropy -sum p(y) log2 p(y) of an exact law, in bits."""
    terms = [-p * math.log(p) for p in out.entries.values() if p > 0.0]
    return max(compensated_sum(terms) / LN2, 0.0)


def exact_single_user_mi(
    cfg: ChannelConfig,
    dist: InputDistribution,
    cap: int = ENUMERATION_CAP,
) -> float:
    """I(X_1; Y) in bits by direct summation over the joint law of (X_1, Y).

    Y = e_{X_1} + Z where Z is the histogram of the other S-1 users, so
    p(x, y) = p_x * p_Z(y - e_x) and p(y) comes from the full output law.
    """
    dist.check_length(cfg)
    out = enumerate_output_distribution(cfg, dist, cap)
    if cfg.S == 1:
        # Y = e_{X_1}, so I = H(X_1)
        return exact_entropy(out)

    interference = enumerate_output_distribution(ChannelConfig(Q=cfg.Q, S=cfg.S - 1), dist, cap)

    terms = []
    for x, p_x in enumerate(dist.p):
        if p_x == 0.0:
            continue
        for z, p_z in interference.entries.items():
            y = z[:x] + (z[x] + 1,) + z[x + 1:]
            p_joint = p_x * p_z
            p_y = out.entries[y]
            # log2 p(y|x)/p(y) with p(y|x) = p_z
            terms.append(p_joint * math.log(p_z / p_y))
    return max(compensated_sum(terms) / LN2, 0.0)


def lemma1_check(
    S: int,
    dist: InputDistribution,
    f: Callable[[int], float],
    cap: int = ENUMERATION_CAP,
) -> Tuple[float, float]:
    """Both sides of the marginalization identity for the first coordinate.

    Returns:
        (sum over compositions m of Multinomial(S; m; p) f(m_1),
         sum over i of Binom(S, i; p_1) f(i))
    """
    Q = dist.Q
    out = enumerate_output_distribution(ChannelConfig(Q=Q, S=S), dist, cap)
    full = compensated_sum(p * f(m[0]) for m, p in out.entries.items())

    p1 = dist.p[0]
    marginal_terms = []
    for i in range(S + 1):
        weight = math.exp(binomial_pmf_log(S, i, p1))
        if weight > 0.0:
            marginal_terms.append(weight * f(i))
    return full, compensated_sum(marginal_terms)

