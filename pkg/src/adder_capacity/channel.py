"""Channel instances, input distributions and bound values.

The B-channel has Q frequencies and S users; each user puts a single unit on
one frequency and the receiver sees the per-frequency counts.
"""

import math
import operator
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from .config import Side, Mode, Regime, PROBABILITY_SUM_TOL, BITS_ROUNDING_TOL
from .errors import ChannelConfigError, DistributionError, CapacityError


@dataclass(frozen=True)
class ChannelConfig:
    """A finite (Q, S) instance of the channel."""

    Q: int
    S: int

    def __post_init__(self):
        for name in ('Q', 'S'):
            value = getattr(self, name)
            try:
                value = operator.index(value)
            except TypeError:
                raise ChannelConfigError(f"{name} must be an integer, got {value!r}")
            if value < 1:
                raise ChannelConfigError(f"{name} >= 1 violated: got {name}={value}")
            object.__setattr__(self, name, value)

    @property
    def gamma(self) -> float:
        """Load S/Q."""
        return self.S / self.Q

    @classmethod
    def from_load(cls, Q: int, gamma: float) -> 'ChannelConfig':
        """Instance with Q frequencies and S = round(gamma * Q) users."""
        return cls(Q=Q, S=max(1, int(round(gamma * Q))))


@dataclass(frozen=True)
class InputDistribution:
    """Common input law p over the Q frequencies, shared by all users."""

    p: Tuple[float, ...]

    def __post_init__(self):
        try:
            values = tuple(float(x) for x in self.p)
        except (TypeError, ValueError):
            raise DistributionError(f"probabilities must be real numbers, got {self.p!r}")
        if not values:
            raise DistributionError("distribution must have at least one entry")
        for j, value in enumerate(values):
            if not math.isfinite(value):
                raise DistributionError(f"p_j finite violated at index {j}: {value}")
            if value < 0.0:
                raise DistributionError(f"every p_j >= 0 violated at index {j}: {value}")
        total = math.fsum(values)
        if abs(total - 1.0) > PROBABILITY_SUM_TOL:
            raise DistributionError(
                f"sum of p_j = 1 within {PROBABILITY_SUM_TOL:g} violated: sum = {total!r}"
            )
        object.__setattr__(self, 'p', values)

    @property
    def Q(self) -> int:
        return len(self.p)

    @classmethod
    def uniform(cls, Q: int) -> 'InputDistribution':
        return cls(p=(1.0 / Q,) * Q)

    @classmethod
    def point_mass(cls, Q: int, j: int) -> 'InputDistribution':
        values = [0.0] * Q
        values[j] = 1.0
        return cls(p=tuple(values))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.p, dtype=np.float64)

    def check_length(self, cfg: ChannelConfig) -> None:
        """Raise DistributionError unless the distribution has cfg.Q entries."""
        if self.Q != cfg.Q:
            raise DistributionError(f"length equals Q violated: distribution has {self.Q} entries, Q={cfg.Q}")


def read_distribution_file(path: Union[str, Path]) -> InputDistribution:
    """Read a distribution file: one probability per line.

    Blank lines and lines starting with '#' are skipped.

    Raises:
        DistributionError: If the file cannot be read, a line is not a number,
            or the values violate the InputDistribution invariants
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            lines = f.readlines()
    except (OSError, UnicodeDecodeError) as e:
        raise DistributionError(f"cannot read distribution file {path}: {e}")

    values = []
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith('#'):
            continue
        try:
            values.append(float(text))
        except ValueError:
            raise DistributionError(f"{path}:{lineno}: not a probability: {text!r}")
    return InputDistribution(p=tuple(values))


@dataclass(frozen=True)
class BoundValue:
    """A capacity quantity tagged with side, mode and regime.

    Finite-regime values are totals C(Q, S) in bits per channel use;
    asymptotic values are per-subchannel c(gamma).
    """

    bits: float
    side: Side
    mode: Mode
    regime: Regime

    def __post_init__(self):
        bits = float(self.bits)
        if not math.isfinite(bits):
            raise CapacityError(f"bound value must be finite, got {bits}")
        if bits < 0.0:
            if bits < -BITS_ROUNDING_TOL:
                raise CapacityError(f"bits >= 0 violated: {bits!r}")
            bits = 0.0
        object.__setattr__(self, 'bits', bits)
        object.__setattr__(self, 'side', Side(self.side))
        object.__setattr__(self, 'mode', Mode(self.mode))
        object.__setattr__(self, 'regime', Regime(self.regime))


def relative(bound: BoundValue, Q: int) -> float:
    """Per-subchannel rate bits/Q of a finite bound."""
    if bound.regime is not Regime.finite:
        raise CapacityError("relative() applies to finite-regime bounds only")
    return bound.bits / Q


def random_distribution(Q: int, rng: np.random.Generator) -> InputDistribution:
    """Dirichlet(1, ..., 1) draw renormalized so it satisfies the sum invariant."""
    weights = rng.dirichlet(np.ones(Q))
    weights = weights / math.fsum(weights)
    return InputDistribution(p=tuple(float(w) for w in weights))
