"""Seeded Monte Carlo sampler of the channel.

Each run splits its sample budget into per-stream quotas. Stream k draws from
its own PCG64 generator spawned from SeedSequence(seed), streams run
concurrently, and their accumulators are combined in stream order, so an
estimate depends only on (seed, streams) and never on thread scheduling.
"""

import math
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from numpy.random import PCG64, Generator, SeedSequence

from .channel import ChannelConfig, InputDistribution
from .config import (
    Estimator, ENTROPY_SUPPORT_CAP, JACKKNIFE_BLOCKS, SIMULATION_BATCH_SIZE,
)
from .errors import SimulationError
from .numerics import LN2
from .oracle import composition_count

SEED_LIMIT = 2 ** 64


@dataclass(frozen=True)
class SimulationConfig:
    """One Monte Carlo run: instance, input law, budget and seeding."""

    cfg: ChannelConfig
    dist: InputDistribution
    samples: int
    seed: int
    streams: int = 1
    estimator: Estimator = Estimator.plug_in
    batch_size: int = SIMULATION_BATCH_SIZE
    jackknife_blocks: int = JACKKNIFE_BLOCKS
    support_cap: int = ENTROPY_SUPPORT_CAP

    def __post_init__(self):
        if self.samples < 1:
            raise SimulationError(f"samples >= 1 violated: samples={self.samples}")
        if self.streams < 1:
            raise SimulationError(f"streams >= 1 violated: streams={self.streams}")
        if self.streams > self.samples:
            raise SimulationError(f"every stream needs a sample: streams={self.streams} > samples={self.samples}")
        if not (0 <= self.seed < SEED_LIMIT):
            raise SimulationError(f"seed must be a 64-bit unsigned value, got {self.seed}")
        if self.batch_size < 1 or self.jackknife_blocks < 1 or self.support_cap < 1:
            raise SimulationError("batch_size, jackknife_blocks and support_cap must be >= 1")
        object.__setattr__(self, 'estimator', Estimator(self.estimator))
        self.dist.check_length(self.cfg)

    @classmethod
    def from_config(cls, cfg: ChannelConfig, dist: InputDistribution, samples: int, seed: int,
                    streams: int = 1, estimator: Estimator = Estimator.plug_in,
                    config: Optional[Dict[str, Dict[str, Any]]] = None) -> 'SimulationConfig':
        """Build a run using the 'simulation' section of a loaded config."""
        section = (config or {}).get('simulation', {})
        return cls(
            cfg=cfg, dist=dist, samples=samples, seed=seed, streams=streams, estimator=estimator,
            batch_size=int(section.get('batch_size', SIMULATION_BATCH_SIZE)),
            jackknife_blocks=int(section.get('jackknife_blocks', JACKKNIFE_BLOCKS)),
            support_cap=int(section.get('entropy_support_cap', ENTROPY_SUPPORT_CAP)),
        )


@dataclass(frozen=True)
class SimulationEstimate:
    """Point estimate in bits with its standard error."""

    estimate: float
    std_error: float
    samples_used: int
    estimator: Estimator

    def __post_init__(self):
        if not self.std_error >= 0.0:
            raise SimulationError(f"std_error >= 0 violated: {self.std_error}")
        object.__setattr__(self, 'estimator', Estimator(self.estimator))


def stream_quotas(samples: int, streams: int) -> List[int]:
    """Split samples over streams; the first samples % streams streams get one extra."""
    base, extra = divmod(samples, streams)
    return [base + 1 if k < extra else base for k in range(streams)]


def stream_generators(seed: int, streams: int) -> List[Generator]:
    """One independent generator per stream, derived from (seed, stream index)."""
    return [Generator(PCG64(child)) for child in SeedSequence(seed).spawn(streams)]


def sample_output(cfg: ChannelConfig, dist: InputDistribution, rng: Generator) -> np.ndarray:
    """Draw S frequency choices from dist and return their histogram over Q bins."""
    dist.check_length(cfg)
    choices = rng.choice(cfg.Q, size=cfg.S, p=dist.as_array())
    return np.bincount(choices, minlength=cfg.Q)


def _check_outputs(outputs: np.ndarray, S: int) -> None:
    if logging.getLogger().isEnabledFor(logging.DEBUG):
        if not np.all(outputs.sum(axis=1) == S):
            raise SimulationError("sum of y_j = S violated in a sampled batch")


def _draw_outputs(sim: SimulationConfig, rng: Generator, quota: int) -> np.ndarray:
    p = sim.dist.as_array()
    batches = []
    remaining = quota
    while remaining > 0:
        size = min(remaining, sim.batch_size)
        batch = rng.multinomial(sim.cfg.S, p, size=size).astype(np.int32)
        _check_outputs(batch, sim.cfg.S)
        batches.append(batch)
        remaining -= size
    return np.concatenate(batches, axis=0)


def _run_streams(sim: SimulationConfig, worker) -> list:
    quotas = stream_quotas(sim.samples, sim.streams)
    generators = stream_generators(sim.seed, sim.streams)
    logging.debug(f"Running {sim.streams} stream(s) with quotas {quotas} (seed {sim.seed})")
    if sim.streams == 1:
        return [worker(generators[0], quotas[0])]
    with ThreadPoolExecutor(max_workers=sim.streams) as executor:
        # map preserves submission order
        return list(executor.map(worker, generators, quotas))


def _entropy_from_counts(counts: np.ndarray, miller_madow: bool) -> float:
    counts = counts[counts > 0]
    n = counts.sum()
    if n == 0:
        return 0.0
    c = counts.astype(np.float64)
    value = math.log2(n) - float(np.sum(c * np.log2(c))) / n
    if miller_madow:
        value += (len(counts) - 1) / (2.0 * n * LN2)
    return max(value, 0.0)


def estimate_entropy(sim: SimulationConfig) -> SimulationEstimate:
    """Histogram entropy of sampled outputs, with a delete-one-block jackknife error.

    Raises:
        SimulationError: If the output support C(S+Q-1, S) exceeds the
            support guard, or the estimator is not an entropy estimator
    """
    if sim.estimator not in (Estimator.plug_in, Estimator.miller_madow):
        raise SimulationError(f"estimator '{sim.estimator.value}' does not estimate entropy")
    support = composition_count(sim.cfg.Q, sim.cfg.S)
    if support > sim.support_cap:
        logging.warning(f"Refusing entropy estimation over a support of {support} outputs")
        raise SimulationError(
            f"output support C(S+Q-1, S) = {support} exceeds the histogram guard {sim.support_cap}"
        )
    if sim.cfg.Q == 1:
        return SimulationEstimate(0.0, 0.0, sim.samples, sim.estimator)

    per_stream = _run_streams(sim, lambda rng, quota: _draw_outputs(sim, rng, quota))
    outputs = np.concatenate(per_stream, axis=0)
    _, codes = np.unique(outputs, axis=0, return_inverse=True)
    codes = codes.reshape(-1)
    n = codes.size
    total = np.bincount(codes)
    miller_madow = sim.estimator is Estimator.miller_madow
    estimate = _entropy_from_counts(total, miller_madow)

    blocks = min(sim.jackknife_blocks, n)
    if blocks < 2:
        return SimulationEstimate(estimate, 0.0, n, sim.estimator)
    leave_one_out = np.empty(blocks)
    for b, block in enumerate(np.array_split(codes, blocks)):
        kept = total - np.bincount(block, minlength=total.size)
        leave_one_out[b] = _entropy_from_counts(kept, miller_madow)
    spread = leave_one_out - leave_one_out.mean()
    std_error = math.sqrt((blocks - 1) / blocks * float(np.sum(spread * spread)))
    logging.debug(f"entropy estimate {estimate!r} +- {std_error!r} over {total.size} observed outputs")
    return SimulationEstimate(estimate, std_error, n, sim.estimator)


def _merge_moments(a: Tuple[int, float, float], b: Tuple[int, float, float]) -> Tuple[int, float, float]:
    """Combine (count, mean, sum of squared deviations) of two disjoint samples."""
    n_a, mean_a, m2_a = a
    n_b, mean_b, m2_b = b
    n = n_a + n_b
    if n == 0:
        return 0, 0.0, 0.0
    delta = mean_b - mean_a
    mean = mean_a + delta * n_b / n
    m2 = m2_a + m2_b + delta * delta * n_a * n_b / n
    return n, mean, m2


def _pointwise_mi_moments(sim: SimulationConfig, rng: Generator, quota: int) -> Tuple[int, float, float]:
    p = sim.dist.as_array()
    S = sim.cfg.S
    moments = (0, 0.0, 0.0)
    remaining = quota
    while remaining > 0:
        size = min(remaining, sim.batch_size)
        x = rng.choice(sim.cfg.Q, size=size, p=p)
        p_x = p[x]
        # y_x - 1 is the number of interferers on the same frequency as user 1
        interferers = rng.binomial(S - 1, p_x)
        values = np.log2((interferers + 1.0) / (S * p_x))
        mean = float(values.mean())
        deviations = values - mean
        moments = _merge_moments(moments, (size, mean, float(np.dot(deviations, deviations))))
        remaining -= size
    return moments


def estimate_mi(sim: SimulationConfig) -> SimulationEstimate:
    """Average of log2(y_{X1} / (S p_{X1})) over sampled (X1, Y).

    The log-likelihood ratio is exact, so the average is an unbiased
    estimate of I(X;Y); the standard error is the sample standard deviation
    over sqrt(n).

    Raises:
        SimulationError: If any p_j is 0
    """
    zero = [j for j, p in enumerate(sim.dist.p) if p == 0.0]
    if zero:
        raise SimulationError(f"pointwise MI needs every p_j > 0; zero at index(es) {zero}")

    per_stream = _run_streams(sim, lambda rng, quota: _pointwise_mi_moments(sim, rng, quota))
    moments = (0, 0.0, 0.0)
    for stream_moments in per_stream:
        moments = _merge_moments(moments, stream_moments)
    n, mean, m2 = moments

    variance = m2 / (n - 1) if n > 1 else 0.0
    std_error = math.sqrt(max(variance, 0.0) / n)
    logging.debug(f"pointwise MI estimate {mean!r} +- {std_error!r} from {n} samples")
    return SimulationEstimate(mean, std_error, n, Estimator.pointwise_mi)
