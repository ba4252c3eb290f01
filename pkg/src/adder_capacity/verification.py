"""Verification suites run by `adder-capacity verify`.

Each suite returns a list of case records {suite, case, passed, detail}; the
command exits 0 only when every case passes.
"""

import math
import logging
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from .channel import ChannelConfig, InputDistribution, random_distribution, relative
from .config import (
    Mode, VerifySuite, VERIFY_SEED, LEMMA1_CASES, CONSISTENCY_Q,
)
from .coordinated import coord_lower_asymptotic, coord_lower_finite
from .curves import build_grid, mode_curves, ordering_violations, sign_changes
from .numerics import LOG2E, SeriesControl, log_factorial
from .oracle import composition_count, enumerate_output_distribution, exact_entropy, exact_single_user_mi, lemma1_check
from .uncoordinated import (
    cached_gamma_star, distorted_residual, lemma2_limit, lemma2_sequence, single_user_mi,
    uc_lower_asymptotic, uc_lower_finite, uc_unif_asymptotic, uc_unif_finite,
)

CaseRecord = Dict[str, Any]

LEMMA1_TOL = 1e-12
ORACLE_TOL = 1e-9
CONVERGENCE_TOL = 0.01
CONVERGENCE_GAMMAS = (0.5, 1.0, 2.0)
LEMMA2_PROBABILITIES = (0.1, 0.3, 0.5, 0.9)
LEMMA2_TRIALS = (100, 1000, 10000)
ORACLE_CONFIGS = 20

# Integer-indexed test functions for the marginalization identity
LEMMA1_FAMILIES: Dict[str, Callable[[int], float]] = {
    'log2(i!)': lambda i: log_factorial(i) * LOG2E,
    'i': lambda i: float(i),
    'i^2': lambda i: float(i * i),
    '1/(i+1)': lambda i: 1.0 / (i + 1),
}


def _case(suite: VerifySuite, case: str, passed: bool, detail: str) -> CaseRecord:
    if not passed:
        logging.warning(f"verify {suite.value}: {case} FAILED ({detail})")
    return {'suite': suite.value, 'case': case, 'passed': bool(passed), 'detail': detail}


def run_lemma1_suite(cases: int = LEMMA1_CASES, seed: int = VERIFY_SEED) -> List[CaseRecord]:
    """Full multinomial sum against the binomial marginal on random small instances."""
    rng = np.random.default_rng(seed)
    families = list(LEMMA1_FAMILIES.items())
    records = []
    for k in range(cases):
        Q = int(rng.integers(2, 6))
        S = int(rng.integers(1, 9))
        dist = random_distribution(Q, rng)
        name, f = families[k % len(families)]
        full, marginal = lemma1_check(S, dist, f)
        diff = abs(full - marginal)
        records.append(_case(
            VerifySuite.lemma1, f"#{k + 1} Q={Q} S={S} f={name}", diff < LEMMA1_TOL,
            f"|full - marginal| = {diff:.3g}",
        ))
    return records


def run_lemma2_suite() -> List[CaseRecord]:
    """Finite-N values approach 1/(2p) + 1/2 with shrinking error."""
    records = []
    for p in LEMMA2_PROBABILITIES:
        limit = lemma2_limit(p)
        errors = [abs(lemma2_sequence(p, N) - limit) for N in LEMMA2_TRIALS]
        shrinking = errors[-1] < errors[0]
        close = errors[-1] < 0.05 * limit
        detail = ', '.join(f"N={N}: {e:.3g}" for N, e in zip(LEMMA2_TRIALS, errors))
        records.append(_case(VerifySuite.lemma2, f"p={p} limit={limit:.6g}", shrinking and close,
                             f"|error| {detail}"))

    # p = 1 has a closed form
    for N in LEMMA2_TRIALS:
        value = lemma2_sequence(1.0, N)
        expected = N * math.log1p(1.0 / N)
        records.append(_case(VerifySuite.lemma2, f"p=1 N={N}", abs(value - expected) < 1e-9,
                             f"value {value:.12g}, N ln((N+1)/N) = {expected:.12g}, limit 1"))
    return records


def _coordinated_convergence(Q: int, gamma: float, ctrl: Optional[SeriesControl]) -> CaseRecord:
    cfg = ChannelConfig(Q=Q, S=int(round(gamma * Q)))
    per_subchannel = relative(coord_lower_finite(cfg), Q)
    # the total count of a Poisson product carries 1/2 log2(2 pi e S) bits the multinomial lacks
    corrected = per_subchannel + 0.5 * math.log2(2.0 * math.pi * math.e * cfg.S) / Q
    limit = coord_lower_asymptotic(gamma, ctrl).bits
    diff = abs(corrected - limit)
    return _case(VerifySuite.consistency, f"coord-lower Q={Q} gamma={gamma}", diff < CONVERGENCE_TOL,
                 f"finite/Q {per_subchannel:.6g}, corrected {corrected:.6g}, asymptotic {limit:.6g}")


def _uncoordinated_convergence(Q: int, gamma: float, ctrl: Optional[SeriesControl]) -> List[CaseRecord]:
    cfg = ChannelConfig(Q=Q, S=int(round(gamma * Q)))
    records = []
    pairs = (
        ('uc-unif', relative(uc_unif_finite(cfg), Q), uc_unif_asymptotic(gamma, ctrl).bits),
        ('uc-lower', relative(uc_lower_finite(cfg, ctrl), Q), uc_lower_asymptotic(gamma, ctrl).bits),
    )
    for name, finite, limit in pairs:
        diff = abs(finite - limit)
        records.append(_case(VerifySuite.consistency, f"{name} Q={Q} gamma={gamma}", diff < CONVERGENCE_TOL,
                             f"finite/Q {finite:.6g}, asymptotic {limit:.6g}"))
    return records


def _oracle_identities(seed: int) -> List[CaseRecord]:
    rng = np.random.default_rng(seed)
    records = []
    for k in range(ORACLE_CONFIGS):
        Q = int(rng.integers(2, 6))
        S = int(rng.integers(1, 9))
        cfg = ChannelConfig(Q=Q, S=S)
        entropy = exact_entropy(enumerate_output_distribution(cfg, InputDistribution.uniform(Q)))
        entropy_diff = abs(entropy - coord_lower_finite(cfg).bits)

        dist = random_distribution(Q, rng)
        mi_diff = abs(exact_single_user_mi(cfg, dist) - single_user_mi(cfg, dist))
        records.append(_case(
            VerifySuite.consistency, f"oracle #{k + 1} Q={Q} S={S} ({composition_count(Q, S)} outputs)",
            entropy_diff < ORACLE_TOL and mi_diff < ORACLE_TOL,
            f"|H - coord_lower| = {entropy_diff:.3g}, |I - single_user_mi| = {mi_diff:.3g}",
        ))
    return records


def _grid_properties(ctrl: Optional[SeriesControl]) -> List[CaseRecord]:
    grid = build_grid()
    coordinated = mode_curves(Mode.coordinated, grid, ctrl)
    uncoordinated = mode_curves(Mode.uncoordinated, grid, ctrl)
    by_id = {table.curve_id: table for table in coordinated + uncoordinated}

    violations = ordering_violations(coordinated + uncoordinated)
    coord_lower = by_id['coord-lower'].values
    increasing = all(b > a for a, b in zip(coord_lower, coord_lower[1:]))
    changes = sign_changes(by_id['uc-unif'].values)
    flat = [bits for gamma, bits in by_id['uc-upper'].rows if gamma >= 5.0]
    flat_ok = all(abs(bits - LOG2E) < 1e-9 for bits in flat)

    return [
        _case(VerifySuite.consistency, "grid lower <= upper", not violations,
              f"{len(violations)} violation(s)" + (f", first: {violations[0]}" if violations else "")),
        _case(VerifySuite.consistency, "grid coord-lower strictly increasing", increasing,
              f"{len(coord_lower)} points"),
        _case(VerifySuite.consistency, "grid uc-unif unimodal", changes == 1,
              f"{changes} sign change(s) in first differences"),
        _case(VerifySuite.consistency, "grid uc-upper = log2 e for gamma >= 5", flat_ok,
              f"{len(flat)} points"),
    ]


def run_consistency_suite(Q: int = CONSISTENCY_Q, ctrl: Optional[SeriesControl] = None,
                          seed: int = VERIFY_SEED) -> List[CaseRecord]:
    """Finite-to-asymptotic convergence, oracle identities and grid properties."""
    records = []
    for gamma in CONVERGENCE_GAMMAS:
        records.append(_coordinated_convergence(Q, gamma, ctrl))
        records.extend(_uncoordinated_convergence(Q, gamma, ctrl))

    star = cached_gamma_star(ctrl)
    records.append(_case(
        VerifySuite.consistency, "gamma* and c*",
        1.3372 <= star.gamma_star <= 1.3392 and 0.8361 <= star.c_star <= 0.8381,
        f"gamma* = {star.gamma_star:.6g}, c* = {star.c_star:.6g}",
    ))

    residual_small = distorted_residual(ChannelConfig(Q=Q // 4, S=2 * (Q // 4)), star.gamma_star)
    residual = distorted_residual(ChannelConfig(Q=Q, S=2 * Q), star.gamma_star)
    records.append(_case(VerifySuite.consistency, "distorted residual vanishes (gamma=2)",
                         residual < residual_small and residual < CONVERGENCE_TOL,
                         f"Q={Q // 4}: {residual_small:.3g}, Q={Q}: {residual:.3g}"))

    records.extend(_oracle_identities(seed))
    records.extend(_grid_properties(ctrl))
    return records


def run_suite(suite: VerifySuite, ctrl: Optional[SeriesControl] = None) -> List[CaseRecord]:
    suite = VerifySuite(suite)
    logging.info(f"Running verification suite '{suite.value}'")
    if suite is VerifySuite.lemma1:
        return run_lemma1_suite()
    if suite is VerifySuite.lemma2:
        return run_lemma2_suite()
    return run_consistency_suite(ctrl=ctrl)
