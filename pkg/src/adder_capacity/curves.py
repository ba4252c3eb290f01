"""Asymptotic bound curves on a load grid.

A curve is one asymptotic bound evaluated at every gamma of a grid. The
`bounds` command emits every curve of a transmission mode; `figure` emits
the three preset curve sets.
"""

import math
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .config import Mode, GAMMA_STAR_TOL, GRID_GAMMA_MIN, GRID_GAMMA_MAX, GRID_GAMMA_STEP
from .coordinated import coord_large_gamma_asymptote, coord_lower_asymptotic, coord_upper_asymptotic
from .errors import CapacityError, GridError
from .numerics import SeriesControl
from .uncoordinated import uc_lower_asymptotic, uc_unif_asymptotic, uc_upper_asymptotic

# (gamma, series policy, gamma* tolerance) -> bits
CurveFunction = Callable[[float, Optional[SeriesControl], float], float]

CURVES: Dict[str, CurveFunction] = {
    'coord-lower': lambda g, ctrl, star_tol: coord_lower_asymptotic(g, ctrl).bits,
    'coord-upper': lambda g, ctrl, star_tol: coord_upper_asymptotic(g).bits,
    'coord-asymptote': lambda g, ctrl, star_tol: coord_large_gamma_asymptote(g).bits,
    'uc-unif': lambda g, ctrl, star_tol: uc_unif_asymptotic(g, ctrl).bits,
    'uc-lower': lambda g, ctrl, star_tol: uc_lower_asymptotic(g, ctrl, star_tol).bits,
    'uc-upper': lambda g, ctrl, star_tol: uc_upper_asymptotic(g).bits,
}

MODE_CURVES: Dict[Mode, Tuple[str, ...]] = {
    Mode.coordinated: ('coord-lower', 'coord-upper', 'coord-asymptote'),
    Mode.uncoordinated: ('uc-unif', 'uc-lower', 'uc-upper'),
}

# Comparison curves for the disjunctive channel are not emitted
FIGURE_CURVES: Dict[int, Tuple[str, ...]] = {
    1: ('coord-lower', 'coord-upper'),
    2: ('uc-unif',),
    3: ('uc-lower', 'uc-upper'),
}

# (lower, upper) pairs that must be ordered at every grid point
ORDERED_PAIRS: Tuple[Tuple[str, str], ...] = (
    ('coord-lower', 'coord-upper'),
    ('uc-unif', 'uc-upper'),
    ('uc-lower', 'uc-upper'),
    ('uc-unif', 'uc-lower'),
)

GRID_DIGITS = 12


@dataclass(frozen=True)
class CurveTable:
    """One curve: (gamma, bits) rows with strictly increasing gamma."""

    curve_id: str
    rows: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        rows = tuple((float(g), float(b)) for g, b in self.rows)
        for k, (gamma, bits) in enumerate(rows):
            if not math.isfinite(bits) or bits < 0.0:
                raise CapacityError(f"{self.curve_id}: bits finite and >= 0 violated at gamma={gamma}: {bits}")
            if k and gamma <= rows[k - 1][0]:
                raise CapacityError(f"{self.curve_id}: gamma strictly increasing violated at row {k}")
        object.__setattr__(self, 'rows', rows)

    @property
    def gammas(self) -> List[float]:
        return [g for g, _ in self.rows]

    @property
    def values(self) -> List[float]:
        return [b for _, b in self.rows]


def build_grid(
    gamma_min: float = GRID_GAMMA_MIN,
    gamma_max: float = GRID_GAMMA_MAX,
    gamma_step: float = GRID_GAMMA_STEP,
) -> List[float]:
    """gamma_min, gamma_min + step, ... up to gamma_max inclusive.

    Points are rounded to 12 decimals so 0.1 + k*0.05 lands on the decimal
    grid the user typed.

    Raises:
        GridError: Unless 0 < gamma_min < gamma_max and gamma_step > 0
    """
    for name, value in (('gamma-min', gamma_min), ('gamma-max', gamma_max), ('gamma-step', gamma_step)):
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            raise GridError(f"--{name} must be a finite number, got {value!r}")
    if gamma_min <= 0:
        raise GridError(f"--gamma-min must be > 0, got {gamma_min}")
    if gamma_max <= gamma_min:
        raise GridError(f"--gamma-max must be > --gamma-min, got {gamma_max} <= {gamma_min}")
    if gamma_step <= 0:
        raise GridError(f"--gamma-step must be > 0, got {gamma_step}")

    count = int(math.floor((gamma_max - gamma_min) / gamma_step + 1e-9)) + 1
    return [round(gamma_min + k * gamma_step, GRID_DIGITS) for k in range(count)]


def evaluate_curve(
    curve_id: str,
    grid: Sequence[float],
    ctrl: Optional[SeriesControl] = None,
    gamma_star_tol: float = GAMMA_STAR_TOL,
) -> CurveTable:
    """Evaluate one named curve at every grid point."""
    try:
        function = CURVES[curve_id]
    except KeyError:
        raise CapacityError(f"Unknown curve '{curve_id}'. Known curves: {', '.join(CURVES)}")
    rows = tuple((gamma, function(gamma, ctrl, gamma_star_tol)) for gamma in grid)
    logging.debug(f"Evaluated {curve_id} on {len(rows)} grid points")
    return CurveTable(curve_id=curve_id, rows=rows)


def evaluate_curves(
    curve_ids: Sequence[str],
    grid: Sequence[float],
    ctrl: Optional[SeriesControl] = None,
    gamma_star_tol: float = GAMMA_STAR_TOL,
) -> List[CurveTable]:
    return [evaluate_curve(curve_id, grid, ctrl, gamma_star_tol) for curve_id in curve_ids]


def mode_curves(
    mode: Mode,
    grid: Sequence[float],
    ctrl: Optional[SeriesControl] = None,
    gamma_star_tol: float = GAMMA_STAR_TOL,
) -> List[CurveTable]:
    """All asymptotic curves of one transmission mode."""
    return evaluate_curves(MODE_CURVES[Mode(mode)], grid, ctrl, gamma_star_tol)


def figure_curves(
    figure_id: int,
    grid: Sequence[float],
    ctrl: Optional[SeriesControl] = None,
    gamma_star_tol: float = GAMMA_STAR_TOL,
) -> List[CurveTable]:
    """Preset curve set 1, 2 or 3."""
    if figure_id not in FIGURE_CURVES:
        raise GridError(f"figure id must be one of {sorted(FIGURE_CURVES)}, got {figure_id}")
    return evaluate_curves(FIGURE_CURVES[figure_id], grid, ctrl, gamma_star_tol)


def curve_rows(tables: Sequence[CurveTable]) -> List[Dict[str, float]]:
    """Join curves evaluated on the same grid into rows {gamma, <curve_id>...}."""
    if not tables:
        return []
    grid = tables[0].gammas
    for table in tables[1:]:
        if table.gammas != grid:
            raise CapacityError(f"curve {table.curve_id} was evaluated on a different grid")
    rows = []
    for k, gamma in enumerate(grid):
        row = {'gamma': gamma}
        for table in tables:
            row[table.curve_id] = table.rows[k][1]
        rows.append(row)
    return rows


def ordering_violations(tables: Sequence[CurveTable], tol: float = 1e-12) -> List[str]:
    """Describe every grid point where a lower curve exceeds its upper curve."""
    by_id = {table.curve_id: table for table in tables}
    violations = []
    for lower_id, upper_id in ORDERED_PAIRS:
        if lower_id not in by_id or upper_id not in by_id:
            continue
        lower, upper = by_id[lower_id], by_id[upper_id]
        for (gamma, low), (_, high) in zip(lower.rows, upper.rows):
            if low > high + tol:
                violations.append(f"{lower_id} > {upper_id} at gamma={gamma}: {low!r} > {high!r}")
    return violations


def sign_changes(values: Sequence[float]) -> int:
    """Number of sign changes in the first differences of values, ignoring zero steps."""
    signs = [math.copysign(1.0, b - a) for a, b in zip(values, values[1:]) if b != a]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)
