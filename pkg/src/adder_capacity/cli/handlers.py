"""Command handlers for the adder-capacity CLI."""

import logging
from typing import Any, Dict, Optional, Tuple

from ..channel import ChannelConfig, InputDistribution, read_distribution_file, relative
from ..config import GAMMA_STAR_TOL, Estimator, Mode, OutputFormat, VerifySuite, load_config
from ..coordinated import coord_lower_finite, coord_upper_finite
from ..curves import build_grid, curve_rows, figure_curves, mode_curves
from ..errors import VerificationError
from ..numerics import SeriesControl
from ..oracle import enumerate_output_distribution, exact_entropy
from ..simulator import SimulationConfig, estimate_entropy, estimate_mi
from ..uncoordinated import (
    cached_gamma_star, distorted_distribution, find_gamma_star, single_user_mi,
    uc_lower_finite, uc_sum_rate, uc_upper_crossover, uc_upper_finite,
)
from ..utils import handle_errors, logging_main, output_results
from ..verification import run_suite


def _settings(args) -> Tuple[Dict[str, Dict[str, Any]], SeriesControl]:
    config = load_config(args.config)
    return config, SeriesControl.from_config(config)


def _output(args, data: Any, default_format: OutputFormat) -> None:
    output_results(data, args.format or default_format.value, args.out)


def resolve_distribution(spec: str, cfg: ChannelConfig, ctrl: Optional[SeriesControl] = None,
                         gamma_star_tol: float = GAMMA_STAR_TOL) -> InputDistribution:
    """Turn a --dist value into an InputDistribution of length cfg.Q."""
    if spec == 'uniform':
        return InputDistribution.uniform(cfg.Q)
    if spec == 'distorted':
        return distorted_distribution(cfg, cached_gamma_star(ctrl, gamma_star_tol).gamma_star)
    dist = read_distribution_file(spec)
    dist.check_length(cfg)
    return dist


def finite_report(cfg: ChannelConfig, dist: InputDistribution, dist_name: str,
                  ctrl: Optional[SeriesControl] = None,
                  gamma_star_tol: float = GAMMA_STAR_TOL) -> Dict[str, Any]:
    """Finite-Q bounds of one instance; totals in bits per channel use."""
    bounds = {
        'coord_upper': coord_upper_finite(cfg),
        'coord_lower': coord_lower_finite(cfg),
        'uc_upper': uc_upper_finite(cfg),
        'uc_sum_rate': uc_sum_rate(cfg, dist),
        'uc_lower': uc_lower_finite(cfg, ctrl, gamma_star_tol),
    }
    report: Dict[str, Any] = {'Q': cfg.Q, 'S': cfg.S, 'gamma': cfg.gamma, 'dist': dist_name}
    report.update({name: bound.bits for name, bound in bounds.items()})
    report['per_subchannel'] = {name: relative(bound, cfg.Q) for name, bound in bounds.items()}
    return report


def handle_bounds_command(args) -> None:
    """Handle the bounds command."""
    logging_main(debug=args.debug)

    @handle_errors(debug=args.debug, command_name="bounds")
    def run():
        config, ctrl = _settings(args)
        grid = build_grid(args.gamma_min, args.gamma_max, args.gamma_step)
        mode = Mode(args.mode)
        if mode is Mode.uncoordinated:
            logging.info(f"uc-upper switches to log2(e) at gamma = {uc_upper_crossover():.6g}")
        tables = mode_curves(mode, grid, ctrl, config['gamma_star']['tol'])
        _output(args, curve_rows(tables), OutputFormat.csv)

    run()


def handle_figure_command(args) -> None:
    """Handle the figure command."""
    logging_main(debug=args.debug)

    @handle_errors(debug=args.debug, command_name="figure")
    def run():
        config, ctrl = _settings(args)
        grid = build_grid(args.gamma_min, args.gamma_max, args.gamma_step)
        if args.figure_id in (1, 3):
            logging.info("Disjunctive-channel comparison curves are not emitted")
        tables = figure_curves(args.figure_id, grid, ctrl, config['gamma_star']['tol'])
        _output(args, curve_rows(tables), OutputFormat.csv)

    run()


def handle_finite_command(args) -> None:
    """Handle the finite command."""
    logging_main(debug=args.debug)

    @handle_errors(debug=args.debug, command_name="finite")
    def run():
        config, ctrl = _settings(args)
        cfg = ChannelConfig(Q=args.Q, S=args.S)
        dist = resolve_distribution(args.dist, cfg, ctrl, config['gamma_star']['tol'])
        report = finite_report(cfg, dist, args.dist, ctrl, config['gamma_star']['tol'])
        _output(args, report, OutputFormat.json)

    run()


def handle_gamma_star_command(args) -> None:
    """Handle the gamma-star command."""
    logging_main(debug=args.debug)

    @handle_errors(debug=args.debug, command_name="gamma-star")
    def run():
        config, ctrl = _settings(args)
        tol = args.tol if args.tol is not None else config['gamma_star']['tol']
        result = find_gamma_star(tol, ctrl)
        _output(args, {
            'gamma_star': result.gamma_star,
            'c_star': result.c_star,
            'iterations': result.iterations,
            'bracket_width': result.bracket_width,
        }, OutputFormat.json)

    run()


def _z_score(estimate: float, std_error: float, reference: float) -> Optional[float]:
    if std_error > 0.0:
        return (estimate - reference) / std_error
    return 0.0 if estimate == reference else None


def handle_simulate_command(args) -> None:
    """Handle the simulate command."""
    logging_main(debug=args.debug)

    @handle_errors(debug=args.debug, command_name="simulate")
    def run():
        config, ctrl = _settings(args)
        cfg = ChannelConfig(Q=args.Q, S=args.S)
        dist = resolve_distribution(args.dist, cfg, ctrl, config['gamma_star']['tol'])
        estimator = Estimator.pointwise_mi if args.quantity == 'mi' else Estimator(args.estimator)
        sim = SimulationConfig.from_config(cfg, dist, args.samples, args.seed, args.streams, estimator, config)

        if args.quantity == 'mi':
            result = estimate_mi(sim)
            reference = single_user_mi(cfg, dist)
        else:
            result = estimate_entropy(sim)
            reference = exact_entropy(enumerate_output_distribution(cfg, dist, config['oracle']['enumeration_cap']))

        _output(args, {
            'Q': cfg.Q,
            'S': cfg.S,
            'dist': args.dist,
            'quantity': args.quantity,
            'estimator': result.estimator.value,
            'samples': result.samples_used,
            'seed': args.seed,
            'streams': args.streams,
            'estimate': result.estimate,
            'std_error': result.std_error,
            'reference': reference,
            'z_score': _z_score(result.estimate, result.std_error, reference),
        }, OutputFormat.json)

    run()


def handle_verify_command(args) -> None:
    """Handle the verify command."""
    logging_main(debug=args.debug)

    @handle_errors(debug=args.debug, command_name="verify")
    def run():
        _, ctrl = _settings(args)
        records = run_suite(VerifySuite(args.suite), ctrl)
        _output(args, records, OutputFormat.table)

        failed = [r for r in records if not r['passed']]
        logging.info(f"{len(records) - len(failed)}/{len(records)} cases passed")
        if failed:
            raise VerificationError(f"{len(failed)} of {len(records)} {args.suite} case(s) failed")

    run()


COMMAND_HANDLERS = {
    'bounds': handle_bounds_command,
    'finite': handle_finite_command,
    'gamma-star': handle_gamma_star_command,
    'simulate': handle_simulate_command,
    'verify': handle_verify_command,
    'figure': handle_figure_command,
}
