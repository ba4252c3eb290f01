"""Utility functions for adder-capacity: logging, error handling, and output formatting."""

import io
import os
import sys
import csv
import json
import math
import logging
import logging.handlers
import functools
from typing import Any, Dict, List, Optional

from tabulate import tabulate

from .config import (
    LOG_PATH, LOG_FILE_MAX_BYTES, LOG_FILE_BACKUP_COUNT, CSV_SIGNIFICANT_DIGITS, JSON_SIGNIFICANT_DIGITS,
    INTERNAL_ERROR_EXIT_CODE,
)
from .errors import CapacityError


# Initialize logging
def logging_main(debug: bool = False):
    """Initialize logging configuration."""
    log = logging.getLogger()

    # Only adjust the console level when logging is already set up
    if hasattr(logging_main, '_configured'):
        for handler in log.handlers:
            if isinstance(handler, logging.StreamHandler) and getattr(handler, 'stream', None) is sys.stderr:
                handler.setLevel(logging.DEBUG if debug else logging.INFO)
        return

    while log.handlers:
        handler = log.handlers[0]
        handler.close()
        log.removeHandler(handler)

    log.setLevel(logging.DEBUG)

    formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
    formatterdebug = logging.Formatter('%(asctime)s - %(levelname)s - %(funcName)s - %(message)s')

    # file handler logs debug messages; skipped when the log directory cannot be created
    log_file_error = None
    try:
        os.makedirs(os.path.dirname(LOG_PATH), exist_ok=True)
        fh = logging.handlers.RotatingFileHandler(LOG_PATH, maxBytes=LOG_FILE_MAX_BYTES,
                                                  backupCount=LOG_FILE_BACKUP_COUNT)
        fh.setLevel(logging.DEBUG)
        fh.setFormatter(formatterdebug)
        log.addHandler(fh)
    except OSError as e:
        log_file_error = e

    # console logging goes to stderr so stdout only carries command output
    ch = logging.StreamHandler(sys.stderr)
    ch.setLevel(logging.INFO)
    if debug:
        ch.setLevel(logging.DEBUG)
    ch.setFormatter(formatter)
    log.addHandler(ch)

    logging_main._configured = True

    if log_file_error is not None:
        logging.info(f"Logging to console only, cannot write {LOG_PATH}: {log_file_error}")
    logging.debug("starting " + os.path.basename(sys.argv[0]))


def round_significant(value: float, digits: int = JSON_SIGNIFICANT_DIGITS) -> float:
    """Round a float to a number of significant digits; non-finite values pass through."""
    if not isinstance(value, float) or not math.isfinite(value) or value == 0.0:
        return value
    return float(f"{value:.{digits}g}")


def _round_floats(data: Any) -> Any:
    if isinstance(data, float):
        return round_significant(data)
    if isinstance(data, dict):
        return {k: _round_floats(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [_round_floats(v) for v in data]
    return data


def format_csv_value(value: Any) -> str:
    """Fixed significant-digit formatting, independent of locale."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, f'#.{CSV_SIGNIFICANT_DIGITS}g')
    return str(value)


def render_results(data: Any, format: str = "json") -> str:
    """Render a report (dict) or a list of row dicts as table, json or csv text."""
    rows: List[Dict[str, Any]] = data if isinstance(data, list) else [data]

    if format == "json":
        return json.dumps(_round_floats(data), indent=2, sort_keys=False) + "\n"

    if not rows:
        return "No results found.\n" if format == "table" else ""

    headers = [h for h in rows[0].keys() if not h.startswith('_')]
    if format == "table":
        table_rows = [[row.get(h, '') for h in headers] for row in rows]
        return tabulate(table_rows, headers=headers, tablefmt="grid", floatfmt=f".{CSV_SIGNIFICANT_DIGITS}g") + "\n"
    if format == "csv":
        output_buffer = io.StringIO()
        writer = csv.DictWriter(output_buffer, fieldnames=headers, extrasaction='ignore', lineterminator='\n')
        writer.writeheader()
        for row in rows:
            writer.writerow({h: format_csv_value(row.get(h, '')) for h in headers})
        return output_buffer.getvalue()
    raise ValueError(f"Unsupported format: {format}")


def output_results(data: Any, format: str = "json", output_file: Optional[str] = None):
    """
    Output results in various formats (table, json, csv).

    Args:
        data: A report dictionary or a list of row dictionaries
        format: Output format - 'table', 'json', or 'csv'
        output_file: Optional file path to write output to
    """
    output = render_results(data, format)
    if output_file:
        with open(output_file, 'w', newline='') as f:
            f.write(output)
        print(f"Output written to {output_file}", file=sys.stderr)
    else:
        sys.stdout.write(output)


def handle_errors(debug: bool = False, command_name: str = "command"):
    """Decorator to handle errors consistently across command handlers.

    Library errors exit with the code their class carries; anything else
    exits with INTERNAL_ERROR_EXIT_CODE, outside the range used for command outcomes.

    Args:
        debug: Whether to show full traceback on error
        command_name: Name of the command for error messages

    Usage:
        @handle_errors(debug=args.debug, command_name="finite")
        def run():
            # command logic
    """
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except CapacityError as e:
                print(f"Error executing {command_name} command: {e}", file=sys.stderr)
                if debug:
                    import traceback
                    traceback.print_exc()
                sys.exit(e.exit_code)
            except Exception as e:
                print(f"Error executing {command_name} command: {e}", file=sys.stderr)
                if debug:
                    import traceback
                    traceback.print_exc()
                sys.exit(INTERNAL_ERROR_EXIT_CODE)
        return wrapper
    return decorator
