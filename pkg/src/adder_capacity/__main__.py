"""Module entry point for python -m adder_capacity."""

import sys

from .cli import main as cli_main
from .config import INTERNAL_ERROR_EXIT_CODE


def main():
    """Console script entry point."""
    try:
        cli_main()
    except KeyboardInterrupt:
        print("Program interrupted by user. Exiting...", file=sys.stderr)
        sys.exit(0)
    except SystemExit:
        # Let SystemExit pass through (from sys.exit() calls)
        raise
    except Exception as e:
        # For known error types, show clean error message without traceback
        if isinstance(e, (ValueError, FileNotFoundError, PermissionError, KeyError)):
            print(f"Error: {e}", file=sys.stderr)
            sys.exit(getattr(e, 'exit_code', INTERNAL_ERROR_EXIT_CODE))
        # For unknown errors, show full traceback for debugging
        import traceback
        traceback.print_exc()
        sys.exit(INTERNAL_ERROR_EXIT_CODE)


if __name__ == "__main__":
    main()
