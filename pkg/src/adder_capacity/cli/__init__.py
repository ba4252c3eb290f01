"""CLI package for adder-capacity.

- parsers: Argument parser creation
- handlers: Command handlers
"""

import sys
from typing import List, Optional

from .handlers import COMMAND_HANDLERS
from .parsers import create_parser


def main(argv: Optional[List[str]] = None) -> None:
    """Main entry point for the CLI application."""
    parser = create_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        sys.exit(2)

    COMMAND_HANDLERS[args.command](args)


__all__ = ['main']
