"""PUCK potential analyzer - command-line entry point."""

import sys

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Import application modules
from src.cli.commands import run_command


def main():
    """Main entry point for the application."""
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
