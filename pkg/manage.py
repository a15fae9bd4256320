#!/usr/bin/env python
"""Command-line utility for solver runs."""
import os


def main() -> None:
    """Run a solver command."""
    os.environ.setdefault("SGML_SETTINGS_MODULE", "config.settings.dev")
    from apps.cli_io.management import main as run

    run()


if __name__ == "__main__":
    main()
