#!/usr/bin/env python3
# pi_crossed/main.py
"""
CLI entrypoint for pi-crossed: delegates to run.py's run_cli.
"""
import sys

from pi_crossed.run import run_cli


def main() -> int:
    return run_cli()


# console script
def app() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    app()
