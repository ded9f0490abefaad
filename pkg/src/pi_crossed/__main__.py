#!/usr/bin/env python3
# pi_crossed/__main__.py
"""
``python -m pi_crossed``: delegates to run.py's run_cli.
"""
import sys

from pi_crossed.run import run_cli

if __name__ == "__main__":
    sys.exit(run_cli())
