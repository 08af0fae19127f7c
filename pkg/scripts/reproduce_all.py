"""Rerun every canned table and exit nonzero on any mismatch.

    python3 scripts/reproduce_all.py
"""
import sys

from selfaffine.cli import main

if __name__ == "__main__":
    sys.exit(main(["reproduce", "all"]))
