"""Shared helpers for the demo scripts."""
from pathlib import Path

DATA = Path(__file__).resolve().parent / "data"


def print_stages(stages, label="stage"):
    print(f"{label:>6}  {'basis':>5}  {'lower':>18}  {'upper':>18}  {'time (s)':>9}")
    for b in stages:
        print(f"{b.stage:>6}  {b.n_basis:>5}  {b.lower:>18.15f}  {b.upper:>18.15f}  {b.elapsed:>9.3f}")
