"""Experiments built on the capacity solver."""
