"""Exact computations for linear q-skew iterative difference-differential equations."""
