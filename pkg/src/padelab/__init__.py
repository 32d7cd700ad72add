"""Pade, two-point Pade and Hermite-Pade approximants for branched functions,
with root finding, zero-distribution statistics and potential-theoretic
reference quantities."""

__version__ = "0.1.0"
