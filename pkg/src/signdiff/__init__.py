"""Solvers for 1D diffusion with a sign-changing piecewise-constant coefficient."""
