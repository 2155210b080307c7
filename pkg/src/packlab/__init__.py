"""packlab: exact finite-field packing verifiers and a grid-measure laboratory.

Two cores share one package: integer-exact Fourier analysis and rigid-motion
orbit counting over F_q^d, and a discretized Euclidean side with dimension
estimators and pushforward constructions on dyadic grids.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as kernel_backend

__all__ = ["__version__", "kernel_backend"]
