"""Symbolic-numeric verification laboratory for a modified shallow-water
system: residual evaluation, symmetry certification, subalgebra
classification, hodograph solutions, Lie reductions, and an independent
finite-volume cross-check."""

__version__ = "0.1.0"

from .model import (FluidParams, JetPoint, SolutionField, TXDomain, UHBox,
                    UHFunction, apply_discrete_symmetry, linearized_residual,
                    mswe_residual, sample_manifold_jet, single_f_residual)

__all__ = [
    "__version__",
    "FluidParams",
    "JetPoint",
    "SolutionField",
    "TXDomain",
    "UHBox",
    "UHFunction",
    "apply_discrete_symmetry",
    "linearized_residual",
    "mswe_residual",
    "sample_manifold_jet",
    "single_f_residual",
]
