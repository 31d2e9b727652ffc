"""Exact computations with the Euclidean representation of Grassmann graphs J_q(n,k)."""

from .qarith import ParameterError, QParams, gauss_binom, qint

__all__ = ["ParameterError", "QParams", "gauss_binom", "qint"]
__version__ = "0.1.0"
