"""Signal conditioning used before marking."""

from .sigmoid import ClumpParams, SigmoidParams, clump, minmax_normalize, sigmoid, smooth

__all__ = ["ClumpParams", "SigmoidParams", "clump", "minmax_normalize", "sigmoid", "smooth"]
