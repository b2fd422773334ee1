"""Certified lower bounds on the sparsity level recoverable by l1 minimization."""

__version__ = "0.1.0"
