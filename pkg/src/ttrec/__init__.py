"""Exact-arithmetic certifier for hbar-expansions of determinantal
correlators of rational Lax systems, and their identification with
genus-0 spectral-curve recursion invariants."""

__version__ = "0.1.0"

from ._kernel import BACKEND as KERNEL_BACKEND

__all__ = ["KERNEL_BACKEND", "__version__"]
