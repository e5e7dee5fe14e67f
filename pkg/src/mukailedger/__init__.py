"""Exact Mukai-lattice and divisor-class computations for the singular moduli spaces M10 and M6."""

from .errors import ComputationFault, InputError, LedgerError, ModelError

__version__ = "0.1.0"

__all__ = ["ComputationFault", "InputError", "LedgerError", "ModelError", "__version__"]
