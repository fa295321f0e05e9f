# following PEP 440
__version__ = "1.0"

__all__ = ("Composition", "compositions", "p_valuation")

from .core import Composition, compositions, p_valuation
