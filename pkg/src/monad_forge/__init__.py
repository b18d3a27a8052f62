"""Finitely generated modules over small Euclidean domains, their reflective
subcategories cut out by level functions, and the coequalizer machinery used
to test which of those subcategories present the free-module monad.
"""

from .errors import MonadForgeError
from .fpmod import CanonicalModule, Morphism, PresentedModule, decompose
from .reflect import INF, LevelFunction, contains
from .ring import FPX, Z, ZI, ring_from_tag

__version__ = "0.1.0"

__all__ = [
    "CanonicalModule", "FPX", "INF", "LevelFunction", "MonadForgeError", "Morphism",
    "PresentedModule", "Z", "ZI", "contains", "decompose", "ring_from_tag",
]
