"""bictrace: exact trace calculus on finite-dimensional algebras and bimodules.

The package realizes shadows (zeroth Hochschild homology), dual pairs, twisted
and iterated traces, umbra coherence data, and 2-characters concretely as
matrices over exact fields, and ships executable checkers for the trace
identities they satisfy.
"""

from .exactlin import Field, Matrix

__version__ = "0.1.0"

__all__ = ["Field", "Matrix", "__version__"]
