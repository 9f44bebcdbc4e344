"""Exact model of the embedding of Bruhat-Tits buildings attached to a
skew element β of a classical group over F = GF(q)((t))."""

from .laurent import Field, LaurentScalar
from .matrix import Matrix
from .lattice import Lattice
from .hermitian import HermitianSpace, make_witt_space
from .beta import BetaDatum, validate_beta
from .lattice_functions import LatticeFunction, split, dual_fn, is_self_dual
from .filtrations import is_extension, square_filtration
from .embeddings import Translation, j_beta, factorize, uniqueness_search, classify_compatible_map

__version__ = "0.1.0"
