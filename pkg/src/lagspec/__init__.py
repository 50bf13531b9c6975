"""Minimal Lagrangian Klein bottles in CP^2: construction, spectra, index."""

__version__ = "0.1.0"

from .elliptic import complete_E, complete_K, jacobi, jacobi_epsilon  # noqa: F401
from .family import derive_params, enumerate_admissible, is_admissible  # noqa: F401
