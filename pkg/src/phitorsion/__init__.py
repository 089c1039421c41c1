"""Index-set calculus, regularized integrals, spectral zeta functions and
analytic torsion on model geometries."""

from ._accel import BACKEND
from .spectra import build_model, circle, interval, point, product_model, torus, truncated
from .zeta import log_torsion, zeta_continue

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "build_model", "circle", "interval", "point", "product_model", "torus",
    "truncated", "log_torsion", "zeta_continue", "__version__",
]
