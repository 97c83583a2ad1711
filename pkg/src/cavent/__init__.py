"""cavent: entanglement of resonantly coupled field modes in cavities with
vibrating boundaries.

Subpackages by physics layer: :mod:`cavent.specfun` (elliptic integrals,
Gauss hypergeometric, log-gamma), :mod:`cavent.gaussian` (two-mode covariance
algebra and symplectic eigenvalues), :mod:`cavent.measures` (entanglement
measures), :mod:`cavent.cavity3d` (two resonant modes of a 3D cavity with a
vibrating wall), :mod:`cavent.cavity1d` (Fabry-Perot mode mixing at p = 1 and
p = 2 resonance), and :mod:`cavent.cli` (scenario presets and CSV output).
"""

from . import cavity1d, cavity3d, errors, gaussian, measures, specfun
from ._accel import NUMBA_ENABLED

__version__ = "0.1.0"

__all__ = [
    "cavity1d",
    "cavity3d",
    "errors",
    "gaussian",
    "measures",
    "specfun",
    "NUMBA_ENABLED",
    "__version__",
]
