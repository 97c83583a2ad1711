"""Special-function kernels for the 1D cavity closed forms.

Log-gamma (Lanczos approximation), the Gauss hypergeometric function 2F1 on
z in [0, 1], and the complete elliptic integrals K and E computed together by
the arithmetic-geometric mean, parameterized by the complementary modulus to
stay accurate when the modulus approaches 1.

All functions are pure and thread-safe.
"""

import math
from dataclasses import dataclass

from . import _kernels
from .errors import ConvergenceError, DomainError

__all__ = ["EllipticPair", "ln_gamma", "hyp2f1", "elliptic_ke"]


@dataclass(frozen=True)
class EllipticPair:
    """K(kappa) and E(kappa) together with the modulus pair.

    ``kappa_tilde = sqrt(1 - kappa^2)`` is the complementary modulus; E <= K
    always, with equality only at kappa = 0.
    """

    k_big: float
    e_big: float
    kappa: float
    kappa_tilde: float


def ln_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0."""
    if x <= 0.0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return _kernels.ln_gamma_kernel(float(x))


def hyp2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; z) for z in [0, 1].

    Terminating polynomial when a or b is a non-positive integer; direct
    power series for z <= 0.75; z -> 1-z connection formulas above that
    (including the logarithmic case of integer c - a - b).  At z = 1 the
    Gauss summation applies and requires c - a - b > 0.
    """
    if not 0.0 <= z <= 1.0:
        raise DomainError(f"hyp2f1 implemented for z in [0, 1], got {z}")
    if c < 0.5 and abs(c - round(c)) < 1e-12:
        if not (_is_nonpos_int(a) and -a <= -c) and not (_is_nonpos_int(b) and -b <= -c):
            raise DomainError(f"hyp2f1 pole: c = {c} is a non-positive integer")
    if z == 1.0 and not (_is_nonpos_int(a) or _is_nonpos_int(b)) and c - a - b <= 0.0:
        raise DomainError("hyp2f1 diverges at z = 1 when c - a - b <= 0")
    try:
        return _kernels.hyp2f1_kernel(float(a), float(b), float(c), float(z))
    except RuntimeError as exc:
        raise ConvergenceError(str(exc)) from exc


def _is_nonpos_int(x: float) -> bool:
    return x < 0.5 and abs(x - round(x)) < 1e-12


def elliptic_ke(kappa_tilde: float) -> EllipticPair:
    """Complete elliptic integrals of the first and second kinds.

    The argument is the complementary modulus kappa_tilde in (0, 1]; the pair
    (K, E) is returned for kappa = sqrt(1 - kappa_tilde^2).  K diverges
    logarithmically as kappa_tilde -> 0, so zero and negative arguments are
    rejected.
    """
    kt = float(kappa_tilde)
    if kt <= 0.0:
        raise DomainError(f"elliptic_ke requires kappa_tilde > 0, got {kappa_tilde}")
    if kt > 1.0:
        raise DomainError(f"elliptic_ke requires kappa_tilde <= 1, got {kappa_tilde}")
    k_big, e_big = _kernels.agm_ke_kernel(kt)
    kappa = math.sqrt((1.0 - kt) * (1.0 + kt))
    return EllipticPair(k_big=k_big, e_big=e_big, kappa=kappa, kappa_tilde=kt)
