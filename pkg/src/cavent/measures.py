"""Entanglement measures evaluated on two-mode covariance data.

Trace-based covariance coefficients Y and Ytilde, the determinant-based
purity coefficient Ltilde with its group-correlation companion K^2, the
normalized Hilbert-Schmidt distance Z, and the entropic index of correlation
I_c with its compact form J_c = 1 - exp(-I_c).

Y and Ytilde are meaningful for arbitrary states whose second moments exist;
the determinant and entropic measures assume a Gaussian state, and callers
evaluating them on non-Gaussian input should flag the result as
Gaussian-equivalent (see :class:`MeasureSet.gaussian_equivalent`).
"""

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import ApproximationDomainWarning, DomainError, SingularMatrixError
from .gaussian import TwoModeCovariance, symplectic_spectrum

__all__ = [
    "MeasureSet",
    "covariance_coefficients",
    "purity_coefficient",
    "group_correlation",
    "k_tilde_squared",
    "linear_entropy_measures",
    "distance_coefficient",
    "gaussian_entropy_two_mode",
    "single_mode_entropy",
    "index_of_correlation",
    "compact_entropy",
    "small_entanglement_approx",
    "measure_set",
]


@dataclass(frozen=True)
class MeasureSet:
    """All entanglement measures of a mode pair at one instant.

    ``gaussian_equivalent`` marks values of the determinant/entropy measures
    computed from the covariance matrix of a non-Gaussian state.
    """

    y: float
    y_tilde: float
    l_tilde: float
    k2: float
    z: float
    i_c: float
    j_c: float
    gaussian_equivalent: bool = False

    def as_dict(self) -> dict:
        return {
            "Y": self.y, "Ytilde": self.y_tilde, "Y2": self.y * self.y,
            "Ltilde": self.l_tilde, "K2": self.k2, "Z": self.z,
            "Ic": self.i_c, "Jc": self.j_c,
        }


def covariance_coefficients(cov: TwoModeCovariance) -> tuple[float, float]:
    """Trace-based coefficients (Y, Ytilde) of the off-diagonal block.

    Y^2 = Tr(Q12 Q21) / (Tr Q11 Tr Q22); Ytilde = 2 sqrt(Tr(Q12 Q21)) / Tr Q.
    Both vanish iff the off-diagonal block vanishes.
    """
    t12 = float(np.sum(cov.q12 * cov.q12))  # Tr(Q12 Q21), Q21 = Q12^T
    t11 = float(np.trace(cov.q11))
    t22 = float(np.trace(cov.q22))
    y = np.sqrt(t12 / (t11 * t22))
    y_tilde = 2.0 * np.sqrt(t12) / (t11 + t22)
    return y, y_tilde


def _det_ratio(cov: TwoModeCovariance) -> float:
    """det Q / (det Q11 det Q22), the square of the purity ratio."""
    d11 = float(np.linalg.det(cov.q11))
    d22 = float(np.linalg.det(cov.q22))
    if d11 * d22 <= 0.0:
        raise SingularMatrixError("non-positive single-mode block determinant")
    return float(np.linalg.det(cov.q)) / (d11 * d22)


def purity_coefficient(cov: TwoModeCovariance) -> float:
    """Normalized purity entanglement coefficient Ltilde = 1 - mu1 mu2 / mu.

    For Gaussian states this is 1 - sqrt(det Q / (det Q11 det Q22)); equals
    1 - mu1^2 when the composite state is pure.
    """
    return 1.0 - np.sqrt(max(_det_ratio(cov), 0.0))


def group_correlation(cov: TwoModeCovariance) -> float:
    """Group correlation coefficient K^2 = 1 - det Q/(det Q11 det Q22)."""
    return 1.0 - _det_ratio(cov)


def k_tilde_squared(mu: float, mu1: float, mu2: float) -> float:
    """Purity-based group correlation 1 - (mu1 mu2 / mu)^2 for any state."""
    _check_purities(mu, mu1, mu2)
    ratio = mu1 * mu2 / mu
    if ratio > 1.0 + 1e-9:
        raise DomainError(f"unphysical purity triple: mu1 mu2 / mu = {ratio}")
    return 1.0 - ratio * ratio


def linear_entropy_measures(mu: float, mu1: float, mu2: float) -> tuple[float, float, float]:
    """(L, L_fact, Ltilde) from the three purities.

    L = 1 + mu - mu1 - mu2 is the raw linear entropy of entanglement; it is
    positive even for factorized mixed states, where it reduces to
    L_fact = (1 - mu1)(1 - mu2).  Ltilde = 1 - mu1 mu2 / mu removes that
    pathology.
    """
    _check_purities(mu, mu1, mu2)
    l_raw = 1.0 + mu - mu1 - mu2
    l_fact = (1.0 - mu1) * (1.0 - mu2)
    l_tilde = 1.0 - mu1 * mu2 / mu
    return l_raw, l_fact, l_tilde


def _check_purities(mu, mu1, mu2):
    for name, v in (("mu", mu), ("mu1", mu1), ("mu2", mu2)):
        if not 0.0 < v <= 1.0 + 1e-12:
            raise DomainError(f"purity {name} = {v} outside (0, 1]")


def distance_coefficient(cov: TwoModeCovariance) -> float:
    """Normalized Hilbert-Schmidt distance to the product of the marginals.

    Z = 1 + sqrt(det Q / (det Q11 det Q22)) - 2 sqrt(det(2Q) / det Q_z)
    where Q_z doubles the diagonal blocks of Q and keeps the off-diagonal
    ones.  Zero iff the off-diagonal block vanishes; empirically in [0, 1].
    """
    qz = cov.q.copy()
    qz[:2, :2] *= 2.0
    qz[2:, 2:] *= 2.0
    det_qz = float(np.linalg.det(qz))
    if det_qz <= 0.0:
        raise SingularMatrixError("det(Q + Q_d) is not positive")
    det2q = float(np.linalg.det(2.0 * cov.q))
    return 1.0 + np.sqrt(max(_det_ratio(cov), 0.0)) - 2.0 * np.sqrt(det2q / det_qz)


def _entropy_term(kappa: float) -> float:
    """(k+1/2)ln(k+1/2) - (k-1/2)ln(k-1/2), with x ln x -> 0 at x = 0."""
    up = kappa + 0.5
    dn = kappa - 0.5
    out = up * np.log(up)
    if dn > 0.0:
        out -= dn * np.log(dn)
    return float(out)


def gaussian_entropy_two_mode(cov: TwoModeCovariance) -> float:
    """Von Neumann entropy of the two-mode Gaussian state."""
    spec = symplectic_spectrum(cov)
    return _entropy_term(spec.kappa1) + _entropy_term(spec.kappa2)


def single_mode_entropy(cov: TwoModeCovariance, mode: int) -> float:
    """Entropy of the reduced single-mode state, kappa = sqrt(det Q_kk)."""
    if mode not in (1, 2):
        raise ValueError(f"mode must be 1 or 2, got {mode}")
    block = cov.q11 if mode == 1 else cov.q22
    delta = float(np.linalg.det(block))
    scale = max(1.0, float(np.abs(block).max()) ** 2)
    if delta < 0.25 - 1e-9 * scale:
        raise SingularMatrixError(
            f"single-mode uncertainty violated: det Q_{mode}{mode} = {delta}")
    return _entropy_term(np.sqrt(max(delta, 0.25)))


def index_of_correlation(cov: TwoModeCovariance) -> float:
    """Entropic index of correlation I_c = S_1 + S_2 - S_12."""
    s1 = single_mode_entropy(cov, 1)
    s2 = single_mode_entropy(cov, 2)
    return s1 + s2 - gaussian_entropy_two_mode(cov)


def compact_entropy(i_c: float) -> float:
    """Compact entropy J_c = 1 - exp(-I_c)."""
    if i_c < 0.0:
        raise DomainError(f"index of correlation must be >= 0, got {i_c}")
    return -np.expm1(-i_c)


def small_entanglement_approx(cov: TwoModeCovariance) -> float:
    """Weak-correlation approximation Ltilde ~ Tr(Q12 Q22^-1 Q21 Q11^-1) / 2.

    Diagnostic only: exposes the trace-vs-determinant sensitivity gap of the
    measures.  Warns when the matrix product is not small (spectral radius
    >= 0.1), where the approximation has no accuracy claim.
    """
    prod = cov.q12 @ np.linalg.inv(cov.q22) @ cov.q21 @ np.linalg.inv(cov.q11)
    radius = float(np.max(np.abs(np.linalg.eigvals(prod))))
    if radius >= 0.1:
        warnings.warn(
            f"small-entanglement approximation outside its domain "
            f"(spectral radius {radius:.3g} >= 0.1)", ApproximationDomainWarning,
            stacklevel=2)
    return 0.5 * float(np.trace(prod))


def measure_set(cov: TwoModeCovariance, gaussian_equivalent: bool = False) -> MeasureSet:
    """Evaluate the full set of measures on one covariance matrix."""
    y, y_tilde = covariance_coefficients(cov)
    l_tilde = purity_coefficient(cov)
    k2 = l_tilde * (2.0 - l_tilde)
    z = distance_coefficient(cov)
    i_c = max(index_of_correlation(cov), 0.0)
    return MeasureSet(y=y, y_tilde=y_tilde, l_tilde=l_tilde, k2=k2, z=z,
                      i_c=i_c, j_c=compact_entropy(i_c),
                      gaussian_equivalent=gaussian_equivalent)


def flag_gaussian_equivalent(ms: MeasureSet) -> MeasureSet:
    return replace(ms, gaussian_equivalent=True)
