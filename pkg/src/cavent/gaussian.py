"""Two-mode Gaussian state machinery.

Covariance matrices are real symmetric 4x4 in the quadrature ordering
(x1, p1, x2, p2) with hbar = 1, so the vacuum is diag(1/2, 1/2, 1/2, 1/2).
This module provides the covariance data model, purities, the block-form
(Frobenius) inverse, the two quadratic universal invariants, the symplectic
eigenvalues, and the conversion between annihilation-operator second moments
and covariance matrices.

Tolerances on the physical inequalities are relative to the scale of the
matrix (entries of propagated high-temperature states grow exponentially, so
absolute thresholds would be meaningless there).
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidCovarianceError,
    OracleMismatchError,
    SingularMatrixError,
    UncertaintyViolationError,
)

__all__ = [
    "TwoModeCovariance",
    "SecondMoments",
    "SymplecticSpectrum",
    "purity",
    "single_mode_purity",
    "frobenius_inverse",
    "universal_invariants",
    "symplectic_spectrum",
    "moments_to_covariance",
    "covariance_to_moments",
]

UNCERTAINTY_TOL = 1e-9


def _scale(q: np.ndarray) -> float:
    """Roundoff amplification scale for determinant-level identities."""
    m = float(np.abs(q).max())
    return max(1.0, m * m)


@dataclass(frozen=True)
class TwoModeCovariance:
    """Symmetric positive-definite 4x4 covariance matrix, ordering (x1,p1,x2,p2).

    ``tol`` is the relative allowance on the uncertainty inequalities;
    the default covers double-precision roundoff.  States produced by
    approximate dynamics (terms of a known order dropped) may construct with
    a correspondingly looser value.
    """

    q: np.ndarray
    tol: float = UNCERTAINTY_TOL

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        if q.shape != (4, 4):
            raise InvalidCovarianceError(f"covariance must be 4x4, got {q.shape}")
        q = 0.5 * (q + q.T)  # stored exactly symmetric
        q.flags.writeable = False
        object.__setattr__(self, "q", q)
        self._validate()

    def _validate(self):
        q = self.q
        if not np.all(np.isfinite(q)):
            raise InvalidCovarianceError("covariance has non-finite entries")
        # positive definiteness via leading principal minors
        for k in range(1, 5):
            if np.linalg.det(q[:k, :k]) <= 0.0:
                raise InvalidCovarianceError(
                    f"leading principal minor {k} is not positive")
        d2, d0 = _invariants_direct(q)
        tol = self.tol * _scale(q)
        root = 2.0 * np.sqrt(max(d0, 0.0))
        if d0 <= 0.0 or d2 < root - tol or root < 0.5 - tol:
            raise UncertaintyViolationError(
                f"two-mode uncertainty violated: D2={d2}, 2*sqrt(D0)={root}")

    # -- block access ------------------------------------------------------
    @property
    def q11(self) -> np.ndarray:
        return self.q[:2, :2]

    @property
    def q22(self) -> np.ndarray:
        return self.q[2:, 2:]

    @property
    def q12(self) -> np.ndarray:
        return self.q[:2, 2:]

    @property
    def q21(self) -> np.ndarray:
        return self.q[2:, :2]

    # -- constructors --------------------------------------------------------
    @classmethod
    def vacuum(cls) -> "TwoModeCovariance":
        return cls(0.5 * np.eye(4))

    @classmethod
    def thermal(cls, theta1: float, theta2: float) -> "TwoModeCovariance":
        """Product of thermal states with variances theta_k / 2 (theta >= 1)."""
        return cls(np.diag([theta1 / 2, theta1 / 2, theta2 / 2, theta2 / 2]))

    def upper_triangle(self) -> np.ndarray:
        """Canonical 10-number serialization: row-major upper triangle."""
        idx = np.triu_indices(4)
        return self.q[idx]

    @classmethod
    def from_upper_triangle(cls, values) -> "TwoModeCovariance":
        vals = np.asarray(values, dtype=float)
        if vals.shape != (10,):
            raise InvalidCovarianceError("upper-triangle serialization needs 10 numbers")
        q = np.zeros((4, 4))
        q[np.triu_indices(4)] = vals
        q = q + np.triu(q, 1).T
        return cls(q)


@dataclass(frozen=True)
class SecondMoments:
    """Annihilation-operator second moments of a mode pair (central values).

    a_rs = <a_r a_s>, adag_r_a_s = <a_r^+ a_s>, n_r = <a_r^+ a_r>,
    n_s = <a_s^+ a_s>, a_rr = <a_r^2>, a_ss = <a_s^2>.
    """

    a_rs: complex = 0.0
    adag_r_a_s: complex = 0.0
    n_r: float = 0.0
    n_s: float = 0.0
    a_rr: complex = 0.0
    a_ss: complex = 0.0

    def __post_init__(self):
        for name in ("n_r", "n_s"):
            v = getattr(self, name)
            if v < -1e-12:
                raise InvalidCovarianceError("mode occupations must be non-negative")
            if v < 0.0:  # roundoff from a covariance round-trip
                object.__setattr__(self, name, 0.0)


@dataclass(frozen=True)
class SymplecticSpectrum:
    """Symplectic eigenvalues kappa1 >= kappa2 >= 1/2 and the invariants."""

    kappa1: float
    kappa2: float
    d2: float
    d0: float


def purity(cov: TwoModeCovariance) -> float:
    """Tr rho^2 of the Gaussian state: [det(2Q)]^(-1/2)."""
    det2q = float(np.linalg.det(2.0 * cov.q))
    if det2q <= 0.0:
        raise SingularMatrixError(f"det(2Q) = {det2q} is not positive")
    return 1.0 / np.sqrt(det2q)


def single_mode_purity(cov: TwoModeCovariance, mode: int) -> float:
    """Purity of the reduced state of one mode: [4 det Q_kk]^(-1/2)."""
    if mode not in (1, 2):
        raise ValueError(f"mode must be 1 or 2, got {mode}")
    block = cov.q11 if mode == 1 else cov.q22
    det4 = 4.0 * float(np.linalg.det(block))
    if det4 <= 0.0:
        raise SingularMatrixError(f"4 det Q_{mode}{mode} = {det4} is not positive")
    return 1.0 / np.sqrt(det4)


def frobenius_inverse(cov: TwoModeCovariance) -> np.ndarray:
    """Inverse of the covariance matrix assembled block-wise.

    Uses the Schur complement Q* = Q22 - Q21 Q11^-1 Q12; both Q11 and Q*
    must be invertible.
    """
    q11, q12, q21, q22 = cov.q11, cov.q12, cov.q21, cov.q22
    if abs(np.linalg.det(q11)) < 1e-300:
        raise SingularMatrixError("Q11 block is singular")
    inv11 = np.linalg.inv(q11)
    q_star = q22 - q21 @ inv11 @ q12
    if abs(np.linalg.det(q_star)) < 1e-300:
        raise SingularMatrixError("Schur complement block is singular")
    inv_star = np.linalg.inv(q_star)
    out = np.empty((4, 4))
    out[:2, :2] = inv11 + inv11 @ q12 @ inv_star @ q21 @ inv11
    out[:2, 2:] = -inv11 @ q12 @ inv_star
    out[2:, :2] = -inv_star @ q21 @ inv11
    out[2:, 2:] = inv_star
    return out


def _invariants_direct(q: np.ndarray) -> tuple[float, float]:
    """(D2, D0) from block determinants and the direct 4x4 determinant."""
    d2 = (np.linalg.det(q[:2, :2]) + np.linalg.det(q[2:, 2:])
          + 2.0 * np.linalg.det(q[:2, 2:]))
    d0 = np.linalg.det(q)
    return float(d2), float(d0)


def _det_expansion(q: np.ndarray) -> float:
    """det Q written out in the 17 covariance monomials.

    Transcription-checked against the direct determinant at every call site;
    same-mode x-p covariances enter as the symmetrized values stored in Q.
    """
    xx1, xp1, pp1 = q[0, 0], q[0, 1], q[1, 1]
    xx2, xp2, pp2 = q[2, 2], q[2, 3], q[3, 3]
    x1x2, x1p2 = q[0, 2], q[0, 3]
    p1x2, p1p2 = q[1, 2], q[1, 3]
    return (
        (pp1 * pp2 - p1p2 ** 2) * (xx1 * xx2 - x1x2 ** 2)
        + (xp1 * xp2 - x1p2 * p1x2) ** 2
        - xx2 * pp1 * x1p2 ** 2
        - xx1 * pp2 * p1x2 ** 2
        - xx2 * pp2 * xp1 ** 2
        - xx1 * pp1 * xp2 ** 2
        + 2.0 * x1x2 * (pp1 * x1p2 * xp2 + pp2 * p1x2 * xp1)
        + 2.0 * p1p2 * (xx2 * x1p2 * xp1 + xx1 * p1x2 * xp2)
        - 2.0 * x1x2 * p1p2 * (xp1 * xp2 + x1p2 * p1x2)
    )


def universal_invariants(cov: TwoModeCovariance) -> tuple[float, float]:
    """Quadratic universal invariants (D2, D0) of the two-mode state.

    D2 = det Q11 + det Q22 + 2 det Q12; D0 = det Q is evaluated both through
    the explicit 17-term covariance expansion and the direct determinant, and
    the two must agree (built-in transcription self-check).
    """
    d2, d0 = _invariants_direct(cov.q)
    d0_terms = _det_expansion(cov.q)
    tol = 1e-10 * _scale(cov.q) ** 2
    if abs(d0_terms - d0) > max(tol, 1e-10 * max(abs(d0), 1.0)):
        raise OracleMismatchError(
            "determinant expansion disagrees with direct determinant: "
            f"{d0_terms} vs {d0} on\n{cov.q}")
    return d2, d0


def symplectic_spectrum(cov: TwoModeCovariance) -> SymplecticSpectrum:
    """Symplectic eigenvalues from the biquadratic invariant equation.

    kappa_{1,2} = [sqrt(D2 + 2 sqrt(D0)) +/- sqrt(D2 - 2 sqrt(D0))] / 2;
    values below 1/2 by less than the roundoff allowance are clamped.
    """
    d2, d0 = universal_invariants(cov)
    tol = max(UNCERTAINTY_TOL, cov.tol) * _scale(cov.q)
    if d0 < 0.0:
        raise UncertaintyViolationError(f"negative determinant D0 = {d0}")
    root = 2.0 * np.sqrt(d0)
    if d2 < root - tol or root < 0.5 - tol:
        raise UncertaintyViolationError(
            f"uncertainty relation violated: D2={d2}, 2*sqrt(D0)={root}")
    plus = np.sqrt(max(d2 + root, 0.0))
    minus = np.sqrt(max(d2 - root, 0.0))
    k1 = 0.5 * (plus + minus)
    k2 = 0.5 * (plus - minus)
    k1 = max(k1, 0.5)
    k2 = max(k2, 0.5)
    return SymplecticSpectrum(kappa1=k1, kappa2=k2, d2=d2, d0=d0)


def moments_to_covariance(m: SecondMoments) -> TwoModeCovariance:
    """Covariance matrix of the pair from annihilation-operator moments.

    Real parts feed the x-x and p-p covariances, imaginary parts the x-p
    cross covariances; the vacuum contribution 1/2 sits on the diagonal.
    Exact inverse of :func:`covariance_to_moments`.
    """
    a_rr, a_ss = complex(m.a_rr), complex(m.a_ss)
    alpha, beta = complex(m.a_rs), complex(m.adag_r_a_s)
    q = np.empty((4, 4))
    q[0, 0] = m.n_r + 0.5 + a_rr.real
    q[1, 1] = m.n_r + 0.5 - a_rr.real
    q[0, 1] = q[1, 0] = a_rr.imag
    q[2, 2] = m.n_s + 0.5 + a_ss.real
    q[3, 3] = m.n_s + 0.5 - a_ss.real
    q[2, 3] = q[3, 2] = a_ss.imag
    q[0, 2] = q[2, 0] = alpha.real + beta.real
    q[1, 3] = q[3, 1] = beta.real - alpha.real
    q[0, 3] = q[3, 0] = alpha.imag + beta.imag
    q[1, 2] = q[2, 1] = alpha.imag - beta.imag
    return TwoModeCovariance(q)


def covariance_to_moments(cov: TwoModeCovariance) -> SecondMoments:
    """Annihilation-operator second moments of a covariance matrix."""
    q = cov.q
    n_r = 0.5 * (q[0, 0] + q[1, 1]) - 0.5
    n_s = 0.5 * (q[2, 2] + q[3, 3]) - 0.5
    a_rr = complex(0.5 * (q[0, 0] - q[1, 1]), q[0, 1])
    a_ss = complex(0.5 * (q[2, 2] - q[3, 3]), q[2, 3])
    a_rs = complex(0.5 * (q[0, 2] - q[1, 3]), 0.5 * (q[0, 3] + q[1, 2]))
    adag = complex(0.5 * (q[0, 2] + q[1, 3]), 0.5 * (q[0, 3] - q[1, 2]))
    return SecondMoments(a_rs=a_rs, adag_r_a_s=adag, n_r=n_r, n_s=n_s,
                         a_rr=a_rr, a_ss=a_ss)
