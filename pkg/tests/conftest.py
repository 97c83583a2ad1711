"""Shared fixtures and construction helpers for the test suite."""

import numpy as np
import pytest
from scipy.linalg import expm

from cavent.gaussian import TwoModeCovariance

# commutator form in the (x1, p1, x2, p2) ordering
J4 = np.array([[0, 1, 0, 0],
               [-1, 0, 0, 0],
               [0, 0, 0, 1],
               [0, 0, -1, 0]], dtype=float)


def random_symplectic(rng: np.random.Generator, strength: float = 0.6) -> np.ndarray:
    """Random symplectic matrix exp(J A) with A symmetric."""
    a = rng.normal(scale=strength, size=(4, 4))
    a = 0.5 * (a + a.T)
    return expm(J4 @ a)


def random_covariance(rng: np.random.Generator, max_theta: float = 4.0,
                      strength: float = 0.6) -> TwoModeCovariance:
    """Random valid covariance: symplectic image of a thermal product state."""
    th1 = rng.uniform(1.0, max_theta)
    th2 = rng.uniform(1.0, max_theta)
    s = random_symplectic(rng, strength)
    q0 = np.diag([th1 / 2, th1 / 2, th2 / 2, th2 / 2])
    return TwoModeCovariance(s @ q0 @ s.T)


def random_pure_covariance(rng: np.random.Generator,
                           strength: float = 0.6) -> TwoModeCovariance:
    """Random pure-state covariance: symplectic image of the vacuum."""
    s = random_symplectic(rng, strength)
    return TwoModeCovariance(0.5 * s @ s.T)


def local_rotation(phi1: float, phi2: float) -> np.ndarray:
    """Independent phase-plane rotations of the two modes."""
    def rot(phi):
        c, s = np.cos(phi), np.sin(phi)
        return np.array([[c, s], [-s, c]])

    out = np.zeros((4, 4))
    out[:2, :2] = rot(phi1)
    out[2:, 2:] = rot(phi2)
    return out


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
