"""Two resonant modes of a 3D cavity with a vibrating wall.

A rectangular cavity whose spectrum contains an accidental degeneracy
omega_3 = 3 omega_1 couples exactly two modes when one wall vibrates at twice
the fundamental.  Frequencies are normalized to omega_1, time is split into a
fast phase and the slow amplitude time tau = eps*t/2, and the coupling
strength enters through nu = 96 mu^2 with rho = sqrt(2 nu - 1).

Two closed-form regimes are implemented: exact (symmetric) resonance and the
detuning-compensated asymmetric resonance (terms of order 1/nu^2 dropped, so
the latter refuses nu < 20).  A fixed-step RK4 fundamental-matrix integrator
of the exact equations of motion serves as the independent oracle for the
closed forms.

Transfer matrices act on the raw quadratures (x1, p1, x3, p3); covariance
matrices handed to the measure machinery are built in the normalized
variables sqrt(omega_k) x_k, p_k / sqrt(omega_k).
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels, measures
from .errors import DomainError, OracleMismatchError
from .gaussian import TwoModeCovariance
from .measures import MeasureSet

__all__ = [
    "Regime",
    "Cavity3DParams",
    "SlowTime",
    "mode_frequency",
    "coupling_coefficient",
    "nu_from_modes",
    "equal_temperature_theta3",
    "symmetric_transfer_matrix",
    "symmetric_energies",
    "symmetric_entanglement",
    "symmetric_intermediate_minima",
    "asymmetric_transfer_matrix",
    "asymmetric_energies",
    "asymmetric_entanglement",
    "ode_oracle",
    "propagated_covariance",
    "initial_covariance",
]

#: normalization diag(sqrt(w1), 1/sqrt(w1), sqrt(w3), 1/sqrt(w3)), w = (1, 3)
_NORM = np.diag([1.0, 1.0, math.sqrt(3.0), 1.0 / math.sqrt(3.0)])
_NORM_INV = np.diag([1.0, 1.0, 1.0 / math.sqrt(3.0), math.sqrt(3.0)])


class Regime(enum.Enum):
    SYMMETRIC = "symmetric"
    ASYMMETRIC = "asymmetric"


@dataclass(frozen=True)
class Cavity3DParams:
    """Parameters of the resonant mode pair.

    nu > 1/2 so the slow Rabi-type rate rho = sqrt(2 nu - 1) is real;
    theta_k = coth(k beta / 2) >= 1 are the initial thermal parameters
    (mean photon numbers (theta_k - 1)/2); epsilon is the relative wall
    oscillation amplitude, used by the ODE oracle and to map slow time to
    the fast phase.
    """

    nu: float
    theta1: float = 1.0
    theta3: float = 1.0
    regime: Regime = Regime.SYMMETRIC
    epsilon: float = 0.0

    def __post_init__(self):
        if self.nu <= 0.5:
            raise DomainError(f"nu must exceed 1/2 (rho real), got {self.nu}")
        if self.theta1 < 1.0 or self.theta3 < 1.0:
            raise DomainError("thermal parameters theta_k must be >= 1")
        if self.regime is Regime.ASYMMETRIC and self.nu < 20.0:
            raise DomainError(
                f"asymmetric closed forms drop O(1/nu^2) terms; nu = {self.nu} < 20")

    @property
    def mu_coupling(self) -> float:
        return math.sqrt(self.nu / 96.0)

    @property
    def rho(self) -> float:
        return math.sqrt(2.0 * self.nu - 1.0)


@dataclass(frozen=True)
class SlowTime:
    """Slow amplitude time tau = eps*t/2 plus an optional explicit fast phase.

    The fast time is an independent variable of the closed forms; when not
    given it defaults to 2 tau / eps (the physical lock between the two
    scales) or to 0 when eps = 0.
    """

    tau: float
    fast_t: float | None = None

    def __post_init__(self):
        if self.tau < 0.0:
            raise DomainError(f"slow time must be >= 0, got {self.tau}")

    def resolve_fast(self, epsilon: float) -> float:
        if self.fast_t is not None:
            return self.fast_t
        if epsilon > 0.0:
            return 2.0 * self.tau / epsilon
        return 0.0


def mode_frequency(kx: int, ky: int, kz: int, lx: float, ly: float, lz: float) -> float:
    """Eigenfrequency pi * sqrt((kx/Lx)^2 + (ky/Ly)^2 + (kz/Lz)^2)."""
    if lx <= 0.0 or ly <= 0.0 or lz <= 0.0:
        raise DomainError("cavity dimensions must be positive")
    if kx < 0 or ky < 0 or kz < 0 or (kx == ky == kz == 0):
        raise DomainError("mode indices must be non-negative and not all zero")
    return math.pi * math.sqrt((kx / lx) ** 2 + (ky / ly) ** 2 + (kz / lz) ** 2)


def coupling_coefficient(k: tuple[int, int, int], j: tuple[int, int, int]) -> float:
    """Intermode coupling for wall motion along x.

    (-1)^(kx+jx) * 2 kx jx / (jx^2 - kx^2) when the transverse indices match,
    zero otherwise; antisymmetric under swapping the modes.
    """
    if k == j:
        raise DomainError("coupling coefficient requires distinct modes")
    if k[1] != j[1] or k[2] != j[2]:
        return 0.0
    kx, jx = k[0], j[0]
    sign = -1.0 if (kx + jx) % 2 else 1.0
    return sign * 2.0 * kx * jx / (jx * jx - kx * kx)


def nu_from_modes(kx: int, jx: int) -> float:
    """nu = 96 mu^2 with mu = jx / (12 kx) for the resonant pair."""
    if kx < 1 or jx < 1:
        raise DomainError("mode indices must be >= 1")
    mu = jx / (12.0 * kx)
    return 96.0 * mu * mu


def equal_temperature_theta3(theta1: float) -> float:
    """theta3 when both modes start at the same physical temperature."""
    if theta1 < 1.0:
        raise DomainError("theta1 must be >= 1")
    return theta1 * (theta1 ** 2 + 3.0) / (3.0 * theta1 ** 2 + 1.0)


def _cs(k: int, arg: float, t: float, wbar: float):
    """Hyperbolic-trigonometric envelope pairs C_k^+-, S_k^+-."""
    ch, sh = math.cosh(arg), math.sinh(arg)
    c, s = math.cos(k * wbar * t), math.sin(k * wbar * t)
    return ch * c + sh * s, ch * c - sh * s, sh * c + ch * s, sh * c - ch * s


def symmetric_transfer_matrix(p: Cavity3DParams, st: SlowTime) -> np.ndarray:
    """Quadrature transfer matrix (x1,p1,x3,p3)(0) -> t at exact resonance.

    Exactly symplectic; the fast phase only rotates each mode's phase plane,
    so every entanglement measure depends on the slow time alone.
    """
    if p.regime is not Regime.SYMMETRIC:
        raise DomainError("symmetric transfer matrix requires the symmetric regime")
    tau = st.tau
    t = st.resolve_fast(p.epsilon)
    mu, rho = p.mu_coupling, p.rho
    cr = math.cos(rho * tau)
    sr = math.sin(rho * tau) / rho
    c1p, c1m, s1p, s1m = _cs(1, tau, t, 1.0)
    c3p, c3m, s3p, s3m = _cs(3, tau, t, 1.0)
    m = np.empty((4, 4))
    m[0] = (c1m * cr + s1m * sr, -(s1m * cr + c1m * sr),
            24.0 * mu * sr * s1m, 8.0 * mu * sr * c1m)
    m[1] = (-(s1p * cr + c1p * sr), c1p * cr + s1p * sr,
            -24.0 * mu * sr * c1p, -8.0 * mu * sr * s1p)
    m[2] = (-8.0 * mu * sr * s3p, 8.0 * mu * sr * c3p,
            c3p * cr - s3p * sr, (s3p * cr - c3p * sr) / 3.0)
    m[3] = (-24.0 * mu * sr * c3m, 24.0 * mu * sr * s3m,
            3.0 * (s3m * cr - c3m * sr), c3m * cr - s3m * sr)
    return m


def initial_covariance(p: Cavity3DParams) -> TwoModeCovariance:
    """Thermal product state diag(theta1, theta1, theta3, theta3)/2
    in normalized variables."""
    return TwoModeCovariance.thermal(p.theta1, p.theta3)


def propagated_covariance(p: Cavity3DParams, st: SlowTime) -> TwoModeCovariance:
    """Initial thermal covariance pushed through the regime's transfer matrix,
    expressed in normalized variables.

    The asymmetric transfer matrix drops O(1/nu^2) terms, so the propagated
    state can violate the uncertainty floor at that order; the covariance is
    built with the matching allowance there.
    """
    if p.regime is Regime.SYMMETRIC:
        m = symmetric_transfer_matrix(p, st)
        tol = 1e-9
    else:
        m = asymmetric_transfer_matrix(p, st)
        tol = 10.0 / p.nu ** 2
    mn = _NORM @ m @ _NORM_INV
    q0 = initial_covariance(p).q
    return TwoModeCovariance(mn @ q0 @ mn.T, tol=tol)


def symmetric_energies(p: Cavity3DParams, tau: float) -> tuple[float, float]:
    """Normalized mean energies (E1, E3) = <p^2 + w^2 x^2>/(2w) per mode."""
    if p.regime is not Regime.SYMMETRIC:
        raise DomainError("symmetric energies require the symmetric regime")
    rho = p.rho
    th1, th3 = p.theta1, p.theta3
    t31, t13 = th3 / th1, th1 / th3
    s2 = math.sin(rho * tau) ** 2
    c2 = math.cos(rho * tau) ** 2
    ch2, sh2 = math.cosh(2.0 * tau), math.sinh(2.0 * tau)
    s2r = math.sin(2.0 * rho * tau)
    e1 = th1 / 2.0 * (ch2 * (s2 / rho ** 2 * (1.0 + 2.0 * p.nu * t31) + c2)
                      + sh2 * s2r / rho)
    e3 = th3 / 2.0 * (ch2 * (s2 / rho ** 2 * (1.0 + 2.0 * p.nu * t13) + c2)
                      - sh2 * s2r / rho)
    return e1, e3


def _symmetric_g_squared(nu: float, ratio: float, tau: float) -> float:
    """Single-mode determinant growth factor g^2 (ratio = theta_other/theta_self)."""
    rho = math.sqrt(2.0 * nu - 1.0)
    c4 = math.cos(rho * tau) ** 4
    s4 = math.sin(rho * tau) ** 4
    s2r = math.sin(2.0 * rho * tau) ** 2
    return (c4 + s2r * (2.0 * nu * ratio - 1.0) / (2.0 * (2.0 * nu - 1.0))
            + s4 * ((2.0 * nu * ratio + 1.0) / (2.0 * nu - 1.0)) ** 2)


def _trace_f_symmetric(p: Cavity3DParams, tau: float) -> float:
    """Tr(Q12 Q21) of the normalized covariance at exact resonance."""
    rho, nu = p.rho, p.nu
    th1, th3 = p.theta1, p.theta3
    s2 = math.sin(rho * tau) ** 2
    c2 = math.cos(rho * tau) ** 2
    return (nu / (2.0 * nu - 1.0) * s2
            * (math.cosh(4.0 * tau) * (c2 * (th1 - th3) ** 2
                                       + s2 / rho ** 2 * (th1 + th3) ** 2)
               + math.sin(2.0 * rho * tau) / rho * math.sinh(4.0 * tau)
               * (th1 ** 2 - th3 ** 2)))


def _entropy_index_from_g(th1, g1, th3, g3) -> float:
    """Index of correlation from the determinant growth factors."""
    def xlx(v):
        return v * math.log(v) if v > 0.0 else 0.0

    total = 0.0
    for th, g in ((th1, g1), (th3, g3)):
        total += (xlx(th * g + 1.0) - xlx(th * g - 1.0)
                  - xlx(th + 1.0) + xlx(th - 1.0))
    return 0.5 * total


_CROSS_TOL = 1e-8


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _entropy_tol(cov: TwoModeCovariance) -> float:
    """Comparison floor for entropy-type measures.

    A pure state has a doubly degenerate symplectic spectrum; roundoff in the
    invariants splits it by ~sqrt(eps_machine) and x ln x turns that into a
    ~1e-6 entropy error, no matter how the computation is arranged.  The
    floor scales with the matrix magnitude like the underlying determinant
    roundoff does.
    """
    return 2e-6 * max(1.0, float(np.abs(cov.q).max()))


def symmetric_entanglement(p: Cavity3DParams, tau: float) -> MeasureSet:
    """All measures at exact resonance, closed forms cross-checked against
    the covariance pathway.

    The closed expressions (trace form F, determinant growth factors g_k)
    and the generic covariance-matrix evaluation must agree to 1e-8; a
    mismatch raises :class:`OracleMismatchError`.
    """
    if p.regime is not Regime.SYMMETRIC:
        raise DomainError("symmetric entanglement requires the symmetric regime")
    e1, e3 = symmetric_energies(p, tau)
    f_tr = _trace_f_symmetric(p, tau)
    y = math.sqrt(f_tr / (4.0 * e1 * e3))
    y_tilde = math.sqrt(f_tr) / (e1 + e3)
    g1 = math.sqrt(_symmetric_g_squared(p.nu, p.theta3 / p.theta1, tau))
    g3 = math.sqrt(_symmetric_g_squared(p.nu, p.theta1 / p.theta3, tau))
    l_tilde = 1.0 - 1.0 / (g1 * g3)
    k2 = l_tilde * (2.0 - l_tilde)
    i_c = max(_entropy_index_from_g(p.theta1, g1, p.theta3, g3), 0.0)
    j_c = measures.compact_entropy(i_c)

    cov = propagated_covariance(p, SlowTime(tau))
    generic = measures.measure_set(cov)
    ent_tol = _entropy_tol(cov)
    for name, closed, other, floor in (("Y", y, generic.y, 0.0),
                                       ("Ytilde", y_tilde, generic.y_tilde, 0.0),
                                       ("Ltilde", l_tilde, generic.l_tilde, 0.0),
                                       ("Ic", i_c, generic.i_c, ent_tol),
                                       ("Jc", j_c, generic.j_c, ent_tol)):
        if not (_close(closed, other, _CROSS_TOL) or abs(closed - other) <= floor):
            raise OracleMismatchError(
                f"symmetric {name}: closed form {closed} vs covariance {other} "
                f"at tau={tau}, nu={p.nu}, theta=({p.theta1},{p.theta3})")
    return MeasureSet(y=y, y_tilde=y_tilde, l_tilde=l_tilde, k2=k2,
                      z=generic.z, i_c=i_c, j_c=j_c)


def symmetric_intermediate_minima(p: Cavity3DParams):
    """Intermediate minima of the determinant measures and the envelope of the
    trace measure at those instants.

    The extra minima sit where cos(rho tau) = 0 (between the exact zeros at
    rho tau = n pi).  Returns (Ltilde_min, Ic_min, envelope) with envelope(tau)
    = 2 exp(-4 tau) sqrt(Ltilde_min) bounding the trace coefficient there.
    """
    if p.regime is not Regime.SYMMETRIC:
        raise DomainError("intermediate minima require the symmetric regime")
    nu = p.nu
    t31 = p.theta3 / p.theta1
    t13 = p.theta1 / p.theta3
    l_min = (2.0 * nu * (t31 + t13 + 2.0)
             / (4.0 * nu ** 2 + 1.0 + 2.0 * nu * (t31 + t13)))
    ic_min = math.log1p(2.0 * nu * (t31 + t13 + 2.0) / (2.0 * nu - 1.0) ** 2)

    def envelope(tau: float) -> float:
        return 2.0 * math.exp(-4.0 * tau) * math.sqrt(l_min)

    return l_min, ic_min, envelope


def asymmetric_transfer_matrix(p: Cavity3DParams, st: SlowTime) -> np.ndarray:
    """Quadrature transfer matrix under compensated-detuning resonance.

    Valid to O(1/nu^2); symplecticity holds to that order relative to the
    squared matrix scale.  Both mode energies grow at the doubled rate
    4 R tau with R = 1 - 2/nu.
    """
    if p.regime is not Regime.ASYMMETRIC:
        raise DomainError("asymmetric transfer matrix requires the asymmetric regime")
    tau = st.tau
    t = st.resolve_fast(p.epsilon)
    wbar = 1.0 + p.epsilon  # detuning delta = epsilon under compensation
    nu, mu = p.nu, p.mu_coupling
    big_r = 1.0 - 2.0 / nu
    big_j = nu / 2.0 + 1.0
    arg = 2.0 * big_r * tau
    c1p, c1m, s1p, s1m = _cs(1, arg, t, wbar)
    c3p, c3m, s3p, s3m = _cs(3, arg, t, wbar)
    f1 = wbar * t - 2.0 * big_j * tau
    f3 = 3.0 * wbar * t - 2.0 * big_j * tau
    cf1, sf1, cf3, sf3 = math.cos(f1), math.sin(f1), math.cos(f3), math.sin(f3)
    q = 2.0 / nu
    pr = 1.0 - q
    m = np.empty((4, 4))
    m[0] = (pr * c1m + q * cf1, -(pr * s1m - q * sf1),
            (c1m - cf1) / (4.0 * mu), -(s1m + sf1) / (12.0 * mu))
    m[1] = (-(pr * s1p + q * sf1), pr * c1p + q * cf1,
            -(s1p - sf1) / (4.0 * mu), (c1p - cf1) / (12.0 * mu))
    m[2] = ((c3m - cf3) / (12.0 * mu), -(s3m + sf3) / (12.0 * mu),
            pr * cf3 + q * c3m, (pr * sf3 - q * s3m) / 3.0)
    m[3] = (-(s3p - sf3) / (4.0 * mu), (c3p - cf3) / (4.0 * mu),
            -3.0 * (pr * sf3 + q * s3p), pr * cf3 + q * c3p)
    return m


def _psi(big_r: float, big_j: float, tau: float) -> float:
    return math.cosh(2.0 * big_r * tau) * math.cos(2.0 * big_j * tau)


def asymmetric_energies(p: Cavity3DParams, tau: float) -> tuple[float, float]:
    """Normalized mean energies (E1, E3) in the asymmetric regime."""
    if p.regime is not Regime.ASYMMETRIC:
        raise DomainError("asymmetric energies require the asymmetric regime")
    nu = p.nu
    big_r, big_j = 1.0 - 2.0 / nu, nu / 2.0 + 1.0
    psi = _psi(big_r, big_j, tau)
    ch4 = math.cosh(4.0 * big_r * tau)
    e1 = (p.theta1 / 2.0 * ((1.0 - 4.0 / nu) * ch4 + 4.0 / nu * psi)
          + p.theta3 / nu * (ch4 + 1.0 - 2.0 * psi))
    e3 = (p.theta3 / 2.0 * (1.0 - 4.0 / nu + 4.0 / nu * psi)
          + p.theta1 / nu * (ch4 + 1.0 - 2.0 * psi))
    return e1, e3


def _trace_f_asymmetric(p: Cavity3DParams, tau: float) -> float:
    """Tr(Q12 Q21) of the normalized covariance, to O(1/nu^2)."""
    nu = p.nu
    th1, th3 = p.theta1, p.theta3
    big_r, big_j = 1.0 - 2.0 / nu, nu / 2.0 + 1.0
    c0 = math.cos(2.0 * big_j * tau)  # cos(phi_0), phi_0 = -2 J tau
    ch2 = math.cosh(2.0 * big_r * tau)
    ch4 = math.cosh(4.0 * big_r * tau)
    ch6 = math.cosh(6.0 * big_r * tau)
    sh2 = math.sinh(2.0 * big_r * tau)
    sh4 = math.sinh(4.0 * big_r * tau)
    q = 2.0 / nu
    part1 = (ch4 ** 2 + sh2 ** 2 - ch6 * c0
             + q * (c0 * (ch2 + 3.0 * ch6) - 2.0 * ch2 ** 2 * c0 ** 2
                    - 2.0 * ch4 - 2.0 * sh4 ** 2))
    part3 = (ch2 ** 2 - ch2 * c0
             + q * (c0 * (ch6 + 3.0 * ch2) - 2.0 * ch2 ** 2 * c0 ** 2
                    - 2.0 * ch4))
    part13 = (ch4 * (ch2 * c0 - 1.0)
              + q * (-2.0 * c0 * (ch6 + ch2) + 2.0 * ch2 ** 2 * c0 ** 2
                     + 4.0 * ch2 ** 4 - 2.0))
    return 2.0 / nu * (th1 ** 2 * part1 + th3 ** 2 * part3
                       + 2.0 * th1 * th3 * part13)


def _asymmetric_g_squared(nu: float, ratio: float, tau: float) -> float:
    big_r, big_j = 1.0 - 2.0 / nu, nu / 2.0 + 1.0
    psi = _psi(big_r, big_j, tau)
    return 1.0 + 8.0 / nu * ((1.0 - ratio) * psi - 1.0
                             + ratio * math.cosh(2.0 * big_r * tau) ** 2)


def asymmetric_entanglement(p: Cavity3DParams, tau: float) -> MeasureSet:
    """All measures in the asymmetric regime from the printed closed forms.

    The approximation error of the dropped O(1/nu^2) terms is inherited, so
    Y can overshoot 1 by a few percent at late times; values are reported
    as computed (no clamping).  Z comes from the propagated covariance.
    """
    if p.regime is not Regime.ASYMMETRIC:
        raise DomainError("asymmetric entanglement requires the asymmetric regime")
    e1, e3 = asymmetric_energies(p, tau)
    f_tr = _trace_f_asymmetric(p, tau)
    f_tr = max(f_tr, 0.0)
    y = math.sqrt(f_tr / (4.0 * e1 * e3))
    y_tilde = math.sqrt(f_tr) / (e1 + e3)
    g1 = math.sqrt(_asymmetric_g_squared(p.nu, p.theta3 / p.theta1, tau))
    g3 = math.sqrt(_asymmetric_g_squared(p.nu, p.theta1 / p.theta3, tau))
    l_tilde = 1.0 - 1.0 / (g1 * g3)
    k2 = l_tilde * (2.0 - l_tilde)
    i_c = max(_entropy_index_from_g(p.theta1, g1, p.theta3, g3), 0.0)
    j_c = measures.compact_entropy(i_c)
    cov = propagated_covariance(p, SlowTime(tau))
    z = measures.distance_coefficient(cov)
    return MeasureSet(y=y, y_tilde=y_tilde, l_tilde=l_tilde, k2=k2, z=z,
                      i_c=i_c, j_c=j_c)


def default_oracle_step(wbar: float = 1.0) -> float:
    """Default fixed RK4 step: 1000 samples per period of the fastest scale."""
    return 2.0 * math.pi / (1000.0 * 3.0 * wbar)


def ode_oracle(p: Cavity3DParams, t_end: float, step: float | None = None,
               eps_tilde: float = 0.0) -> np.ndarray:
    """Fundamental matrix of the exact equations of motion.

    Integrates the canonical first-order system equivalent to the coupled
    second-order equations (mode-1 parametric drive 4 eps cos, coupling
    24 mu eps in the second-order form) with a fixed-step RK4 scheme; used
    solely to validate the closed-form transfer matrices to O(eps).
    eps_tilde is the non-resonant mode-3 stiffness drive, zero by default
    (it does not affect the leading-order dynamics; the oracle exposes it so
    that claim can be tested).
    """
    if not 0.0 < p.epsilon <= 0.01:
        raise DomainError(
            f"oracle requires epsilon in (0, 0.01], got {p.epsilon}")
    if p.regime is Regime.SYMMETRIC:
        delta, dlt = 0.0, 0.0
    else:
        delta = p.epsilon
        dlt = 3.0 * delta - p.epsilon * p.nu / 2.0
    wbar = 1.0 + delta
    max_step = 2.0 * math.pi / (100.0 * 3.0 * wbar)
    if step is None:
        step = default_oracle_step(wbar)
    if step > max_step:
        raise DomainError(
            f"step {step} too large to resolve the fast oscillation "
            f"(need <= {max_step:.3e})")
    nsteps = max(int(math.ceil(t_end / step)), 1) if t_end > 0.0 else 0
    return _kernels.fundamental_rk4_3d(p.nu, p.epsilon, delta, dlt,
                                       eps_tilde, t_end, nsteps)
