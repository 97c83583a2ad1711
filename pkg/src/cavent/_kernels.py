"""Numerical kernels behind the public modules.

Everything here is scalar/array code compiled with ``numba.njit`` when
available (see :mod:`cavent._accel`); with ``CAVENT_DISABLE_NUMBA=1`` the
identical code runs as plain NumPy/Python.

Contents: log-gamma (Lanczos), digamma, Gauss hypergeometric 2F1 (direct
series, terminating polynomial, and the logarithmic z -> 1-z connection
formulas needed when c-a-b is a non-negative integer), complete elliptic
integrals K and E by the arithmetic-geometric mean, the first-column
hyperbolic-secant mode-mixing coefficients of the vibrating Fabry-Perot
cavity, and three fixed-step RK4 integrators (mode-mixing table, pair
second moments, 3D two-mode fundamental matrix).
"""

import math

import numpy as np

from ._accel import njit

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# Lanczos coefficients, g = 7, n = 9 (double precision accurate to ~1e-15)
_LG0 = 0.99999999999980993
_LG1 = 676.5203681218851
_LG2 = -1259.1392167224028
_LG3 = 771.32342877765313
_LG4 = -176.61502916214059
_LG5 = 12.507343278686905
_LG6 = -0.13857109526572012
_LG7 = 9.9843695780195716e-6
_LG8 = 1.5056327351493116e-7


@njit
def ln_gamma_kernel(x):
    """ln Gamma(x) for x > 0 via the Lanczos approximation."""
    shift = 0.0
    while x < 0.5:
        # Gamma(x) = Gamma(x + 1) / x
        shift -= math.log(x)
        x += 1.0
    y = x - 1.0
    acc = _LG0
    acc += _LG1 / (y + 1.0)
    acc += _LG2 / (y + 2.0)
    acc += _LG3 / (y + 3.0)
    acc += _LG4 / (y + 4.0)
    acc += _LG5 / (y + 5.0)
    acc += _LG6 / (y + 6.0)
    acc += _LG7 / (y + 7.0)
    acc += _LG8 / (y + 8.0)
    t = y + 7.5
    return shift + _HALF_LOG_2PI + (y + 0.5) * math.log(t) - t + math.log(acc)


@njit
def gammaln_signed(x):
    """(ln|Gamma(x)|, sign) for non-pole x, negatives via reflection."""
    if x > 0.0:
        return ln_gamma_kernel(x), 1.0
    s = math.sin(math.pi * x)
    # reflection: Gamma(x) = pi / (sin(pi x) Gamma(1 - x))
    val = math.log(math.pi / abs(s)) - ln_gamma_kernel(1.0 - x)
    sign = 1.0 if s > 0.0 else -1.0
    return val, sign


@njit
def digamma_kernel(x):
    """psi(x) for non-pole x; reflection for x < 1/2, asymptotic for large x."""
    refl = 0.0
    if x < 0.5:
        # psi(x) = psi(1 - x) - pi cot(pi x)
        refl = -math.pi / math.tan(math.pi * x)
        x = 1.0 - x
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = 1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (
        1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0))))
    return refl + acc + math.log(x) - 0.5 / x - inv2 * tail


_SERIES_CAP = 100000
_TERM_TOL = 1e-16


@njit
def _hyp2f1_series(a, b, c, z):
    """Direct power series; three consecutive tiny terms terminate it."""
    total = 1.0
    term = 1.0
    small = 0
    for n in range(_SERIES_CAP):
        term *= (a + n) * (b + n) / ((c + n) * (1.0 + n)) * z
        total += term
        if abs(term) < _TERM_TOL * abs(total):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise RuntimeError("hypergeometric series did not converge")


@njit
def _hyp2f1_poly(a, c, z, m):
    """Terminating series F(a, -m; c; z), m a non-negative integer."""
    total = 1.0
    term = 1.0
    for n in range(m):
        term *= (a + n) * (-m + n) / ((c + n) * (1.0 + n)) * z
        total += term
    return total


@njit
def _hyp2f1_log_case(a, b, c, z, m):
    """F(a, b; a+b+m; z) near z = 1 for integer m >= 0 (logarithmic case)."""
    w = 1.0 - z
    lnw = math.log(w)
    lgc = ln_gamma_kernel(c)
    first = 0.0
    if m >= 1:
        lnga_m, sa_m = gammaln_signed(a + m)
        lngb_m, sb_m = gammaln_signed(b + m)
        pref = sa_m * sb_m * math.exp(ln_gamma_kernel(float(m)) + lgc - lnga_m - lngb_m)
        t = 1.0
        s = 1.0
        for n in range(1, m):
            t *= (a + n - 1.0) * (b + n - 1.0) / (n * (n - m)) * w
            s += t
        first = pref * s
    lnga, sa = gammaln_signed(a)
    lngb, sb = gammaln_signed(b)
    sign_m = -1.0 if m % 2 else 1.0
    pref2 = sa * sb * math.exp(lgc - lnga - lngb) * sign_m * w ** m
    psa = digamma_kernel(a + m)
    psb = digamma_kernel(b + m)
    ps1 = digamma_kernel(1.0)
    psm1 = digamma_kernel(m + 1.0)
    t = 1.0 / math.gamma(m + 1.0)
    total = 0.0
    small = 0
    for n in range(_SERIES_CAP):
        if n > 0:
            t *= (a + m + n - 1.0) * (b + m + n - 1.0) / (n * (n + m)) * w
            psa += 1.0 / (a + m + n - 1.0)
            psb += 1.0 / (b + m + n - 1.0)
            ps1 += 1.0 / n
            psm1 += 1.0 / (m + n)
        term = t * (lnw - ps1 - psm1 + psa + psb)
        total += term
        if abs(term) < _TERM_TOL * max(abs(total), 1e-300):
            small += 1
            if small >= 3:
                return first - pref2 * total
        else:
            small = 0
    raise RuntimeError("hypergeometric log-case series did not converge")


@njit
def _is_nonpos_int(x):
    return x < 0.5 and abs(x - round(x)) < 1e-12


@njit
def hyp2f1_kernel(a, b, c, z):
    """F(a, b; c; z) for z in [0, 1]; c must not be a non-positive integer."""
    if _is_nonpos_int(b):
        return _hyp2f1_poly(a, c, z, int(round(-b)))
    if _is_nonpos_int(a):
        return _hyp2f1_poly(b, c, z, int(round(-a)))
    d = c - a - b
    if z == 1.0:
        if d <= 0.0:
            raise ValueError("2F1 diverges at z = 1 when c - a - b <= 0")
        lg1, s1 = gammaln_signed(c - a)
        lg2, s2 = gammaln_signed(c - b)
        return s1 * s2 * math.exp(ln_gamma_kernel(c) + ln_gamma_kernel(d) - lg1 - lg2)
    if z <= 0.75:
        return _hyp2f1_series(a, b, c, z)
    if abs(d - round(d)) < 1e-12:
        mm = int(round(d))
        w = 1.0 - z
        if z <= 0.995:
            # the log-case series cancels catastrophically once the
            # parameters are large compared with 1/(1-z); the Euler-
            # transformed direct series has terms ~ k^(mm-1) z^k falling
            # against the binomial-free tail and stays stable, so prefer it
            # everywhere the z^k decay is affordable
            if mm >= 0:
                return w ** mm * _hyp2f1_series(c - a, c - b, c, z)
            return _hyp2f1_series(a, b, c, z)
        if mm >= 0:
            return _hyp2f1_log_case(a, b, c, z, mm)
        # Euler transformation flips the sign of c - a - b
        return (1.0 - z) ** d * _hyp2f1_log_case(c - a, c - b, c, z, -mm)
    # generic two-term connection formula for non-integer c - a - b
    w = 1.0 - z
    lg_ca, s_ca = gammaln_signed(c - a)
    lg_cb, s_cb = gammaln_signed(c - b)
    lg_a, s_a = gammaln_signed(a)
    lg_b, s_b = gammaln_signed(b)
    lg_d, s_d = gammaln_signed(d)
    lg_md, s_md = gammaln_signed(-d)
    lgc = ln_gamma_kernel(c)
    t1 = s_d * s_ca * s_cb * math.exp(lgc + lg_d - lg_ca - lg_cb)
    t1 *= _hyp2f1_series(a, b, 1.0 - d, w)
    t2 = s_md * s_a * s_b * math.exp(lgc + lg_md - lg_a - lg_b) * w ** d
    t2 *= _hyp2f1_series(c - a, c - b, 1.0 + d, w)
    return t1 + t2


@njit
def agm_ke_kernel(kappa_tilde):
    """Complete elliptic integrals (K(kappa), E(kappa)) from the complementary
    modulus kappa_tilde = sqrt(1 - kappa^2) via the AGM iteration."""
    a = 1.0
    b = kappa_tilde
    # kappa^2 without cancellation
    ssum = 0.5 * (1.0 - kappa_tilde) * (1.0 + kappa_tilde)
    pow2 = 0.5
    for _ in range(60):
        c = 0.5 * (a - b)
        if abs(c) < 1e-17 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        pow2 *= 2.0
        ssum += pow2 * c * c
    k_big = math.pi / (2.0 * a)
    e_big = k_big * (1.0 - ssum)
    return k_big, e_big


@njit
def rho_closed_kernel(j, m, n, p, tau):
    """Closed-form mode-mixing coefficient with lower index j + m*p and upper
    index j + n*p at compact time kappa = tanh(p*tau).

    Uses the regularized hypergeometric limit when 1 + n - m is a non-positive
    integer, and maps the true poles of the prefactor (j = 0, m < 0) to exact
    zeros.
    """
    sigma = -1.0 if p % 2 else 1.0
    jp = j / p
    a_bot = 1.0 + m + jp
    if _is_nonpos_int(a_bot):
        return 0.0
    if tau == 0.0:
        return 1.0 if m == n else 0.0
    kappa = math.tanh(p * tau)
    z = kappa * kappa
    a = n + jp
    b = -(m + jp)
    lg_top = ln_gamma_kernel(1.0 + n + jp)
    lg_bot, s_bot = gammaln_signed(a_bot)
    sig_pow = 1.0
    if sigma < 0.0 and (n - m) % 2 != 0:
        sig_pow = -1.0
    if n >= m:
        c = 1.0 + (n - m)
        f_val = hyp2f1_kernel(a, b, c, z)
        lg = lg_top - lg_bot - ln_gamma_kernel(c)
        return s_bot * sig_pow * math.exp(lg + (n - m) * math.log(kappa)) * f_val
    # 1 + n - m <= 0: regularized limit.  With ell = m - n - 1, the first
    # ell + 1 series terms die against the gamma poles and
    # F(a,b;-ell;z)/Gamma(-ell) = (a)_{ell+1} (b)_{ell+1} z^{ell+1}
    #                             F(a+ell+1, b+ell+1; ell+2; z) / (ell+1)!
    ell = m - n - 1
    # pochhammers (a)_{ell+1}, (b)_{ell+1} in log space with sign tracking
    lp = 0.0
    sp = 1.0
    for i in range(ell + 1):
        fa = a + i
        fb = b + i
        lp += math.log(abs(fa)) + math.log(abs(fb))
        if fa < 0.0:
            sp = -sp
        if fb < 0.0:
            sp = -sp
    c_new = ell + 2.0
    f_val = hyp2f1_kernel(a + ell + 1.0, b + ell + 1.0, c_new, z)
    lg = lg_top - lg_bot + lp - ln_gamma_kernel(c_new)
    # net kappa power: (n - m) + 2(ell + 1) = m - n
    return s_bot * sp * sig_pow * math.exp(lg + (m - n) * math.log(kappa)) * f_val


@njit
def closed_table(p, tau, m_max, n_max):
    """Table of closed-form coefficients on the window.

    Entries whose log-magnitude bound (gamma prefactors plus the kappa
    power) sits below exp(-60) are set to zero without evaluating the
    hypergeometric factor; they are irrelevant at any supported tolerance
    and the series there would be needlessly slow.
    """
    width = 2 * m_max + 1
    out = np.zeros((n_max, width))
    if tau == 0.0:
        for n in range(1, n_max + 1):
            if n <= m_max:
                out[n - 1, m_max + n] = 1.0
        return out
    kappa = math.tanh(p * tau)
    lnk = math.log(kappa)
    for upper in range(1, n_max + 1):
        j = upper % p
        n = (upper - j) // p
        jp = j / p
        for lower in range(-m_max, m_max + 1):
            if lower == 0 or lower % p != j:
                continue
            m = (lower - j) // p
            a_bot = 1.0 + m + jp
            if _is_nonpos_int(a_bot):
                continue
            # log-magnitude of the gamma/kappa prefactor (both branches
            # collapse to the same ratio form); a wide margin absorbs the
            # hypergeometric factor
            d = abs(n - m)
            if d >= 60:
                if m > n:
                    lead = (ln_gamma_kernel(m + jp)
                            - ln_gamma_kernel(n + jp))
                else:
                    lg_b, _ = gammaln_signed(a_bot)
                    lead = ln_gamma_kernel(1.0 + n + jp) - lg_b
                bound = lead - ln_gamma_kernel(d + 1.0) + d * lnk
                if bound < -120.0:
                    continue
            out[upper - 1, m_max + lower] = rho_closed_kernel(j, m, n, p, tau)
    return out


@njit
def rho1_p2_single(idx, kappa, ktilde, k_big, e_big):
    """First-column coefficient rho_idx^(1) for the p = 2 resonance, odd idx.

    Elliptic-integral forms for |idx| <= 5 away from kappa = 0; the general
    hypergeometric representation otherwise.
    """
    if kappa >= 0.05 and idx >= -5 and idx <= 5:
        k2 = kappa * kappa
        kt2 = ktilde * ktilde
        if idx == 1:
            return (2.0 / math.pi) * e_big
        if idx == -1:
            return (2.0 / (math.pi * kappa)) * (e_big - kt2 * k_big)
        if idx == 3:
            return (2.0 / (3.0 * math.pi * kappa)) * ((1.0 - 2.0 * k2) * e_big - kt2 * k_big)
        if idx == -3:
            return -(2.0 / (3.0 * math.pi * k2)) * ((2.0 - k2) * e_big - 2.0 * kt2 * k_big)
        if idx == 5:
            return (2.0 / (15.0 * math.pi * k2)) * (
                (8.0 * k2 * k2 - 3.0 * k2 - 2.0) * e_big
                + (-4.0 * k2 * k2 + 2.0 * k2 + 2.0) * k_big)
        # idx == -5
        return -(2.0 / (15.0 * math.pi * k2 * kappa)) * (
            (2.0 * k2 * k2 + 3.0 * k2 - 8.0) * e_big
            - (k2 * k2 + 7.0 * k2 - 8.0) * k_big)
    # hypergeometric representation, valid for every odd index
    z = kappa * kappa
    if idx > 0:
        m = (idx - 1) // 2
        sign = -1.0 if m % 2 else 1.0
        lg = ln_gamma_kernel(m + 0.5) - ln_gamma_kernel(0.5) - ln_gamma_kernel(1.0 + m)
        f_val = hyp2f1_kernel(m + 0.5, -0.5, 1.0 + m, z)
        return sign * math.exp(lg) * kappa ** m * f_val
    m = (-idx - 1) // 2
    sign = -1.0 if m % 2 else 1.0
    lg = (ln_gamma_kernel(m + 0.5) + ln_gamma_kernel(1.5)
          - math.log(math.pi) - ln_gamma_kernel(2.0 + m))
    f_val = hyp2f1_kernel(m + 0.5, 0.5, 2.0 + m, z)
    return sign * math.exp(lg) * kappa ** (m + 1) * f_val


@njit
def _p2_driver(r, s, tau, out):
    """Moment derivatives for the pair (r, s) at slow time tau (p = 2).

    out = d/dtau [<a_r a_s>, <a_r^+ a_s>, <a_r^+ a_r>, <a_s^+ a_s>,
                  <a_r^2>, <a_s^2>].
    """
    kappa = math.tanh(2.0 * tau)
    ktilde = 1.0 / math.cosh(2.0 * tau)
    k_big, e_big = agm_ke_kernel(ktilde)
    rr = rho1_p2_single(r, kappa, ktilde, k_big, e_big)
    rmr = rho1_p2_single(-r, kappa, ktilde, k_big, e_big)
    if s == r:
        rs, rms = rr, rmr
    else:
        rs = rho1_p2_single(s, kappa, ktilde, k_big, e_big)
        rms = rho1_p2_single(-s, kappa, ktilde, k_big, e_big)
    srs = math.sqrt(r * s)
    out[0] = -srs * (rr * rs + rmr * rms)
    out[1] = srs * (rr * rms + rmr * rs)
    out[2] = 2.0 * r * rr * rmr
    out[3] = 2.0 * s * rs * rms
    out[4] = -r * (rr * rr + rmr * rmr)
    out[5] = -s * (rs * rs + rms * rms)


@njit
def p2_moments_rk4(r, s, tau_end, nsteps):
    """Integrate the finite pair-moment system from vacuum to tau_end."""
    y = np.zeros(6)
    if tau_end == 0.0 or nsteps == 0:
        return y
    h = tau_end / nsteps
    f0 = np.empty(6)
    fm = np.empty(6)
    f1 = np.empty(6)
    _p2_driver(r, s, 0.0, f0)
    for i in range(nsteps):
        t = i * h
        _p2_driver(r, s, t + 0.5 * h, fm)
        _p2_driver(r, s, t + h, f1)
        # RK4 for a quadrature (state-independent RHS) is Simpson's rule
        for q in range(6):
            y[q] += h / 6.0 * (f0[q] + 4.0 * fm[q] + f1[q])
            f0[q] = f1[q]
    return y


@njit
def bogoliubov_rk4(p, tau_end, m_max, n_max, nsteps):
    """Fixed-step RK4 for the truncated mode-mixing system.

    Returns R with R[n-1, k + m_max] = rho_k^(n)(tau_end); coefficients
    outside |k| <= m_max are held at zero, the k = 0 slot is frozen.
    """
    sigma = -1.0 if p % 2 else 1.0
    width = 2 * m_max + 1
    r = np.zeros((n_max, width))
    for n in range(1, n_max + 1):
        if n <= m_max:
            r[n - 1, m_max + n] = 1.0
    if tau_end == 0.0 or nsteps == 0:
        return r
    kplus = np.empty(width)
    kminus = np.empty(width)
    for i in range(width):
        k = i - m_max
        kplus[i] = sigma * (k + p)
        kminus[i] = sigma * (k - p)
    h = tau_end / nsteps

    d1 = np.zeros((n_max, width))
    d2 = np.zeros((n_max, width))
    d3 = np.zeros((n_max, width))
    d4 = np.zeros((n_max, width))
    tmp = np.empty((n_max, width))

    for _ in range(nsteps):
        _table_rhs(r, kplus, kminus, p, m_max, d1)
        for a in range(n_max):
            for b in range(width):
                tmp[a, b] = r[a, b] + 0.5 * h * d1[a, b]
        _table_rhs(tmp, kplus, kminus, p, m_max, d2)
        for a in range(n_max):
            for b in range(width):
                tmp[a, b] = r[a, b] + 0.5 * h * d2[a, b]
        _table_rhs(tmp, kplus, kminus, p, m_max, d3)
        for a in range(n_max):
            for b in range(width):
                tmp[a, b] = r[a, b] + h * d3[a, b]
        _table_rhs(tmp, kplus, kminus, p, m_max, d4)
        for a in range(n_max):
            for b in range(width):
                r[a, b] += h / 6.0 * (d1[a, b] + 2.0 * d2[a, b] + 2.0 * d3[a, b] + d4[a, b])
    return r


@njit
def _table_rhs(r, kplus, kminus, p, m_max, out):
    """d rho_k / d tau = sigma [(k+p) rho_{k+p} - (k-p) rho_{k-p}]."""
    n_rows, width = r.shape
    for a in range(n_rows):
        for i in range(width):
            acc = 0.0
            if i + p < width:
                acc += kplus[i] * r[a, i + p]
            if i - p >= 0:
                acc -= kminus[i] * r[a, i - p]
            out[a, i] = acc
        out[a, m_max] = 0.0


@njit
def fundamental_rk4_3d(nu, eps, delta, dlt, eps_tilde, t_end, nsteps):
    """Fundamental matrix of the two-mode cavity equations of motion.

    First-order canonical system for (x1, p1, x3, p3) equivalent to the
    second-order coupled equations: mode-1 frequency modulation
    1 + 4 eps cos(2 wbar t), mode-3 stiffness 9 + 6 dlt + eps_tilde cos,
    and the coordinate-momentum coupling of strength 12 mu eps sin(2 wbar t).
    """
    mu = math.sqrt(nu / 96.0)
    g0 = 12.0 * mu * eps
    wbar = 1.0 + delta
    y = np.eye(4)
    if t_end == 0.0 or nsteps == 0:
        return y
    h = t_end / nsteps
    a = np.zeros((4, 4))
    k1 = np.empty((4, 4))
    k2 = np.empty((4, 4))
    k3 = np.empty((4, 4))
    k4 = np.empty((4, 4))
    tmp = np.empty((4, 4))

    for i in range(nsteps):
        t = i * h
        _fill_a(a, t, g0, eps, dlt, eps_tilde, wbar)
        _mm4(a, y, k1)
        _axpy4(y, k1, 0.5 * h, tmp)
        _fill_a(a, t + 0.5 * h, g0, eps, dlt, eps_tilde, wbar)
        _mm4(a, tmp, k2)
        _axpy4(y, k2, 0.5 * h, tmp)
        _mm4(a, tmp, k3)
        _axpy4(y, k3, h, tmp)
        _fill_a(a, t + h, g0, eps, dlt, eps_tilde, wbar)
        _mm4(a, tmp, k4)
        for r_ in range(4):
            for c_ in range(4):
                y[r_, c_] += h / 6.0 * (k1[r_, c_] + 2.0 * k2[r_, c_]
                                        + 2.0 * k3[r_, c_] + k4[r_, c_])
    return y


@njit
def _fill_a(a, t, g0, eps, dlt, eps_tilde, wbar):
    c = math.cos(2.0 * wbar * t)
    s = math.sin(2.0 * wbar * t)
    gs = g0 * s
    a[0, 0] = 0.0
    a[0, 1] = 1.0
    a[0, 2] = gs
    a[0, 3] = 0.0
    a[1, 0] = -(1.0 + 4.0 * eps * c)
    a[1, 1] = 0.0
    a[1, 2] = 0.0
    a[1, 3] = gs
    a[2, 0] = -gs
    a[2, 1] = 0.0
    a[2, 2] = 0.0
    a[2, 3] = 1.0
    a[3, 0] = 0.0
    a[3, 1] = -gs
    a[3, 2] = -(9.0 + 6.0 * dlt + eps_tilde * c)
    a[3, 3] = 0.0


@njit
def _mm4(a, b, out):
    for i in range(4):
        for j in range(4):
            acc = 0.0
            for k in range(4):
                acc += a[i, k] * b[k, j]
            out[i, j] = acc


@njit
def _axpy4(y, k, factor, out):
    for i in range(4):
        for j in range(4):
            out[i, j] = y[i, j] + factor * k[i, j]
