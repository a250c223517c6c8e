"""
Extended-precision reference values.

Every formula here is a literal transcription with no stability rewrites; the
50 significant digits absorb the cancellation the float kernel has to engineer
around. Floats passed in are converted exactly (their binary value), strings are
parsed as exact decimals.
"""
from contextlib import contextmanager

import mpmath

from .errors import DomainError

DIGITS = 50

_ctx = mpmath.MPContext()
_ctx.dps = DIGITS


@contextmanager
def precision(digits):
    """Temporarily raise the working precision (for extreme arguments)."""
    old = _ctx.dps
    _ctx.dps = max(digits, DIGITS)
    try:
        yield
    finally:
        _ctx.dps = old


def hp(x):
    """Convert ``x`` (float, int or decimal string) to a 50-digit value."""
    return _ctx.mpf(x)


def _photons(name, x):
    x = hp(x)
    if x < 0 or not _ctx.isfinite(x):
        raise DomainError(f"{name} must be finite and >= 0")
    return x


def _tau(tau):
    tau = hp(tau)
    if tau < 0 or tau > 1:
        raise DomainError("tau must lie in [0, 1]")
    return tau


def g_ref(x):
    x = _photons("x", x)
    if x == 0:
        return _ctx.mpf(0)
    return (x + 1) * _ctx.log(x + 1, 2) - x * _ctx.log(x, 2)


def d_ref(tau, n, nu):
    tau, n, nu = _tau(tau), _photons("n", n), _photons("nu", nu)
    return _ctx.sqrt(((1 + tau) * n + nu + 1) ** 2 - 4 * tau * n * (n + 1))


def dx_ref(x, tau, n, nu):
    if x not in (0, 1):
        raise DomainError("x must be 0 or 1")
    tau, n, nu = _tau(tau), _photons("n", n), _photons("nu", nu)
    return (d_ref(tau, n, nu) - 1 + (-1) ** x * ((tau - 1) * n + nu)) / 2


def capacity_ref(kind, M, P, tau, nu):
    """Reference capacity in bits per second.

    ``kind`` is one of ``shannon``, ``holevo``, ``ea`` or the two regrouped
    pieces of ``ea``: ``ea_growing`` = M (g(n) - g(d_1)) and
    ``ea_constant`` = M (g(tau n + nu) - g(d_0)).
    """
    M, P = hp(M), _photons("P", P)
    tau, nu = _tau(tau), _photons("nu", nu)
    if M < 1:
        raise DomainError("M must be >= 1")
    n = P / M
    if kind == "shannon":
        return M * _ctx.log(1 + tau * P / (M * (1 + nu)), 2)
    if kind == "holevo":
        return M * (g_ref(tau * n + nu) - g_ref(nu))
    if kind == "ea":
        total = _ctx.mpf(0)
        for x in (0, 1):
            total += g_ref(tau ** x * n + x * nu) - g_ref(dx_ref(x, tau, n, nu))
        return M * total
    if kind == "ea_growing":
        return M * (g_ref(n) - g_ref(dx_ref(1, tau, n, nu)))
    if kind == "ea_constant":
        return M * (g_ref(tau * n + nu) - g_ref(dx_ref(0, tau, n, nu)))
    raise ValueError(f"unknown capacity kind {kind!r}")


def d1_slope_ref(tau, nu, step="1e-7"):
    """Central difference of d_1 in n at n = 0.

    The radicand is a polynomial in n, so the closed form continues
    analytically to small negative n and the symmetric stencil is valid.
    """
    tau, nu = _tau(tau), _photons("nu", nu)
    h = hp(step)

    def ext(n):
        # d_1 continued to small negative n through the same closed form
        dd = _ctx.sqrt(((1 + tau) * n + nu + 1) ** 2 - 4 * tau * n * (n + 1))
        return (dd - 1 - ((tau - 1) * n + nu)) / 2

    return (ext(h) - ext(-h)) / (2 * h)


def cascade_ref(link, n):
    """Stage-by-stage recursion of the amplified link; returns (tau_eff, nu_eff).

    Each segment attenuates signal and accumulated noise by tau_L. Each
    amplifier multiplies the signal by G and injects G - 1 noise photons; the
    injected noise is attenuated by the following segments only. A passive
    receiver has amplifiers after segments 1..K-1, an active one after every
    segment. G is evaluated at the transmitter's per-mode photon number.
    """
    n = _photons("n", n)
    tau_l = _ctx.exp(-hp(link.alpha) * hp(link.segment_length))
    if link.gain_rule.name == "FULL_REGENERATION":
        gain = 1 / tau_l
    else:
        gain = (1 + n) / (1 + tau_l * n)
    active = link.receiver.name == "ACTIVE"
    K = int(link.segment_count)
    signal, noise = _ctx.mpf(1), _ctx.mpf(0)
    for k in range(1, K + 1):
        signal *= tau_l
        noise *= tau_l
        if k < K or active:
            signal *= gain
            noise += gain - 1
    return signal, noise
