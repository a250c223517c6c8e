"""
Shannon, Holevo and entanglement-assisted capacities of ``M`` parallel thermal
bosonic channels sharing a total power ``P`` (photons per second).

All capacities are returned in bits per second. ``M`` is a real number so that
mode counts far beyond 2**53 (up to 1e40 and more) are handled uniformly.
"""
import math
from dataclasses import dataclass

from .entropy import LN2, _log1p_minus_x, d0, d1, d1_gap, d1_slope_at_zero, g, g_step
from .errors import DivergenceError, DomainError, NoCrossingError


@dataclass(frozen=True)
class ChannelParams:
    """Effective single-use description of the link.

    modes: number of orthogonal modes M (>= 1, real).
    power: total photons per second P over all modes.
    tau: effective transmittivity in [0, 1].
    nu: effective thermal noise photons per mode per use.
    """

    modes: float
    power: float
    tau: float
    nu: float

    def __post_init__(self):
        for name in ("modes", "power", "tau", "nu"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise DomainError(f"{name} must be a real number, got {value!r}") from None
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.modes < 1:
            raise DomainError(f"modes must be >= 1, got {self.modes!r}")
        if self.power < 0:
            raise DomainError(f"power must be >= 0, got {self.power!r}")
        if not 0.0 <= self.tau <= 1.0:
            raise DomainError(f"tau must lie in [0, 1], got {self.tau!r}")
        if self.nu < 0:
            raise DomainError(f"nu must be >= 0, got {self.nu!r}")

    @property
    def photons_per_mode(self):
        return self.power / self.modes


@dataclass(frozen=True)
class CapacityResult:
    """All capacities at one parameter point, in bits per second.

    ``ea_term_x0`` and ``ea_term_x1`` are the two pieces of the EA capacity,
    labelled by the correlation function they subtract:
    ``M (g(tau n + nu) - g(d_0))`` tends to a constant as M grows,
    ``M (g(n) - g(d_1))`` grows like ``P (1 - T) log2 M``.
    """

    shannon: float
    holevo: float
    ea: float
    ea_approx: float
    ea_term_x0: float
    ea_term_x1: float
    slope_T: float


def shannon_capacity(ch):
    """``M log2(1 + tau P / (M (1 + nu)))``."""
    snr = ch.tau * ch.photons_per_mode / (1.0 + ch.nu)
    if snr < 0.5:
        # saturation bound minus a non-negative gap, so the result never
        # rounds above the bound
        bound = shannon_saturation(ch.power, ch.tau, ch.nu)
        return bound + ch.modes * _log1p_minus_x(snr) / LN2
    return ch.modes * math.log1p(snr) / LN2


def holevo_capacity(ch):
    """``M (g(tau P/M + nu) - g(nu))``."""
    n = ch.photons_per_mode
    step = ch.tau * n
    return ch.modes * g_step(ch.nu, step, step + ch.nu)


def ea_terms(ch):
    """Return ``(x0, x1)``: ``M (g(tau n + nu) - g(d_0))`` and ``M (g(n) - g(d_1))``.

    Both differences share the increment ``n - d_1 = tau n + nu - d_0`` which is
    computed in closed form, so neither term suffers cancellation and their sum
    is the EA capacity.
    """
    n = ch.photons_per_mode
    tau, nu = ch.tau, ch.nu
    gap = d1_gap(tau, n, nu)
    x0 = ch.modes * g_step(d0(tau, n, nu), gap, tau * n + nu)
    x1 = ch.modes * g_step(d1(tau, n, nu), gap, n)
    return x0, x1


def ea_terms_equation_pairing(ch):
    """The two summands exactly as the capacity formula groups them.

    ``M (g(n) - g(d_0))`` and ``M (g(tau n + nu) - g(d_1))``. For large M each is
    of order ``M g(nu)`` with opposite signs, so their float sum is useless
    there; use :func:`ea_terms` for values.
    """
    n = ch.photons_per_mode
    tau, nu = ch.tau, ch.nu
    return (
        ch.modes * (g(n) - g(d0(tau, n, nu))),
        ch.modes * (g(tau * n + nu) - g(d1(tau, n, nu))),
    )


def ea_capacity(ch):
    """Entanglement-assisted capacity ``M sum_x [g(tau^x n + x nu) - g(d_x)]``."""
    x0, x1 = ea_terms(ch)
    return x0 + x1


def ea_asymptotic(ch):
    """Large-M approximation ``P (1 - T) log2 M`` with ``T = (1 + nu - tau)/(1 + nu)``."""
    one_minus_t = ch.tau / (1.0 + ch.nu)
    return ch.power * one_minus_t * math.log2(ch.modes)


def ea_asymptotic_expansion(ch):
    """Large-M expansion of the EA capacity keeping every term that stays finite.

    ``P/ln2 [(1-T)(1 + ln(M/P)) + T ln T] + P tau/(1+nu) log2((1+nu)/nu)``. Unlike
    :func:`ea_asymptotic` its ratio to the exact value tends to 1; the two differ
    by ``-P (1-T) log2 P`` plus bounded terms.
    """
    t = d1_slope_at_zero(ch.tau, ch.nu)
    one_minus_t = ch.tau / (1.0 + ch.nu)
    t_log_t = t * math.log(t) if t > 0 else 0.0
    growing = ch.power / LN2 * (one_minus_t * (1.0 + math.log(ch.modes / ch.power)) + t_log_t)
    return growing + ea_constant_limit(ch.power, ch.tau, ch.nu)


def ea_constant_term(power, tau, nu):
    """Constant left over by the large-M approximation, in its printed form.

    ``P (1 - tau nu / (1 + nu)) log2(1 + nu) / nu``. The factor P is implied by
    the derivation; compare :func:`ea_constant_limit` for the exact limit.
    """
    if nu <= 0:
        raise DivergenceError("constant term needs nu > 0")
    return power * (1.0 - tau * nu / (1.0 + nu)) * math.log2(1.0 + nu) / nu


def ea_constant_limit(power, tau, nu):
    """Exact M -> infinity limit of ``M (g(tau n + nu) - g(d_0))``.

    The increment ``tau n + nu - d_0`` behaves like ``tau n / (1 + nu)``, so the
    term tends to ``P tau / (1 + nu) * log2((1 + nu) / nu)``.
    """
    if nu <= 0:
        raise DivergenceError("limit needs nu > 0")
    return power * tau / (1.0 + nu) * math.log2((1.0 + nu) / nu)


def holevo_limit(power, tau, nu):
    """``lim_{M->inf} C_J = P tau log2((1 + nu) / nu)``; diverges at nu = 0."""
    if nu <= 0:
        raise DivergenceError("Holevo capacity is unbounded in M when nu = 0")
    return power * tau * math.log2((1.0 + nu) / nu)


def shannon_saturation(power, tau, nu=0.0):
    """``lim_{M->inf} C_S = P tau / ((1 + nu) ln 2)``; an upper bound for every M."""
    return power * tau / ((1.0 + nu) * LN2)


def capacities(ch):
    """Evaluate every capacity at one point."""
    x0, x1 = ea_terms(ch)
    return CapacityResult(
        shannon=shannon_capacity(ch),
        holevo=holevo_capacity(ch),
        ea=x0 + x1,
        ea_approx=ea_asymptotic(ch),
        ea_term_x0=x0,
        ea_term_x1=x1,
        slope_T=d1_slope_at_zero(ch.tau, ch.nu),
    )


M_LOW = 1e2
M_HIGH = 1e20
M_MAX = 1e60


def min_modes_for_advantage(power, tau, nu, factor, m_max=M_MAX, tol=1e-3,
                            channel_at=None):
    """Smallest M at which ``C_E >= factor * C_J``.

    Bisection on ``log2 M`` to ``tol``. The bracket starts at [1e2, 1e20]; the
    upper exponent is doubled until the condition holds or ``m_max`` is passed.
    Returns the lower bracket when the condition already holds there.

    ``channel_at(M)`` may supply an M-dependent channel (e.g. a link whose noise
    depends on the photons per mode); by default tau and nu are fixed.
    """
    if factor < 1:
        raise DomainError(f"factor must be >= 1, got {factor!r}")
    if channel_at is None:
        if nu <= 0:
            raise DivergenceError("advantage search needs nu > 0")

        def channel_at(m):
            return ChannelParams(m, power, tau, nu)

    def excess(log2_m):
        ch = channel_at(2.0 ** log2_m)
        return ea_capacity(ch) - factor * holevo_capacity(ch)

    lo = math.log2(M_LOW)
    if excess(lo) >= 0:
        return M_LOW
    hi = math.log2(min(M_HIGH, m_max))
    limit = math.log2(m_max)
    while excess(hi) < 0:
        if hi >= limit:
            raise NoCrossingError(
                f"C_E never reaches {factor} x C_J below M = {m_max:g}")
        lo = hi
        hi = min(2.0 * hi, limit)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if excess(mid) >= 0:
            hi = mid
        else:
            lo = mid
    return 2.0 ** hi
