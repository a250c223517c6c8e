"""
Thermal-state entropy and the correlation functions of the entanglement-assisted
capacity, evaluated without catastrophic cancellation.

All entropies are in bits. The functions take plain floats:

* photon numbers ``x``, ``n`` (mean photons per mode per use, >= 0),
* transmittivity ``tau`` in [0, 1],
* noise photons ``nu`` (>= 0).

Stable forms used below (with A = 1 + nu + (1-tau) n, B = 1 + nu - (1-tau) n,
C = 1 - nu + (1-tau) n)::

    d^2      = A^2 + 4 tau n nu              (no subtraction at all)
    d_1      = 2 n (1 + nu - tau) / (d + B)  when B > 0
    d_0      = 2 nu (1 + n) / (d + C)        when C > 0
    n - d_1  = 2 tau n (n + 1) / (2n + B + d)

Note: d(tau, 0, nu) = nu + 1. A derivation excerpt that circulates alongside
the original formulas states d(tau, 0, nu) = 0; that is wrong, the formula
gives nu + 1.
"""
import math

from .errors import DomainError

LN2 = math.log(2.0)

# Above this g(x) switches to its large-argument expansion.
LARGE_X = 1e15
# Below this relative step g_step uses the second-order expansion.
_STEP_SWITCH = 0.25


def _as_float(name, x):
    try:
        return float(x)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {x!r}") from None


def _check_photons(name, x):
    value = _as_float(name, x)
    if not math.isfinite(value) or value < 0:
        raise DomainError(f"{name} must be finite and >= 0, got {x!r}")
    return value


def _check_tau(tau):
    value = _as_float("tau", tau)
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"tau must lie in [0, 1], got {tau!r}")
    return value


def g_nats(x):
    """Entropy of a thermal state with mean photon number ``x``, in nats."""
    x = _check_photons("x", x)
    if x == 0.0:
        return 0.0
    if x <= 1.0:
        # both terms positive for x < 1
        return (x + 1.0) * math.log1p(x) - x * math.log(x)
    if x > LARGE_X:
        return math.log(x) + 1.0 + 0.5 / x
    return math.log1p(x) + x * math.log1p(1.0 / x)


def g(x):
    """Entropy of a zero-mean single-mode thermal state, in bits.

    ``g(x) = (x+1) log2(x+1) - x log2(x)`` with ``g(0) = 0``.
    """
    return g_nats(x) / LN2


def _log1p_minus_x(u):
    # log(1+u) - u; series near 0 where the direct form cancels
    if abs(u) < 1e-2:
        total = 0.0
        power = u * u
        for k in range(2, 11):
            total += (-1.0) ** (k + 1) * power / k
            power *= u
        return total
    return math.log1p(u) - u


def g_step(lo, h, hi=None):
    """``g(lo + h) - g(lo)`` in bits, given the increment ``h`` directly.

    Passing the increment avoids the rounding of ``lo + h`` that makes the plain
    difference useless when ``h`` is many orders below ``lo``. ``hi`` may be
    supplied when the caller has ``lo + h`` in a better form.
    """
    lo = _check_photons("lo", lo)
    if hi is None:
        hi = lo + h
    hi = _check_photons("hi", hi)
    if h == 0.0:
        return 0.0
    if lo == 0.0:
        return g(hi)
    if abs(h) > _STEP_SWITCH * max(lo, hi):
        return g(hi) - g(lo)
    # exact: h log1p(1/lo) + log1p(u) + hi log1p(w), u = h/(lo+1),
    # w = -h/((lo+1) hi); the linear parts u + hi w cancel identically, so
    # only the same-signed remainders log1p(.) - (.) are kept
    u = h / (lo + 1.0)
    w = -u / hi
    nats = h * math.log1p(1.0 / lo) + _log1p_minus_x(u) + hi * _log1p_minus_x(w)
    return nats / LN2


def g_diff(a, b):
    """``g(a) - g(b)`` in bits, stable when ``a`` and ``b`` nearly coincide."""
    a = _check_photons("a", a)
    b = _check_photons("b", b)
    if b == 0.0:
        return g(a)
    if a == 0.0:
        return -g(b)
    if a < b:
        return -g_diff(b, a)
    # a - b is exact when b <= a <= 2b (Sterbenz), which covers the step branch
    return g_step(b, a - b, a)


def radicand(tau, n, nu):
    """``((1+tau) n + nu + 1)^2 - 4 tau n (n+1)`` rearranged as ``A^2 + 4 tau n nu``."""
    tau = _check_tau(tau)
    n = _check_photons("n", n)
    nu = _check_photons("nu", nu)
    a = (1.0 - tau) * n + nu + 1.0
    value = a * a + 4.0 * tau * n * nu
    if value < -1e-15:
        raise ArithmeticError(f"negative radicand {value!r}")
    return value


def d(tau, n, nu):
    """Square-root term shared by both correlation functions."""
    tau = _check_tau(tau)
    n = _check_photons("n", n)
    nu = _check_photons("nu", nu)
    a = (1.0 - tau) * n + nu + 1.0
    return math.hypot(a, 2.0 * math.sqrt(tau * n * nu))


def d1(tau, n, nu):
    """``d_1 = (d - 1 - ((tau-1) n + nu)) / 2``; zero at ``n = 0``."""
    dd = d(tau, n, nu)
    b = 1.0 + nu - (1.0 - tau) * n
    if b > 0.0:
        return 2.0 * n * ((1.0 - tau) + nu) / (dd + b)
    return 0.5 * (dd - b)


def d0(tau, n, nu):
    """``d_0 = (d - 1 + ((tau-1) n + nu)) / 2``; equals ``nu`` at ``n = 0``."""
    dd = d(tau, n, nu)
    c = 1.0 - nu + (1.0 - tau) * n
    if c > 0.0:
        return 2.0 * nu * (1.0 + n) / (dd + c)
    return 0.5 * (dd - c)


def d_x(x, tau, n, nu):
    """Correlation function ``d_x`` for ``x`` in {0, 1}."""
    if x == 0:
        return d0(tau, n, nu)
    if x == 1:
        return d1(tau, n, nu)
    raise DomainError(f"x must be 0 or 1, got {x!r}")


def d1_gap(tau, n, nu):
    """``n - d_1(tau, n, nu)``, which also equals ``tau n + nu - d_0``."""
    dd = d(tau, n, nu)
    return 2.0 * tau * n * (n + 1.0) / (1.0 + nu + (1.0 + tau) * n + dd)


def d1_slope_at_zero(tau, nu):
    """Derivative of ``d_1`` in ``n`` at ``n = 0``: ``(1 + nu - tau) / (1 + nu)``."""
    tau = _check_tau(tau)
    nu = _check_photons("nu", nu)
    return ((1.0 - tau) + nu) / (1.0 + nu)
