"""
Segmented amplified fiber link -> effective transmittivity and noise.

Conventions (fixed so that the full-regeneration closed forms come out as
``tau_eff = tau_L``, ``nu_eff = 1 - tau_L^(K-1)`` for a passive receiver and
``tau_eff = 1``, ``nu_eff = (1 - tau_L^K) / tau_L`` for an active one):

* the link has K segments of transmittivity ``tau_L``;
* a passive receiver sees amplifiers after segments 1..K-1, an active receiver
  has one more directly before detection (K amplifiers);
* each amplifier multiplies the signal by G and injects G - 1 noise photons,
  which are then attenuated by the remaining segments;
* the mode-dependent rule evaluates G at the transmitter's photons per mode.
"""
import enum
import math
from dataclasses import dataclass

from .capacity import ChannelParams
from .errors import DomainError


class Receiver(enum.Enum):
    PASSIVE = "passive"
    ACTIVE = "active"


class GainRule(enum.Enum):
    FULL_REGENERATION = "g1"  # G = 1 / tau_L
    MODE_DEPENDENT = "g2"  # G = (1 + n) / (1 + tau_L n)


@dataclass(frozen=True)
class SegmentedLink:
    segment_length: float  # km
    segment_count: int
    alpha: float  # 1/km (natural-log attenuation)
    receiver: Receiver = Receiver.PASSIVE
    gain_rule: GainRule = GainRule.FULL_REGENERATION

    def __post_init__(self):
        if not (math.isfinite(self.segment_length) and self.segment_length > 0):
            raise DomainError(f"segment_length must be > 0, got {self.segment_length!r}")
        if int(self.segment_count) != self.segment_count or self.segment_count < 1:
            raise DomainError(f"segment_count must be an integer >= 1, got {self.segment_count!r}")
        if not (math.isfinite(self.alpha) and self.alpha >= 0):
            raise DomainError(f"alpha must be >= 0, got {self.alpha!r}")
        object.__setattr__(self, "segment_count", int(self.segment_count))
        object.__setattr__(self, "receiver", Receiver(self.receiver))
        object.__setattr__(self, "gain_rule", GainRule(self.gain_rule))

    @property
    def tau_segment(self):
        return segment_transmittivity(self.alpha, self.segment_length)

    @property
    def amplifier_count(self):
        k = self.segment_count
        return k if self.receiver is Receiver.ACTIVE else k - 1


@dataclass(frozen=True)
class EffectiveChannel:
    tau_eff: float
    nu_eff: float
    gain: float
    photons_per_mode: float


def segment_transmittivity(alpha, length):
    """``tau_L = exp(-alpha L)``."""
    if not alpha >= 0:
        raise DomainError(f"alpha must be >= 0, got {alpha!r}")
    if not length > 0:
        raise DomainError(f"segment length must be > 0, got {length!r}")
    return math.exp(-alpha * length)


def attenuation_from_db(loss_db_per_km):
    """Convert a loss in dB/km to the exponential coefficient alpha in 1/km."""
    if loss_db_per_km < 0:
        raise DomainError(f"loss must be >= 0 dB/km, got {loss_db_per_km!r}")
    return math.log(10.0) * loss_db_per_km / 10.0


def _check_tau_l(tau_l):
    if not 0.0 < tau_l <= 1.0:
        raise DomainError(f"segment transmittivity must lie in (0, 1], got {tau_l!r}")


def gain_minus_one(rule, tau_l, n):
    """``G - 1`` without forming G first."""
    _check_tau_l(tau_l)
    rule = GainRule(rule)
    if rule is GainRule.FULL_REGENERATION:
        return (1.0 - tau_l) / tau_l
    if not n >= 0:
        raise DomainError(f"photons per mode must be >= 0, got {n!r}")
    return (1.0 - tau_l) * n / (1.0 + tau_l * n)


def gain(rule, tau_l, n):
    """Amplifier gain: ``1/tau_L`` (full regeneration) or ``(1+n)/(1+tau_L n)``."""
    rule = GainRule(rule)
    _check_tau_l(tau_l)
    if rule is GainRule.FULL_REGENERATION:
        return 1.0 / tau_l
    if not n >= 0:
        raise DomainError(f"photons per mode must be >= 0, got {n!r}")
    return (1.0 + n) / (1.0 + tau_l * n)


def geometric_sum(tau_l, count):
    """``sum_{j=0}^{count-1} tau_L^j``, exact limit ``count`` at tau_L = 1."""
    if count <= 0:
        return 0.0
    if tau_l == 1.0:
        return float(count)
    log_t = math.log(tau_l)
    return math.expm1(count * log_t) / math.expm1(log_t)


def generic_noise(tau_l, segment_count, gain_excess, receiver):
    """Noise photons at the receiver for a given ``G - 1``.

    Passive: ``(tau_L - tau_L^K) / (1 - tau_L) * (G - 1)``; the active receiver
    adds the undamped contribution of its pre-amplifier.
    """
    if Receiver(receiver) is Receiver.ACTIVE:
        return gain_excess * geometric_sum(tau_l, segment_count)
    return gain_excess * tau_l * geometric_sum(tau_l, segment_count - 1)


def printed_noise(rule, receiver, tau_l, segment_count, n=0.0):
    """The four closed forms for the noise exactly as originally published.

    The mode-dependent/active form has ``1 - tau_L n`` in the denominator, which
    disagrees with :func:`generic_noise` (that gives ``1 + tau_L n``) for every
    n > 0. It is reproduced here verbatim, including its pole at n = 1/tau_L.
    """
    rule, receiver = GainRule(rule), Receiver(receiver)
    t, k = tau_l, segment_count
    if rule is GainRule.FULL_REGENERATION:
        if receiver is Receiver.PASSIVE:
            return 1.0 - t ** (k - 1)
        return (1.0 - t ** k) / t
    if receiver is Receiver.PASSIVE:
        return (t - t ** k) * n / (1.0 + t * n)
    denominator = 1.0 - t * n
    if denominator <= 0:
        raise DomainError(
            f"1 - tau_L n = {denominator!r} <= 0 in the active mode-dependent noise form")
    return (1.0 - t ** k) * n / denominator


def effective_transmittivity(link, n):
    """``tau_L (G tau_L)^(K-1)`` (passive) or ``(G tau_L)^K`` (active)."""
    tau_l = link.tau_segment
    if link.gain_rule is GainRule.FULL_REGENERATION:
        stage = 1.0  # G tau_L == 1 exactly
    else:
        stage = tau_l * gain(link.gain_rule, tau_l, n)
    if link.receiver is Receiver.ACTIVE:
        return stage ** link.segment_count
    return tau_l * stage ** (link.segment_count - 1)


def effective_noise(link, n, assume_nu_eff_a_typo=False):
    """Thermal noise photons per mode arriving at the receiver.

    Mode-dependent gain with an active receiver follows the published closed
    form ``(1 - tau_L^K) n / (1 - tau_L n)`` unless ``assume_nu_eff_a_typo`` is
    set, in which case the geometric series (denominator ``1 + tau_L n``) is
    used. The published form raises :class:`DomainError` once
    ``tau_L n >= 1``.
    """
    tau_l = link.tau_segment
    if (link.gain_rule is GainRule.MODE_DEPENDENT and link.receiver is Receiver.ACTIVE
            and not assume_nu_eff_a_typo):
        return printed_noise(link.gain_rule, link.receiver, tau_l, link.segment_count, n)
    excess = gain_minus_one(link.gain_rule, tau_l, n)
    return generic_noise(tau_l, link.segment_count, excess, link.receiver)


def effective_channel(link, modes, power, assume_nu_eff_a_typo=False):
    """Effective ``(tau_eff, nu_eff, G, n)`` for M modes carrying P photons/s."""
    if not modes >= 1:
        raise DomainError(f"modes must be >= 1, got {modes!r}")
    if not power >= 0:
        raise DomainError(f"power must be >= 0, got {power!r}")
    n = power / modes
    return EffectiveChannel(
        tau_eff=effective_transmittivity(link, n),
        nu_eff=effective_noise(link, n, assume_nu_eff_a_typo),
        gain=gain(link.gain_rule, link.tau_segment, n),
        photons_per_mode=n,
    )


def channel_params(link, modes, power, assume_nu_eff_a_typo=False):
    """Shortcut: the :class:`ChannelParams` seen through ``link``."""
    eff = effective_channel(link, modes, power, assume_nu_eff_a_typo)
    return ChannelParams(modes, power, eff.tau_eff, eff.nu_eff)
