"""
Physical constants, photon/Watt conversion, fiber mode count and amplifier
power accounting.
"""
import math
from dataclasses import dataclass

from .errors import DomainError
from .link import Receiver

PLANCK = 6.626e-34  # J s
LIGHT_SPEED = 2.998e8  # m/s
WAVELENGTH = 1550e-9  # m


@dataclass(frozen=True)
class PhysicalConstants:
    planck: float = PLANCK
    light_speed: float = LIGHT_SPEED
    wavelength: float = WAVELENGTH

    def __post_init__(self):
        for name in ("planck", "light_speed", "wavelength"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be positive, got {value!r}")

    @property
    def carrier_frequency(self):
        return self.light_speed / self.wavelength

    @property
    def photon_energy(self):
        return self.planck * self.carrier_frequency


@dataclass(frozen=True)
class FiberGeometry:
    core_radius: float  # m
    n_core: float
    n_clad: float

    def __post_init__(self):
        if not self.core_radius > 0:
            raise DomainError(f"core_radius must be > 0, got {self.core_radius!r}")
        if not self.n_core > self.n_clad > 0:
            raise DomainError("need n_core > n_clad > 0")

    @property
    def numerical_aperture(self):
        return math.sqrt(self.n_core ** 2 - self.n_clad ** 2)


def photon_flux_from_watts(power_watts, constants=PhysicalConstants()):
    """Photons per second carried by ``power_watts`` at the carrier wavelength."""
    if power_watts < 0:
        raise DomainError(f"power must be >= 0 W, got {power_watts!r}")
    return power_watts / constants.photon_energy


def v_number(geom, wavelength):
    return 2.0 * math.pi * geom.core_radius / wavelength * geom.numerical_aperture


def mode_count(geom, wavelength=WAVELENGTH):
    """Approximate number of guided spatial modes, ``V^2 / 2`` (not rounded)."""
    if not wavelength > 0:
        raise DomainError(f"wavelength must be > 0, got {wavelength!r}")
    return 0.5 * v_number(geom, wavelength) ** 2


def total_channels(spatial_modes, slot_rate):
    """Orthogonal channels per second, ``M = N B``."""
    if spatial_modes < 1:
        raise DomainError(f"spatial mode count must be >= 1, got {spatial_modes!r}")
    if not slot_rate > 0:
        raise DomainError(f"slot rate must be > 0, got {slot_rate!r}")
    return spatial_modes * slot_rate


def power_consumption(n, segment_count, gain, tau_l, receiver):
    """Photons per mode per second spent by the sender and all amplifiers.

    ``n + (K + 1/2 +- 1/2) ((G - 1) tau_L n + G - 1)``: the active receiver
    counts K + 1 amplifiers, the passive one K. ``n`` is the sender's flux per
    mode (photons per use times the slot rate).
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n!r}")
    if segment_count < 1:
        raise DomainError(f"segment_count must be >= 1, got {segment_count!r}")
    if gain < 1:
        raise DomainError(f"gain must be >= 1, got {gain!r}")
    amplifiers = segment_count + (1 if Receiver(receiver) is Receiver.ACTIVE else 0)
    excess = gain - 1.0
    return n + amplifiers * (excess * tau_l * n + excess)


def consumption_watts(photons_per_mode, modes, constants=PhysicalConstants()):
    """Convert per-mode photon consumption to Watts: ``P * M * h f_c``."""
    if photons_per_mode < 0 or modes < 0:
        raise DomainError("consumption and mode count must be >= 0")
    return photons_per_mode * modes * constants.photon_energy
