"""Shannon, Holevo and entanglement-assisted capacities of amplified multi-mode fiber links."""
from .capacity import (
    CapacityResult,
    ChannelParams,
    capacities,
    ea_asymptotic,
    ea_asymptotic_expansion,
    ea_capacity,
    ea_constant_limit,
    ea_constant_term,
    ea_terms,
    holevo_capacity,
    holevo_limit,
    min_modes_for_advantage,
    shannon_capacity,
    shannon_saturation,
)
from .entropy import d, d0, d1, d1_slope_at_zero, d_x, g, g_diff
from .errors import ConfigError, DivergenceError, DomainError, NoCrossingError
from .link import (
    EffectiveChannel,
    GainRule,
    Receiver,
    SegmentedLink,
    attenuation_from_db,
    effective_channel,
    effective_noise,
    effective_transmittivity,
    gain,
    segment_transmittivity,
)
from .physical import (
    FiberGeometry,
    PhysicalConstants,
    consumption_watts,
    mode_count,
    photon_flux_from_watts,
    power_consumption,
    total_channels,
)
from .sweep import (
    SweepRow,
    SweepSpec,
    convergence_report,
    find_maxima,
    paper_like_preset,
    run_sweep,
)

__version__ = "0.1.0"
