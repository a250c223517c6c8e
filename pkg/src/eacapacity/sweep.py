"""
One-dimensional parameter sweeps over an amplified link, maxima detection and
convergence checks.
"""
import dataclasses
import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import capacity, link as linkmod, physical
from .errors import DomainError

COLUMNS = ("x", "tau_eff", "nu_eff", "gain", "shannon", "holevo", "ea",
           "ea_approx", "power_watts")
CAPACITY_COLUMNS = ("shannon", "holevo", "ea")

DEFAULT_POINTS = 400
# peaks smaller than this (relative) are rounding wiggles on a plateau
PEAK_NOISE = 8e-16


class Variable(enum.Enum):
    MODES = "modes"
    SEGMENT_COUNT = "segment_count"
    SEGMENT_LENGTH = "segment_length"
    POWER = "power"


class Spacing(enum.Enum):
    LOG = "log"
    LINEAR = "linear"


@dataclass(frozen=True)
class SweepSpec:
    """A scan of one variable with everything else held fixed.

    With ``link=None`` the channel is used directly with transmittivity ``tau``
    and noise ``nu`` (no amplifiers; gain reported as 1).
    """

    variable: Variable
    start: float
    stop: float
    points: int = DEFAULT_POINTS
    spacing: Spacing = Spacing.LOG
    link: Optional[linkmod.SegmentedLink] = None
    modes: float = 1.0
    power: float = 1e16
    tau: float = 1.0
    nu: float = 0.0
    constants: physical.PhysicalConstants = field(default_factory=physical.PhysicalConstants)
    assume_nu_eff_a_typo: bool = False

    def __post_init__(self):
        object.__setattr__(self, "variable", Variable(self.variable))
        object.__setattr__(self, "spacing", Spacing(self.spacing))
        if not (math.isfinite(self.start) and math.isfinite(self.stop)) or self.start >= self.stop:
            raise DomainError(f"need start < stop, got {self.start!r}, {self.stop!r}")
        if int(self.points) != self.points or self.points < 2:
            raise DomainError(f"points must be an integer >= 2, got {self.points!r}")
        object.__setattr__(self, "points", int(self.points))
        if self.spacing is Spacing.LOG and self.start <= 0:
            raise DomainError("log spacing needs start > 0")
        if self.link is None and self.variable in (Variable.SEGMENT_COUNT, Variable.SEGMENT_LENGTH):
            raise DomainError(f"sweeping {self.variable.value} needs a link")


@dataclass(frozen=True)
class SweepRow:
    x: float
    tau_eff: float
    nu_eff: float
    gain: float
    shannon: float
    holevo: float
    ea: float
    ea_approx: float
    power_watts: float
    error: Optional[str] = None

    def values(self):
        return [getattr(self, name) for name in COLUMNS]


@dataclass(frozen=True)
class Maximum:
    x: float
    column: str
    value: float
    kind: str  # "global" or "local"


@dataclass(frozen=True)
class ConvergenceReport:
    gaps: List[float]
    first_within: Optional[int]
    monotone: bool


def sweep_grid(spec):
    if spec.spacing is Spacing.LOG:
        grid = np.logspace(math.log10(spec.start), math.log10(spec.stop), spec.points)
    else:
        grid = np.linspace(spec.start, spec.stop, spec.points)
    # pin the endpoints exactly
    grid[0], grid[-1] = spec.start, spec.stop
    if spec.variable is Variable.SEGMENT_COUNT:
        grid = np.round(grid)
    return [float(x) for x in grid]


def _point_setup(spec, x):
    modes, power, link = spec.modes, spec.power, spec.link
    if spec.variable is Variable.MODES:
        modes = x
    elif spec.variable is Variable.POWER:
        power = x
    elif spec.variable is Variable.SEGMENT_COUNT:
        link = dataclasses.replace(link, segment_count=int(x))
    else:
        link = dataclasses.replace(link, segment_length=x)
    return modes, power, link


def evaluate_point(spec, x):
    """One sweep row; domain errors are recorded in the row, not raised."""
    try:
        modes, power, link = _point_setup(spec, x)
        if link is None:
            ch = capacity.ChannelParams(modes, power, spec.tau, spec.nu)
            gain = 1.0
            consumed = ch.photons_per_mode
        else:
            eff = linkmod.effective_channel(link, modes, power, spec.assume_nu_eff_a_typo)
            ch = capacity.ChannelParams(modes, power, eff.tau_eff, eff.nu_eff)
            gain = eff.gain
            consumed = physical.power_consumption(
                eff.photons_per_mode, link.segment_count, eff.gain, link.tau_segment,
                link.receiver)
        result = capacity.capacities(ch)
    except DomainError:
        return _error_row(x, "domain")
    except ArithmeticError:
        return _error_row(x, "arithmetic")
    return SweepRow(
        x=x,
        tau_eff=ch.tau,
        nu_eff=ch.nu,
        gain=gain,
        shannon=result.shannon,
        holevo=result.holevo,
        ea=result.ea,
        ea_approx=result.ea_approx,
        power_watts=physical.consumption_watts(consumed, modes, spec.constants),
    )


def _error_row(x, code):
    nan = float("nan")
    return SweepRow(x, nan, nan, nan, nan, nan, nan, nan, nan, error=code)


def run_sweep(spec, workers=None):
    """Evaluate every grid point; rows come back in grid order.

    ``workers > 1`` evaluates points on a thread pool. Each point is a pure
    function of ``(spec, x)`` so the output is identical to the serial run.
    """
    grid = sweep_grid(spec)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda x: evaluate_point(spec, x), grid))
    return [evaluate_point(spec, x) for x in grid]


INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f, a, b, tol):
    """Maximiser of a unimodal ``f`` on ``[a, b]`` to within ``tol``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _vertex(u, v):
    # vertex of the parabola through three points
    (u0, u1, u2), (v0, v1, v2) = u, v
    denom = (u0 - u1) * (u0 - u2) * (u1 - u2)
    a = (u2 * (v1 - v0) + u1 * (v0 - v2) + u0 * (v2 - v1)) / denom
    b = (u2 * u2 * (v0 - v1) + u1 * u1 * (v2 - v0) + u0 * u0 * (v1 - v2)) / denom
    return -b / (2.0 * a)


def find_maxima(rows, columns=CAPACITY_COLUMNS, refine=None, log_x=None, rel_tol=1e-6):
    """Interior peaks of each column, classified global or local.

    A peak is a row above both neighbours by more than rounding noise. Its position is refined by
    golden-section search of ``refine(column, x)`` between the neighbouring
    grid points (in log x when ``log_x``), down to a relative x tolerance of
    ``rel_tol``. Without ``refine`` the vertex of the parabola through the
    three grid points is used. A peak is global when no row of the column
    exceeds its value.
    """
    if len(rows) < 3:
        raise DomainError("find_maxima needs at least 3 rows")
    xs = [r.x for r in rows]
    if log_x is None:
        log_x = xs[0] > 0 and _looks_geometric(xs)
    to_u = math.log if log_x else (lambda x: x)
    from_u = math.exp if log_x else (lambda u: u)

    found = []
    for column in columns:
        values = [getattr(r, column) for r in rows]
        best = max((v for v in values if math.isfinite(v)), default=-math.inf)
        for i in range(1, len(rows) - 1):
            left, mid, right = values[i - 1], values[i], values[i + 1]
            if not all(math.isfinite(v) for v in (left, mid, right)):
                continue
            if not mid - max(left, right) > PEAK_NOISE * abs(mid):
                continue
            lo, hi = to_u(xs[i - 1]), to_u(xs[i + 1])
            if refine is None:
                u = _vertex((lo, to_u(xs[i]), hi), (left, mid, right))
                x = from_u(u)
                value = _parabola_value((lo, to_u(xs[i]), hi), (left, mid, right), u)
            else:
                tol = rel_tol if log_x else rel_tol * max(abs(xs[i]), 1e-300)
                u = golden_section_max(lambda t: refine(column, from_u(t)), lo, hi, tol)
                x = from_u(u)
                value = refine(column, x)
            kind = "global" if value >= best else "local"
            found.append(Maximum(x=x, column=column, value=value, kind=kind))
    return found


def _parabola_value(u, v, t):
    (u0, u1, u2), (v0, v1, v2) = u, v
    return (v0 * (t - u1) * (t - u2) / ((u0 - u1) * (u0 - u2))
            + v1 * (t - u0) * (t - u2) / ((u1 - u0) * (u1 - u2))
            + v2 * (t - u0) * (t - u1) / ((u2 - u0) * (u2 - u1)))


def _looks_geometric(xs):
    if any(x <= 0 for x in xs):
        return False
    ratios = [b / a for a, b in zip(xs, xs[1:])]
    return max(ratios) - min(ratios) < 1e-6 * max(ratios) and ratios[0] != 1.0


def spec_refiner(spec):
    """``refine`` callback for :func:`find_maxima` that re-evaluates ``spec``."""
    def refine(column, x):
        return getattr(evaluate_point(spec, x), column)
    return refine


def maxima_for_sweep(spec, rows=None, columns=CAPACITY_COLUMNS):
    """Sweep (unless rows are given) and refine maxima on the continuous function."""
    rows = run_sweep(spec) if rows is None else rows
    refine = None if spec.variable is Variable.SEGMENT_COUNT else spec_refiner(spec)
    return find_maxima(rows, columns, refine=refine, log_x=spec.spacing is Spacing.LOG)


def convergence_report(rows, target, column, tol=1e-3):
    """Relative gap ``|value - target| / |target|`` for every row.

    ``column`` is a row attribute name or a callable of the row. Whether the
    gaps decrease is reported, not enforced.
    """
    if not (math.isfinite(target) and target != 0):
        raise DomainError(f"target must be finite and nonzero, got {target!r}")
    get = column if callable(column) else (lambda r: getattr(r, column))
    gaps = [abs(get(r) - target) / abs(target) for r in rows]
    first = next((i for i, gap in enumerate(gaps) if gap <= tol), None)
    monotone = all(b <= a for a, b in zip(gaps, gaps[1:]))
    return ConvergenceReport(gaps=gaps, first_within=first, monotone=monotone)


def paper_like_preset(points=DEFAULT_POINTS):
    """Reconstructed setting: P = 1e16 photons/s, K = 5 segments of 10 km,
    alpha = 0.05 /km, passive receiver, full regeneration, M from 1e2 to 1e40.

    The original figure parameters were never published; this is a plausible
    reconstruction, not ground truth.
    """
    link = linkmod.SegmentedLink(segment_length=10.0, segment_count=5, alpha=0.05)
    return SweepSpec(variable=Variable.MODES, start=1e2, stop=1e40, points=points,
                     spacing=Spacing.LOG, link=link, power=1e16)
