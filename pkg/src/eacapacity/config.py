"""
Run configuration: an INI-style file of ``[section]`` blocks with ``key = value``
lines, merged with command-line overrides and validated into a
:class:`RunConfig`.

Grammar (``#`` and ``;`` start comments, keys are case-insensitive)::

    [link]       segment_length (km), segment_count, alpha (1/km) or
                 loss_db_per_km, receiver = passive|active, gain_rule = g1|g2
    [channel]    modes, power (photons/s) or power_watts, and for a bare channel
                 without amplifiers: tau, nu
    [constants]  planck, light_speed, wavelength (m)
    [sweep]      variable = modes|segment_count|segment_length|power,
                 start, stop, points, spacing = log|linear
    [geometry]   core_radius (m), n_core, n_clad, slot_rate (Hz)
    [advantage]  factor, m_max
    [output]     format = csv|json, assume_nu_eff_a_typo = true|false

Precedence: preset < file < flags. Watts are converted to photons/s once, here.
"""
import configparser
import io
import math
from dataclasses import dataclass
from typing import Optional

from . import link as linkmod
from . import physical
from .errors import ConfigError
from .sweep import Spacing, SweepSpec, Variable

SCHEMA = {
    "link": {"segment_length", "segment_count", "alpha", "loss_db_per_km", "receiver",
             "gain_rule"},
    "channel": {"modes", "power", "power_watts", "tau", "nu"},
    "constants": {"planck", "light_speed", "wavelength"},
    "sweep": {"variable", "start", "stop", "points", "spacing"},
    "geometry": {"core_radius", "n_core", "n_clad", "slot_rate"},
    "advantage": {"factor", "m_max"},
    "output": {"format", "assume_nu_eff_a_typo"},
}

PRESETS = {
    "paper-like": {
        "link": {"segment_length": "10", "segment_count": "5", "alpha": "0.05",
                 "receiver": "passive", "gain_rule": "g1"},
        "channel": {"modes": "1e9", "power": "1e16"},
        "sweep": {"variable": "modes", "start": "1e2", "stop": "1e40", "points": "400",
                  "spacing": "log"},
    },
}


@dataclass(frozen=True)
class RunConfig:
    power: Optional[float] = None  # photons/s
    modes: Optional[float] = None
    link: Optional[linkmod.SegmentedLink] = None
    tau: Optional[float] = None
    nu: Optional[float] = None
    constants: physical.PhysicalConstants = physical.PhysicalConstants()
    sweep: Optional[SweepSpec] = None
    geometry: Optional[physical.FiberGeometry] = None
    slot_rate: Optional[float] = None
    factor: float = 2.0
    m_max: float = 1e60
    output: str = "csv"
    assume_nu_eff_a_typo: bool = False


def empty_raw():
    return {section: {} for section in SCHEMA}


def merge(base, update):
    out = {s: dict(v) for s, v in base.items()}
    for section, values in update.items():
        out.setdefault(section, {}).update(values)
    return out


def parse_text(text, source="<config>"):
    """Parse config text into ``{section: {key: raw string}}``."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"),
                                       interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError("config", str(exc).splitlines()[0]) from None
    raw = empty_raw()
    for section in parser.sections():
        name = section.strip().lower()
        if name not in SCHEMA:
            raise ConfigError(name, "unknown section")
        for key, value in parser.items(section):
            if key not in SCHEMA[name]:
                raise ConfigError(f"{name}.{key}", "unknown key")
            raw[name][key] = value.strip()
    return raw


def parse_assignment(text):
    """``section.key=value`` -> ``{section: {key: value}}``."""
    if "=" not in text or "." not in text.split("=", 1)[0]:
        raise ConfigError(text, "expected section.key=value")
    target, value = text.split("=", 1)
    section, key = (part.strip().lower() for part in target.split(".", 1))
    if section not in SCHEMA or key not in SCHEMA[section]:
        raise ConfigError(f"{section}.{key}", "unknown key")
    return {section: {key: value.strip()}}


def _num(raw, section, key, default=None, positive=False, nonneg=False):
    text = raw.get(section, {}).get(key)
    if text is None:
        return default
    field = f"{section}.{key}"
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(field, f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(field, "must be finite")
    if positive and value <= 0:
        raise ConfigError(field, f"must be > 0, got {text}")
    if nonneg and value < 0:
        raise ConfigError(field, f"must be >= 0, got {text}")
    return value


def _choice(raw, section, key, choices, default):
    text = raw.get(section, {}).get(key)
    if text is None:
        return default
    value = text.lower()
    if value not in choices:
        raise ConfigError(f"{section}.{key}", f"expected one of {sorted(choices)}, got {text!r}")
    return value


def _bool(raw, section, key, default=False):
    text = raw.get(section, {}).get(key)
    if text is None:
        return default
    value = text.lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{section}.{key}", f"expected true/false, got {text!r}")


def validate(raw):
    """Turn raw strings into a :class:`RunConfig`; raises :class:`ConfigError`."""
    constants = physical.PhysicalConstants(
        planck=_num(raw, "constants", "planck", physical.PLANCK, positive=True),
        light_speed=_num(raw, "constants", "light_speed", physical.LIGHT_SPEED, positive=True),
        wavelength=_num(raw, "constants", "wavelength", physical.WAVELENGTH, positive=True),
    )

    ch = raw.get("channel", {})
    if "power" in ch and "power_watts" in ch:
        raise ConfigError("channel.power", "give either power or power_watts, not both")
    if "power_watts" in ch:
        power = physical.photon_flux_from_watts(
            _num(raw, "channel", "power_watts", nonneg=True), constants)
    else:
        power = _num(raw, "channel", "power", nonneg=True)
    modes = _num(raw, "channel", "modes")
    if modes is not None and modes < 1:
        raise ConfigError("channel.modes", "must be >= 1")

    tau = _num(raw, "channel", "tau")
    nu = _num(raw, "channel", "nu", nonneg=True)
    if tau is not None and not 0 <= tau <= 1:
        raise ConfigError("channel.tau", "must lie in [0, 1]")

    link = None
    if raw.get("link"):
        if tau is not None or nu is not None:
            raise ConfigError("channel.tau", "tau/nu describe a bare channel; remove [link]")
        link = _validate_link(raw)
    elif (tau is None) != (nu is None):
        missing = "channel.tau" if tau is None else "channel.nu"
        raise ConfigError(missing, "needed together with the other bare-channel key")

    sweep = None
    if raw.get("sweep"):
        sweep = _validate_sweep(raw, link, modes, power, tau, nu, constants,
                                _bool(raw, "output", "assume_nu_eff_a_typo"))

    geometry, slot_rate = None, None
    if raw.get("geometry"):
        radius = _num(raw, "geometry", "core_radius", positive=True)
        n_core = _num(raw, "geometry", "n_core", positive=True)
        n_clad = _num(raw, "geometry", "n_clad", positive=True)
        for key, value in (("core_radius", radius), ("n_core", n_core), ("n_clad", n_clad)):
            if value is None:
                raise ConfigError(f"geometry.{key}", "missing")
        if n_core <= n_clad:
            raise ConfigError("geometry.n_core", "must exceed geometry.n_clad")
        geometry = physical.FiberGeometry(radius, n_core, n_clad)
        slot_rate = _num(raw, "geometry", "slot_rate", positive=True)

    factor = _num(raw, "advantage", "factor", 2.0)
    if factor < 1:
        raise ConfigError("advantage.factor", "must be >= 1")
    m_max = _num(raw, "advantage", "m_max", 1e60)
    if m_max <= 1e2:
        raise ConfigError("advantage.m_max", "must exceed 1e2")

    return RunConfig(
        power=power, modes=modes, link=link, tau=tau, nu=nu, constants=constants,
        sweep=sweep, geometry=geometry, slot_rate=slot_rate, factor=factor, m_max=m_max,
        output=_choice(raw, "output", "format", {"csv", "json"}, "csv"),
        assume_nu_eff_a_typo=_bool(raw, "output", "assume_nu_eff_a_typo"),
    )


def _validate_link(raw):
    lk = raw["link"]
    if "alpha" in lk and "loss_db_per_km" in lk:
        raise ConfigError("link.alpha", "give either alpha or loss_db_per_km, not both")
    if "loss_db_per_km" in lk:
        alpha = linkmod.attenuation_from_db(_num(raw, "link", "loss_db_per_km", nonneg=True))
    else:
        alpha = _num(raw, "link", "alpha", nonneg=True)
    length = _num(raw, "link", "segment_length", positive=True)
    count = _num(raw, "link", "segment_count", positive=True)
    for key, value in (("alpha", alpha), ("segment_length", length),
                       ("segment_count", count)):
        if value is None:
            raise ConfigError(f"link.{key}", "missing")
    if count != int(count):
        raise ConfigError("link.segment_count", "must be an integer")
    return linkmod.SegmentedLink(
        segment_length=length, segment_count=int(count), alpha=alpha,
        receiver=_choice(raw, "link", "receiver", {"passive", "active"}, "passive"),
        gain_rule=_choice(raw, "link", "gain_rule", {"g1", "g2"}, "g1"),
    )


def _validate_sweep(raw, link, modes, power, tau, nu, constants, typo):
    variable = _choice(raw, "sweep", "variable", {v.value for v in Variable}, "modes")
    spacing = _choice(raw, "sweep", "spacing", {"log", "linear"}, "log")
    start = _num(raw, "sweep", "start")
    stop = _num(raw, "sweep", "stop")
    if start is None or stop is None:
        raise ConfigError("sweep.start" if start is None else "sweep.stop", "missing")
    if start >= stop:
        raise ConfigError("sweep.stop", "must exceed sweep.start")
    if spacing == "log" and start <= 0:
        raise ConfigError("sweep.start", "must be > 0 for log spacing")
    points = _num(raw, "sweep", "points", 400)
    if points < 2 or points != int(points):
        raise ConfigError("sweep.points", "must be an integer >= 2")
    if power is None:
        raise ConfigError("channel.power", "missing (power or power_watts)")
    if link is None and tau is None:
        raise ConfigError("channel.tau", "a sweep needs a [link] or channel.tau/nu")
    if variable != "modes" and modes is None:
        raise ConfigError("channel.modes", f"needed when sweeping {variable}")
    if variable in ("segment_count", "segment_length") and link is None:
        raise ConfigError("sweep.variable", f"sweeping {variable} needs a [link]")
    if variable == "modes" and start < 1:
        raise ConfigError("sweep.start", "mode count must be >= 1")
    return SweepSpec(
        variable=Variable(variable), start=start, stop=stop, points=int(points),
        spacing=Spacing(spacing), link=link,
        modes=modes if modes is not None else 1.0, power=power,
        tau=tau if tau is not None else 1.0, nu=nu if nu is not None else 0.0,
        constants=constants, assume_nu_eff_a_typo=typo,
    )


def load(config_path=None, preset=None, overrides=()):
    """Merge preset, file and override dicts, then validate."""
    return validate(load_raw(config_path, preset, overrides))


def load_raw(config_path=None, preset=None, overrides=()):
    raw = empty_raw()
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError("preset", f"unknown preset {preset!r}")
        raw = merge(raw, PRESETS[preset])
    if config_path is not None:
        try:
            with open(config_path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError("config", str(exc)) from None
        raw = merge(raw, parse_text(text, str(config_path)))
    for update in overrides:
        raw = merge(raw, update)
    return raw


def dump(cfg):
    """Canonical config text for ``cfg``; parsing it back yields an equal config."""
    sections = {}
    sections["channel"] = {}
    if cfg.power is not None:
        sections["channel"]["power"] = repr(cfg.power)
    if cfg.modes is not None:
        sections["channel"]["modes"] = repr(cfg.modes)
    if cfg.tau is not None:
        sections["channel"]["tau"] = repr(cfg.tau)
        sections["channel"]["nu"] = repr(cfg.nu)
    if cfg.link is not None:
        sections["link"] = {
            "segment_length": repr(cfg.link.segment_length),
            "segment_count": str(cfg.link.segment_count),
            "alpha": repr(cfg.link.alpha),
            "receiver": cfg.link.receiver.value,
            "gain_rule": cfg.link.gain_rule.value,
        }
    sections["constants"] = {
        "planck": repr(cfg.constants.planck),
        "light_speed": repr(cfg.constants.light_speed),
        "wavelength": repr(cfg.constants.wavelength),
    }
    if cfg.sweep is not None:
        sections["sweep"] = {
            "variable": cfg.sweep.variable.value,
            "start": repr(cfg.sweep.start),
            "stop": repr(cfg.sweep.stop),
            "points": str(cfg.sweep.points),
            "spacing": cfg.sweep.spacing.value,
        }
    if cfg.geometry is not None:
        sections["geometry"] = {
            "core_radius": repr(cfg.geometry.core_radius),
            "n_core": repr(cfg.geometry.n_core),
            "n_clad": repr(cfg.geometry.n_clad),
        }
        if cfg.slot_rate is not None:
            sections["geometry"]["slot_rate"] = repr(cfg.slot_rate)
    sections["advantage"] = {"factor": repr(cfg.factor), "m_max": repr(cfg.m_max)}
    sections["output"] = {"format": cfg.output,
                          "assume_nu_eff_a_typo": str(cfg.assume_nu_eff_a_typo).lower()}
    out = io.StringIO()
    for name, values in sections.items():
        out.write(f"[{name}]\n")
        for key, value in values.items():
            out.write(f"{key} = {value}\n")
        out.write("\n")
    return out.getvalue()
