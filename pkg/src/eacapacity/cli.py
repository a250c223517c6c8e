"""
Command-line front end.

    eacap capacity  --preset paper-like
    eacap sweep     --preset paper-like --output json --out rows.json
    eacap modes     --set geometry.core_radius=25e-6 --set geometry.n_core=1.46 ...
    eacap advantage --config link.ini --factor 2
    eacap power     --preset paper-like --modes 1e12

Exit codes: 0 success, 2 configuration error, 3 domain error, 4 no crossing.
Capacities are reported in bits per second, powers in photons per second
unless the column says watts.
"""
import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import capacity, config as configmod, link as linkmod, physical, sweep as sweepmod
from .errors import ConfigError, DivergenceError, DomainError, NoCrossingError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_NO_CROSSING = 4

CAPACITY_FIELDS = ("modes", "power", "tau_eff", "nu_eff", "shannon", "holevo", "ea",
                   "ea_approx", "ea_term_x0", "ea_term_x1", "slope_T")


def format_number(value):
    """Shortest round-trip text; scientific notation from 1e6 upwards."""
    if isinstance(value, str):
        return value
    value = float(value)
    if math.isfinite(value) and abs(value) >= 1e6:
        return np.format_float_scientific(value, unique=True, trim="-")
    return repr(value)


def _cell(row, name):
    if row.error is not None and name != "x":
        return f"ERR:{row.error}"
    return getattr(row, name)


def render(records, fields, fmt):
    """Serialise a list of dicts (values: float or sentinel string)."""
    if fmt == "json":
        return json.dumps([{k: rec[k] for k in fields} for rec in records], indent=1) + "\n"
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(fields)
    for rec in records:
        writer.writerow([format_number(rec[k]) for k in fields])
    return out.getvalue()


def sweep_records(rows):
    return [{name: _cell(row, name) for name in sweepmod.COLUMNS} for row in rows]


def _require_channel(cfg):
    if cfg.power is None:
        raise ConfigError("channel.power", "missing (power or power_watts)")
    if cfg.link is None and cfg.tau is None:
        raise ConfigError("channel.tau", "needed (with channel.nu) when no [link] is configured")


def _channel(cfg, modes):
    _require_channel(cfg)
    if cfg.link is None:
        return capacity.ChannelParams(modes, cfg.power, cfg.tau, cfg.nu)
    return linkmod.channel_params(cfg.link, modes, cfg.power, cfg.assume_nu_eff_a_typo)


def _require_modes(cfg):
    if cfg.modes is None:
        raise ConfigError("channel.modes", "missing")
    return cfg.modes


def cmd_capacity(cfg):
    ch = _channel(cfg, _require_modes(cfg))
    res = capacity.capacities(ch)
    record = {"modes": ch.modes, "power": ch.power, "tau_eff": ch.tau, "nu_eff": ch.nu}
    record.update({k: getattr(res, k) for k in CAPACITY_FIELDS if hasattr(res, k)})
    return render([record], CAPACITY_FIELDS, cfg.output), EXIT_OK


def cmd_sweep(cfg):
    if cfg.sweep is None:
        raise ConfigError("sweep", "missing [sweep] section")
    rows = sweepmod.run_sweep(cfg.sweep)
    status = EXIT_OK if any(r.error is None for r in rows) else EXIT_DOMAIN
    return render(sweep_records(rows), sweepmod.COLUMNS, cfg.output), status


def cmd_modes(cfg):
    if cfg.geometry is None:
        raise ConfigError("geometry", "missing [geometry] section")
    wavelength = cfg.constants.wavelength
    n_modes = physical.mode_count(cfg.geometry, wavelength)
    record = {"wavelength": wavelength,
              "v_number": physical.v_number(cfg.geometry, wavelength),
              "spatial_modes": n_modes}
    fields = ["wavelength", "v_number", "spatial_modes"]
    if cfg.slot_rate is not None:
        record["slot_rate"] = cfg.slot_rate
        record["modes"] = physical.total_channels(n_modes, cfg.slot_rate)
        fields += ["slot_rate", "modes"]
    return render([record], fields, cfg.output), EXIT_OK


def cmd_advantage(cfg):
    _require_channel(cfg)
    if cfg.link is None:
        if not cfg.nu > 0:
            raise DivergenceError("advantage search needs nu > 0")
        channel_at = None
    else:
        def channel_at(m):
            return linkmod.channel_params(cfg.link, m, cfg.power, cfg.assume_nu_eff_a_typo)
    modes = capacity.min_modes_for_advantage(
        cfg.power, cfg.tau, cfg.nu, cfg.factor, m_max=cfg.m_max, channel_at=channel_at)
    ch = _channel(cfg, modes)
    if not ch.nu > 0:
        raise DivergenceError("advantage search needs nu_eff > 0")
    ea = capacity.ea_capacity(ch)
    holevo = capacity.holevo_capacity(ch)
    record = {"factor": cfg.factor, "modes": modes, "ea": ea, "holevo": holevo,
              "ratio": ea / holevo}
    return render([record], ["factor", "modes", "ea", "holevo", "ratio"], cfg.output), EXIT_OK


def cmd_power(cfg):
    if cfg.link is None:
        raise ConfigError("link", "power accounting needs a [link] section")
    _require_channel(cfg)
    modes = _require_modes(cfg)
    eff = linkmod.effective_channel(cfg.link, modes, cfg.power, cfg.assume_nu_eff_a_typo)
    per_mode = physical.power_consumption(eff.photons_per_mode, cfg.link.segment_count,
                                          eff.gain, cfg.link.tau_segment, cfg.link.receiver)
    record = {"modes": modes, "photons_per_mode": eff.photons_per_mode, "gain": eff.gain,
              "consumption_per_mode": per_mode,
              "power_watts": physical.consumption_watts(per_mode, modes, cfg.constants)}
    return render([record], list(record), cfg.output), EXIT_OK


COMMANDS = {
    "capacity": cmd_capacity,
    "sweep": cmd_sweep,
    "modes": cmd_modes,
    "advantage": cmd_advantage,
    "power": cmd_power,
}

# dedicated flags -> config keys
FLAG_KEYS = {
    "modes": ("channel", "modes"),
    "power": ("channel", "power"),
    "power_watts": ("channel", "power_watts"),
    "tau": ("channel", "tau"),
    "nu": ("channel", "nu"),
    "factor": ("advantage", "factor"),
    "wavelength": ("constants", "wavelength"),
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="eacap",
        description="Capacities of amplified multi-mode fiber links.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="configuration file (INI-style)")
    parser.add_argument("--preset", choices=sorted(configmod.PRESETS))
    parser.add_argument("--output", choices=("csv", "json"))
    parser.add_argument("--out", help="write the table here instead of stdout")
    parser.add_argument("--assume-nu-eff-a-typo", action="store_true",
                        help="use 1 + tau_L n in the active G2 noise denominator")
    parser.add_argument("--dump-config", action="store_true",
                        help="print the effective configuration and exit")
    parser.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                        help="override any config key (repeatable)")
    for name in FLAG_KEYS:
        parser.add_argument("--" + name.replace("_", "-"), dest=name, metavar="VALUE")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        overrides = [configmod.parse_assignment(text) for text in args.set]
        for name, (section, key) in FLAG_KEYS.items():
            value = getattr(args, name)
            if value is not None:
                overrides.append({section: {key: value}})
        if args.output:
            overrides.append({"output": {"format": args.output}})
        if args.assume_nu_eff_a_typo:
            overrides.append({"output": {"assume_nu_eff_a_typo": "true"}})
        cfg = configmod.load(args.config, args.preset, overrides)
        if args.dump_config:
            sys.stdout.write(configmod.dump(cfg))
            return EXIT_OK
        text, status = COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"eacap: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoCrossingError as exc:
        print(f"eacap: {exc}", file=sys.stderr)
        return EXIT_NO_CROSSING
    except (DomainError, DivergenceError) as exc:
        print(f"eacap: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
