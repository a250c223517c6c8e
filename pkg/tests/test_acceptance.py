"""
Acceptance criteria 1-9. Each test prints one ``criterion N: PASS|FAIL`` line
(with the time taken against its budget) and then asserts the same verdict.
"""
import csv
import io
import json
import math
import time

import numpy as np
import pytest

from eacapacity import capacity as c, cli, entropy as e, link as l, oracle, sweep as s

RNG_SEED = 20240611


@pytest.fixture
def report(capsys):
    def emit(number, checks, started, budget):
        elapsed = time.perf_counter() - started
        checks = dict(checks)
        checks[f"time {elapsed:.2f}s < {budget}s"] = elapsed < budget
        failed = [name for name, ok in checks.items() if not ok]
        verdict = "PASS" if not failed else "FAIL"
        with capsys.disabled():
            print(f"\ncriterion {number}: {verdict}" +
                  ("" if not failed else " -- failed: " + "; ".join(failed)))
        assert not failed, failed
    return emit


def rel(a, b):
    b = float(b)
    return abs(a - b) / abs(b)


def rel_ok(a, b, tol):
    b = float(b)
    return a == b if b == 0 else abs(a - b) <= tol * abs(b)


# 1 ---------------------------------------------------------------------------

def test_criterion_1_identities(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(RNG_SEED)
    taus = rng.uniform(0.0, 1.0, 100)
    nus = 10.0 ** rng.uniform(-3.0, 2.0, 100)
    checks = {
        "g(0) = 0": e.g(0.0) == 0.0,
        "g(1) = 2": rel_ok(e.g(1.0), 2.0, 1e-12),
    }
    d_ok = d1_ok = d0_ok = ea_ok = True
    for tau, nu in zip(taus, nus):
        tau, nu = float(tau), float(nu)
        d_ok &= rel_ok(e.d(tau, 0.0, nu), nu + 1.0, 1e-12)
        d1_ok &= e.d1(tau, 0.0, nu) == 0.0
        d0_ok &= rel_ok(e.d0(tau, 0.0, nu), nu, 1e-12)
        # (tau, nu) double as log10 M in [0, 40] and log10 P in [-3, 20]
        ch = c.ChannelParams(10.0 ** (40 * tau), 10.0 ** (23 * (math.log10(nu) + 3) / 5 - 3),
                             1.0, 0.0)
        ea_ok &= rel_ok(c.ea_capacity(ch), 2.0 * c.holevo_capacity(ch), 1e-12)
    checks.update({"d(tau,0,nu) = nu+1": d_ok, "d_1(tau,0,nu) = 0": d1_ok,
                   "d_0(tau,0,nu) = nu": d0_ok, "C_E = 2 C_J at tau=1, nu=0": ea_ok})
    report(1, checks, t0, 1.0)


# 2 ---------------------------------------------------------------------------

def test_criterion_2_oracle_equivalence(report):
    t0 = time.perf_counter()
    ns = np.logspace(-30, 2, 10)
    nus = np.logspace(-3, 2, 10)
    taus = np.logspace(math.log10(0.05), 0, 10)
    power = 1e16
    worst = {k: 0.0 for k in ("g", "d", "d_1", "d_0", "shannon", "holevo", "ea")}
    for x in np.concatenate([ns, nus]):
        worst["g"] = max(worst["g"], rel(e.g(float(x)), oracle.g_ref(float(x))))
    for tau in map(float, taus):
        for n in map(float, ns):
            modes = power / n
            for nu in map(float, nus):
                worst["d"] = max(worst["d"], rel(e.d(tau, n, nu), oracle.d_ref(tau, n, nu)))
                worst["d_1"] = max(worst["d_1"], rel(e.d1(tau, n, nu),
                                                     oracle.dx_ref(1, tau, n, nu)))
                worst["d_0"] = max(worst["d_0"], rel(e.d0(tau, n, nu),
                                                     oracle.dx_ref(0, tau, n, nu)))
                ch = c.ChannelParams(modes, power, tau, nu)
                r = c.capacities(ch)
                for kind in ("shannon", "holevo", "ea"):
                    ref = oracle.capacity_ref(kind, modes, power, tau, nu)
                    worst[kind] = max(worst[kind], rel(getattr(r, kind), ref))
    tol = {"g": 1e-12, "d": 1e-12, "d_1": 1e-8, "d_0": 1e-8, "shannon": 1e-12,
           "holevo": 1e-8, "ea": 1e-8}
    checks = {f"{k} worst rel {worst[k]:.1e} < {tol[k]:g}": worst[k] < tol[k] for k in tol}
    report(2, checks, t0, 30.0)


# 3 ---------------------------------------------------------------------------

def test_criterion_3_derivative(report):
    t0 = time.perf_counter()
    worst = 0.0
    for tau in np.linspace(0.1, 1.0, 10):
        for nu in np.logspace(-2, 1, 10):
            fd = float(oracle.d1_slope_ref(float(tau), float(nu), "1e-7"))
            worst = max(worst, abs(e.d1_slope_at_zero(float(tau), float(nu)) - fd))
    report(3, {f"worst |slope - fd| {worst:.1e} < 1e-6": worst < 1e-6}, t0, 5.0)


# 4 ---------------------------------------------------------------------------

def test_criterion_4_limit_convergence(report):
    t0 = time.perf_counter()
    spec = s.paper_like_preset()
    rows = s.run_sweep(spec)
    last = rows[-1]
    sat = [c.shannon_saturation(spec.power, r.tau_eff, r.nu_eff) for r in rows]
    limit = c.holevo_limit(spec.power, last.tau_eff, last.nu_eff)
    checks = {
        "M reaches 1e40": last.x == 1e40,
        "shannon <= saturation everywhere": all(r.shannon <= b for r, b in zip(rows, sat)),
        f"shannon gap at 1e40 {rel(last.shannon, sat[-1]):.1e} < 1e-3":
            rel(last.shannon, sat[-1]) < 1e-3,
        f"holevo gap at 1e40 {rel(last.holevo, limit):.1e} < 1e-3":
            rel(last.holevo, limit) < 1e-3,
    }
    report(4, checks, t0, 10.0)


# 5 ---------------------------------------------------------------------------

def test_criterion_5_ea_growth(report):
    t0 = time.perf_counter()
    link = s.paper_like_preset().link
    power = 1e16
    decades = [10.0 ** k for k in range(30, 41)]
    chans = [l.channel_params(link, m, power) for m in decades]
    ea = [c.ea_capacity(ch) for ch in chans]
    x0 = [c.ea_terms(ch)[0] for ch in chans]
    tau, nu = chans[0].tau, chans[0].nu
    target = power * (1.0 - e.d1_slope_at_zero(tau, nu)) * math.log2(10.0)
    inc_err = max(abs((b - a) / target - 1.0) for a, b in zip(ea, ea[1:]))
    x0_change = max(abs(b - a) / abs(a) for a, b in zip(x0, x0[1:]))
    checks = {
        f"per-decade C_E increment error {inc_err:.1e} < 0.02": inc_err < 0.02,
        f"x0 term change per decade {x0_change:.1e} < 1e-3": x0_change < 1e-3,
    }
    report(5, checks, t0, 10.0)


# 6 ---------------------------------------------------------------------------

P_, A_ = l.Receiver.PASSIVE, l.Receiver.ACTIVE
G1_, G2_ = l.GainRule.FULL_REGENERATION, l.GainRule.MODE_DEPENDENT
TAU_LS = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99]
PHOTONS = [0.0, 1e-6, 0.05, 0.5]  # tau_L n < 1 so the published pole is avoided


def _special_agreement(rule, receiver):
    ok = True
    for tau_l in TAU_LS:
        for k in range(1, 51):
            for n in PHOTONS:
                generic = l.generic_noise(tau_l, k, l.gain_minus_one(rule, tau_l, n), receiver)
                printed = l.printed_noise(rule, receiver, tau_l, k, n)
                ok &= rel_ok(generic, printed, 1e-12) or abs(generic - printed) < 1e-300
    return ok


def _cascade_agreement(typo):
    ok = True
    for rule in (G1_, G2_):
        for receiver in (P_, A_):
            for k in range(1, 21):
                for n in (0.0, 0.1, 0.5):
                    link = l.SegmentedLink(10.0, k, 0.0105, receiver=receiver, gain_rule=rule)
                    tau_ref, nu_ref = oracle.cascade_ref(link, n)
                    nu = l.effective_noise(link, n, assume_nu_eff_a_typo=typo)
                    ok &= rel_ok(l.effective_transmittivity(link, n), tau_ref, 1e-10)
                    ok &= rel_ok(nu, nu_ref, 1e-10)
    return ok


def test_criterion_6_link_closed_forms(report):
    t0 = time.perf_counter()
    checks = {
        "G1 passive special": _special_agreement(G1_, P_),
        "G1 active special": _special_agreement(G1_, A_),
        "G2 passive special": _special_agreement(G2_, P_),
        "G2 active special (published 1 - tau_L n form)": _special_agreement(G2_, A_),
        "cascade oracle K=1..20 (default settings)": _cascade_agreement(typo=False),
    }
    report(6, checks, t0, 5.0)


def test_criterion_6_with_denominator_corrected(report):
    # same checks with the active G2 denominator read as 1 + tau_L n
    t0 = time.perf_counter()
    corrected = True
    for tau_l in TAU_LS:
        for k in range(1, 51):
            for n in PHOTONS:
                generic = l.generic_noise(tau_l, k, l.gain_minus_one(G2_, tau_l, n), A_)
                closed = (1.0 - tau_l ** k) * n / (1.0 + tau_l * n)
                corrected &= rel_ok(generic, closed, 1e-12)
    checks = {
        "G2 active special with 1 + tau_L n": corrected,
        "cascade oracle K=1..20 (assume_nu_eff_a_typo)": _cascade_agreement(typo=True),
    }
    report("6 (corrected denominator)", checks, t0, 5.0)


# 7 ---------------------------------------------------------------------------

def test_criterion_7_ordering(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(RNG_SEED + 7)
    violations = 0
    points = 0
    while points < 1000:
        modes = 10.0 ** rng.uniform(0, 40)
        power = 10.0 ** rng.uniform(-3, 20)
        if points % 2:
            ch = c.ChannelParams(modes, power, rng.uniform(1e-3, 1.0), 10.0 ** rng.uniform(-3, 2))
        else:
            link = l.SegmentedLink(rng.uniform(1, 100), int(rng.integers(2, 30)),
                                   rng.uniform(0.001, 0.1),
                                   receiver=rng.choice(["passive", "active"]),
                                   gain_rule=rng.choice(["g1", "g2"]))
            try:
                ch = l.channel_params(link, modes, power)
            except Exception:
                # the published active G2 form has a pole; redraw
                continue
        if not ch.nu > 0:
            continue
        points += 1
        r = c.capacities(ch)
        ok = (r.ea >= r.holevo * (1 - 1e-12) and r.holevo >= r.shannon * (1 - 1e-12)
              and min(r.shannon, r.holevo, r.ea) >= 0)
        violations += not ok
    report(7, {f"{violations} ordering violations in {points} points": violations == 0},
           t0, 10.0)


# 8 ---------------------------------------------------------------------------

def _g2_short_link_spec():
    tau_l = 0.9
    link = l.SegmentedLink(segment_length=-math.log(tau_l) / 0.05, segment_count=3,
                           alpha=0.05, receiver="passive", gain_rule="g2")
    return s.SweepSpec("modes", 1e2, 1e30, link=link, power=1e16)


def test_criterion_8_g2_maxima(report):
    t0 = time.perf_counter()
    spec = _g2_short_link_spec()
    rows = s.run_sweep(spec)
    maxima = [m for m in s.maxima_for_sweep(spec, rows, columns=("shannon",))
              if m.kind == "global"]
    checks = {f"global Shannon maximum found ({len(maxima)})": len(maxima) == 1}
    if maxima:
        after = [r.shannon for r in rows if r.x > maxima[0].x]
        checks["strictly decreasing after the maximum"] = all(
            b < a for a, b in zip(after, after[1:]))
    report(8, checks, t0, 10.0)


def test_criterion_8_on_preset_link(report):
    # the same check on the 10 km x 5 segment reconstruction, where a peak exists
    t0 = time.perf_counter()
    link = l.SegmentedLink(10.0, 5, 0.05, gain_rule="g2")
    spec = s.SweepSpec("modes", 1e2, 1e30, link=link, power=1e16)
    rows = s.run_sweep(spec)
    maxima = [m for m in s.maxima_for_sweep(spec, rows, columns=("shannon",))
              if m.kind == "global"]
    checks = {"global Shannon maximum found": len(maxima) == 1}
    if maxima:
        after = [r.shannon for r in rows if r.x > maxima[0].x]
        checks["strictly decreasing after the maximum"] = all(
            b < a for a, b in zip(after, after[1:]))
    report("8 (preset G2 link)", checks, t0, 10.0)


# 9 ---------------------------------------------------------------------------

def _cli(capsys, *argv):
    code = cli.main(list(argv))
    out, _ = capsys.readouterr()
    return code, out


def test_criterion_9_cli_contract(report, capsys, tmp_path):
    t0 = time.perf_counter()
    code_csv, text_csv = _cli(capsys, "sweep", "--preset", "paper-like")
    code_json, text_json = _cli(capsys, "sweep", "--preset", "paper-like", "--output", "json")
    lines = text_csv.split("\n")
    table = list(csv.reader(io.StringIO(text_csv)))
    header, body = table[0], table[1:]
    well_formed = (code_csv == 0 and text_csv.endswith("\n") and "\r" not in text_csv
                   and lines[-1] == "" and all(len(r) == len(header) for r in body)
                   and len(body) == 400)
    parsed = all(math.isfinite(float(v)) for r in body for v in r)
    rows_json = json.loads(text_json)
    identical = code_json == 0 and len(rows_json) == len(body) and all(
        [float(v) for v in r] == [obj[k] for k in s.COLUMNS] for r, obj in zip(body, rows_json))

    bad_link = tmp_path / "bad.ini"
    bad_link.write_text("[link]\nsegment_length = -10\nsegment_count = 5\nalpha = 0.05\n"
                        "[channel]\nmodes = 1e9\npower = 1e16\n")
    pole = tmp_path / "pole.ini"
    pole.write_text("[link]\nsegment_length = 10\nsegment_count = 3\nalpha = 0.05\n"
                    "receiver = active\ngain_rule = g2\n[channel]\nmodes = 10\npower = 1e3\n")
    unreachable = tmp_path / "far.ini"
    unreachable.write_text("[channel]\npower = 1e16\ntau = 1\nnu = 1\n"
                           "[advantage]\nfactor = 1e6\nm_max = 1e30\n")
    exit2 = _cli(capsys, "capacity", "--config", str(bad_link))[0]
    exit3 = _cli(capsys, "capacity", "--config", str(pole))[0]
    exit4 = _cli(capsys, "advantage", "--config", str(unreachable))[0]
    checks = {
        "CSV well-formed": well_formed,
        "exact column set": tuple(header) == s.COLUMNS == (
            "x", "tau_eff", "nu_eff", "gain", "shannon", "holevo", "ea", "ea_approx",
            "power_watts"),
        "CSV cells numeric": parsed,
        "CSV/JSON value identity": identical,
        f"bad config exit {exit2} == 2": exit2 == 2,
        f"domain error exit {exit3} == 3": exit3 == 3,
        f"no crossing exit {exit4} == 4": exit4 == 4,
    }
    report(9, checks, t0, 5.0)
