"""``qls`` command-line interface.

Physical quantities carry their unit in the flag name (``--omega-hz``,
``--bmax-mT``, ``--gradient-Tpm``). Tables go to CSV (default) or to a JSON
``{"columns", "rows"}`` object; single records go to JSON. Every JSON output
is checked against its shipped schema before it is written, and files are
written atomically.

Exit codes: 0 success, 2 bad arguments or inputs, 3 nothing feasible.
"""
from __future__ import annotations

import math
import sys
import warnings
from dataclasses import dataclass, field

import click
import numpy as np

from qls import __version__
from qls.constants import MU_B
from qls.crystal import IonPair, load_species, normal_modes
from qls.errors import InfeasibleError, PoleError
from qls.hyperfine import TrackingError
from qls.io import InputError, csv_text, dumps_json, resolve_input, validate_output, write_csv, write_json

__all__ = ["RunConfig", "cli", "main"]

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE = 0, 2, 3
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple = ()
    sweep: tuple = ()
    output: str = "-"
    fmt: str = "csv"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.fmt not in ("csv", "json"):
            raise InputError(f"unknown format {self.fmt!r}")
        grid = np.asarray(self.sweep, dtype=float)
        if grid.size > 1 and not np.all(np.diff(grid) > 0):
            raise InputError("sweep grid must be strictly increasing")


def _grid(start: float, stop: float, steps: int, geometric: bool = False) -> np.ndarray:
    if steps < 1:
        raise InputError("--steps must be at least 1")
    if steps > 1 and not stop > start:
        raise InputError(f"sweep stop {stop:g} must exceed start {start:g}")
    if geometric:
        if not start > 0:
            raise InputError("geometric sweep needs a positive start")
        return np.geomspace(start, stop, steps) if steps > 1 else np.array([start])
    return np.linspace(start, stop, steps) if steps > 1 else np.array([start])


def _num(x):
    """Cell value: exact repr for floats so output is reproducible byte for byte."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    return x


def _csv_cell(x):
    x = _num(x)
    if isinstance(x, float):
        return repr(x)
    if x is None:
        return ""
    return str(x).lower() if isinstance(x, bool) else x


def _json_cell(x):
    x = _num(x)
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def _write(cfg: RunConfig, text: str, writer) -> None:
    if cfg.output in ("-", ""):
        click.echo(text, nl=False)
    else:
        writer()


def emit_table(cfg: RunConfig, header, rows) -> None:
    rows = [list(r) for r in rows]
    if cfg.fmt == "csv":
        cells = [[_csv_cell(c) for c in r] for r in rows]
        _write(cfg, csv_text(header, cells), lambda: write_csv(cfg.output, header, cells))
    else:
        emit_record(cfg, {"columns": list(header), "rows": [[_json_cell(c) for c in r] for r in rows]}, "table")


def emit_record(cfg: RunConfig, obj: dict, schema: str) -> None:
    validate_output(obj, schema)
    _write(cfg, dumps_json(obj), lambda: write_json(cfg.output, obj))


def _pair(species: str, omega_hz: float, allow_unknown: bool) -> IonPair:
    names = [s.strip() for s in species.split(",")]
    if len(names) != 2 or not all(names):
        raise InputError("--species takes two files, control first: CONTROL.json,TARGET.json")
    ions = [load_species(resolve_input(n, "species"), allow_unknown) for n in names]
    if not omega_hz > 0:
        raise InputError("--omega-hz must be positive")
    return IonPair(ions[0], ions[1], TWO_PI * omega_hz)


def _params(path: str, allow_unknown: bool):
    from qls.hyperfine import load_params

    return load_params(resolve_input(path, "hyperfine"), allow_unknown)


_fmt_option = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None,
                           help="Output format (default depends on the command).")
_out_option = click.option("--out", "output", default="-", show_default=True, help="Output file; '-' for stdout.")
_unknown_option = click.option("--allow-unknown", is_flag=True, help="Ignore unknown keys in input files.")
_species_option = click.option("--species", default="ca40.json,n2plus.json", show_default=True,
                               help="Control and target species files, comma separated.")
_omega_option = click.option("--omega-hz", type=float, default=574e3, show_default=True,
                             help="Control-ion axial trap frequency omega/2pi.")


def _omega_sweep(f):
    f = click.option("--omega-min-hz", type=float, default=100e3, show_default=True)(f)
    f = click.option("--omega-max-hz", type=float, default=5e6, show_default=True)(f)
    return click.option("--steps", type=int, default=40, show_default=True, help="Log-spaced trap frequencies.")(f)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="qls")
def cli():
    """Quantum logic spectroscopy design calculator."""


@cli.command()
@click.option("--params", "params_path", default="n2plus.json", show_default=True, help="Hamiltonian parameter file.")
@click.option("--bmax-mT", "bmax_mT", type=float, default=20.0, show_default=True)
@click.option("--steps", type=int, default=201, show_default=True)
@click.option("--nmax", type=int, default=2, show_default=True, help="Highest even rotational level kept.")
@_fmt_option
@_out_option
@_unknown_option
def zeeman(params_path, bmax_mT, steps, nmax, fmt, output, allow_unknown):
    """Energies and moments of every level from 0 to --bmax-mT."""
    from qls.hyperfine import zeeman_map, zeeman_rows

    if not bmax_mT > 0:
        raise InputError("--bmax-mT must be positive")
    grid = _grid(0.0, bmax_mT * 1e-3, steps)
    cfg = RunConfig("zeeman", (params_path,), tuple(grid), output, fmt or "csv")
    levels = zeeman_map(_params(params_path, allow_unknown), grid, n_max=nmax)
    rows = [(float(b), lab, float(e), float(m)) for b, lab, e, m in zeeman_rows(levels)]
    emit_table(cfg, ("B_T", "label", "E_MHz", "mu_muB"), rows)
    return EXIT_OK


@cli.command()
@click.option("--params", "params_path", default="n2plus.json", show_default=True)
@click.option("--field-mT", "field_mT", type=float, default=10.0, show_default=True)
@click.option("--nmax", type=int, default=2, show_default=True)
@click.option("--threshold", type=float, default=0.1, show_default=True,
              help="Relative moment difference below which two levels count as indistinguishable.")
@_fmt_option
@_out_option
@_unknown_option
def moments(params_path, field_mT, nmax, threshold, fmt, output, allow_unknown):
    """Magnetic moment of every level at one field, plus the indistinguishable pairs."""
    from qls.hyperfine import distinguishability_report, magnetic_moments

    if field_mT < 0:
        raise InputError("--field-mT must be non-negative")
    cfg = RunConfig("moments", (params_path,), (), output, fmt or "json")
    entries = magnetic_moments(_params(params_path, allow_unknown), field_mT * 1e-3, n_max=nmax)
    if cfg.fmt == "csv":
        emit_table(cfg, ("label", "E_MHz", "mu_muB", "mu_MHz_per_T", "degenerate"),
                   [(str(e.label), e.energy_MHz, e.mu_muB, e.mu_MHz_per_T, e.degenerate) for e in entries])
        return EXIT_OK
    pairs = distinguishability_report(entries, threshold=threshold)
    obj = {
        "B_T": field_mT * 1e-3,
        "n_max": nmax,
        "threshold": threshold,
        "levels": [{"label": str(e.label), "E_MHz": float(e.energy_MHz), "mu_muB": float(e.mu_muB),
                    "mu_MHz_per_T": float(e.mu_MHz_per_T), "degenerate": bool(e.degenerate)} for e in entries],
        "indistinguishable": [[str(a), str(b), float(d)] for a, b, d in pairs],
    }
    emit_record(cfg, obj, "moments")
    return EXIT_OK


@cli.command()
@_species_option
@_omega_option
@_fmt_option
@_out_option
@_unknown_option
def modes(species, omega_hz, fmt, output, allow_unknown):
    """Axial normal modes of the two-ion crystal."""
    pair = _pair(species, omega_hz, allow_unknown)
    cfg = RunConfig("modes", tuple(species.split(",")), (), output, fmt or "json")
    m = normal_modes(pair)
    if cfg.fmt == "csv":
        emit_table(cfg, ("mode", "omega_rad_s", "omega_over_omega", "v_C", "v_T"), [
            ("com", m.omega_com, m.omega_com / pair.omega, *m.eigvec_com),
            ("str", m.omega_str, m.omega_str / pair.omega, *m.eigvec_str),
        ])
        return EXIT_OK
    obj = {
        "control": pair.control.name,
        "target": pair.target.name,
        "omega": pair.omega,
        "mu": pair.mu,
        "omega_com": m.omega_com,
        "omega_str": m.omega_str,
        "omega_com_over_omega": m.omega_com / pair.omega,
        "omega_str_over_omega": m.omega_str / pair.omega,
        "eigvec_com": [float(x) for x in m.eigvec_com],
        "eigvec_str": [float(x) for x in m.eigvec_str],
        "a2_m2": pair.a2,
    }
    emit_record(cfg, obj, "modes")
    return EXIT_OK


def _phase_record(pair, nu_ratio, T, fC, fT, numeric):
    from qls.phase.gaussian import GaussianDrive, RestorationWarning, enhancement, entangling_phase

    nu = nu_ratio * normal_modes(pair).omega_com
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RestorationWarning)
        res = entangling_phase(GaussianDrive(fC, T, nu), GaussianDrive(fT, T, nu), pair, numeric=numeric)
    obj = {
        "nu_over_omega": nu_ratio,
        "nu_rad_s": nu,
        "T_s": T,
        "f_C_per_m_s": fC,
        "f_T_per_m_s": fT,
        "Xi": enhancement(nu, pair),
        "phi_CT": res.phi_CT,
        "phi_CT_exact": res.phi_CT_exact,
        "phi_com": res.phi_com,
        "phi_str": res.phi_str,
        "residual_com": res.residual_com,
        "residual_str": res.residual_str,
        "restored": bool(res.restored),
    }
    if res.phi_CT_numeric is not None:
        obj["phi_CT_numeric"] = res.phi_CT_numeric
    return obj


@cli.command()
@_species_option
@_omega_option
@click.option("--T-us", "T_us", type=float, default=250.0, show_default=True, help="Gaussian envelope duration.")
@click.option("--gradient-Tpm", "gradient", type=float, default=10.0, show_default=True,
              help="Field-gradient amplitude on both ions.")
@click.option("--mu-C-muB", "mu_c", type=float, default=1.0, show_default=True)
@click.option("--mu-T-muB", "mu_t", type=float, default=1.0, show_default=True)
@click.option("--nu-over-omega-com", "nu_ratio", type=float, default=None,
              help="Single carrier nu/omega_com; omit for a sweep.")
@click.option("--nu-min-over-omega-com", "nu_min", type=float, default=0.0, show_default=True)
@click.option("--nu-max-over-omega-com", "nu_max", type=float, default=2.5, show_default=True)
@click.option("--steps", type=int, default=251, show_default=True)
@click.option("--trajectory", type=click.Choice(["com", "str"]), default=None,
              help="With a single carrier: emit the rotating-frame path of this mode.")
@click.option("--numeric", is_flag=True, help="Also integrate the phase numerically (single carrier).")
@_fmt_option
@_out_option
@_unknown_option
def phase(species, omega_hz, T_us, gradient, mu_c, mu_t, nu_ratio, nu_min, nu_max, steps, trajectory, numeric,
          fmt, output, allow_unknown):
    """Entangling phase of Gaussian gradient drives: a sweep over the carrier, one point, or a path."""
    from qls.constants import HBAR

    pair = _pair(species, omega_hz, allow_unknown)
    if not T_us > 0:
        raise InputError("--T-us must be positive")
    T = T_us * 1e-6
    fC, fT = gradient * mu_c * MU_B / HBAR, gradient * mu_t * MU_B / HBAR
    if nu_ratio is None:
        if trajectory:
            raise InputError("--trajectory needs --nu-over-omega-com")
        grid = _grid(nu_min, nu_max, steps)
        cfg = RunConfig("phase", tuple(species.split(",")), tuple(grid), output, fmt or "csv")
        w_com = normal_modes(pair).omega_com
        rows = []
        for r in grid:
            try:
                rec = _phase_record(pair, float(r), T, fC, fT, False)
            except PoleError:
                click.echo(f"warning: skipping nu/omega_com = {r:g} (mode resonance)", err=True)
                continue
            rows.append((r * w_com, rec["Xi"], rec["phi_CT"], rec["restored"]))
        emit_table(cfg, ("nu_rad_s", "Xi", "phi_CT_rad", "restored"), rows)
        return EXIT_OK

    cfg = RunConfig("phase", tuple(species.split(",")), (), output, fmt or ("csv" if trajectory else "json"))
    rec = _phase_record(pair, nu_ratio, T, fC, fT, numeric)
    if not rec["restored"]:
        click.echo("warning: drive does not restore the motion; closed-form phase unreliable", err=True)
    if trajectory:
        from qls.phase.gaussian import GaussianDrive, sample_grid
        from qls.phase.gaussian import trajectory as path

        m = normal_modes(pair)
        m1, m2 = pair.control.mass_kg, pair.target.mass_kg
        unit = GaussianDrive(1.0, T, rec["nu_rad_s"])
        w, a, amp = ((m.omega_com, m.a_com, fC + fT) if trajectory == "com"
                     else (m.omega_str, m.a_str, (m2 * fC - m1 * fT) / (m1 + m2)))
        t = sample_grid(T, max(w, rec["nu_rad_s"]), 40)
        z = path(unit.scaled(amp), w, 0.0, t, a)
        emit_table(cfg, ("t_s", "Re_z", "Im_z"), zip(t, z.real, z.imag))
        return EXIT_OK
    if cfg.fmt == "csv":
        keys = sorted(rec)
        emit_table(cfg, keys, [[rec[k] for k in keys]])
    else:
        emit_record(cfg, rec, "phase")
    return EXIT_OK


@cli.command()
@_species_option
@_omega_option
@click.option("--t1-periods", type=float, default=0.92, show_default=True)
@click.option("--t2-periods", type=float, default=0.08, show_default=True)
@click.option("--dk-per-m", "dk", type=float, default=1e6, show_default=True, help="Momentum kick per pulse.")
@click.option("--mode", type=click.Choice(["single", "com", "str"]), default="single", show_default=True,
              help="'single': control ion alone at omega; 'com'/'str': crystal mode kicked on both ions.")
@_fmt_option
@_out_option
@_unknown_option
def kicks(species, omega_hz, t1_periods, t2_periods, dk, mode, fmt, output, allow_unknown):
    """Rotating-frame path of the four-kick sequence (dk,-t1),(dk,-t2),(-dk,t2),(-dk,t1)."""
    from qls.constants import HBAR
    from qls.phase.kicks import KickSequence, kick_evolve

    pair = _pair(species, omega_hz, allow_unknown)
    period = TWO_PI / pair.omega
    seq = KickSequence.template(dk, t1_periods * period, t2_periods * period)
    m = normal_modes(pair)
    if mode == "single":
        w, a = pair.omega, math.sqrt(HBAR / (pair.control.mass_kg * pair.omega))
    elif mode == "com":
        w, a = m.omega_com, m.a_com
        seq = seq.scaled(2.0)  # F_com = F_C + F_T with equal kicks
    else:
        w, a = m.omega_str, m.a_str
        seq = seq.scaled((pair.target.mass - pair.control.mass) / (pair.target.mass + pair.control.mass))
    res = kick_evolve(seq, w, a)
    times = np.concatenate([[res.times[0]], res.times])
    cfg = RunConfig("kicks", tuple(species.split(",")), (), output, fmt or "csv")
    if cfg.fmt == "csv":
        emit_table(cfg, ("t_s", "Re_z", "Im_z"), zip(times, res.trajectory.real, res.trajectory.imag))
        return EXIT_OK
    obj = {
        "mode": mode,
        "omega_mode": w,
        "t1_s": t1_periods * period,
        "t2_s": t2_periods * period,
        "delta_k_per_m": dk,
        "phase_rad": res.phase,
        "residual": res.residual,
        "trajectory": [[float(t), float(z.real), float(z.imag)] for t, z in zip(times, res.trajectory)],
    }
    emit_record(cfg, obj, "kicks")
    return EXIT_OK


@cli.command()
@_species_option
@_omega_option
@click.option("--modes", "which", type=click.Choice(["both", "com", "str"]), default="both", show_default=True)
@click.option("--dk-per-m", "dk", type=float, default=1e6, show_default=True)
@_fmt_option
@_out_option
@_unknown_option
def optimize(species, omega_hz, which, dk, fmt, output, allow_unknown):
    """Kick times maximizing the entangling phase with the selected modes closed."""
    from qls.phase.optimize import optimize_kick_times

    pair = _pair(species, omega_hz, allow_unknown)
    cfg = RunConfig("optimize", tuple(species.split(",")), (), output, fmt or "json")
    opt = optimize_kick_times(pair, delta_k=dk, modes=which)
    r = opt.result
    obj = {
        "modes": which,
        "t1_s": opt.t1,
        "t2_s": opt.t2,
        "t1_periods": opt.periods[0],
        "t2_periods": opt.periods[1],
        "G": opt.G,
        "phi_CT": r.phi_CT,
        "phi_com": r.phi_com,
        "phi_str": r.phi_str,
        "residual_com": r.residual_com,
        "residual_str": r.residual_str,
        "closures": {k: float(v) for k, v in opt.closures.items()},
        "n_candidates": opt.n_candidates,
    }
    if cfg.fmt == "csv":
        keys = [k for k in sorted(obj) if k != "closures"]
        emit_table(cfg, keys, [[obj[k] for k in keys]])
    else:
        emit_record(cfg, obj, "optimize")
    return EXIT_OK


@cli.command()
@_species_option
@click.option("--eps", type=float, default=1e-2, show_default=True, help="Scattering error budget per pulse.")
@click.option("--ell-um", type=float, default=5.0, show_default=True, help="Intensity-gradient length.")
@click.option("--waist-um", type=float, default=None, help="Beam waist (defaults to --ell-um).")
@click.option("--power-mW", "power_mW", type=float, default=1.0, show_default=True)
@click.option("--phi-rad", type=float, default=math.pi / 8, show_default=True)
@_omega_sweep
@_fmt_option
@_out_option
@_unknown_option
def optical(species, eps, ell_um, waist_um, power_mW, phi_rad, omega_min_hz, omega_max_hz, steps, fmt, output,
            allow_unknown):
    """Detuning and gate time of Stark-shift kicks across trap frequencies."""
    from qls.protocols.optical import optical_feasibility

    hz = _grid(omega_min_hz, omega_max_hz, steps, geometric=True)
    pair = _pair(species, hz[0], allow_unknown)
    cfg = RunConfig("optical", tuple(species.split(",")), tuple(hz), output, fmt or "csv")
    pts = optical_feasibility(pair, eps, ell_um * 1e-6, power_mW * 1e-3, phi_rad, TWO_PI * hz,
                              waist=None if waist_um is None else waist_um * 1e-6)
    emit_table(cfg, ("omega_Hz", "detuning_Hz", "pulse_s", "total_s", "feasible"),
               [(f, p.detuning / TWO_PI, p.pulse_time, p.total_gate_time, p.feasible) for f, p in zip(hz, pts)])
    if not any(p.feasible for p in pts):
        click.echo("no feasible trap frequency: " + pts[0].reason, err=True)
        return EXIT_INFEASIBLE
    return EXIT_OK


@cli.command()
@_species_option
@click.option("--nu-over-omega", "nu_ratio", type=float, default=1.01, show_default=True)
@click.option("--nu-ref", type=click.Choice(["com", "omega", "both"]), default="both", show_default=True,
              help="Whether the ratio multiplies omega_com, omega, or emit both readings.")
@click.option("--T-us", "T_us", type=float, default=None, help="Gate time; default is the restoration bound.")
@click.option("--phi-rad", type=float, default=math.pi / 8, show_default=True)
@click.option("--mu-C-muB", "mu_c", type=float, default=1.0, show_default=True)
@click.option("--mu-T-muB", "mu_t", type=float, default=1.0, show_default=True)
@click.option("--closed-form", is_flag=True, help="Solve with the asymptotic closed-form phase instead of the exact one.")
@_omega_sweep
@_fmt_option
@_out_option
@_unknown_option
def magnetic(species, nu_ratio, nu_ref, T_us, phi_rad, mu_c, mu_t, closed_form, omega_min_hz, omega_max_hz, steps, fmt,
             output, allow_unknown):
    """Field gradient needed for the target phase across trap frequencies."""
    from qls.protocols.magnetic import magnetic_feasibility

    hz = _grid(omega_min_hz, omega_max_hz, steps, geometric=True)
    pair = _pair(species, hz[0], allow_unknown)
    if T_us is not None and not T_us > 0:
        raise InputError("--T-us must be positive")
    cfg = RunConfig("magnetic", tuple(species.split(",")), tuple(hz), output, fmt or "csv")
    refs = ("com", "omega") if nu_ref == "both" else (nu_ref,)
    rows, any_ok = [], False
    for ref in refs:
        pts = magnetic_feasibility(pair, nu_ratio, None if T_us is None else T_us * 1e-6, phi_rad,
                                   mu_c * MU_B, mu_t * MU_B, TWO_PI * hz, reference=ref,
                                   closed_form=closed_form)
        for f, p in zip(hz, pts):
            any_ok |= p.feasible
            rows.append((f, p.gradient, p.total_gate_time, nu_ratio, ref))
    emit_table(cfg, ("omega_Hz", "gradient_Tpm", "time_s", "nu_over_omega", "nu_reference"), rows)
    return EXIT_OK if any_ok else EXIT_INFEASIBLE


@cli.command()
@click.option("--n-pulses", type=int, default=10, show_default=True)
@click.option("--lambda-nm", type=float, default=397.0, show_default=True)
@click.option("--weak-kick-per-m", type=float, required=True, help="Kick on the target from the weak force.")
@click.option("--baseline-kick-C-per-m", "base_c", type=float, required=True)
@click.option("--baseline-kick-T-per-m", "base_t", type=float, default=None,
              help="Baseline target kick; omitted means the target kick is unchanged.")
@_fmt_option
@_out_option
def hybrid(n_pulses, lambda_nm, weak_kick_per_m, base_c, base_t, fmt, output):
    """Phase gain of pulse-train kicks on the control over a baseline pair of kicks."""
    from qls.protocols.optomagnetic import hybrid_gain, pulse_train_momentum

    lam = lambda_nm * 1e-9
    gain = hybrid_gain(n_pulses, lam, weak_kick_per_m, base_c, base_t)
    per_pulse = pulse_train_momentum(1, lam)
    need = base_c * (1.0 if base_t is None else base_t / weak_kick_per_m)
    cfg = RunConfig("hybrid", (), (), output, fmt or "json")
    obj = {
        "n_pulses": n_pulses,
        "lambda_m": lam,
        "kick_C_per_m": pulse_train_momentum(n_pulses, lam),
        "gain": gain,
        "pulses_to_recover": int(math.ceil(need / per_pulse * (1 - 1e-12))),
    }
    if cfg.fmt == "csv":
        keys = sorted(obj)
        emit_table(cfg, keys, [[obj[k] for k in keys]])
    else:
        emit_record(cfg, obj, "hybrid")
    return EXIT_OK


@cli.command()
@click.option("--phi", "phi", type=float, default=None, help="Phase Phi_O in rad (single run or fixed value).")
@click.option("--xi", "xi", type=float, default=0.0, show_default=True, help="Analysis phase in rad.")
@click.option("--shots", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--sweep", type=click.Choice(["phi", "xi"]), default=None, help="Sweep Phi_O or xi instead.")
@click.option("--start-rad", type=float, default=0.0, show_default=True)
@click.option("--stop-rad", type=float, default=math.pi, show_default=True)
@click.option("--steps", type=int, default=41, show_default=True)
@_fmt_option
@_out_option
def ramsey(phi, xi, shots, seed, sweep, start_rad, stop_rad, steps, fmt, output):
    """Simulated Ramsey readout with binomial shot noise."""
    from qls.protocols.readout import ramsey_run, ramsey_sweep

    if shots < 1:
        raise InputError("--shots must be positive")
    if sweep is None:
        if phi is None:
            raise InputError("give --phi or --sweep")
        cfg = RunConfig("ramsey", (), (), output, fmt or "json", {"seed": seed})
        r = ramsey_run(phi, xi, shots, seed)
        if cfg.fmt == "csv":
            emit_table(cfg, ("phi_rad", "P_up", "stderr"), [(phi, r.estimate, r.stderr)])
        else:
            emit_record(cfg, {"phi": phi, "xi": xi, "shots": shots, "seed": seed, "P_up": r.p_true,
                              "estimate": r.estimate, "stderr": r.stderr}, "ramsey")
        return EXIT_OK
    grid = _grid(start_rad, stop_rad, steps)
    cfg = RunConfig("ramsey", (), tuple(grid), output, fmt or "csv", {"seed": seed})
    fixed = (0.0 if phi is None else phi) if sweep == "xi" else xi
    pts = ramsey_sweep(grid, sweep=sweep, fixed=fixed, shots=shots, seed=seed)
    emit_table(cfg, (f"{sweep}_rad", "P_up", "stderr"), [(v, r.estimate, r.stderr) for v, r in pts])
    return EXIT_OK


@cli.command()
@click.argument("paths", nargs=-1, required=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@_unknown_option
def validate(paths, fmt, allow_unknown):
    """Check species and parameter files without running anything."""
    from qls.validation import validate_inputs

    report = validate_inputs(paths, allow_unknown=allow_unknown)
    if fmt == "json":
        validate_output(report, "validate")
        click.echo(dumps_json(report), nl=False)
    else:
        for e in report["errors"]:
            click.echo(f"{e['kind']}: {e['message']}")
        if not report["errors"]:
            click.echo(f"ok: {len(report['files'])} file(s)")
    return EXIT_USAGE if report["errors"] else EXIT_OK


def main(argv=None) -> int:
    """Entry point; returns the process exit code."""
    try:
        code = cli.main(args=argv, prog_name="qls", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except InfeasibleError as exc:
        click.echo(f"infeasible: {exc}", err=True)
        return EXIT_INFEASIBLE
    except (InputError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    except TrackingError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    return code if isinstance(code, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
