"""Sweep orchestration: configuration files, parameter grids, CSV output.

Config files are INI-style key/value text with [device], [decoherence],
[sweep], [numerics] and [output] sections.  Frequencies are given in lab
units with suffixed keys (``omega_c_GHz``, ``g_1b_MHz``); the loader converts
to internal angular rad/us, eliminating 2*pi bookkeeping everywhere else.

Sweeps are deterministic: fixed-step integration, grid points executed (or
gathered) in grid order, floats serialized at full double precision, so an
identical configuration reproduces a byte-identical CSV.
"""

from __future__ import annotations

import configparser
import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._backend import active_backend
from .core import CatCode, SystemDims, coherent_truncation_leakage, fidelity_pure_mixed
from .dynamics import evolve_effective_analytic
from .model import DecoherenceParams, DeviceParams, validate_gate_condition
from .protocol import (
    MODES,
    HybridBasisLabel,
    csum_target,
    hybrid_basis_state,
    initial_state,
    run_gate,
)

__all__ = [
    "ExperimentConfig",
    "ConfigError",
    "default_config",
    "load_config",
    "save_config",
    "dumps_config",
    "sweep_kappa",
    "sweep_delta",
    "report_scalars",
    "validate_setup",
    "write_csv",
    "KAPPA_COLUMNS",
    "DELTA_COLUMNS",
]

TWO_PI = 2.0 * math.pi
GHZ_TO_RAD_PER_US = TWO_PI * 1e3
MHZ_TO_RAD_PER_US = TWO_PI

DEVICE_KEYS_GHZ = ("omega_c", "omega_1b", "omega_2b", "omega_0b", "omega_01", "omega_02", "omega_12")
DEVICE_KEYS_MHZ = ("g_1b", "g_2b", "g_0b", "g_01", "g_02", "g_12")

# runtime_s lives in the in-memory records only: identical configs must give
# byte-identical CSV files, and wall time is the one nondeterministic field
KAPPA_COLUMNS = (
    "T_us", "kappa_inv_us", "fidelity", "trace_drift", "b_population_max",
    "dt_us", "steps", "fock_cutoff", "t_gate_us", "mode",
)
DELTA_COLUMNS = (
    "kappa_inv_us", "delta", "T_us", "fidelity", "fidelity_perturbed_target",
    "trace_drift", "b_population_max", "dt_us", "steps", "fock_cutoff",
    "t_gate_us", "mode",
)


class ConfigError(ValueError):
    """Malformed or physically inconsistent experiment configuration."""


@dataclass
class ExperimentConfig:
    """Laboratory-unit experiment description (converted on access)."""

    device_lab: dict = field(default_factory=dict)  # *_GHz, *_MHz and alpha
    T_list: tuple = (10.0, 20.0, 30.0)
    kappa_inv_list: tuple = (10.0, 30.0, 50.0, 70.0, 90.0, 110.0, 130.0, 150.0)
    delta_list: tuple = (-0.1, -0.075, -0.05, -0.025, 0.0, 0.025, 0.05, 0.075, 0.1)
    delta_kappa_inv_list: tuple = (50.0, 100.0, 150.0)
    delta_T: float = 20.0
    fock_cutoff: int = 40
    points_per_period: int = 20
    dt_scale: float = 1.0
    mode: str = "full_lindblad"
    output_path: str = "sweep.csv"

    def validate(self):
        for key in DEVICE_KEYS_GHZ:
            if f"{key}_GHz" not in self.device_lab:
                raise ConfigError(f"missing device key {key}_GHz")
        for key in DEVICE_KEYS_MHZ:
            if f"{key}_MHz" not in self.device_lab:
                raise ConfigError(f"missing device key {key}_MHz")
        if "alpha" not in self.device_lab:
            raise ConfigError("missing device key alpha")
        for name, lst in (
            ("T_us", self.T_list),
            ("kappa_inv_us", self.kappa_inv_list),
            ("delta", self.delta_list),
            ("delta_kappa_inv_us", self.delta_kappa_inv_list),
        ):
            if not lst:
                raise ConfigError(f"list {name} must be non-empty")
        if any(k <= 0 for k in self.kappa_inv_list) or any(k <= 0 for k in self.delta_kappa_inv_list):
            raise ConfigError("kappa_inv values must be positive")
        if any(abs(d) >= 1 for d in self.delta_list):
            raise ConfigError("delta values must satisfy |delta| < 1")
        if not 8 <= self.fock_cutoff <= 400:
            raise ConfigError("fock_cutoff outside the supported range [8, 400]")
        if self.points_per_period < 20:
            raise ConfigError("points_per_period must be >= 20")
        if not 0 < self.dt_scale <= 1.0:
            raise ConfigError("dt_scale must be in (0, 1]")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        return self

    @property
    def alpha(self) -> float:
        return float(self.device_lab["alpha"])

    def device(self) -> DeviceParams:
        kw = {k: self.device_lab[f"{k}_GHz"] * GHZ_TO_RAD_PER_US for k in DEVICE_KEYS_GHZ}
        kw.update({k: self.device_lab[f"{k}_MHz"] * MHZ_TO_RAD_PER_US for k in DEVICE_KEYS_MHZ})
        return DeviceParams(alpha=self.alpha, **kw)

    def dims(self) -> SystemDims:
        return SystemDims(self.fock_cutoff)


def default_config() -> ExperimentConfig:
    """Reference flux-ququart device and the standard sweep grids."""
    device = {
        "omega_c_GHz": 10.5,
        "omega_1b_GHz": 14.5,
        "omega_2b_GHz": 12.5,
        "omega_0b_GHz": 13.5,
        "omega_01_GHz": 1.0,
        "omega_02_GHz": 1.0,
        "omega_12_GHz": 2.0,
        "g_1b_MHz": 120.0,
        "g_2b_MHz": 120.0,
        "g_0b_MHz": 12.0,
        "g_01_MHz": 12.0,
        "g_02_MHz": 12.0,
        "g_12_MHz": 12.0,
        "alpha": 3.05,
    }
    return ExperimentConfig(device_lab=device).validate()


# ---------------------------------------------------------------------------
# (de)serialization


def _fmt(x) -> str:
    """CSV floats: full double precision, 17 significant digits."""
    if isinstance(x, int):
        return str(x)
    return "%.17g" % float(x)


def _cfmt(x) -> str:
    """Config floats: shortest representation that round-trips exactly."""
    return repr(float(x))


def _fmt_list(xs) -> str:
    return ", ".join(_cfmt(x) for x in xs)


def dumps_config(cfg: ExperimentConfig) -> str:
    """Canonical text form; loading and re-dumping is idempotent."""
    lines = ["[device]"]
    for key in DEVICE_KEYS_GHZ:
        lines.append(f"{key}_GHz = {_cfmt(cfg.device_lab[f'{key}_GHz'])}")
    for key in DEVICE_KEYS_MHZ:
        lines.append(f"{key}_MHz = {_cfmt(cfg.device_lab[f'{key}_MHz'])}")
    lines.append(f"alpha = {_cfmt(cfg.device_lab['alpha'])}")
    lines += [
        "",
        "[decoherence]",
        f"T_us = {_fmt_list(cfg.T_list)}",
        f"kappa_inv_us = {_fmt_list(cfg.kappa_inv_list)}",
        "",
        "[sweep]",
        f"delta = {_fmt_list(cfg.delta_list)}",
        f"delta_kappa_inv_us = {_fmt_list(cfg.delta_kappa_inv_list)}",
        f"delta_T_us = {_cfmt(cfg.delta_T)}",
        "",
        "[numerics]",
        f"fock_cutoff = {cfg.fock_cutoff}",
        f"points_per_period = {cfg.points_per_period}",
        f"dt_scale = {_cfmt(cfg.dt_scale)}",
        f"mode = {cfg.mode}",
        "",
        "[output]",
        f"path = {cfg.output_path}",
        "",
    ]
    return "\n".join(lines)


def save_config(cfg: ExperimentConfig, path: str):
    with open(path, "w", newline="\n") as fh:
        fh.write(dumps_config(cfg))


def _parse_floats(text: str) -> tuple:
    return tuple(float(x) for x in text.replace(",", " ").split())


def _config_from_parser(parser: configparser.ConfigParser) -> ExperimentConfig:
    # configparser lowercases keys; restore the unit-suffix casing
    device = {_restore_case(k): float(v) for k, v in parser["device"].items()}
    cfg = ExperimentConfig(
        device_lab=device,
        T_list=_parse_floats(parser["decoherence"]["T_us"]),
        kappa_inv_list=_parse_floats(parser["decoherence"]["kappa_inv_us"]),
        delta_list=_parse_floats(parser["sweep"]["delta"]),
        delta_kappa_inv_list=_parse_floats(parser["sweep"]["delta_kappa_inv_us"]),
        delta_T=float(parser["sweep"]["delta_T_us"]),
        fock_cutoff=int(parser["numerics"]["fock_cutoff"]),
        points_per_period=int(parser["numerics"]["points_per_period"]),
        dt_scale=float(parser["numerics"]["dt_scale"]),
        mode=parser["numerics"]["mode"].strip(),
        output_path=parser["output"]["path"].strip(),
    )
    return cfg.validate()


def load_config(path: str) -> ExperimentConfig:
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    try:
        return _config_from_parser(parser)
    except (KeyError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad config {path}: {exc}") from exc


def _restore_case(key: str) -> str:
    if key.endswith("_ghz"):
        return key[: -4] + "_GHz"
    if key.endswith("_mhz"):
        return key[: -4] + "_MHz"
    return key


# ---------------------------------------------------------------------------
# CSV


def write_csv(rows: list, columns: tuple, path: str):
    """RFC-4180 CSV, LF line endings, doubles at 17 significant digits."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) if isinstance(row[c], float) else row[c] for c in columns])


# ---------------------------------------------------------------------------
# sweep execution


def _lindblad_point(cfg: ExperimentConfig, T: float, kappa_inv: float, delta: float, mode: str) -> dict:
    """One master-equation grid point; returns a CSV-ready record."""
    dims = cfg.dims()
    device = cfg.device()
    dec = DecoherenceParams.from_timescale(T, 1.0 / kappa_inv)
    psi0 = initial_state(delta, cfg.alpha, dims)
    ideal_input = initial_state(0.0, cfg.alpha, dims) if delta else None
    res = run_gate(
        mode,
        device,
        psi0,
        dec=dec,
        ideal_input=ideal_input,
        points_per_period=cfg.points_per_period,
        dt_scale=cfg.dt_scale,
    )
    record = {
        "T_us": T,
        "kappa_inv_us": kappa_inv,
        "delta": delta,
        "fidelity": res.fidelity,
        "trace_drift": res.trace_drift,
        "b_population_max": res.b_population_max,
        "dt_us": res.dt,
        "steps": res.steps,
        "fock_cutoff": cfg.fock_cutoff,
        "t_gate_us": res.t_gate,
        "mode": mode,
        "runtime_s": res.runtime_s,
    }
    if delta:
        shifts = device.dispersive_shifts()
        perturbed_ideal = evolve_effective_analytic(shifts, psi0, shifts.gate_time)
        record["fidelity_perturbed_target"] = fidelity_pure_mixed(perturbed_ideal, res.final_state)
    else:
        record["fidelity_perturbed_target"] = record["fidelity"]
    return record


def _kappa_point(args):
    cfg_text, T, kappa_inv, mode = args
    cfg = _config_from_text(cfg_text)
    return _lindblad_point(cfg, T, kappa_inv, 0.0, mode)


def _delta_point(args):
    cfg_text, kappa_inv, delta, mode = args
    cfg = _config_from_text(cfg_text)
    return _lindblad_point(cfg, cfg.delta_T, kappa_inv, delta, mode)


def _config_from_text(text: str) -> ExperimentConfig:
    parser = configparser.ConfigParser()
    parser.read_string(text)
    return _config_from_parser(parser)


def _run_grid(worker, tasks, jobs: int) -> list:
    if jobs <= 1:
        return [worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, tasks))


def _effective_mode(cfg: ExperimentConfig, fast: bool) -> str:
    mode = cfg.mode
    if fast:
        mode = {"full_lindblad": "rwa_lindblad", "full": "rwa"}.get(mode, mode)
    if not mode.endswith("lindblad"):
        raise ConfigError(f"sweeps require a lossy mode, got {mode!r}")
    return mode


def sweep_kappa(cfg: ExperimentConfig, jobs: int = 1, fast: bool = False) -> list:
    """Fidelity over the (T, kappa_inv) grid at delta = 0, in grid order."""
    cfg.validate()
    mode = _effective_mode(cfg, fast)
    text = dumps_config(cfg)
    tasks = [(text, T, kinv, mode) for T in cfg.T_list for kinv in cfg.kappa_inv_list]
    return _run_grid(_kappa_point, tasks, jobs)


def sweep_delta(cfg: ExperimentConfig, jobs: int = 1, fast: bool = False) -> list:
    """Fidelity over the (kappa_inv, delta) grid at T = delta_T.

    Two scores per point: ``fidelity`` against the protocol target (analytic
    gate output of the ideal delta = 0 input) and
    ``fidelity_perturbed_target`` against the analytic image of the same
    perturbed input.
    """
    cfg.validate()
    mode = _effective_mode(cfg, fast)
    text = dumps_config(cfg)
    tasks = [(text, kinv, d, mode) for kinv in cfg.delta_kappa_inv_list for d in cfg.delta_list]
    return _run_grid(_delta_point, tasks, jobs)


# ---------------------------------------------------------------------------
# scalar report and setup validation


def report_scalars(cfg: ExperimentConfig) -> str:
    """Derived device scalars: shifts, gate time, cavity Q, cat overlaps."""
    cfg.validate()
    device = cfg.device()
    report = validate_gate_condition(device)
    dims = cfg.dims()
    cat = CatCode.build(cfg.alpha, dims)
    gram = cat.overlap_matrix()
    max_cross = float(max(gram[k, l] for k in range(3) for l in range(3) if k != l))
    lines = [
        f"backend                 {active_backend()}",
        f"lambda_1                {report.lambda_1 / MHZ_TO_RAD_PER_US:.6g} MHz ({report.lambda_1:.6g} rad/us)",
        f"lambda_2                {report.lambda_2 / MHZ_TO_RAD_PER_US:.6g} MHz ({report.lambda_2:.6g} rad/us)",
        f"gate condition mismatch {report.mismatch:.3e}",
        f"gate time               {report.gate_time:.6g} us",
        f"g_1b/Delta_1b           {device.g_1b / device.detuning('1b'):.4f}",
        f"g_2b/Delta_2b           {device.g_2b / device.detuning('2b'):.4f}",
        f"cat amplitude           {cfg.alpha:.4g} (mean photon number {cfg.alpha**2:.6g})",
        f"max |<k|l>|^2 (k != l)  {max_cross:.3e}",
        f"fock cutoff             {cfg.fock_cutoff} (coherent-state leakage {coherent_truncation_leakage(cfg.alpha, cfg.fock_cutoff):.3e})",
    ]
    for kinv in cfg.kappa_inv_list:
        q = device.omega_c * kinv
        lines.append(f"cavity Q at kappa_inv = {kinv:g} us   {q:.4g}")
    return "\n".join(lines)


def validate_setup(cfg: ExperimentConfig) -> dict:
    """Cheap invariant suite for a configuration; raises ConfigError on failure."""
    cfg.validate()
    device = cfg.device()
    dims = cfg.dims()
    try:
        report = validate_gate_condition(device)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    checks = {}

    leak = coherent_truncation_leakage(cfg.alpha, cfg.fock_cutoff)
    checks["coherent_leakage"] = leak
    if leak > 1e-6:
        raise ConfigError(f"fock_cutoff={cfg.fock_cutoff} leaks {leak:.3e} at alpha={cfg.alpha}")

    cat = CatCode.build(cfg.alpha, dims)
    gram = cat.overlap_matrix()
    max_cross = float(max(gram[k, l] for k in range(3) for l in range(3) if k != l))
    checks["max_codeword_cross_overlap"] = max_cross
    if abs(cfg.alpha) >= 3.05 and max_cross >= 1e-4:
        raise ConfigError(f"codeword quasi-orthogonality violated: {max_cross:.3e}")

    checks["gate_condition_mismatch"] = report.mismatch
    if report.mismatch > 1e-6:
        raise ConfigError(f"lambda_2 != 2 lambda_1 (mismatch {report.mismatch:.3e})")

    shifts = device.dispersive_shifts()
    worst = 1.0
    for c in range(3):
        for k in range(3):
            label = HybridBasisLabel(c, k)
            psi = hybrid_basis_state(label, cfg.alpha, dims)
            out = evolve_effective_analytic(shifts, psi, shifts.gate_time)
            target = hybrid_basis_state(csum_target(label), cfg.alpha, dims)
            worst = min(worst, abs(np.vdot(target.data, out.data)))
    checks["analytic_truth_table_min_fidelity"] = worst
    if worst < 1.0 - 1e-4:
        raise ConfigError(f"analytic truth table broke quasi-orthogonality: {worst:.6f}")

    return checks
