"""Run configuration: defaults, YAML loading, and strict validation.

The default profile is the studied 40-bar thesis machine. User files
override defaults key by key; unknown keys are rejected with their full path
so typos never silently fall back to defaults.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import yaml

from .dynamics import FaultSpec, MotorParameters
from .geometry import EccentricityConfig


class ConfigError(ValueError):
    pass


DEFAULT_CONFIG: dict = {
    "motor": {
        "n_bars": 40,
        "pole_pairs": 2,
        "turns": 56,
        "r_stator": 1.75,
        "r_bar": 31e-6,
        "r_end": 2.2e-6,
        "l_stator_leak": 0.009,
        "l_bar_leak": 95e-9,
        "l_end_leak": 18e-9,
        "bar_angle": math.pi / 86,
        "skew_angle": math.pi / 86,
        "rotor_radius": 0.082,
        "stack_length": 0.11,
        "gap_length": 0.0008,
        "inertia": 0.05,
        "load_torque": 20.0,
    },
    "supply": {
        "voltage": 380.0,     # peak phase value
        "frequency": 50.0,
    },
    "fault": {
        "delta_s": 0.0,
        "delta_d": 0.0,
        "alpha_s0": 0.0,
        "alpha_d0": 0.0,
        "broken_bars": [],
        "bar_model": "scale",
        "broken_factor": 1000.0,
    },
    "sim": {
        "t_end": 6.8,
        "rtol": 1e-6,
        "atol": 1e-6,
        "resample_rate": 5120.0,
        "skew": True,
    },
    "outputs": {
        "directory": "runs/out",
        "figures": True,
        "timeseries_csv": True,
        "spectrum_csv": True,
        "peaks_json": True,
        "binary_record": True,
    },
}

_INT_KEYS = {("motor", "n_bars"), ("motor", "pole_pairs"), ("motor", "turns")}
_BOOL_KEYS = {("sim", "skew"), ("outputs", "figures"),
              ("outputs", "timeseries_csv"), ("outputs", "spectrum_csv"),
              ("outputs", "peaks_json"), ("outputs", "binary_record")}
_STR_KEYS = {("fault", "bar_model"), ("outputs", "directory")}
_LIST_KEYS = {("fault", "broken_bars")}


@dataclass(frozen=True)
class SimSettings:
    t_end: float = 6.8
    rtol: float = 1e-6
    atol: float = 1e-6
    resample_rate: float = 5120.0
    skew: bool = True

    def __post_init__(self):
        if self.t_end <= 0:
            raise ConfigError("sim.t_end must be positive")
        if self.rtol <= 0 or self.atol <= 0:
            raise ConfigError("sim tolerances must be positive")


@dataclass(frozen=True)
class OutputSettings:
    directory: str = "runs/out"
    figures: bool = True
    timeseries_csv: bool = True
    spectrum_csv: bool = True
    peaks_json: bool = True
    binary_record: bool = True


@dataclass(frozen=True)
class RunConfig:
    motor: MotorParameters
    fault: FaultSpec
    sim: SimSettings
    outputs: OutputSettings
    raw: dict = field(repr=False, default_factory=dict)

    def effective_dict(self) -> dict:
        """Every effective parameter, defaults included (manifest echo)."""
        return self.raw


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = dict(base)
    for key, val in override.items():
        here = f"{path}.{key}" if path else key
        if key not in base:
            raise ConfigError(f"unknown configuration key: {here}")
        if isinstance(base[key], dict):
            if not isinstance(val, dict):
                raise ConfigError(f"{here}: expected a section, got {type(val).__name__}")
            out[key] = _merge(base[key], val, here)
        else:
            out[key] = val
    return out


def _coerce(raw: dict) -> dict:
    out = {}
    for section, entries in raw.items():
        out[section] = {}
        for key, val in entries.items():
            here = (section, key)
            name = f"{section}.{key}"
            if here in _LIST_KEYS:
                if val is None:
                    val = []
                if not isinstance(val, (list, tuple)):
                    raise ConfigError(f"{name}: expected a list")
                out[section][key] = [int(v) for v in val]
            elif here in _BOOL_KEYS:
                if not isinstance(val, bool):
                    raise ConfigError(f"{name}: expected true/false")
                out[section][key] = val
            elif here in _STR_KEYS:
                out[section][key] = str(val)
            elif here in _INT_KEYS:
                if int(val) != val:
                    raise ConfigError(f"{name}: expected an integer")
                out[section][key] = int(val)
            else:
                try:
                    out[section][key] = float(val)
                except (TypeError, ValueError):
                    raise ConfigError(f"{name}: expected a number") from None
    return out


def config_from_dict(data: dict | None) -> RunConfig:
    raw = _coerce(_merge(DEFAULT_CONFIG, data or {}))
    m = raw["motor"]
    s = raw["supply"]
    f = raw["fault"]
    try:
        motor = MotorParameters(
            n_bars=m["n_bars"], pole_pairs=m["pole_pairs"], turns=m["turns"],
            r_stator=m["r_stator"], r_bar=m["r_bar"], r_end=m["r_end"],
            l_stator_leak=m["l_stator_leak"], l_bar_leak=m["l_bar_leak"],
            l_end_leak=m["l_end_leak"], bar_angle=m["bar_angle"],
            skew_angle=m["skew_angle"], rotor_radius=m["rotor_radius"],
            stack_length=m["stack_length"], gap_length=m["gap_length"],
            inertia=m["inertia"], load_torque=m["load_torque"],
            supply_voltage=s["voltage"], supply_frequency=s["frequency"])
        ecc = EccentricityConfig(delta_s=f["delta_s"], delta_d=f["delta_d"],
                                 alpha_s0=f["alpha_s0"], alpha_d0=f["alpha_d0"])
        fault = FaultSpec(eccentricity=ecc,
                          broken_bars=tuple(f["broken_bars"]),
                          bar_model=f["bar_model"],
                          broken_factor=f["broken_factor"])
        fault.validate_against(motor)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    sim = SimSettings(**raw["sim"])
    outputs = OutputSettings(**raw["outputs"])
    return RunConfig(motor=motor, fault=fault, sim=sim, outputs=outputs, raw=raw)


def load_config(path=None) -> RunConfig:
    """Build a RunConfig from a YAML file merged over the default profile."""
    data = None
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigError("configuration root must be a mapping")
    return config_from_dict(data)
