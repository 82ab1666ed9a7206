"""Run configuration: file parsing, flag merging and validation.

Config files use INI-style sections (see README for the grammar); command
line flags override file values, which override built-in defaults.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, fields
from typing import Mapping, Optional

from .fock import CouplingConstants, LaserDrive, ModeVector, SidebandPattern, Triple

__all__ = ["MODES", "ConfigError", "RunConfig", "load_config"]

MODES = ("evolve", "survival", "indicators", "sweep", "figures", "validate")

_COUPLED_MODES = ("evolve", "survival", "indicators")

_DEFAULT_T_MAX = 4.0 * math.pi  # two chi = 0 periods, omega(0)-scaled


class ConfigError(ValueError):
    """Invalid, incomplete or ambiguous run configuration."""


def _parse_triple(value, what: str) -> Triple:
    if isinstance(value, str):
        parts = [p.strip() for p in value.split(",")]
    else:
        try:
            parts = list(value)
        except TypeError:
            raise ConfigError(f"{what}: expected three comma-separated integers") from None
    if len(parts) != 3:
        raise ConfigError(f"{what}: expected three components, got {len(parts)}")
    out = []
    for part in parts:
        try:
            number = int(part)
        except (TypeError, ValueError):
            raise ConfigError(f"{what}: component {part!r} is not an integer") from None
        if number < 0:
            raise ConfigError(f"{what}: component {number} is negative")
        out.append(number)
    return (out[0], out[1], out[2])


def _parse_float(value, what: str) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{what}: {value!r} is not a number") from None
    if not math.isfinite(number):
        raise ConfigError(f"{what}: must be finite")
    return number


def _parse_int(value, what: str) -> int:
    try:
        number = int(str(value))
    except (TypeError, ValueError):
        raise ConfigError(f"{what}: {value!r} is not an integer") from None
    return number


@dataclass(frozen=True)
class RunConfig:
    """Validated parameters of one CLI run.

    Exactly one of the three coupling sources (explicit gamma pair,
    Rabi-frequency/Lamb-Dicke pairs per beam, chi override) may be given;
    modes that consume couplings require one. A chi override replaces the
    state/pattern inputs, so combining it with explicit n, r or l is
    rejected as ambiguous.
    """

    mode: str
    n: Optional[Triple] = None
    r: Optional[Triple] = None
    l: Optional[Triple] = None
    gamma1: Optional[float] = None
    gamma2: Optional[float] = None
    omega_a: Optional[float] = None
    eta_a: Optional[float] = None
    omega_b: Optional[float] = None
    eta_b: Optional[float] = None
    chi: Optional[float] = None
    t_max: float = _DEFAULT_T_MAX
    samples: int = 1000
    epsilon: float = 0.01
    order_threshold: float = 0.5
    chi_max: float = 5.0
    chi_step: float = 0.01
    out: str = "out"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {', '.join(MODES)}; got {self.mode!r}")
        if self.samples < 2:
            raise ConfigError("samples must be >= 2")
        if self.t_max <= 0:
            raise ConfigError("t_max must be > 0")
        if self.epsilon <= 0:
            raise ConfigError("epsilon must be > 0")
        if not 0.0 < self.order_threshold <= 1.0:
            raise ConfigError("order_threshold must lie in (0, 1]")
        if self.chi_step <= 0:
            raise ConfigError("chi_step must be > 0")
        if self.chi_max < 0:
            raise ConfigError("chi_max must be >= 0")
        if self.chi is not None and self.chi < 0:
            raise ConfigError("chi must be >= 0")
        for name in ("eta_a", "eta_b"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ConfigError(f"{name} must be >= 0")

        gamma_given = self.gamma1 is not None or self.gamma2 is not None
        if gamma_given and (self.gamma1 is None or self.gamma2 is None):
            raise ConfigError("gamma1 and gamma2 must be given together")
        drive_fields = (self.omega_a, self.eta_a, self.omega_b, self.eta_b)
        drive_given = any(value is not None for value in drive_fields)
        if drive_given and any(value is None for value in drive_fields):
            raise ConfigError("omega_a, eta_a, omega_b and eta_b must be given together")
        chi_given = self.chi is not None

        sources = sum((gamma_given, drive_given, chi_given))
        if sources > 1:
            raise ConfigError(
                "ambiguous couplings: give only one of the gamma pair, the "
                "per-beam (omega, eta) pairs, or a chi override"
            )
        if chi_given and any(value is not None for value in (self.n, self.r, self.l)):
            raise ConfigError("a chi override replaces n, r and l; do not combine them")
        if sources == 0 and self.mode in _COUPLED_MODES:
            raise ConfigError(
                f"mode {self.mode!r} needs a coupling source: a gamma pair, "
                "per-beam (omega, eta) pairs, or a chi override"
            )

    @property
    def has_chi_override(self) -> bool:
        return self.chi is not None

    def mode_vector(self) -> ModeVector:
        if self.has_chi_override:
            return ModeVector(0, 0, 0)
        return ModeVector.of(self.n if self.n is not None else (1, 0, 0))

    def sideband_pattern(self) -> SidebandPattern:
        if self.has_chi_override:
            return SidebandPattern((0, 0, 0), (0, 0, 0))
        return SidebandPattern(
            self.r if self.r is not None else (1, 0, 0),
            self.l if self.l is not None else (0, 0, 0),
        )

    def coupling_constants(self) -> CouplingConstants:
        if self.has_chi_override:
            return CouplingConstants(1.0, self.chi)
        if self.gamma1 is not None:
            return CouplingConstants(self.gamma1, self.gamma2)
        if self.omega_a is not None:
            return CouplingConstants.from_drives(
                LaserDrive(self.omega_a, self.eta_a),
                LaserDrive(self.omega_b, self.eta_b),
            )
        raise ConfigError(f"mode {self.mode!r} has no coupling source configured")


_SECTION_FIELDS = {
    "run": ("mode",),
    "state": ("n", "r", "l"),
    "couplings": ("gamma1", "gamma2", "omega_a", "eta_a", "omega_b", "eta_b", "chi"),
    "grid": ("t_max", "samples", "epsilon", "order_threshold", "chi_max", "chi_step"),
    "output": ("path",),
    "validate": ("seed",),
}

_KEY_TO_FIELD = {"path": "out"}

_TRIPLE_FIELDS = ("n", "r", "l")
_INT_FIELDS = ("samples", "seed")
_FLOAT_FIELDS = (
    "gamma1",
    "gamma2",
    "omega_a",
    "eta_a",
    "omega_b",
    "eta_b",
    "chi",
    "t_max",
    "epsilon",
    "order_threshold",
    "chi_max",
    "chi_step",
)


def _coerce(field_name: str, value):
    if value is None:
        return None
    if field_name in _TRIPLE_FIELDS:
        return _parse_triple(value, field_name)
    if field_name in _INT_FIELDS:
        return _parse_int(value, field_name)
    if field_name in _FLOAT_FIELDS:
        return _parse_float(value, field_name)
    return str(value)


def _read_file(path: str) -> dict:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, "r", encoding="utf-8") as handle:
            parser.read_file(handle, source=path)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from exc

    values: dict = {}
    for section in parser.sections():
        if section not in _SECTION_FIELDS:
            raise ConfigError(
                f"{path}: unknown section [{section}]; "
                f"expected one of {', '.join(_SECTION_FIELDS)}"
            )
        for key, raw in parser.items(section):
            field_name = _KEY_TO_FIELD.get(key, key)
            if field_name not in _SECTION_FIELDS[section] and key not in _SECTION_FIELDS[section]:
                raise ConfigError(f"{path}: unknown key {key!r} in section [{section}]")
            values[field_name] = _coerce(field_name, raw)
    return values


def load_config(path: Optional[str] = None, overrides: Optional[Mapping] = None) -> RunConfig:
    """Build a validated RunConfig from an optional file plus overrides.

    ``overrides`` holds flag values keyed by RunConfig field name; entries
    that are None are ignored, everything else takes precedence over the
    file. Raises ConfigError with a field diagnostic on any problem.
    """
    values: dict = {}
    if path is not None:
        values.update(_read_file(path))
    known = {field.name for field in fields(RunConfig)}
    if overrides:
        for key, value in overrides.items():
            if key not in known:
                raise ConfigError(f"unknown configuration field {key!r}")
            if value is None:
                continue
            values[key] = _coerce(key, value)
    if "mode" not in values:
        raise ConfigError("mode is required (pick a subcommand or set [run] mode)")
    try:
        return RunConfig(**values)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
