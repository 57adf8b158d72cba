"""Run configuration: TOML schema, validation and default emission.

Schema (``schema_version = 1``); every key is optional unless noted::

    schema_version = 1

    [helium]       rho4, c4, kappa_He, eps_R, grueneisen_G, eps_loss, x3
    [niobium]      c_Nb, q_mech
    [geometry]     radius, length                                  (m)
    [cavity]       f_c_hz, omega_c_source ("measured" | "model"),
                   kappa_int_hz, kappa_in_hz, kappa_out_hz         (rates as kappa/2pi)
    [modes]        acoustic ("m,n,k"), em ("TE,m,n,p"), fmax_hz, em_fmax_hz
    [losses]       three_phonon, wall, he3 (bools), he3_coefficient,
                   q_substrate, energy_fraction, t_min, t_max, points, log_grid
    [measurement]  n_photons, detuning_hz, phase_noise_dbc, phase_noise_offset_hz,
                   bandwidth_hz (required by `sense`), temperature, q_acoustic,
                   strain_baseline
    [quadrature]   rtol, max_level
    [sweep]        selection ("fixed" | "track" | "all"), target_hz, fom, cap
    [[sweep.axes]] parameter, and either values = [...] or min, max, count, scale
    [optimize]     parameter, lower, upper, fom, grid
    [output]       directory, format ("csv" | "json")

Optional keys with no default (``None``) are emitted commented out.
"""

import dataclasses
import math
import typing
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import List, Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .errors import ValidationError
from .materials import CylinderGeometry, HeliumProperties, NiobiumProperties

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Configuration could not be parsed or failed validation.

    ``path`` is the dotted key path of the offending entry, when known.
    """

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class CavityConfig:
    f_c_hz: float = 10.60e9
    omega_c_source: str = "measured"
    kappa_int_hz: float = 31.0
    kappa_in_hz: float = 633.0
    kappa_out_hz: float = 633.0

    def __post_init__(self):
        if self.omega_c_source not in ("measured", "model"):
            raise ValidationError("omega_c_source", "must be 'measured' or 'model'")
        for name in ("f_c_hz", "kappa_int_hz", "kappa_in_hz", "kappa_out_hz"):
            if not getattr(self, name) > 0:
                raise ValidationError(name, "must be > 0")


@dataclass(frozen=True)
class ModeConfig:
    acoustic: str = "0,1,2"
    em: str = "TE,0,1,1"
    fmax_hz: float = 12400.0
    em_fmax_hz: float = 12e9

    def __post_init__(self):
        from .acoustics import AcousticModeIndex
        from .electromagnetics import EmModeIndex

        for name, parser in (("acoustic", AcousticModeIndex.parse), ("em", EmModeIndex.parse)):
            try:
                parser(getattr(self, name))
            except (ValueError, TypeError) as exc:
                raise ValidationError(name, str(exc)) from None
        if not self.fmax_hz > 0:
            raise ValidationError("fmax_hz", "must be > 0")
        if not self.em_fmax_hz > 0:
            raise ValidationError("em_fmax_hz", "must be > 0")


@dataclass(frozen=True)
class LossConfig:
    three_phonon: bool = True
    wall: bool = True
    he3: bool = False
    he3_coefficient: Optional[float] = None
    q_substrate: Optional[float] = None
    energy_fraction: float = 4e-4
    t_min: float = 0.005
    t_max: float = 0.5
    points: int = 50
    log_grid: bool = True

    def __post_init__(self):
        if self.he3 and not (self.he3_coefficient is not None and self.he3_coefficient > 0):
            raise ValidationError("he3_coefficient", "required (> 0) when he3 = true")
        if self.q_substrate is not None and not self.q_substrate > 0:
            raise ValidationError("q_substrate", "must be > 0")
        if not 0 < self.energy_fraction < 1:
            raise ValidationError("energy_fraction", "must lie in (0, 1)")
        if not 0 < self.t_min <= self.t_max:
            raise ValidationError("t_max", "need 0 < t_min <= t_max")
        if self.points < 1:
            raise ValidationError("points", "must be >= 1")


@dataclass(frozen=True)
class MeasurementConfig:
    n_photons: float = 4.5e8
    detuning_hz: float = 0.0
    phase_noise_dbc: float = -110.0
    phase_noise_offset_hz: Optional[float] = None
    bandwidth_hz: Optional[float] = None
    temperature: float = 0.1
    q_acoustic: Optional[float] = None
    strain_baseline: Optional[float] = None

    def __post_init__(self):
        if not self.n_photons >= 0:
            raise ValidationError("n_photons", "must be >= 0")
        for name in ("phase_noise_offset_hz", "bandwidth_hz", "q_acoustic", "strain_baseline"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ValidationError(name, "must be > 0")
        if not self.temperature > 0:
            raise ValidationError("temperature", "must be > 0")


@dataclass(frozen=True)
class QuadratureConfig:
    rtol: float = 1e-9
    max_level: int = 12

    def __post_init__(self):
        from .numerics import QuadratureSpec

        QuadratureSpec(self.rtol, self.max_level)

    def spec(self):
        from .numerics import QuadratureSpec

        return QuadratureSpec(self.rtol, self.max_level)


SWEEP_PARAMETERS = ("radius", "length", "temperature", "c4", "x3", "fmax")
FIGURES_OF_MERIT = ("g0_magnitude", "q_total", "noise_temperature_inverse", "sideband_margin")


@dataclass(frozen=True)
class AxisConfig:
    parameter: str = "c4"
    values: Optional[List[float]] = None
    min: Optional[float] = None
    max: Optional[float] = None
    count: Optional[int] = None
    scale: str = "linear"

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise ValidationError("parameter", f"must be one of {', '.join(SWEEP_PARAMETERS)}")
        if self.scale not in ("linear", "log"):
            raise ValidationError("scale", "must be 'linear' or 'log'")
        if self.values is None and None in (self.min, self.max, self.count):
            raise ValidationError("values", "give either values or min, max and count")


@dataclass(frozen=True)
class SweepConfig:
    selection: str = "fixed"
    target_hz: Optional[float] = None
    fom: str = "g0_magnitude"
    cap: int = 1_000_000
    axes: List[AxisConfig] = field(default_factory=list)

    def __post_init__(self):
        if self.selection not in ("fixed", "track", "all"):
            raise ValidationError("selection", "must be 'fixed', 'track' or 'all'")
        if self.selection == "track" and not (self.target_hz and self.target_hz > 0):
            raise ValidationError("target_hz", "required (> 0) for selection = 'track'")
        if self.fom not in FIGURES_OF_MERIT:
            raise ValidationError("fom", f"must be one of {', '.join(FIGURES_OF_MERIT)}")
        if self.cap < 1:
            raise ValidationError("cap", "must be >= 1")


@dataclass(frozen=True)
class OptimizeConfig:
    parameter: str = "length"
    lower: float = 0.02
    upper: float = 0.08
    fom: str = "sideband_margin"
    grid: int = 32

    def __post_init__(self):
        if self.parameter not in ("radius", "length", "c4", "temperature"):
            raise ValidationError("parameter", "must be radius, length, c4 or temperature")
        if not 0 < self.lower <= self.upper:
            raise ValidationError("upper", "need 0 < lower <= upper")
        if self.fom not in FIGURES_OF_MERIT:
            raise ValidationError("fom", f"must be one of {', '.join(FIGURES_OF_MERIT)}")
        if self.grid < 2:
            raise ValidationError("grid", "must be >= 2")


@dataclass(frozen=True)
class OutputConfig:
    directory: Optional[str] = None
    format: str = "csv"

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise ValidationError("format", "must be 'csv' or 'json'")


@dataclass(frozen=True)
class RunConfig:
    schema_version: int = SCHEMA_VERSION
    helium: HeliumProperties = field(default_factory=HeliumProperties)
    niobium: NiobiumProperties = field(default_factory=NiobiumProperties)
    geometry: CylinderGeometry = field(default_factory=CylinderGeometry)
    cavity: CavityConfig = field(default_factory=CavityConfig)
    modes: ModeConfig = field(default_factory=ModeConfig)
    losses: LossConfig = field(default_factory=LossConfig)
    measurement: MeasurementConfig = field(default_factory=MeasurementConfig)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    optimize: OptimizeConfig = field(default_factory=OptimizeConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def replace_section(self, section, **changes):
        current = getattr(self, section)
        try:
            updated = dataclasses.replace(current, **changes)
        except ValidationError as exc:
            raise ConfigError(f"{section}.{exc.field}", str(exc).split(": ", 1)[-1]) from None
        return dataclasses.replace(self, **{section: updated})


SECTION_TYPES = {
    f.name: f.default_factory for f in fields(RunConfig) if f.name != "schema_version"
}


def _coerce(value, annotation, path):
    origin = typing.get_origin(annotation)
    args = typing.get_args(annotation)
    if origin is typing.Union and type(None) in args:
        inner = next(a for a in args if a is not type(None))
        return _coerce(value, inner, path)
    if origin in (list, List):
        if not isinstance(value, list):
            raise ConfigError(path, f"expected a list, got {value!r}")
        return [_coerce(v, args[0], f"{path}[{i}]") for i, v in enumerate(value)]
    if annotation is bool:
        if not isinstance(value, bool):
            raise ConfigError(path, f"expected true/false, got {value!r}")
        return value
    if annotation is int:
        if isinstance(value, bool) or not isinstance(value, int):
            if isinstance(value, float) and value.is_integer():
                return int(value)
            raise ConfigError(path, f"expected an integer, got {value!r}")
        return value
    if annotation is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(path, f"expected a number, got {value!r}")
        value = float(value)
        if not math.isfinite(value):
            raise ConfigError(path, "must be finite")
        return value
    if annotation is str:
        if not isinstance(value, str):
            raise ConfigError(path, f"expected a string, got {value!r}")
        return value
    if dataclasses.is_dataclass(annotation):
        return _build(annotation, value, path)
    raise ConfigError(path, f"unsupported value {value!r}")


def _build(cls, data, path):
    if not isinstance(data, dict):
        raise ConfigError(path, "expected a table")
    hints = typing.get_type_hints(cls)
    names = [f.name for f in fields(cls)]
    for key in data:
        if key not in names:
            raise ConfigError(f"{path}.{key}" if path else key, "unknown key")
    kwargs = {}
    for name in names:
        if name in data:
            key_path = f"{path}.{name}" if path else name
            kwargs[name] = _coerce(data[name], hints[name], key_path)
    try:
        return cls(**kwargs)
    except ValidationError as exc:
        field_path = f"{path}.{exc.field}" if path else exc.field
        raise ConfigError(field_path, str(exc).split(": ", 1)[-1]) from None


def config_from_dict(data):
    data = dict(data)
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError("schema_version", f"unsupported version {version!r} (expected {SCHEMA_VERSION})")
    return _build(RunConfig, data, "")


def parse_config(text):
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("", f"parse error: {exc}") from None
    return config_from_dict(data)


def load_config(path):
    """Read and validate a TOML config; a missing path means all defaults."""
    if path is None:
        return RunConfig()
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("", f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text)


def apply_overrides(config, assignments):
    """Apply ``section.key=value`` strings; values are parsed as TOML."""
    for item in assignments:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(item, "expected section.key=value")
        key, raw = item.split("=", 1)
        section, name = key.strip().split(".", 1)
        if section not in SECTION_TYPES:
            raise ConfigError(section, "unknown section")
        try:
            value = tomllib.loads(f"v = {raw.strip()}")["v"]
        except tomllib.TOMLDecodeError:
            value = raw.strip()
        current = config_to_dict(config).get(section, {})
        current[name] = value
        data = config_to_dict(config)
        data[section] = current
        config = config_from_dict(data)
    return config


def config_to_dict(config):
    """Plain nested dict; ``None`` entries are dropped."""

    def strip(obj):
        if isinstance(obj, dict):
            return {k: strip(v) for k, v in obj.items() if v is not None}
        if isinstance(obj, list):
            return [strip(v) for v in obj]
        return obj

    return strip(dataclasses.asdict(config))


def _toml_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(value, list):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    raise TypeError(f"cannot emit {value!r}")


def _emit_table(lines, header, obj, skip=()):
    lines.append(f"[{header}]")
    for f in fields(obj):
        if f.name in skip:
            continue
        value = getattr(obj, f.name)
        if value is None:
            lines.append(f"# {f.name} =")
        else:
            lines.append(f"{f.name} = {_toml_value(value)}")
    lines.append("")


def emit_config(config):
    """Serialise a RunConfig as TOML, including every section."""
    lines = [f"schema_version = {config.schema_version}", ""]
    for f in fields(RunConfig):
        if f.name == "schema_version":
            continue
        section = getattr(config, f.name)
        if f.name == "sweep":
            _emit_table(lines, "sweep", section, skip=("axes",))
            for axis in section.axes:
                _emit_table(lines, "[sweep.axes]", axis)
        else:
            _emit_table(lines, f.name, section)
    return "\n".join(lines)
