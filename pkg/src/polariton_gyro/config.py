"""Run configuration: a flat TOML schema with unit-suffixed quantities.

Top-level keys (defaults in parentheses)::

    mass = "23 amu"                  dipole_moment = "2.1e-29 C m"
    cross_section = "1e-12 cm^2"     wavelength = "500 nm"
    beam_area = "100 um^2"           radius = "1 cm"
    omega = "earth"                  table = "sweep"   # fig2 | fig3 | sweep
    sweep_variable = "xi"            # xi | temperature_ratio | eta
    sweep_scale = "log"              # log | linear
    sweep_min, sweep_max             (per table, see below)
    sweep_count = 200                temperature_ratios = [1, 1000, 1000000]
    mode = "analytic"                # analytic | oracle | both
    absorption = "general"           # general | fig3
    quadrature_order = 64            steps_per_segment = 512
    rtol = 1e-9                      tolerance = 1e-3
    absorption_tolerance = 0.05      epsilon = 0.01
    kappa_budget = 1.0               oracle_count = 7
    output = "table.csv"             (standard output when absent)

Each ``[[segment]]`` table describes one medium stretch::

    length = "100 um"        # omit for "the rest of the periphery"
    eta = 1                  gamma = "10 2pi MHz"
    temperature_ratio = 0
    alpha = 100  OR  density = "1e11 cm^-3"
    xi = 1000    OR  rabi_frequency = "1e7 rad/s"

Periphery not covered by segments is vacuum. Sweeps act on the first segment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .constants import EARTH_RATE
from .model import (
    C,
    AtomSpecies,
    ControlField,
    LoopGeometry,
    MediumSegment,
    ProbeField,
    ABSORPTION_MODES,
    coupling_constant,
    critical_tan2,
    segment_at_xi,
)
from .units import UnitError, format_quantity, parse_quantity

TABLES = ("fig2", "fig3", "sweep")
SWEEP_VARIABLES = ("xi", "temperature_ratio", "eta")
SCALES = ("log", "linear")
MODES = ("analytic", "oracle", "both")

DEFAULT_GAMMA = parse_quantity("10 2pi MHz", "rate")
DEFAULT_SPECIES = AtomSpecies(
    mass=parse_quantity("23 amu", "mass"),
    dipole_moment=parse_quantity("2.1e-29 C m", "dipole"),
    cross_section=parse_quantity("1e-12 cm^2", "area"),
)
DEFAULT_PROBE = ProbeField(
    wavelength=parse_quantity("500 nm", "length"),
    beam_area=parse_quantity("100 um^2", "area"),
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SegmentSpec:
    length: float | None = None
    eta: float = 1.0
    gamma: float = DEFAULT_GAMMA
    temperature_ratio: float = 0.0
    alpha: float | None = None
    density: float | None = None
    xi: float | None = None
    rabi_frequency: float | None = None

    def build(self, species, probe, length, xi=None, temperature_ratio=None, eta=None) -> MediumSegment:
        xi = self.xi if xi is None else xi
        temperature_ratio = self.temperature_ratio if temperature_ratio is None else temperature_ratio
        eta = self.eta if eta is None else eta
        if xi is not None:
            return segment_at_xi(
                species,
                probe,
                length=length,
                xi=xi,
                gamma=self.gamma,
                eta=eta,
                alpha=self.alpha,
                density=self.density,
                temperature_ratio=temperature_ratio,
            )
        density = self.density
        if density is None:
            g = coupling_constant(species, probe)
            density = self.alpha * self.gamma * C / (g * g * probe.beam_area * length)
        return MediumSegment(
            length=length,
            density=density,
            gamma=self.gamma,
            control=ControlField(complex(self.rabi_frequency), eta),
            temperature_ratio=temperature_ratio,
        )


@dataclass(frozen=True)
class RunConfig:
    species: AtomSpecies = DEFAULT_SPECIES
    probe: ProbeField = DEFAULT_PROBE
    radius: float = 0.01
    omega: float = EARTH_RATE
    segments: tuple[SegmentSpec, ...] = ()
    table: str = "sweep"
    sweep_variable: str = "xi"
    sweep_scale: str = "log"
    sweep_min: float | None = None
    sweep_max: float | None = None
    sweep_count: int = 200
    temperature_ratios: tuple[float, ...] = (1.0, 1e3, 1e6)
    mode: str = "analytic"
    absorption: str = "general"
    quadrature_order: int = 64
    steps_per_segment: int = 512
    rtol: float = 1e-9
    tolerance: float = 1e-3
    absorption_tolerance: float = 0.05
    epsilon: float = 1e-2
    kappa_budget: float = 1.0
    oracle_count: int = 7
    output: str | None = None

    def __post_init__(self):
        _check_choice("table", self.table, TABLES)
        _check_choice("sweep_variable", self.sweep_variable, SWEEP_VARIABLES)
        _check_choice("sweep_scale", self.sweep_scale, SCALES)
        _check_choice("mode", self.mode, MODES)
        _check_choice("absorption", self.absorption, ABSORPTION_MODES)
        if self.sweep_count < 2:
            raise ConfigError("sweep_count: must be >= 2")
        if self.oracle_count < 2:
            raise ConfigError("oracle_count: must be >= 2")
        if self.sweep_scale == "log":
            for key in ("sweep_min", "sweep_max"):
                value = getattr(self, key)
                if value is not None and not value > 0:
                    raise ConfigError(f"{key}: must be > 0 for a log sweep")
        for key in ("radius", "rtol", "tolerance", "absorption_tolerance", "epsilon", "kappa_budget"):
            if not getattr(self, key) > 0:
                raise ConfigError(f"{key}: must be > 0")
        for key in ("quadrature_order", "steps_per_segment"):
            if getattr(self, key) < 1:
                raise ConfigError(f"{key}: must be >= 1")
        if any(t < 0 for t in self.temperature_ratios):
            raise ConfigError("temperature_ratios: entries must be >= 0")
        if sum(s.length is None for s in self.segments) > 1:
            raise ConfigError("segment.length: at most one segment may omit its length")
        fixed = math.fsum(s.length for s in self.segments if s.length is not None)
        if fixed > 2.0 * math.pi * self.radius * (1.0 + 1e-9):
            raise ConfigError("segment.length: segments are longer than the loop periphery")
        if self.table in ("fig2", "fig3") and not self.segments:
            raise ConfigError(f"segment: table {self.table!r} needs a medium segment")

    @property
    def ratio(self) -> float:
        return critical_tan2(self.probe, self.species)

    def sweep_range(self) -> tuple[float, float]:
        lo, hi = self.sweep_min, self.sweep_max
        if self.table == "fig2":
            lo = 1e-3 if lo is None else lo
            hi = 10.0 * self.ratio if hi is None else hi
        elif self.table == "fig3":
            lo = 0.1 if lo is None else lo
            hi = 1e9 if hi is None else hi
        if lo is None or hi is None:
            raise ConfigError("sweep_min/sweep_max: required for a generic sweep")
        return lo, hi

    def build_loop(self, xi=None, temperature_ratio=None, eta=None) -> LoopGeometry:
        """Loop for this configuration; overrides apply to the first segment."""
        circumference = 2.0 * math.pi * self.radius
        fixed = math.fsum(s.length for s in self.segments if s.length is not None)
        built = []
        for i, spec in enumerate(self.segments):
            length = spec.length if spec.length is not None else circumference - fixed
            if i == 0:
                seg = spec.build(self.species, self.probe, length, xi, temperature_ratio, eta)
            else:
                seg = spec.build(self.species, self.probe, length)
            built.append(seg)
        if not built:
            return LoopGeometry.vacuum(self.radius)
        try:
            return LoopGeometry.with_filler(self.radius, built)
        except ValueError as exc:
            raise ConfigError(f"segment.length: {exc}") from exc


def _check_choice(key, value, choices):
    if value not in choices:
        raise ConfigError(f"{key}: {value!r} is not one of {list(choices)}")


# key -> (dimension or python type)
_TOP_QUANTITIES = {
    "mass": "mass",
    "dipole_moment": "dipole",
    "cross_section": "area",
    "wavelength": "length",
    "beam_area": "area",
    "radius": "length",
    "omega": "angular_velocity",
}
_TOP_SCALARS = {
    "table": str,
    "sweep_variable": str,
    "sweep_scale": str,
    "sweep_min": float,
    "sweep_max": float,
    "sweep_count": int,
    "temperature_ratios": list,
    "mode": str,
    "absorption": str,
    "quadrature_order": int,
    "steps_per_segment": int,
    "rtol": float,
    "tolerance": float,
    "absorption_tolerance": float,
    "epsilon": float,
    "kappa_budget": float,
    "oracle_count": int,
    "output": str,
}
_SEGMENT_QUANTITIES = {
    "length": "length",
    "gamma": "rate",
    "density": "density",
    "rabi_frequency": "rate",
}
_SEGMENT_SCALARS = {"eta": float, "temperature_ratio": float, "alpha": float, "xi": float}


def _scalar(key, value, kind):
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key}: expected a number, got {value!r}")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{key}: expected an integer, got {value!r}")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ConfigError(f"{key}: expected a string, got {value!r}")
        return value
    if kind is list:
        if not isinstance(value, list):
            raise ConfigError(f"{key}: expected a list, got {value!r}")
        return tuple(_scalar(f"{key}[]", v, float) for v in value)
    raise AssertionError(kind)


def _quantity(key, value, dimension):
    try:
        return parse_quantity(value, dimension)
    except UnitError as exc:
        raise ConfigError(f"{key}: {exc}") from exc


def _parse_segment(index, table) -> SegmentSpec:
    if not isinstance(table, dict):
        raise ConfigError(f"segment[{index}]: expected a table")
    values = {}
    for key, raw in table.items():
        name = f"segment[{index}].{key}"
        if key in _SEGMENT_QUANTITIES:
            values[key] = _quantity(name, raw, _SEGMENT_QUANTITIES[key])
        elif key in _SEGMENT_SCALARS:
            values[key] = _scalar(name, raw, _SEGMENT_SCALARS[key])
        else:
            raise ConfigError(f"{name}: unknown key")
    if ("alpha" in values) == ("density" in values):
        raise ConfigError(f"segment[{index}]: give exactly one of alpha or density")
    if ("xi" in values) == ("rabi_frequency" in values):
        raise ConfigError(f"segment[{index}]: give exactly one of xi or rabi_frequency")
    if values.get("eta", 1.0) < 0:
        raise ConfigError(
            f"segment[{index}].eta: must be >= 0 (negative momentum transfer makes the "
            "medium opaque once v_gr crosses zero)"
        )
    if values.get("eta", 1.0) > 2:
        raise ConfigError(f"segment[{index}].eta: must be <= 2")
    for key in ("length", "gamma", "alpha", "density", "xi", "rabi_frequency"):
        if key in values and not values[key] > 0:
            raise ConfigError(f"segment[{index}].{key}: must be > 0")
    if values.get("temperature_ratio", 0.0) < 0:
        raise ConfigError(f"segment[{index}].temperature_ratio: must be >= 0")
    return SegmentSpec(**values)


def config_from_mapping(doc: dict, base: RunConfig | None = None) -> RunConfig:
    base = base or RunConfig()
    top = {}
    species = {
        "mass": base.species.mass,
        "dipole_moment": base.species.dipole_moment,
        "cross_section": base.species.cross_section,
    }
    probe = {"wavelength": base.probe.wavelength, "beam_area": base.probe.beam_area}
    for key, raw in doc.items():
        if key == "segment":
            if not isinstance(raw, list):
                raise ConfigError("segment: expected an array of tables ([[segment]])")
            top["segments"] = tuple(_parse_segment(i, t) for i, t in enumerate(raw))
        elif key in _TOP_QUANTITIES:
            value = _quantity(key, raw, _TOP_QUANTITIES[key])
            if key in species:
                species[key] = value
            elif key in probe:
                probe[key] = value
            else:
                top[key] = value
        elif key in _TOP_SCALARS:
            top[key] = _scalar(key, raw, _TOP_SCALARS[key])
        else:
            raise ConfigError(f"{key}: unknown key")
    try:
        top["species"] = AtomSpecies(**species)
        top["probe"] = ProbeField(**probe)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    try:
        return replace(base, **top)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def parse_config(text: str, base: RunConfig | None = None) -> RunConfig:
    """Parse a TOML document into a validated :class:`RunConfig`.

    Keys absent from the document keep the values of ``base`` (the built-in
    defaults when ``base`` is None).
    """
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed configuration document: {exc}") from exc
    return config_from_mapping(doc, base)


def load_config(path, base: RunConfig | None = None) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), base)


def _toml_value(value):
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (tuple, list)):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    return repr(value)


def dump_config(config: RunConfig) -> str:
    """Serialise ``config`` as TOML; :func:`parse_config` restores an equal object."""
    lines = [
        f"mass = {_toml_value(format_quantity(config.species.mass, 'mass'))}",
        f"dipole_moment = {_toml_value(format_quantity(config.species.dipole_moment, 'dipole'))}",
        f"cross_section = {_toml_value(format_quantity(config.species.cross_section, 'area'))}",
        f"wavelength = {_toml_value(format_quantity(config.probe.wavelength, 'length'))}",
        f"beam_area = {_toml_value(format_quantity(config.probe.beam_area, 'area'))}",
        f"radius = {_toml_value(format_quantity(config.radius, 'length'))}",
        f"omega = {_toml_value(format_quantity(config.omega, 'angular_velocity'))}",
    ]
    for f in fields(RunConfig):
        if f.name in ("species", "probe", "radius", "omega", "segments"):
            continue
        value = getattr(config, f.name)
        if value is None:
            continue
        lines.append(f"{f.name} = {_toml_value(value)}")
    for spec in config.segments:
        lines.append("")
        lines.append("[[segment]]")
        for f in fields(SegmentSpec):
            value = getattr(spec, f.name)
            if value is None:
                continue
            if f.name in _SEGMENT_QUANTITIES:
                value = format_quantity(value, _SEGMENT_QUANTITIES[f.name])
            lines.append(f"{f.name} = {_toml_value(value)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# built-in presets
# ---------------------------------------------------------------------------

PRESETS = {
    "fig2": """\
# Sagnac enhancement versus xi, medium filling the whole loop, eta = 1
table = "fig2"
sweep_count = 200

[[segment]]
eta = 1
alpha = 100
xi = 1
gamma = "10 2pi MHz"
temperature_ratio = 0
""",
    "fig3-left": """\
# thermal absorption, trap-sized sample: alpha = 100, L = 100 um, 500 nm
table = "fig3"
sweep_count = 201
temperature_ratios = [1, 1000, 1000000]

[[segment]]
length = "100 um"
eta = 1
alpha = 100
xi = 1000
gamma = "10 2pi MHz"
temperature_ratio = 1
""",
    "fig3-right": """\
# thermal absorption, vapour-cell-sized sample: alpha = 10, L = 1 cm, 500 nm
table = "fig3"
sweep_count = 201
temperature_ratios = [1, 1000, 1000000]

[[segment]]
length = "1 cm"
eta = 1
alpha = 10
xi = 100000
gamma = "10 2pi MHz"
temperature_ratio = 1
""",
}


def preset(name: str) -> RunConfig:
    try:
        text = PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; available: {sorted(PRESETS)}") from None
    return parse_config(text)
