"""Parameter sweeps, design-point solving and oracle checks over a RunConfig."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import model
from .config import RunConfig
from .envelope import OracleOptions, compare_to_analytic

BASE_COLUMNS = (
    "swept_var",
    "xi",
    "vgr_over_vrec",
    "phase_optical_rad",
    "phase_hybrid_rad",
    "enhancement",
    "kappa_L",
    "valid",
)
ORACLE_COLUMNS = (
    "phase_numeric_rad",
    "phase_deviation",
    "kappa_L_numeric",
    "kappa_deviation",
    "oracle_status",
)
TRAILING_COLUMNS = ("swept_name", "temperature_ratio", "eta", "failed_flags")


class InvariantViolation(RuntimeError):
    """An emitted row breaks a relation the closed forms guarantee."""


@dataclass
class SweepRow:
    swept_name: str
    swept_value: float
    xi: float
    vgr_over_vrec: float
    phase_optical: float
    phase_hybrid: float
    enhancement: float
    kappa_L: float
    flags: dict
    temperature_ratio: float
    eta: float
    oracle: object = None
    oracle_status: str = ""

    @property
    def valid(self) -> bool:
        return all(self.flags.values())


def oracle_options(config: RunConfig) -> OracleOptions:
    return OracleOptions(
        grid_order=config.quadrature_order,
        steps_per_segment=config.steps_per_segment,
        rtol=config.rtol,
        phase_tolerance=config.tolerance,
        absorption_tolerance=config.absorption_tolerance,
        epsilon=config.epsilon,
    )


def sweep_values(config: RunConfig, count: int | None = None) -> np.ndarray:
    lo, hi = config.sweep_range()
    count = config.sweep_count if count is None else count
    if config.sweep_scale == "log":
        return np.logspace(math.log10(lo), math.log10(hi), count)
    return np.linspace(lo, hi, count)


def _oracle_status(comparison, config):
    verdict = comparison.passed(config.tolerance, config.absorption_tolerance)
    return {None: "skipped", True: "pass", False: "fail"}[verdict]


def compute_row(config: RunConfig, swept_name: str, swept_value: float, with_oracle: bool = False, **overrides) -> SweepRow:
    loop = config.build_loop(**overrides)
    report = model.sagnac_report(loop, config.omega, config.probe, config.species, config.absorption, config.epsilon)
    first = loop.segments[0]
    d = model.derived_quantities(first, config.probe, config.species)
    row = SweepRow(
        swept_name=swept_name,
        swept_value=float(swept_value),
        xi=d.xi,
        vgr_over_vrec=d.v_gr / d.v_rec,
        phase_optical=report.phase_optical,
        phase_hybrid=report.phase_hybrid,
        enhancement=report.enhancement,
        kappa_L=report.kappa_L_total,
        flags=report.validity_flags,
        temperature_ratio=first.temperature_ratio,
        eta=first.eta,
    )
    if with_oracle:
        row.oracle = compare_to_analytic(
            loop, config.omega, config.probe, config.species, oracle_options(config), config.absorption
        )
        row.oracle_status = _oracle_status(row.oracle, config)
    check_row(row, config)
    return row


def check_row(row: SweepRow, config: RunConfig) -> None:
    """Re-validate closed-form invariants on an emitted row."""
    for name in ("xi", "vgr_over_vrec", "phase_optical", "phase_hybrid", "kappa_L"):
        value = getattr(row, name)
        if math.isnan(value):
            raise InvariantViolation(f"{name} is NaN at {row.swept_name} = {row.swept_value!r}")
    if row.kappa_L < 0:
        raise InvariantViolation("kappa_L < 0")
    if row.vgr_over_vrec < row.eta * (1.0 - 1e-12):
        raise InvariantViolation("v_gr < eta v_rec")
    if config.omega != 0:
        # a length-weighted mean of per-segment factors, each in [1, S]
        slack = 1e-9
        if not (1.0 - slack <= row.enhancement <= config.ratio * (1.0 + slack)):
            raise InvariantViolation(f"enhancement {row.enhancement!r} outside [1, {config.ratio!r}]")


def sweep_fig2(config: RunConfig, with_oracle: bool = False) -> list[SweepRow]:
    """Enhancement versus xi for the configured (uniform) medium."""
    return [compute_row(config, "xi", xi, with_oracle, xi=float(xi)) for xi in sweep_values(config)]


def sweep_fig3(config: RunConfig, with_oracle: bool = False) -> list[SweepRow]:
    """kappa L versus xi, one block of rows per configured temperature ratio."""
    rows = []
    for t in config.temperature_ratios:
        for xi in sweep_values(config):
            rows.append(compute_row(config, "xi", xi, with_oracle, xi=float(xi), temperature_ratio=float(t)))
    return rows


def sweep_generic(config: RunConfig, with_oracle: bool = False, count: int | None = None) -> list[SweepRow]:
    name = config.sweep_variable
    return [
        compute_row(config, name, value, with_oracle, **{name: float(value)})
        for value in sweep_values(config, count)
    ]


def run_sweep(config: RunConfig, with_oracle: bool | None = None) -> list[SweepRow]:
    if with_oracle is None:
        with_oracle = config.mode in ("oracle", "both")
    if config.table == "fig2":
        return sweep_fig2(config, with_oracle)
    if config.table == "fig3":
        return sweep_fig3(config, with_oracle)
    return sweep_generic(config, with_oracle)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, str):
        return value
    value = float(value)
    if math.isinf(value) or math.isnan(value):
        return repr(value)
    return f"{value:.8e}"


def rows_to_csv(rows: list[SweepRow]) -> str:
    """Fixed column order, 9 significant digits, no timestamps."""
    with_oracle = any(r.oracle is not None for r in rows)
    header = list(BASE_COLUMNS) + (list(ORACLE_COLUMNS) if with_oracle else []) + list(TRAILING_COLUMNS)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        line = [
            _fmt(r.swept_value),
            _fmt(r.xi),
            _fmt(r.vgr_over_vrec),
            _fmt(r.phase_optical),
            _fmt(r.phase_hybrid),
            _fmt(r.enhancement),
            _fmt(r.kappa_L),
            _fmt(r.valid),
        ]
        if with_oracle:
            o = r.oracle
            if o is None:
                line += ["", "", "", "", ""]
            else:
                line += [
                    _fmt(o.phase_numeric),
                    _fmt(o.phase_deviation),
                    _fmt(o.kappa_numeric),
                    _fmt(o.kappa_deviation),
                    r.oracle_status,
                ]
        failed = ";".join(name for name, ok in r.flags.items() if not ok)
        line += [r.swept_name, _fmt(r.temperature_ratio), _fmt(r.eta), failed]
        writer.writerow(line)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# design point
# ---------------------------------------------------------------------------


@dataclass
class DesignReport:
    kappa_budget: float
    xi_min_absorption: float
    vgr_min_absorption: float
    vgr_min_collision: float
    vgr_max: float
    binding: str
    feasible: bool
    xi_optimum: float
    enhancement_local: float
    enhancement_loop: float
    notes: list = field(default_factory=list)

    def lines(self) -> list[str]:
        out = [
            f"kappa_budget={_fmt(self.kappa_budget)}",
            f"xi_min_absorption={_fmt(self.xi_min_absorption)}",
            f"vgr_over_vrec_min_absorption={_fmt(self.vgr_min_absorption)}",
            f"vgr_over_vrec_min_collision={_fmt(self.vgr_min_collision)}",
            f"vgr_over_vrec_max={_fmt(self.vgr_max)}",
            f"binding={self.binding}",
            f"feasible={'true' if self.feasible else 'false'}",
            f"xi_optimum={_fmt(self.xi_optimum)}",
            f"enhancement_local={_fmt(self.enhancement_local)}",
            f"enhancement_loop={_fmt(self.enhancement_loop)}",
        ]
        out += [f"note={n}" for n in self.notes]
        return out


def design_point(config: RunConfig, kappa_budget: float | None = None) -> DesignReport:
    """Smallest usable group velocity for the first segment and the resulting enhancement.

    Absorption gives ``xi >= xi_min`` i.e. ``v_gr/v_rec >= xi_min + eta``;
    collisions give ``v_gr/v_rec >= L n sigma sqrt(T/T_rec)``; the closed
    forms themselves need ``xi >= 1/alpha``. The largest lower limit binds. The design is infeasible when the collision bound exceeds
    the empty-medium value ``c / v_rec``.
    """
    budget = config.kappa_budget if kappa_budget is None else kappa_budget
    if not budget > 0:
        raise ValueError("kappa_budget must be > 0")
    if not config.segments:
        raise ValueError("design point needs a medium segment")
    # any xi gives the same atom number, opacity and temperature
    seg = config.build_loop().segments[0]
    eta = seg.eta
    ratio = config.ratio
    alpha = model.derived_quantities(seg, config.probe, config.species).alpha
    xi_abs = model.min_xi_for_absorption(seg, config.probe, config.species, budget, config.absorption)
    vgr_abs = xi_abs + eta
    vgr_coll = model.collision_limited_vgr_min(seg, config.species)
    candidates = {
        "absorption": xi_abs,
        "collision": vgr_coll - eta,
        # closed forms need xi >= 1/alpha
        "opacity": 1.0 / alpha,
    }
    binding = max(candidates, key=lambda k: candidates[k])
    xi_opt = candidates[binding]
    notes = []
    feasible = vgr_coll <= ratio
    if not feasible:
        notes.append("collision bound exceeds c/v_rec: no slow-light gain is possible")
    if eta == 0:
        notes.append("eta = 0: no momentum transfer, the Sagnac phase is that of light for every xi")
    if feasible:
        enh_local = model.uniform_enhancement(xi_opt, eta, ratio)
        loop = config.build_loop(xi=xi_opt)
        enh_loop = model.enhancement_factor(loop, config.omega or 1.0, config.probe, config.species)
    else:
        enh_local = enh_loop = math.nan
    return DesignReport(
        kappa_budget=budget,
        xi_min_absorption=xi_abs,
        vgr_min_absorption=vgr_abs,
        vgr_min_collision=vgr_coll,
        vgr_max=ratio,
        binding=binding,
        feasible=feasible,
        xi_optimum=xi_opt,
        enhancement_local=enh_local,
        enhancement_loop=enh_loop,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# oracle check
# ---------------------------------------------------------------------------


def oracle_rows(config: RunConfig) -> list[SweepRow]:
    """Oracle comparison on a coarse version of the configured sweep.

    Without segments the single all-vacuum loop is checked.
    """
    if not config.segments:
        return [compute_row(config, "none", 0.0, True)]
    count = config.oracle_count
    if config.table == "fig3":
        return [
            compute_row(config, "xi", xi, True, xi=float(xi), temperature_ratio=float(t))
            for t in config.temperature_ratios
            for xi in sweep_values(config, count)
        ]
    if config.table == "fig2":
        return [compute_row(config, "xi", xi, True, xi=float(xi)) for xi in sweep_values(config, count)]
    return sweep_generic(config, True, count)


def oracle_check(config: RunConfig) -> tuple[bool, list[SweepRow]]:
    """Success iff no validity-passing row misses its tolerances."""
    rows = oracle_rows(config)
    return all(r.oracle_status != "fail" for r in rows), rows
