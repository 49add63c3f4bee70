"""The ten acceptance criteria, each at its stated tolerance.

Every test records a one-line PASS/FAIL verdict; the lines are repeated in a
summary section at the end of the pytest run.
"""
import math
import subprocess
import sys
import time

import numpy as np
import pytest
import scipy.constants as sc
from scipy.optimize import brentq

from polariton_gyro import model
from polariton_gyro.config import parse_config, preset
from polariton_gyro.constants import EARTH_RATE
from polariton_gyro.envelope import OracleOptions, compare_to_analytic, sagnac_phase_numeric
from polariton_gyro.model import AtomSpecies, ControlField, LoopGeometry, MediumSegment, ProbeField
from polariton_gyro.sweep import run_sweep

EPS = sys.float_info.epsilon


def _random_loop(rng, eta):
    radius = 10 ** rng.uniform(-3, 1)
    n = int(rng.integers(1, 8))
    fractions = rng.uniform(0.01, 1.0, n)
    circumference = 2 * math.pi * radius
    lengths = list(circumference * fractions[:-1] / fractions.sum())
    lengths.append(circumference - math.fsum(lengths))
    segments = []
    for length in lengths:
        if rng.random() < 0.3:
            segments.append(MediumSegment.vacuum(length))
            continue
        rabi = 10 ** rng.uniform(3, 9) * np.exp(1j * rng.uniform(0, 2 * math.pi))
        segments.append(
            MediumSegment(
                length=length,
                density=10 ** rng.uniform(10, 20),
                gamma=10 ** rng.uniform(6, 8),
                control=ControlField(complex(rabi), eta),
                temperature_ratio=rng.uniform(0, 1e6),
            )
        )
    return LoopGeometry(radius, tuple(segments))


def test_criterion_01_no_momentum_transfer_identity(acceptance):
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(100):
        loop = _random_loop(rng, eta=0.0)
        species = AtomSpecies(mass=rng.uniform(1, 200) * sc.atomic_mass, dipole_moment=10 ** rng.uniform(-30, -28))
        probe = ProbeField(wavelength=10 ** rng.uniform(-7, -5.5), beam_area=10 ** rng.uniform(-12, -8))
        omega = 10 ** rng.uniform(-9, 0)
        hybrid = model.sagnac_phase_hybrid(loop, omega, probe, species)
        optical = model.sagnac_phase_optical(loop, omega, probe)
        worst = max(worst, abs(hybrid - optical) / abs(optical))
    acceptance(1, "eta = 0 identity on 100 random loops", worst <= 4 * EPS, f"max relative gap {worst:.2e} (bound 4 eps = {4 * EPS:.2e})")


def test_criterion_02_enhancement_asymptotes(acceptance):
    config = preset("fig2")
    s_oracle = config.species.mass * sc.c * config.probe.wavelength / (2 * math.pi * sc.hbar)
    assert config.ratio == pytest.approx(s_oracle, rel=1e-12)

    def enhancement(xi):
        loop = config.build_loop(xi=xi)
        return model.enhancement_factor(loop, config.omega, config.probe, config.species)

    high = enhancement(100 * s_oracle)
    low = enhancement(1e-3)
    rows = run_sweep(config)
    values = np.array([r.enhancement for r in rows])
    monotone = len(rows) == 200 and bool(np.all(np.diff(values) < 0))
    ok = 1.0 <= high <= 1.011 and abs(low / s_oracle - 1) <= 2e-3 and monotone
    acceptance(
        2,
        "enhancement asymptotes",
        ok,
        f"E(100 S) = {high:.6f}, E(1e-3)/S - 1 = {low / s_oracle - 1:.2e}, S = {s_oracle:.4e}, "
        f"monotone over {len(rows)} points = {monotone}",
    )


def test_criterion_03_matter_wave_limit(acceptance):
    config = preset("fig2")
    loop = config.build_loop(xi=1e-6)
    hybrid = model.sagnac_phase_hybrid(loop, config.omega, config.probe, config.species)
    matter = 2 * config.species.mass * config.omega * math.pi * config.radius**2 / sc.hbar
    gap = abs(hybrid / matter - 1)
    acceptance(3, "matter-wave limit at xi = 1e-6", gap <= 1e-4, f"phase {hybrid:.6e} vs 2 m Omega A / hbar = {matter:.6e}, gap {gap:.2e}")


def _quadratic_knee(config, temperature_ratio):
    # kappa L = q / (xi (xi + eta)) = budget  ->  xi^2 + eta xi - q / budget = 0
    seg = config.build_loop(temperature_ratio=temperature_ratio).segments[0]
    d = model.derived_quantities(seg, config.probe, config.species)
    kl = config.probe.k * seg.length
    eta = seg.eta
    q = eta * kl**2 / d.alpha * temperature_ratio
    roots = np.roots([1.0, eta, -q / config.kappa_budget])
    return float(max(roots.real))


def test_criterion_04_fig3_knees(acceptance):
    details, ok = [], True
    for name, target, tol in (("fig3-left", 125.2, 0.1), ("fig3-right", 3.974e4, 10.0)):
        config = preset(name)
        quadratic = _quadratic_knee(config, 1.0)
        seg = config.build_loop(temperature_ratio=1.0).segments[0]
        library = model.min_xi_for_absorption(seg, config.probe, config.species, 1.0)

        def excess(xi):
            s = config.build_loop(xi=xi, temperature_ratio=1.0).segments[0]
            return model.absorption_coefficient(s, config.probe, config.species) - 1.0

        root = brentq(excess, 1.0, 1e8, xtol=1e-12, rtol=1e-14)
        ok &= abs(quadratic - target) <= tol and abs(library - target) <= tol and abs(root - target) <= tol
        details.append(f"{name} knee {library:.6g} (quadratic {quadratic:.6g}, root {root:.6g})")
    worst_t = 0.0
    for name in ("fig3-left", "fig3-right"):
        config = preset(name)
        for xi in np.logspace(-1, 9, 41):
            base = model.absorption_coefficient(config.build_loop(xi=xi, temperature_ratio=1.0).segments[0], config.probe, config.species)
            for t in (1e-3, 7.0, 1e3, 1e6):
                seg = config.build_loop(xi=xi, temperature_ratio=t).segments[0]
                k = model.absorption_coefficient(seg, config.probe, config.species)
                worst_t = max(worst_t, abs(k / (t * base) - 1))
    ok &= worst_t <= 1e-9
    details.append(f"T-linearity gap {worst_t:.1e}")
    acceptance(4, "fig3 knees", ok, "; ".join(details))


def test_criterion_05_collision_bound(acceptance):
    values = []
    for sigma in ("1e-12 cm^2", "1e-10 cm^2"):
        config = parse_config(
            f'cross_section = "{sigma}"\n[[segment]]\nlength = "1 cm"\ndensity = "1e11 cm^-3"\nxi = 1000\ntemperature_ratio = 1\n'
        )
        seg = config.build_loop().segments[0]
        values.append(model.collision_limited_vgr_min(seg, config.species))
    acceptance(5, "collision bound for the gas cell", values == [0.1, 10.0], f"L n sigma = {values}")


def test_criterion_06_oracle_phase_cold(acceptance):
    config = preset("fig2")
    v_rec = model.recoil_velocity(config.probe, config.species)
    omega = 1e-8 * v_rec / config.radius
    options = OracleOptions(rtol=1e-9)
    gaps = {}
    for xi in (0.1, 1.0, 10.0, 1e3):
        loop = config.build_loop(xi=xi)
        numeric = sagnac_phase_numeric(loop, omega, config.probe, config.species, options)
        closed = model.sagnac_phase_hybrid(loop, omega, config.probe, config.species)
        gaps[xi] = abs(numeric / closed - 1)
    ok = max(gaps.values()) <= 1e-3
    acceptance(6, "oracle phase, cold uniform medium", ok, ", ".join(f"xi={k:g}: {v:.1e}" for k, v in gaps.items()))


def test_criterion_07_oracle_absorption(acceptance):
    config = preset("fig3-left")
    options = OracleOptions(rtol=1e-9)
    gaps, flags_ok = [], True
    for xi in (200.0, 500.0, 2000.0):
        loop = config.build_loop(xi=xi, temperature_ratio=1.0)
        cmp = compare_to_analytic(loop, config.omega, config.probe, config.species, options)
        flags_ok &= cmp.within_validity
        gaps.append(cmp.kappa_deviation)
    shrinking = gaps[0] > gaps[1] > gaps[2]
    ok = flags_ok and max(gaps) <= 0.05 and shrinking
    acceptance(
        7,
        "oracle absorption, fig3-left at T = T_rec",
        ok,
        f"deviations {', '.join(f'{g:.2e}' for g in gaps)} at xi = 200, 500, 2000; flags pass = {flags_ok}",
    )


def test_criterion_08_cos_sin_identity(acceptance):
    n = 100_000
    rng = np.random.default_rng(8)
    mass = rng.uniform(1, 250, n) * sc.atomic_mass
    dipole = 10 ** rng.uniform(-31, -27, n)
    wavelength = 10 ** rng.uniform(-7.5, -5, n)
    area = 10 ** rng.uniform(-13, -6, n)
    length = 10 ** rng.uniform(-6, 0, n)
    density = 10 ** rng.uniform(6, 22, n)
    rabi = 10 ** rng.uniform(0, 10, n)
    eta = rng.uniform(0, 2, n)
    worst = 0.0
    draws = zip(*(a.tolist() for a in (mass, dipole, wavelength, area, length, density, rabi, eta)))
    for m, d, lam, a, ell, dens, om_c, et in draws:
        species = AtomSpecies(mass=m, dipole_moment=d)
        probe = ProbeField(wavelength=lam, beam_area=a)
        seg = MediumSegment(ell, dens, 1e7, ControlField(om_c, et))
        t = model.mixing_tan2(seg, probe, species)
        xi = model.xi_parameter(t, model.critical_tan2(probe, species))
        lhs = sc.c / (1 + t)
        rhs = xi * model.recoil_velocity(probe, species) * t / (1 + t)
        worst = max(worst, abs(lhs - rhs) / lhs)
    acceptance(8, "c cos^2 = xi v_rec sin^2 over 1e5 draws", worst <= 1e-12, f"max relative gap {worst:.2e}")


def test_criterion_09_vacuum_loop(acceptance):
    radius = 0.1
    probe = ProbeField(wavelength=500e-9, beam_area=1e-10)
    species = AtomSpecies(mass=23 * sc.atomic_mass, dipole_moment=2.1e-29)
    loop = LoopGeometry.vacuum(radius)
    oracle = 4 * math.pi / (probe.wavelength * sc.c) * EARTH_RATE * math.pi * radius**2
    closed = model.sagnac_phase_optical(loop, EARTH_RATE, probe)
    numeric = sagnac_phase_numeric(loop, EARTH_RATE, probe, species)
    gap_closed = abs(closed / oracle - 1)
    gap_numeric = abs(numeric / oracle - 1)
    headline = float(f"{closed:.1e}") == 1.9e-7 and float(f"{numeric:.1e}") == 1.9e-7
    ok = gap_closed <= 1e-2 and gap_numeric <= 1e-2 and headline
    acceptance(
        9,
        "vacuum loop, R = 0.1 m, Earth rate, 500 nm",
        ok,
        f"closed {closed:.5e}, numeric {numeric:.5e}, arithmetic {oracle:.5e} "
        f"(gaps {gap_closed:.1e}, {gap_numeric:.1e}); two-digit value {closed:.1e}",
    )


def test_criterion_10_sweep_determinism(acceptance, tmp_path):
    outputs = []
    start = time.perf_counter()
    for _ in range(2):
        proc = subprocess.run(
            [sys.executable, "-m", "polariton_gyro", "sweep", "--preset", "fig2"],
            capture_output=True,
            check=True,
        )
        outputs.append(proc.stdout)
    elapsed = time.perf_counter() - start
    ok = outputs[0] == outputs[1] and outputs[0].count(b"\n") == 201
    acceptance(10, "sweep --preset fig2 is byte-identical", ok, f"{len(outputs[0])} bytes per run, {elapsed:.1f} s for two runs")
