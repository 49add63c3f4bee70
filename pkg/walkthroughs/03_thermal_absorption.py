"""Residual two-photon Doppler absorption limits how slow the light may go.

For the trap-sized and vapour-cell-sized presets, print kappa L against xi at
three temperatures and locate the xi where kappa L = 1.
"""
import numpy as np

from polariton_gyro import model
from polariton_gyro.config import preset
from polariton_gyro.sweep import run_sweep

for name in ("fig3-left", "fig3-right"):
    config = preset(name)
    rows = run_sweep(config)
    seg = config.build_loop().segments[0]
    print(f"\n{name}: L = {seg.length:g} m")
    for t in config.temperature_ratios:
        block = [r for r in rows if r.temperature_ratio == t]
        kl = np.array([r.kappa_L for r in block])
        knee = model.min_xi_for_absorption(config.build_loop(temperature_ratio=t).segments[0], config.probe, config.species, 1.0)
        print(f"  T/T_rec = {t:8.0e}: kappa L from {kl[0]:.2e} down to {kl[-1]:.2e}; kappa L = 1 at xi = {knee:.4e}")

print("\nkappa L is linear in T: doubling the temperature doubles the absorption")
config = preset("fig3-left")
one = model.absorption_coefficient(config.build_loop(xi=500.0, temperature_ratio=1.0).segments[0], config.probe, config.species)
two = model.absorption_coefficient(config.build_loop(xi=500.0, temperature_ratio=2.0).segments[0], config.probe, config.species)
print(f"  xi = 500: {one:.6e} -> {two:.6e} (ratio {two / one:.12f})")
