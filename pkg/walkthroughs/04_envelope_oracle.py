"""Check the closed forms against a direct integration of the envelope equations.

The oracle solves the atomic coherences per velocity class, propagates both
counter-rotating probes around the loop and takes half their phase difference.
A cold medium reproduces the closed-form phase; a warm one adds a small
thermal correction the closed form leaves out, and that gap shrinks as xi grows.
"""
from polariton_gyro import model
from polariton_gyro.config import preset
from polariton_gyro.envelope import OracleOptions, compare_to_analytic

options = OracleOptions()

config = preset("fig2")
v_rec = model.recoil_velocity(config.probe, config.species)
omega = 1e-8 * v_rec / config.radius
print("cold medium filling the loop, Omega R = 1e-8 v_rec")
for xi in (0.1, 1.0, 10.0, 1e3):
    c = compare_to_analytic(config.build_loop(xi=xi), omega, config.probe, config.species, options)
    print(f"  xi = {xi:7g}: numeric {c.phase_numeric:.6e}, closed {c.phase_analytic:.6e}, deviation {c.phase_deviation:.1e}")

config = preset("fig3-left")
print("\n100 um sample at T = T_rec, Earth rotation")
for xi in (200.0, 500.0, 2000.0):
    c = compare_to_analytic(config.build_loop(xi=xi, temperature_ratio=1.0), config.omega, config.probe, config.species, options)
    print(
        f"  xi = {xi:6g}: kappa L numeric {c.kappa_numeric:.4e} vs closed {c.kappa_analytic:.4e} "
        f"({c.kappa_deviation:.1e}); phase deviation {c.phase_deviation:.1e}"
    )
