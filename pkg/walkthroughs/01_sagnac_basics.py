"""How much phase does a rotating ring pick up, and how much can slow light add?

Start from an empty 10 cm ring turning at the Earth rate, then fill it with an
EIT medium and watch the phase grow as the polariton becomes more matter-like.
"""
import math

from polariton_gyro import EARTH_RATE, LoopGeometry, model
from polariton_gyro.config import DEFAULT_PROBE, DEFAULT_SPECIES, DEFAULT_GAMMA

probe, species = DEFAULT_PROBE, DEFAULT_SPECIES
radius = 0.1

empty = LoopGeometry.vacuum(radius)
phi_light = model.sagnac_phase_optical(empty, EARTH_RATE, probe)
print(f"empty ring, R = {radius} m, Earth rate: {phi_light:.3e} rad")

s = model.critical_tan2(probe, species)
print(f"sodium-like atoms at 500 nm: S = c/v_rec = {s:.3e}")
print(f"pure matter-wave phase would be 2 m Omega A / hbar = "
      f"{2 * species.mass * EARTH_RATE * math.pi * radius**2 / model.HBAR:.3e} rad")

print("\nuniform medium filling the ring, eta = 1")
print(f"{'xi':>10} {'v_gr/v_rec':>12} {'phase (rad)':>12} {'enhancement':>12}")
for xi in (1e12, 1e9, 1e6, 1e3, 1.0, 1e-3):
    seg = model.segment_at_xi(species, probe, length=2 * math.pi * radius, xi=xi, gamma=DEFAULT_GAMMA, alpha=100)
    loop = LoopGeometry(radius, (seg,))
    d = model.derived_quantities(seg, probe, species)
    phase = model.sagnac_phase_hybrid(loop, EARTH_RATE, probe, species)
    print(f"{xi:10.0e} {d.v_gr / d.v_rec:12.4e} {phase:12.4e} {phase / phi_light:12.4e}")

print("\nco-propagating control (eta = 0): slow light alone changes nothing")
seg = model.segment_at_xi(species, probe, length=2 * math.pi * radius, xi=1e-3, eta=0.0, gamma=DEFAULT_GAMMA, alpha=100)
loop = LoopGeometry(radius, (seg,))
print(f"enhancement = {model.enhancement_factor(loop, EARTH_RATE, probe, species):.15f}")
