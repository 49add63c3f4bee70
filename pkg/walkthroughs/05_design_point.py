"""Pick the slowest usable group velocity for a gas cell.

Absorption, velocity-changing collisions and the opacity floor each set a
minimum xi; the largest one wins.
"""
from polariton_gyro.config import parse_config
from polariton_gyro.sweep import design_point

CELL = """
cross_section = "{sigma}"
[[segment]]
length = "1 cm"
density = "1e11 cm^-3"
xi = 1000
temperature_ratio = {t}
"""

for sigma in ("1e-12 cm^2", "1e-10 cm^2", "1 cm^2"):
    for t in (1, 1000):
        report = design_point(parse_config(CELL.format(sigma=sigma, t=t)))
        print(f"sigma = {sigma:>11}, T/T_rec = {t:5d}:", ", ".join(report.lines()[1:8]))
