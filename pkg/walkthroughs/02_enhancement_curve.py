"""Enhancement versus xi for a medium filling the whole loop.

Uses the built-in ``fig2`` configuration. With matplotlib installed the curve
is also saved to ``enhancement.png``.
"""
import sys

from polariton_gyro.config import preset
from polariton_gyro.sweep import run_sweep

config = preset("fig2")
rows = run_sweep(config)
s = config.ratio

print(f"S = {s:.4e}; {len(rows)} log-spaced points from xi = {rows[0].xi:.0e} to {rows[-1].xi:.2e}")
for r in rows[::20]:
    print(f"  xi = {r.xi:10.3e}  enhancement = {r.enhancement:10.4e}")
# the half-way point sits at xi = S
mid = min(rows, key=lambda r: abs(r.enhancement - (1 + s) / 2))
print(f"enhancement falls to (1 + S)/2 near xi = {mid.xi:.3e}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit(0)

fig, ax = plt.subplots(figsize=(5, 3.5))
ax.loglog([r.xi for r in rows], [r.enhancement for r in rows])
ax.axvline(1.0, ls=":", c="grey")
ax.axvline(s, ls=":", c="grey")
ax.set_xlabel("xi")
ax.set_ylabel("phase / light phase")
fig.tight_layout()
fig.savefig("enhancement.png", dpi=150)
print("saved enhancement.png")
