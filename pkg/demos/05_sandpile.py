"""
Avalanches in a driven sandpile
===============================

Drop grains one at a time on a 50 x 50 pile with open edges and look at the
distribution of avalanche sizes.
"""

from pathlib import Path

from metasoc.soc import SandpileConfig, avalanche_distribution, run_sandpile, size_exponent
from metasoc.svg import Chart

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

records = run_sandpile(SandpileConfig(width=50, height=50, drops=100_000, seed=1))
sizes = [r.size for r in records]
print("drops that toppled nothing:", sum(s == 0 for s in sizes))
print("largest avalanche:", max(sizes), "topplings")

# early drops only build the pile up; most late drops still do nothing
late = sizes[-10_000:]
print("share of quiet drops in the last 10k:", sum(s == 0 for s in late) / len(late))

dist = avalanche_distribution(records, "log2")
slope, r2 = size_exponent(records)
print(f"log-log slope of the binned density {slope:.3f} (R² {r2:.3f})")

chart = Chart(title="sandpile avalanche sizes", xlabel="size", ylabel="density",
              logx=True, logy=True)
chart.scatter(dist.points, label="log2 bins")
chart.note(f"slope = {slope:.2f}")
(out / "sandpile.svg").write_text(chart.render(), encoding="utf-8")
print("wrote", out / "sandpile.svg")
