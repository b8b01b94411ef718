"""
Rank-frequency fits
===================

Fit y = a x^-b to the rank-frequency curve of a profile, compare the raw-scale
least-squares fit with log-log regression, and draw the exponent family.
"""

from importlib.resources import files
from pathlib import Path

import numpy as np

from metasoc.constructions import cluster
from metasoc.corpus import extract_instances, read_corpus
from metasoc.fitting import fit_ma_law, fit_power_law, power_family
from metasoc.stats import rank_frequency
from metasoc.svg import Chart

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

corpus = read_corpus(files("metasoc") / "data" / "synthetic_200.conllu")
points = rank_frequency(cluster(extract_instances(corpus, "jingen")))
print("rank-frequency:", points.points)

nls = fit_power_law(points, "nls")
loglog = fit_power_law(points, "loglog")
for fit in (nls, loglog):
    print(f"{fit.method:>6}: a={fit.a:.3f} b={fit.b:.3f} R²={fit.quality.r_squared:.4f} "
          f"SSE={fit.quality.sse:.3f}")

# the truncated Menzerath-Altmann law is the same curve with b flipped in sign
ma = fit_ma_law(points)
print(f"    MA: A={ma.A:.3f} b={ma.b:.3f}")

# noisy data from a known law: the fit lands near the generating exponent
rng = np.random.default_rng(1)
x = np.arange(1, 13.0)
y = 40 * x ** -1.4 * (1 + rng.uniform(-0.1, 0.1, x.size))
print("recovered b on noisy data:", round(fit_power_law((x, y)).b, 3))

# a = 2 pins every curve to (1, 2); bigger b drops faster
chart = Chart(title="y = 2 x^-b", xlabel="x", ylabel="y")
for b, curve in power_family(2, [0.5, 1.0, 1.5, 2.0, 2.5], np.linspace(1, 6, 100)).items():
    chart.line(curve, label=f"b = {b:g}")
(out / "family.svg").write_text(chart.render(), encoding="utf-8")
print("wrote", out / "family.svg")
