"""
Exponent, first-occurrence year and frequency
=============================================

Pearson coefficients between the fitted exponent b, the first year a metaphor
is attested, and its total instance count, over the twelve bundled rows.
"""

from importlib.resources import files

import numpy as np

from metasoc.stats import correlation_matrix, pearson, read_table

with open(files("metasoc") / "data" / "metaphors.csv", encoding="utf-8") as fh:
    rows = read_table(fh)

matrix = correlation_matrix(rows)
print(matrix.to_csv(digits=6))

# older metaphors tend to have steeper rank-frequency curves
b = np.array([r.b for r in rows])
foy = np.array([r.foy for r in rows])
print("r(b, foy) =", round(pearson(b, foy), 6))

# the coefficient ignores units: years since 1946 give the same value
print("r(b, foy - 1946) =", round(pearson(b, foy - 1946), 6))
