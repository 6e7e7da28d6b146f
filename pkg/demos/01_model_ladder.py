"""The model ladder: global effects vs location-shift vs category-specific.

Simulates ordinal survey-style responses whose dispersion genuinely varies
with a covariate, then lets the nested deviance tests say which of the three
model structures the data actually needs. The location-shift model should win:
the category-specific model adds nothing (large p), while dropping the
dispersion term costs real fit (small p).
"""

import numpy as np

from ordshift import fit, model_ladder, render_report
from ordshift.simulate import locshift_example

data, spec, truth = locshift_example(
    n=1500, k=6, beta=0.8, alpha=0.25, rng=np.random.default_rng(42)
)
print(f"simulated n={data.n}, k={data.k}, true beta=0.8, true alpha=0.25")
print("category counts:", data.category_counts().tolist())
print()

table = model_ladder(data, spec)
fits = [row.fit for row in table.rows if row.ok]
print(render_report(table, fits[1:2]))

locshift = table.row("locshift").fit
q = data.k - 1
print(f"recovered beta = {locshift.params[q]:.3f}, alpha = {locshift.params[q + 1]:.3f}")
print(f"locshift vs category-specific: p = {table.row('locshift').test.p_value:.4f} "
      "(no evidence the extra parameters are needed)")
print(f"global vs locshift:            p = {table.row('global').test.p_value:.4f} "
      "(the dispersion term is doing real work)")
