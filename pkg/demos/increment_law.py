#!/usr/bin/env python3
"""Empirical check of the increment law Var(X(t) - X(s)) = |t - s|^(2 alpha).

Draws a moderate ensemble per roughness value and prints the measured
variance of one fixed increment against the target, plus the correlation
between the two range coordinates (independent by construction).
"""

import numpy as np

from packdim import FieldSpec, Seed, sample_many

GRID = np.linspace(0.0, 1.0, 65).reshape(-1, 1)
I, J = 16, 48  # increment between t=0.25 and t=0.75
REPLICAS = 4000

print(f"{'alpha':>6} {'target':>9} {'measured':>9} {'rel err':>8} {'corr':>8}")
for alpha in (0.2, 0.35, 0.5, 0.65, 0.8):
    spec = FieldSpec(alpha, domain_dim=1, range_dim=2)
    paths = sample_many(spec, GRID, Seed(int(alpha * 100)), REPLICAS)
    inc = np.array([p.values[J] - p.values[I] for p in paths])
    target = 0.5 ** (2.0 * alpha)
    measured = float(inc.var(axis=0).mean())
    corr = float(np.corrcoef(inc[:, 0], inc[:, 1])[0, 1])
    rel = abs(measured / target - 1.0)
    print(f"{alpha:6.2f} {target:9.5f} {measured:9.5f} {rel:8.4f} {corr:8.4f}")

print()
print("Rougher fields (small alpha) forget their past faster; the variance")
print("of a fixed increment shrinks as alpha grows because the path is")
print("smoother at this scale. Cross-coordinate correlation is noise.")
