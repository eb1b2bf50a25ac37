#!/usr/bin/env python3
# The expected-ball-mass kernel sees only increments f(t) - f(s), so a
# constant drift changes nothing, to the last bit. A power drift does not
# cancel: it tilts increment probabilities and can only lower them.

import numpy as np

from packdim import (
    DiscreteMeasure, DriftSpec, FieldSpec, KernelContext, ScaleGrid,
    dim_field, expected_ball_mass, increment_prob,
)

rng = np.random.default_rng(40)
atoms = rng.random((128, 1))
mu = DiscreteMeasure(atoms, np.full(128, 1.0 / 128))
spec = FieldSpec(0.5, 1, 1)

plain = KernelContext(spec, None, mu, "graph")
shifted = KernelContext(spec, DriftSpec.constant([7.5]), mu, "graph")
tilted = KernelContext(spec, DriftSpec.power([2.0], 1.5), mu, "graph")

t, s, r = 0.8, 0.3, 0.25
print(f"increment_prob at (t={t}, s={s}, r={r}):")
print(f"  no drift        {increment_prob(plain, t, s, r):.17f}")
print(f"  constant drift  {increment_prob(shifted, t, s, r):.17f}   (identical)")
print(f"  power drift     {increment_prob(tilted, t, s, r):.17f}   (strictly lower)")
print()

grid = ScaleGrid(2, 6, 2.0)
a = dim_field(plain, grid)
b = dim_field(shifted, grid)
c = dim_field(tilted, grid)
print("graph-mode dimension estimates:")
print(f"  no drift        {a.value:.12f}")
print(f"  constant drift  {b.value:.12f}   bitwise equal: {a.value == b.value}")
print(f"  power drift     {c.value:.12f}")
print()
print(f"ball mass at one atom, r=1/32: "
      f"{expected_ball_mass(plain, float(atoms[0, 0]), 1/32):.12f} /"
      f" {expected_ball_mass(tilted, float(atoms[0, 0]), 1/32):.12f}")
