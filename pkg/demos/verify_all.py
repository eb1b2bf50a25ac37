#!/usr/bin/env python3
"""Run every analytic verification check and print the reports.

These are the inequalities the estimates lean on: if one of them failed on
a random input, the dimension formulas downstream would be suspect. Each
check reports trials, violations, and how close the sharpest input came to
its bound.
"""

import numpy as np

from packdim import (
    DiscreteMeasure, FieldSpec, build_uniform_cantor, check_doubling,
    check_gaussian_interval_bound, check_graph_expectation_bound, check_parts,
    check_scale_doubling, extract_subsystem, natural_measure,
)


def show(rep):
    verdict = "ok" if rep.passed else "FAIL"
    print(f"  [{verdict}] {rep.name}: trials {rep.trials}, "
          f"violations {rep.violations}, worst ratio {rep.worst_ratio:.4f}")


rng = np.random.default_rng(7)

print("box doubling (exact dyadic arithmetic):")
for d in (1, 2):
    atoms = rng.normal(0.0, 1.0, (40, d))
    w = rng.random(40)
    nu = DiscreteMeasure(atoms, w / w.sum())
    show(check_doubling(nu, 0.25, [2.0] * d, 8.0))

print("scale doubling on the thirds measure:")
mu = natural_measure(build_uniform_cantor(2, 1.0 / 3.0, 8), 8)
show(check_scale_doubling(mu, 0.5, 0.1, 0.25))

print("integration by parts:")
flat = DiscreteMeasure(rng.random((24, 2)), np.full(24, 1.0 / 24))
for f_name in ("exp", "gauss"):
    show(check_parts(flat, f_name))

print("gaussian interval bound:")
for beta in (0.3, 0.5, 0.7):
    rep = check_gaussian_interval_bound(beta)
    show(rep)

print("graph expectation bound on an extracted subsystem:")
sub = extract_subsystem(build_uniform_cantor(2, 1.0 / 3.0, 12), 0.3, 2.0 / 3.0)
rep = check_graph_expectation_bound(sub, FieldSpec(0.5, 1, 1))
show(rep)
print(f"  levels {rep.details['levels']}, "
      f"ratios {[round(r, 3) for r in rep.details['level_ratios']]}")
