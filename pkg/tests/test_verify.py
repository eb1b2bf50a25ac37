"""Numeric witnesses for the measure-theoretic lemmas: doubling bounds,
integration by parts, the Gaussian interval bound, and the graph
expected-mass bound on extracted subsystems."""

import math

import numpy as np
import pytest

from conftest import random_measure
from packdim import (
    DepthExhaustedError,
    DiscreteMeasure,
    FieldSpec,
    InvalidArgumentError,
    build_uniform_cantor,
    check_doubling,
    check_gaussian_interval_bound,
    check_graph_expectation_bound,
    check_parts,
    check_scale_doubling,
    extract_subsystem,
    natural_measure,
)


def line_measure(*positions, weights=None):
    atoms = np.asarray(positions, float).reshape(-1, 1)
    if weights is None:
        weights = np.full(len(atoms), 1.0 / len(atoms))
    return DiscreteMeasure(atoms, np.asarray(weights, float))


class TestCheckDoubling:
    def test_point_mass(self):
        rep = check_doubling(line_measure(0.5), 0.25, [4.0], 2.0)
        assert rep.passed
        assert rep.worst_ratio == 0.0

    def test_exact_boundary_is_inside(self):
        # the second atom sits at distance exactly r from the first; closed
        # boxes count it, so neither atom doubles its mass and the
        # exceptional set is empty
        rep = check_doubling(line_measure(0.25, 0.375), 0.125, [2.0], 2.0)
        assert rep.violations == 0
        assert rep.worst_ratio == 0.0

    def test_one_ulp_outside_flips_the_verdict(self):
        # nudging the atom one representable float outward empties the small
        # box; the comparison is exact, so the single-ulp change is seen
        nudged = np.nextafter(0.375, 1.0)
        rep = check_doubling(line_measure(0.25, nudged), 0.125, [2.0], 2.0)
        assert rep.violations == 0  # the bound itself still holds
        assert rep.worst_ratio == 0.25

    def test_random_measures_never_violate(self, rng):
        # the 4^d lambda / M envelope is a theorem, not a tendency
        for _ in range(40):
            dim = 1 + int(rng.integers(2))
            mu = random_measure(rng, dim)
            lam = rng.uniform(1.0, 8.0, size=dim)
            rep = check_doubling(mu, float(rng.uniform(0.05, 1.0)), lam, 4.0)
            assert rep.passed

    def test_validation(self):
        mu = line_measure(0.5)
        with pytest.raises(InvalidArgumentError):
            check_doubling(mu, 0.25, [0.5], 2.0)
        with pytest.raises(InvalidArgumentError):
            check_doubling(mu, -1.0, [2.0], 2.0)
        with pytest.raises(InvalidArgumentError):
            check_doubling(mu, 0.25, [2.0], 0.5)


class TestCheckScaleDoubling:
    def test_point_mass(self):
        rep = check_scale_doubling(line_measure(0.5), 0.5, 0.5, 0.125, n_scales=4)
        assert rep.passed

    def test_uniform_grid_has_no_exceptional_atoms(self):
        n = 256
        mu = line_measure(*((np.arange(n) + 0.5) / n))
        rep = check_scale_doubling(mu, 0.5, 0.5, 0.125, n_scales=6)
        assert rep.violations == 0
        assert rep.details["exceptional_mass"] == 0.0
        assert rep.worst_ratio < 1.0

    def test_self_similar_measures_pass(self):
        mu = natural_measure(build_uniform_cantor(3, 0.2, 4), 4)
        for r0 in (0.5, 0.25, 0.125):
            rep = check_scale_doubling(mu, 0.5, 0.5, r0, n_scales=5)
            assert rep.violations == 0

    def test_exceptional_atoms_carry_negligible_mass(self):
        # superpolynomial concentration at 0 breaks the pointwise inequality
        # badly, but only on atoms whose total mass is vanishing; that the
        # failure set is tiny (not absent) is the content of the lemma
        xs = 2.0 ** -np.arange(14.0)
        ws = 2.0 ** -(np.arange(14.0) ** 2 / 4.0)
        mu = DiscreteMeasure(xs.reshape(-1, 1), ws / ws.sum())
        rep = check_scale_doubling(mu, 0.5, 0.5, 0.125, n_scales=6)
        assert rep.violations > 0
        assert rep.worst_ratio > 10.0
        assert rep.details["exceptional_mass"] < 1e-4

    def test_validation(self):
        mu = line_measure(0.5)
        with pytest.raises(InvalidArgumentError):
            check_scale_doubling(mu, 1.5, 0.5, 0.125)
        with pytest.raises(InvalidArgumentError):
            check_scale_doubling(mu, 0.5, 0.0, 0.125)
        with pytest.raises(InvalidArgumentError):
            check_scale_doubling(mu, 0.5, 0.5, 0.75)
        with pytest.raises(InvalidArgumentError):
            check_scale_doubling(mu, 0.5, 0.5, 0.125, h_multipliers=(0.5,))


class TestCheckParts:
    def test_two_atoms_exp(self):
        rep = check_parts(line_measure(1.0, 2.0), "exp")
        assert rep.passed
        assert rep.worst_ratio < 1e-12

    def test_atom_at_origin(self):
        rep = check_parts(line_measure(0.0, 1.0), "exp")
        assert rep.passed

    def test_planar_gauss(self):
        mu = DiscreteMeasure(
            np.array([[0.5, 0.5], [1.5, 0.25]]), np.array([0.5, 0.5])
        )
        rep = check_parts(mu, "gauss")
        assert rep.passed

    def test_random_measures_meet_advertised_tolerance(self, rng):
        for _ in range(20):
            dim = 1 + int(rng.integers(2))
            mu = random_measure(rng, dim, max_atoms=12)
            shifted = DiscreteMeasure(np.abs(mu.atoms), mu.weights)
            for f_name in ("exp", "gauss"):
                rep = check_parts(shifted, f_name)
                assert rep.passed, (f_name, rep.worst_ratio)

    def test_validation(self):
        with pytest.raises(InvalidArgumentError):
            check_parts(line_measure(1.0), "cube")
        with pytest.raises(InvalidArgumentError):
            check_parts(line_measure(-1.0, 1.0), "exp")
        big = DiscreteMeasure(
            np.arange(40, dtype=float).reshape(-1, 1), np.full(40, 1.0 / 40.0)
        )
        with pytest.raises(InvalidArgumentError):
            check_parts(big, "exp")


class TestGaussianIntervalBound:
    @pytest.mark.parametrize("beta", [0.3, 0.5, 0.7])
    def test_sup_below_envelope(self, beta):
        rep = check_gaussian_interval_bound(beta)
        assert rep.passed
        assert rep.worst_ratio <= 0.91
        assert rep.details["stable"]

    def test_case_maxima_respect_proof_constants(self):
        rep = check_gaussian_interval_bound(0.5)
        cm = rep.details["case_maxima"]
        assert cm["rho=0"] <= 1.0
        assert cm["I"] <= 2.0
        assert cm["II"] <= 2.0
        assert cm["III"] <= 4.0
        assert cm["IV"] <= 8.0

    def test_validation(self):
        with pytest.raises(InvalidArgumentError):
            check_gaussian_interval_bound(1.0)
        with pytest.raises(InvalidArgumentError):
            check_gaussian_interval_bound(0.5, n=4)


class TestGraphExpectationBound:
    def canonical(self, levels=12):
        base = build_uniform_cantor(2, 1.0 / 3.0, levels)
        return extract_subsystem(base, 0.3, 2.0 / 3.0)

    def test_bounded_on_all_usable_levels(self):
        rep = check_graph_expectation_bound(self.canonical(), FieldSpec(0.5, 1, 1))
        assert rep.passed
        assert rep.details["levels"] == [2, 3, 4]
        assert all(r <= 1.5 for r in rep.details["level_ratios"])

    def test_stable_under_refinement(self):
        sub = self.canonical()
        field = FieldSpec(0.5, 1, 1)
        base = check_graph_expectation_bound(sub, field).worst_ratio
        fine = check_graph_expectation_bound(sub, field, refine=1).worst_ratio
        assert abs(fine - base) / base < 0.01

    def test_shallow_subsystem_exhausts(self):
        shallow = extract_subsystem(
            build_uniform_cantor(2, 1.0 / 3.0, 3), 0.3, 2.0 / 3.0
        )
        with pytest.raises(DepthExhaustedError):
            check_graph_expectation_bound(shallow, FieldSpec(0.5, 1, 1))

    def test_theta_must_match_field(self):
        # theta = 2/3 is the exponent for alpha = 1/2, d = 1 only
        with pytest.raises(InvalidArgumentError):
            check_graph_expectation_bound(self.canonical(), FieldSpec(0.4, 1, 1))

    def test_supercritical_field_rejected(self):
        with pytest.raises(InvalidArgumentError):
            check_graph_expectation_bound(self.canonical(), FieldSpec(0.5, 1, 2))
