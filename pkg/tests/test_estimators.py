"""Scaling-exponent readers: ball mass, kernel integrals, expected masses,
and box counting, each pinned on measures whose exponents are known."""

import math

import numpy as np
import pytest

from packdim import (
    DiscreteMeasure,
    DriftSpec,
    FieldSpec,
    InsufficientScalesError,
    InvalidArgumentError,
    KernelContext,
    ResolutionError,
    ScaleGrid,
    box_count,
    box_count_curve,
    box_counting_dim,
    build_uniform_cantor,
    dim_ball_mass,
    dim_field,
    dim_profile,
    dim_slice_kernel,
    natural_measure,
    scaling_exponent,
)

LOG2_OVER_LOG3 = 0.6309297535714574370995271

DYADIC = [2.0**-j for j in range(1, 7)]


def thirds_measure(level=10):
    return natural_measure(build_uniform_cantor(2, 1.0 / 3.0, level), level)


def centered_grid(n, dim=1):
    g = (np.arange(n) + 0.5) / n
    if dim == 1:
        atoms = g.reshape(-1, 1)
    else:
        atoms = np.stack(np.meshgrid(*([g] * dim)), -1).reshape(-1, dim)
    return DiscreteMeasure(atoms, np.full(len(atoms), 1.0 / len(atoms)))


class TestScaleGrid:
    def test_radii(self):
        np.testing.assert_allclose(
            ScaleGrid(1, 4).radii, [0.5, 0.25, 0.125, 0.0625], rtol=1e-15
        )
        np.testing.assert_allclose(
            ScaleGrid(2, 5, 3.0).radii,
            [3.0**-2, 3.0**-3, 3.0**-4, 3.0**-5],
            rtol=1e-15,
        )

    def test_validation(self):
        with pytest.raises(InvalidArgumentError):
            ScaleGrid(2, 4)  # span below three octaves
        with pytest.raises(InvalidArgumentError):
            ScaleGrid(0, 5)
        with pytest.raises(InvalidArgumentError):
            ScaleGrid(1, 5, 1.0)


class TestScalingExponent:
    def test_pure_power(self):
        vals = [r**1.5 for r in DYADIC]
        assert scaling_exponent(DYADIC, vals, "regression").value == pytest.approx(
            1.5, abs=1e-12
        )
        assert scaling_exponent(DYADIC, vals, "tail-max").value == pytest.approx(
            1.5, abs=1e-12
        )

    def test_constant_values(self):
        assert scaling_exponent(DYADIC, [1.0] * 6, "regression").value == 0.0

    def test_tail_max_reads_the_upper_envelope(self):
        # multiplicative wobble around r^2: the tail maximum lands on the
        # inflated row, log(1/0.5)/log(2^5) above the OLS trend
        vals = [r**2 * (2.0 if j % 2 else 0.5) for j, r in enumerate(DYADIC)]
        est = scaling_exponent(DYADIC, vals, "tail-max")
        assert est.value == pytest.approx(11.0 / 5.0, rel=1e-12)
        ols = scaling_exponent(DYADIC, vals, "regression").value
        assert ols == pytest.approx(2.0, abs=0.2)

    def test_needs_four_scales(self):
        with pytest.raises(InsufficientScalesError):
            scaling_exponent(DYADIC[:3], [r**2 for r in DYADIC[:3]], "regression")

    def test_unknown_method(self):
        with pytest.raises(InvalidArgumentError):
            scaling_exponent(DYADIC, [r**2 for r in DYADIC], "chord")

    def test_table_rows(self):
        est = scaling_exponent(DYADIC, [r**1.5 for r in DYADIC], "regression")
        r, v, ratio = est.per_scale[0]
        assert (r, v) == (0.5, 0.5**1.5)
        assert ratio == pytest.approx(1.5, rel=1e-12)
        assert est.window == tuple(range(6))

    def test_value_reproducible_from_table(self):
        # the estimate must be a pure function of its own reported table
        vals = [r**2 * (2.0 if j % 2 else 0.5) for j, r in enumerate(DYADIC)]
        for method in ("regression", "tail-max"):
            est = scaling_exponent(DYADIC, vals, method)
            rows = [est.per_scale[i] for i in est.window]
            if method == "tail-max":
                again = max(row[2] for row in rows)
            else:
                x = np.log([row[0] for row in rows])
                y = np.log([row[1] for row in rows])
                again = float(np.polyfit(x, y, 1)[0])
            assert est.value == pytest.approx(again, rel=1e-12)


class TestDimBallMass:
    def test_point_mass(self):
        mu = DiscreteMeasure(np.zeros((1, 1)), np.ones(1))
        assert dim_ball_mass(mu, ScaleGrid(2, 6)).value == 0.0

    def test_thirds_natural_measure(self):
        est = dim_ball_mass(thirds_measure(), ScaleGrid(2, 8, 3.0))
        assert est.value == pytest.approx(LOG2_OVER_LOG3, abs=1e-12)

    def test_reductions_agree_on_self_similar(self):
        # every atom of the natural measure scales alike
        mu = thirds_measure()
        grid = ScaleGrid(2, 8, 3.0)
        a = dim_ball_mass(mu, grid, reduce="median").value
        b = dim_ball_mass(mu, grid, reduce="min").value
        assert a == b

    def test_uniform_line(self):
        mu = centered_grid(1024)
        est = dim_ball_mass(mu, ScaleGrid(2, 7))
        assert est.value == pytest.approx(1.0, abs=0.05)
        assert est.atom_index is not None

    def test_resolution_guard(self):
        mu = thirds_measure(8)  # spacing 3^-8
        with pytest.raises(ResolutionError):
            dim_ball_mass(mu, ScaleGrid(2, 8, 3.0))

    def test_bad_reduce(self):
        with pytest.raises(InvalidArgumentError):
            dim_ball_mass(thirds_measure(8), ScaleGrid(2, 6, 3.0), reduce="mean")


class TestDimProfile:
    def test_beta_above_dimension(self):
        # profile caps at the measure dimension when beta exceeds it
        est = dim_profile(thirds_measure(), 1.0, ScaleGrid(2, 8, 3.0))
        assert est.value == pytest.approx(0.5890888164521284, rel=1e-9)
        assert abs(est.value - LOG2_OVER_LOG3) < 0.06

    def test_beta_below_dimension(self):
        # profile caps at beta when beta is the smaller of the two
        est = dim_profile(thirds_measure(), 0.25, ScaleGrid(2, 8, 3.0))
        assert est.value == pytest.approx(0.22546382634474738, rel=1e-9)
        assert abs(est.value - 0.25) < 0.05

    def test_validation(self):
        with pytest.raises(InvalidArgumentError):
            dim_profile(thirds_measure(8), -1.0, ScaleGrid(2, 6, 3.0))


class TestDimSliceKernel:
    def test_line_slice_free_case_equals_profile(self):
        # on the line with nothing sliced off, G_1 and F_1 are the same
        # integral, so the two estimators must agree bitwise
        mu = thirds_measure(8)
        grid = ScaleGrid(2, 6, 3.0)
        a = dim_profile(mu, 1.0, grid).value
        b = dim_slice_kernel(mu, 0, 1, grid).value
        assert a == b
        assert a == pytest.approx(0.5720639607504464, rel=1e-9)

    def test_planar_pins(self):
        mu = centered_grid(32, dim=2)
        grid = ScaleGrid(2, 5, math.sqrt(2.0))
        est = dim_slice_kernel(mu, 1, 1, grid)
        assert est.value == pytest.approx(1.2066790364863118, rel=1e-9)
        est0 = dim_slice_kernel(mu, 0, 2, grid)
        assert est0.value == pytest.approx(0.7270757081555417, rel=1e-9)

    def test_dimension_bookkeeping(self):
        mu = centered_grid(32, dim=2)
        with pytest.raises(InvalidArgumentError):
            dim_slice_kernel(mu, 2, 1, ScaleGrid(2, 5, math.sqrt(2.0)))


class TestDimField:
    def field_ctx(self, mode, drift=None, d=1):
        return KernelContext(FieldSpec(0.5, 1, d), drift, centered_grid(1024), mode)

    def test_image_mode(self):
        est = dim_field(self.field_ctx("image"), ScaleGrid(3, 7))
        assert est.value == pytest.approx(0.9528824793347453, rel=1e-9)
        # Brownian image of the line fills one value dimension
        assert est.value == pytest.approx(1.0, abs=0.1)

    def test_graph_mode(self):
        est = dim_field(self.field_ctx("graph"), ScaleGrid(3, 7))
        assert est.value == pytest.approx(1.3613356430766401, rel=1e-9)
        # graph of alpha = 1/2 on the line: 1 + (1 - alpha) = 3/2, read low
        # at desk scales by the self-atom mass floor
        assert est.value == pytest.approx(1.5, abs=0.2)

    def test_constant_drift_invariant(self):
        plain = dim_field(self.field_ctx("image"), ScaleGrid(3, 7))
        moved = dim_field(
            self.field_ctx("image", drift=DriftSpec.constant([4.0])), ScaleGrid(3, 7)
        )
        assert plain.value == moved.value

    def test_euclidean_norm_close_on_line(self):
        a = dim_field(self.field_ctx("image"), ScaleGrid(3, 7), norm="max").value
        b = dim_field(self.field_ctx("image"), ScaleGrid(3, 7), norm="euclidean").value
        assert a == pytest.approx(b, abs=0.02)

    def test_chunking_is_invisible(self):
        ctx = self.field_ctx("graph")
        a = dim_field(ctx, ScaleGrid(3, 7), chunk=512).value
        b = dim_field(ctx, ScaleGrid(3, 7), chunk=100).value
        assert a == b


class TestBoxCounting:
    def test_unit_segment_counts(self):
        seg = np.linspace(0.0, 1.0, 1001).reshape(-1, 1)
        # the endpoint at 1.0 opens a ninth cell
        assert box_count(seg, 0.125) == 9
        assert box_count(np.array([[0.3, 0.7]]), 0.5) == 1

    def test_count_monotone_in_eps(self):
        pts = np.random.default_rng(0).uniform(size=(200, 2))
        counts = [box_count(pts, e) for e in (0.5, 0.25, 0.125, 0.0625)]
        assert all(b >= a for a, b in zip(counts, counts[1:]))

    def test_curve_fills_gaps(self):
        two = np.array([[0.0], [1.0]])
        assert box_count(two, 0.25) == 2
        assert box_count_curve(two, 0.25) == 5

    def test_segment_dimension(self):
        seg = np.linspace(0.0, 1.0, 1001).reshape(-1, 1)
        est = box_counting_dim(seg, ScaleGrid(1, 6), method="tail-max")
        assert est.value == pytest.approx(1.0, abs=0.05)

    def test_square_dimension(self):
        g = np.linspace(0.0, 1.0, 65)
        sq = np.stack(np.meshgrid(g, g), -1).reshape(-1, 2)
        est = box_counting_dim(sq, ScaleGrid(1, 4), method="tail-max")
        assert est.value == pytest.approx(2.0, abs=0.15)

    def test_cantor_endpoints(self):
        ends = build_uniform_cantor(2, 1.0 / 3.0, 12).lefts(8).reshape(-1, 1)
        est = box_counting_dim(ends, ScaleGrid(2, 6, 3.0))
        assert est.value == pytest.approx(LOG2_OVER_LOG3, abs=0.1)

    def test_resolution_guard(self):
        seg = np.linspace(0.0, 1.0, 33).reshape(-1, 1)
        with pytest.raises(ResolutionError):
            box_counting_dim(seg, ScaleGrid(3, 8))

    def test_unknown_method(self):
        seg = np.linspace(0.0, 1.0, 1001).reshape(-1, 1)
        with pytest.raises(InvalidArgumentError):
            box_counting_dim(seg, ScaleGrid(1, 6), method="chord")
