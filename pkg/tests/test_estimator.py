import math
import warnings
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from blweight.errors import InputError, PreconditionError
from blweight.estimator import (SampleConfig, TestFunctionSpec, estimate_form, find_w, fit_growth,
                                integrability_test, scaling_slope_test, subspace_slope_test,
                                translation_test, weighted_norm)
from blweight.exact_linalg import dot
from blweight.feasibility import IndexVector
from blweight.structure import VectorSet, closure
from helpers import EXAMPLE3, EXAMPLE3_IX, TRIANGLE

LINE = VectorSet.from_rows([[1]])
PLANE = VectorSet.from_rows([[1, 0], [0, 1]])
TWO_THIRDS = IndexVector([F(2, 3)] * 3, [0] * 3)
ANNULUS_12 = TestFunctionSpec("fixed_annulus", c1=1.0, c2=2.0)


class TestFindW:
    def test_triangle(self):
        w = find_w([], None, TRIANGLE.vectors)
        assert w == (1, 1)
        assert [dot(w, v) for v in TRIANGLE.vectors] == [1, 1, 2]

    def test_single_vector(self):
        assert find_w([], None, [(F(2), F(-3))]) == (2, -3)

    def test_vector_in_V(self):
        with pytest.raises(PreconditionError):
            find_w([(1, 0)], None, [(2, 0)])

    def test_vector_outside_W(self):
        with pytest.raises(PreconditionError):
            find_w([], [(1, 0, 0)], [(0, 1, 0)])

    def test_orthogonal_complement(self):
        w = find_w([(1, 0, 0)], None, [(1, 1, 0), (1, 0, 1), (0, 1, -1)])
        assert w[0] == 0 and all(dot(w, v) != 0 for v in [(1, 1, 0), (1, 0, 1), (0, 1, -1)])

    @given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3).filter(any), min_size=1, max_size=6))
    def test_dots_nonzero(self, rows):
        w = find_w([], None, [tuple(F(x) for x in r) for r in rows])
        assert all(dot(w, r) != 0 for r in rows)


class TestSpecs:
    def test_annulus_order(self):
        with pytest.raises(InputError):
            TestFunctionSpec("fixed_annulus", c1=2.0, c2=1.0)

    def test_radius(self):
        with pytest.raises(InputError):
            TestFunctionSpec("translated_ball", center=(0.0,), radius=0.0)

    def test_kind(self):
        with pytest.raises(InputError):
            TestFunctionSpec("gaussian")

    def test_annulus_norm_closed_form(self):
        # 1-D, lambda = 0, p = 1: length of [-2,-1] u [1,2]
        assert weighted_norm(ANNULUS_12, 1.0, 0.0, 1) == pytest.approx(2.0)

    def test_shell_norm_homogeneity(self):
        a = weighted_norm(TestFunctionSpec("shell", c1=1.0, c2=2.0, scale=1.0), 0.5, 0.25, 2)
        b = weighted_norm(TestFunctionSpec("shell", c1=1.0, c2=2.0, scale=4.0), 0.5, 0.25, 2)
        assert b / a == pytest.approx(4.0 ** (2 * 0.5 + 0.25))

    def test_ball_norm_1d_matches_mc_path(self):
        spec = TestFunctionSpec("translated_ball", center=(5.0,), radius=1.0)
        exact = weighted_norm(spec, 0.5, 0.5, 1)
        assert exact == pytest.approx(((6.0 ** 2 - 4.0 ** 2) / 2) ** 0.5)


class TestEstimate:
    def test_line_annulus(self):
        e = estimate_form(LINE, [ANNULUS_12], SampleConfig(10 ** 6, 1, (0.0,), 2.5))
        assert abs(e.value - 2.0) < 3 * e.stderr

    def test_plane_product(self):
        e = estimate_form(PLANE, [ANNULUS_12, ANNULUS_12], SampleConfig(10 ** 6, 2, (0.0, 0.0), 2.5))
        assert abs(e.value - 4.0) < 3 * e.stderr

    def test_antithetic(self):
        e = estimate_form(LINE, [ANNULUS_12], SampleConfig(10 ** 5, 3, (0.0,), 2.5, antithetic=True))
        assert abs(e.value - 2.0) < 3 * e.stderr
        assert e.samples == 10 ** 5

    def test_deterministic_and_thread_independent(self):
        cfg = SampleConfig(200_000, 7, (0.0, 0.0), 2.5, chunk_size=1 << 14)
        cfg4 = SampleConfig(200_000, 7, (0.0, 0.0), 2.5, chunk_size=1 << 14, threads=4)
        specs = [ANNULUS_12, ANNULUS_12]
        assert estimate_form(PLANE, specs, cfg) == estimate_form(PLANE, specs, cfg) == estimate_form(PLANE, specs, cfg4)

    def test_zero_support_warns(self):
        with warnings.catch_warnings(record=True) as rec:
            warnings.simplefilter("always")
            e = estimate_form(LINE, [ANNULUS_12], SampleConfig(1000, 0, (10.0,), 1.0))
        assert e.value == 0 and any(issubclass(w.category, RuntimeWarning) for w in rec)

    def test_frame_rotation_preserves_value(self):
        th = 0.3
        Q = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
        ball = [TestFunctionSpec("fixed_annulus", c1=1e-9, c2=1.0)] * 2
        # half width 1.5 > sqrt(2) so the rotated box still covers the unit square
        a = estimate_form(PLANE, ball, SampleConfig(10 ** 6, 4, (0.0, 0.0), 1.5))
        b = estimate_form(PLANE, ball, SampleConfig(10 ** 6, 4, (0.0, 0.0), 1.5, frame=Q))
        assert abs(a.value - 4.0) < 4 * a.stderr and abs(b.value - 4.0) < 4 * b.stderr

    def test_region_dimension_checked(self):
        with pytest.raises(InputError):
            estimate_form(PLANE, [ANNULUS_12] * 2, SampleConfig(10, 0, (0.0,), 1.0))

    def test_config_validation(self):
        with pytest.raises(InputError):
            SampleConfig(0, 0, (0.0,), 1.0)
        with pytest.raises(InputError):
            SampleConfig(10, 0, (0.0,), -1.0)


class TestFit:
    def test_exact_power(self):
        f = fit_growth([1, 2, 4], [3, 12, 48])
        assert f.slope == pytest.approx(2.0) and f.slope_stderr == pytest.approx(0.0, abs=1e-12)

    def test_too_few(self):
        with pytest.raises(InputError):
            fit_growth([1, 2], [1, 2])

    def test_increasing(self):
        with pytest.raises(InputError):
            fit_growth([1, 4, 2], [1, 2, 3])


class TestSlopes:
    def test_scaling_triangle(self):
        r = scaling_slope_test(TRIANGLE, TWO_THIRDS, samples=200_000)
        assert abs(r.fit.slope - 2.0) < 0.1 and r.norm_fit.slope == pytest.approx(2.0)
        assert r.exact_gap == 0

    def test_scaling_line(self):
        r = scaling_slope_test(LINE, IndexVector([1], [0]), samples=200_000)
        assert abs(r.fit.slope - 1.0) < 0.05

    def test_scaling_violation_reported(self):
        r = scaling_slope_test(TRIANGLE, IndexVector([F(1, 2)] * 3, [0] * 3), samples=50_000)
        assert abs(r.exact_gap) == F(1, 2)
        assert r.details["scaling_residual"] == F(-1, 2)

    def test_lambda_split_does_not_change_slope(self):
        a = scaling_slope_test(TRIANGLE, TWO_THIRDS, samples=100_000)
        b = scaling_slope_test(TRIANGLE, IndexVector([F(1, 3)] * 3, [F(1, 3)] * 3), samples=100_000)
        assert a.fit.slope == b.fit.slope

    def test_subspace_triangle(self):
        r = subspace_slope_test(TRIANGLE, TWO_THIRDS, closure([0], TRIANGLE), samples=200_000)
        assert abs(r.fit.slope - 1.0) < 0.1
        assert r.geometric_exponent == 1 and r.norm_exponent == F(4, 3) and r.exact_gap < 0

    def test_subspace_empty_flat_is_scaling(self):
        r = subspace_slope_test(TRIANGLE, TWO_THIRDS, closure([], TRIANGLE), samples=200_000)
        assert abs(r.fit.slope - 2.0) < 0.1 and r.geometric_exponent == 2

    def test_subspace_violation_positive_gap(self):
        ix = IndexVector([1, F(1, 3), F(1, 3)], [0, 0, 0])
        r = subspace_slope_test(TRIANGLE, ix, closure([0], TRIANGLE), samples=100_000)
        assert r.exact_gap == F(1, 3) and r.measured_gap > 0.2

    def test_full_flat_rejected(self):
        with pytest.raises(PreconditionError):
            subspace_slope_test(TRIANGLE, TWO_THIRDS, closure([0, 1], TRIANGLE), samples=10)

    def test_translation_unweighted(self):
        r = translation_test(TRIANGLE, TWO_THIRDS, closure([0], TRIANGLE), samples=200_000)
        assert abs(r.fit.slope) < 0.1 and r.norm_fit.slope == pytest.approx(0.0, abs=1e-9)

    def test_translation_example3(self):
        r = translation_test(EXAMPLE3, EXAMPLE3_IX, closure([0, 2, 4], EXAMPLE3), samples=100_000)
        assert r.norm_exponent == F(4, 15)
        assert abs(r.fit.slope) < 0.1 and abs(r.norm_fit.slope - 4 / 15) < 0.05

    def test_translation_negative_exponent(self):
        ix = IndexVector([F(2, 3)] * 3, [F(-1, 5), 0, F(1, 5)])
        r = translation_test(TRIANGLE, ix, closure([2], TRIANGLE), samples=50_000)
        assert r.norm_exponent == F(-1, 5)


class TestIntegrability:
    def test_divergent(self):
        E = TRIANGLE
        rep = integrability_test(E, IndexVector([F(3, 10)] * 3, [F(11, 30)] * 3), 0.05)
        assert rep.diverging and rep.p_inv_sum == F(9, 10) and rep.exponent == pytest.approx(0.945)

    def test_convergent(self):
        rep = integrability_test(TRIANGLE, TWO_THIRDS, 0.05)
        assert not rep.diverging and not rep.boundary

    def test_boundary(self):
        rep = integrability_test(TRIANGLE, IndexVector([F(1, 3)] * 3, [F(1, 3)] * 3), 0.5)
        assert not rep.diverging and rep.boundary and rep.exponent == pytest.approx(1.5)

    def test_requires_scaling(self):
        with pytest.raises(PreconditionError):
            integrability_test(TRIANGLE, IndexVector([F(1, 3)] * 3, [0] * 3))

    def test_args(self):
        with pytest.raises(InputError):
            integrability_test(TRIANGLE, TWO_THIRDS, 0.0)
        with pytest.raises(InputError):
            integrability_test(TRIANGLE, TWO_THIRDS, 0.1, L=5)

    def test_partial_sums_exact(self):
        rep = integrability_test(TRIANGLE, TWO_THIRDS, 0.05, L=100)
        s = (1.05) * 2
        assert dict(rep.checkpoints)[100] == pytest.approx(sum(l ** -s for l in range(1, 101)), rel=1e-12)
