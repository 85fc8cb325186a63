import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latentprobe.errors import DimensionError, PlanSizeError, ShapeError
from latentprobe.interp import (
    ConditioningPair,
    LatentCode,
    MixParams,
    lerp_latent,
    lerp_linguistic,
    tri_center_index,
    tri_grid,
    tri_latent,
    tri_linguistic,
)


def cond(words, sentence):
    return ConditioningPair(np.asarray(words, float), np.asarray(sentence, float))


class TestTypes:
    def test_latent_rejects_non_finite(self):
        with pytest.raises(ValueError):
            LatentCode(np.array([1.0, np.nan]))
        with pytest.raises(ValueError):
            LatentCode(np.array([np.inf, 0.0]))

    def test_latent_rejects_matrix(self):
        with pytest.raises(DimensionError):
            LatentCode(np.zeros((2, 2)))

    def test_latent_values_frozen(self):
        z = LatentCode(np.arange(3.0))
        with pytest.raises(ValueError):
            z.values[0] = 5.0

    def test_conditioning_rejects_bad_shapes(self):
        with pytest.raises(ShapeError):
            ConditioningPair(np.zeros((0, 4)), np.zeros(3))
        with pytest.raises(ShapeError):
            ConditioningPair(np.zeros((2, 4)), np.zeros((2, 3)))

    def test_mix_params_bounds(self):
        MixParams(0.0, 1.0)
        MixParams(0.5, 0.5)
        with pytest.raises(ValueError):
            MixParams(-0.1, 0.0)
        with pytest.raises(ValueError):
            MixParams(0.7, 0.6)

    def test_mix_weights_sum_to_one(self):
        w = MixParams(0.25, 0.5).weights
        assert w == (0.25, 0.25, 0.5)


class TestLerpLatent:
    def test_two_steps_is_endpoints_exactly(self, rng):
        z0, z1 = rng.standard_normal(7), rng.standard_normal(7)
        plan = lerp_latent(z0, z1, 2)
        assert len(plan.points) == 2
        assert np.array_equal(plan.points[0].latent.values, z0)
        assert np.array_equal(plan.points[1].latent.values, z1)

    def test_three_step_midpoint(self):
        plan = lerp_latent([0.0, 0.0], [1.0, 1.0], 3)
        latents = [p.latent.values.tolist() for p in plan.points]
        assert latents == [[0.0, 0.0], [0.5, 0.5], [1.0, 1.0]]

    def test_ten_steps_gamma_grid(self, rng):
        plan = lerp_latent(rng.standard_normal(3), rng.standard_normal(3), 10)
        assert len(plan.points) == 10
        gammas = [p.mix.gamma1 for p in plan.points]
        assert gammas == [j / 9 for j in range(10)]
        assert all(p.mix.gamma2 == 0.0 for p in plan.points)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            lerp_latent(np.zeros(3), np.zeros(4), 5)

    def test_steps_too_small(self):
        with pytest.raises(PlanSizeError):
            lerp_latent(np.zeros(3), np.ones(3), 1)
        with pytest.raises(PlanSizeError):
            lerp_latent(np.zeros(3), np.ones(3), 0)

    def test_non_finite_input(self):
        with pytest.raises(ValueError):
            lerp_latent(np.array([np.nan, 0.0]), np.zeros(2), 3)

    def test_fixed_conditioning_attached_everywhere(self, rng):
        c = cond(rng.standard_normal((2, 3)), rng.standard_normal(4))
        plan = lerp_latent(rng.standard_normal(3), rng.standard_normal(3), 4, conditioning=c)
        assert all(p.conditioning == c for p in plan.points)

    def test_degenerate_corners_constant(self, rng):
        z = rng.standard_normal(5)
        plan = lerp_latent(z, z, 6)
        scale = np.abs(z).max()
        for p in plan.points:
            assert np.abs(p.latent.values - z).max() <= 1e-12 * scale

    @given(steps=st.integers(2, 20), dim=st.integers(1, 12), seed=st.integers(0, 999))
    @settings(max_examples=60, deadline=None)
    def test_affine_in_gamma(self, steps, dim, seed):
        r = np.random.default_rng(seed)
        plan = lerp_latent(3 * r.standard_normal(dim), 3 * r.standard_normal(dim), steps)
        latents = np.stack([p.latent.values for p in plan.points])
        if steps >= 3:
            second = latents[2:] - 2 * latents[1:-1] + latents[:-2]
            assert np.abs(second).max() < 1e-10


class TestLerpLinguistic:
    def test_gamma_zero_is_first_corner(self, rng):
        c0 = cond(rng.standard_normal((3, 4)), rng.standard_normal(5))
        c1 = cond(rng.standard_normal((3, 4)), rng.standard_normal(5))
        plan = lerp_linguistic(rng.standard_normal(2), c0, c1, 5)
        assert plan.points[0].conditioning == c0
        assert plan.points[-1].conditioning == c1

    def test_zero_one_matrices_midpoint(self):
        c0 = cond(np.zeros((2, 3)), np.zeros(4))
        c1 = cond(np.ones((2, 3)), np.ones(4))
        plan = lerp_linguistic(np.zeros(2), c0, c1, 3)
        mid = plan.points[1].conditioning
        assert np.all(mid.words == 0.5)
        assert np.all(mid.sentence == 0.5)

    def test_single_gamma_governs_both_blends(self):
        # With 0 -> 1 ramps on both tensors, the blended values read back the
        # gamma used, so equality across words and sentence proves one gamma.
        c0 = cond(np.zeros((2, 3)), np.zeros(4))
        c1 = cond(np.ones((2, 3)), np.ones(4))
        plan = lerp_linguistic(np.zeros(2), c0, c1, 10)
        for p in plan.points:
            word_gammas = np.unique(p.conditioning.words)
            sent_gammas = np.unique(p.conditioning.sentence)
            assert word_gammas.size == 1 and sent_gammas.size == 1
            assert word_gammas[0] == sent_gammas[0] == p.mix.gamma1

    def test_latent_fixed_at_every_point(self, rng):
        z = rng.standard_normal(6)
        c0 = cond(rng.standard_normal((2, 2)), rng.standard_normal(3))
        c1 = cond(rng.standard_normal((2, 2)), rng.standard_normal(3))
        plan = lerp_linguistic(z, c0, c1, 7)
        for p in plan.points:
            assert np.array_equal(p.latent.values, z)

    def test_shape_mismatch(self, rng):
        c0 = cond(rng.standard_normal((2, 3)), rng.standard_normal(4))
        bad_words = cond(rng.standard_normal((3, 3)), rng.standard_normal(4))
        bad_width = cond(rng.standard_normal((2, 5)), rng.standard_normal(4))
        with pytest.raises(ShapeError):
            lerp_linguistic(np.zeros(2), c0, bad_words, 4)
        with pytest.raises(ShapeError):
            lerp_linguistic(np.zeros(2), c0, bad_width, 4)

    def test_steps_too_small(self, rng):
        c0 = cond(rng.standard_normal((2, 3)), rng.standard_normal(4))
        with pytest.raises(PlanSizeError):
            lerp_linguistic(np.zeros(2), c0, c0, 1)


class TestTriGrid:
    def test_ten_steps_yields_55(self):
        assert len(tri_grid(10)) == 55

    def test_two_steps_corners(self):
        assert [(m.gamma1, m.gamma2) for m in tri_grid(2)] == [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]

    def test_four_steps_against_enumeration(self):
        # Brute-force oracle: all quotient pairs with i + j <= 3, row-major.
        expected = [(j / 3, i / 3) for i in range(4) for j in range(4) if i + j <= 3]
        got = [(m.gamma1, m.gamma2) for m in tri_grid(4)]
        assert got == expected
        assert len(got) == 10

    def test_steps_too_small(self):
        with pytest.raises(PlanSizeError):
            tri_grid(1)

    @given(steps=st.integers(2, 64))
    @settings(max_examples=63, deadline=None)
    def test_count_law(self, steps):
        assert len(tri_grid(steps)) == steps * (steps + 1) // 2

    def test_gamma2_zero_row_is_prefix(self):
        grid = tri_grid(6)
        prefix = grid[:6]
        assert all(m.gamma2 == 0.0 for m in prefix)
        assert [m.gamma1 for m in prefix] == [j / 5 for j in range(6)]

    def test_center_index_points_at_third(self):
        grid = tri_grid(10)
        idx = tri_center_index(10)
        # oracle: brute-force nearest node to (1/3, 1/3)
        best = min(
            range(len(grid)),
            key=lambda i: (grid[i].gamma1 - 1 / 3) ** 2 + (grid[i].gamma2 - 1 / 3) ** 2,
        )
        assert idx == best
        assert (grid[idx].gamma1, grid[idx].gamma2) == (3 / 9, 3 / 9)


class TestTriLatent:
    def test_corner_recovery_exact(self, rng):
        z0, z1, z2 = (rng.standard_normal(5) for _ in range(3))
        plan = tri_latent(z0, z1, z2, 4)
        by_mix = {(p.mix.gamma1, p.mix.gamma2): p.latent.values for p in plan.points}
        assert np.array_equal(by_mix[(0.0, 0.0)], z0)
        assert np.array_equal(by_mix[(1.0, 0.0)], z1)
        assert np.array_equal(by_mix[(0.0, 1.0)], z2)

    def test_standard_basis_barycenter(self):
        plan = tri_latent([1, 0, 0], [0, 1, 0], [0, 0, 1], 4)
        third = 1 / 3
        match = [
            p for p in plan.points if p.mix.gamma1 == third and p.mix.gamma2 == third
        ]
        assert len(match) == 1
        assert np.allclose(match[0].latent.values, [third, third, third], rtol=0, atol=1e-15)

    def test_ten_steps_has_55_points(self, rng):
        plan = tri_latent(*(rng.standard_normal(3) for _ in range(3)), 10)
        assert len(plan.points) == 55

    def test_gamma2_zero_row_equals_lerp(self, rng):
        z0, z1, z2 = (rng.standard_normal(16) for _ in range(3))
        tri = tri_latent(z0, z1, z2, 10)
        pair = lerp_latent(z0, z1, 10)
        for tri_point, pair_point in zip(tri.points[:10], pair.points):
            assert tri_point.mix == pair_point.mix
            assert np.allclose(
                tri_point.latent.values, pair_point.latent.values, rtol=0, atol=1e-12
            )

    def test_degenerate_corners_constant(self, rng):
        z = rng.standard_normal(4)
        plan = tri_latent(z, z, z, 5)
        for p in plan.points:
            assert np.allclose(p.latent.values, z, rtol=0, atol=1e-15)

    @given(steps=st.integers(2, 10), dim=st.integers(1, 8), seed=st.integers(0, 999))
    @settings(max_examples=50, deadline=None)
    def test_barycentric_blend_matches_definition(self, steps, dim, seed):
        r = np.random.default_rng(seed)
        z0, z1, z2 = (3 * r.standard_normal(dim) for _ in range(3))
        plan = tri_latent(z0, z1, z2, steps)
        for p in plan.points:
            w0, w1, w2 = p.mix.weights
            expected = w0 * z0 + w1 * z1 + w2 * z2
            scale = max(1.0, np.abs(expected).max())
            assert np.abs(p.latent.values - expected).max() <= 1e-12 * scale


class TestTriLinguistic:
    def test_corner_recovery(self, rng):
        cs = [cond(rng.standard_normal((2, 3)), rng.standard_normal(4)) for _ in range(3)]
        plan = tri_linguistic(rng.standard_normal(2), *cs, 4)
        by_mix = {(p.mix.gamma1, p.mix.gamma2): p.conditioning for p in plan.points}
        assert by_mix[(0.0, 0.0)] == cs[0]
        assert by_mix[(1.0, 0.0)] == cs[1]
        assert by_mix[(0.0, 1.0)] == cs[2]

    def test_sentence_basis_barycenter(self):
        cs = [
            cond(np.zeros((1, 2)), e)
            for e in (np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), np.array([0, 0, 1.0]))
        ]
        plan = tri_linguistic(np.zeros(2), *cs, 4)
        third = 1 / 3
        match = [p for p in plan.points if p.mix.gamma1 == third and p.mix.gamma2 == third]
        assert np.allclose(match[0].conditioning.sentence, [third] * 3, rtol=0, atol=1e-15)

    def test_gamma2_zero_row_equals_lerp_linguistic(self, rng):
        z = rng.standard_normal(3)
        cs = [cond(rng.standard_normal((3, 2)), rng.standard_normal(2)) for _ in range(3)]
        tri = tri_linguistic(z, *cs, 6)
        pair = lerp_linguistic(z, cs[0], cs[1], 6)
        for tri_point, pair_point in zip(tri.points[:6], pair.points):
            assert np.allclose(
                tri_point.conditioning.words, pair_point.conditioning.words, rtol=0, atol=1e-12
            )
            assert np.allclose(
                tri_point.conditioning.sentence,
                pair_point.conditioning.sentence,
                rtol=0,
                atol=1e-12,
            )

    def test_latent_fixed(self, rng):
        z = rng.standard_normal(5)
        cs = [cond(rng.standard_normal((2, 2)), rng.standard_normal(2)) for _ in range(3)]
        plan = tri_linguistic(z, *cs, 3)
        assert all(np.array_equal(p.latent.values, z) for p in plan.points)
