import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from startwist.abelian import (
    FiniteVector,
    GroupContext,
    fourier,
    inverse_fourier,
    pairing,
)

CONTEXTS = [
    GroupContext.finite(5),
    GroupContext.finite(7),
    GroupContext.finite([4, 4]),
]


def random_vector(ctx, rng):
    shape = tuple(ctx.moduli)
    return FiniteVector(ctx, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


class TestContext:
    def test_rank_validation(self):
        with pytest.raises(ValueError):
            GroupContext.lattice(0)

    def test_moduli_validation(self):
        with pytest.raises(ValueError):
            GroupContext.finite([1])
        with pytest.raises(ValueError):
            GroupContext(2, (3,))

    def test_size_and_norm_const(self):
        ctx = GroupContext.finite([4, 4])
        assert ctx.size == 16
        assert ctx.norm_const == 0.25

    def test_lattice_has_no_size(self):
        with pytest.raises(ValueError):
            GroupContext.lattice(2).size

    def test_point_reduction(self):
        ctx = GroupContext.finite(5)
        assert ctx.point(7).coords == (2,)
        assert (-ctx.point(2)).coords == (3,)

    def test_point_length_mismatch(self):
        with pytest.raises(ValueError):
            GroupContext.lattice(2).point(1)

    def test_cross_context_arithmetic_rejected(self):
        with pytest.raises(ValueError):
            GroupContext.finite(5).point(1) + GroupContext.finite(7).point(1)


class TestPairing:
    def test_z4_generator(self):
        ctx = GroupContext.finite(4)
        assert pairing(ctx, ctx.point(1), ctx.point(1)) == pytest.approx(1j)

    def test_identity_pairs_trivially(self):
        for ctx in CONTEXTS:
            zero = ctx.zero()
            for xi in ctx.points():
                assert pairing(ctx, zero, xi) == pytest.approx(1.0)

    def test_z5_example(self):
        ctx = GroupContext.finite(5)
        expected = np.exp(12j * np.pi / 5)
        assert pairing(ctx, ctx.point(2), ctx.point(3)) == pytest.approx(expected)

    def test_lattice_torus_pairing(self):
        ctx = GroupContext.lattice(2)
        value = pairing(ctx, ctx.point(2, -1), [0.25, 0.5])
        assert value == pytest.approx(np.exp(2j * np.pi * 0.0))

    def test_biadditivity_exhaustive_z5(self):
        ctx = GroupContext.finite(5)
        pts = list(ctx.points())
        for u in pts:
            for v in pts:
                for xi in pts:
                    lhs = pairing(ctx, u + v, xi)
                    rhs = pairing(ctx, u, xi) * pairing(ctx, v, xi)
                    assert abs(lhs - rhs) <= 1e-12

    @settings(max_examples=50, deadline=None)
    @given(st.integers(-8, 8), st.integers(-8, 8), st.integers(-8, 8), st.integers(-8, 8))
    def test_biadditivity_z4_squared(self, a, b, c, d):
        ctx = GroupContext.finite([4, 4])
        u, v = ctx.point(a, b), ctx.point(c, d)
        xi = ctx.point(3, 1)
        assert abs(
            pairing(ctx, u + v, xi) - pairing(ctx, u, xi) * pairing(ctx, v, xi)
        ) <= 1e-12

    def test_dimension_mismatch(self):
        ctx = GroupContext.lattice(2)
        with pytest.raises(ValueError):
            pairing(ctx, ctx.point(1, 0), [0.5])

    def test_wrong_context_rejected(self):
        ctx5 = GroupContext.finite(5)
        ctx7 = GroupContext.finite(7)
        with pytest.raises(ValueError):
            pairing(ctx5, ctx7.point(1), ctx5.point(1))


class TestFourier:
    def test_delta_at_identity_becomes_constant(self):
        for ctx in CONTEXTS:
            f = FiniteVector.delta(ctx.zero())
            f_hat = fourier(f)
            assert np.allclose(f_hat.values, ctx.norm_const)

    def test_parseval_isometry_200_random(self):
        rng = np.random.default_rng(7)
        for ctx in CONTEXTS:
            for _ in range(200):
                f = random_vector(ctx, rng)
                assert abs(fourier(f).l2_norm() - f.l2_norm()) <= 1e-12

    def test_double_transform_is_parity(self):
        rng = np.random.default_rng(8)
        for ctx in CONTEXTS:
            f = random_vector(ctx, rng)
            g = fourier(fourier(f))
            for p in ctx.points():
                assert abs(g[p] - f[-p]) <= 1e-12

    def test_round_trip(self):
        rng = np.random.default_rng(9)
        for ctx in CONTEXTS:
            f = random_vector(ctx, rng)
            assert inverse_fourier(fourier(f)).linf_distance(f) <= 1e-12
            assert fourier(inverse_fourier(f)).linf_distance(f) <= 1e-12

    def test_constant_inverts_to_scaled_delta(self):
        ctx = GroupContext.finite(5)
        c = 0.3 - 0.4j
        out = inverse_fourier(FiniteVector.constant(ctx, c))
        expected = FiniteVector.delta(ctx.zero()) * (c * np.sqrt(ctx.size))
        assert out.linf_distance(expected) <= 1e-12

    def test_linearity(self):
        rng = np.random.default_rng(10)
        ctx = GroupContext.finite(7)
        f, g = random_vector(ctx, rng), random_vector(ctx, rng)
        lhs = inverse_fourier(f + 2j * g)
        rhs = inverse_fourier(f) + 2j * inverse_fourier(g)
        assert lhs.linf_distance(rhs) <= 1e-12

    def test_shift_law(self):
        # transform of a translate is a character multiple of the transform
        rng = np.random.default_rng(11)
        ctx = GroupContext.finite(5)
        f = random_vector(ctx, rng)
        for w in ctx.points():
            shifted = FiniteVector(
                ctx, np.roll(f.values, shift=tuple(-w.vector()), axis=(0,))
            )
            lhs = fourier(shifted)
            for v in ctx.points():
                brute = ctx.norm_const * sum(
                    pairing(ctx, v, xi) * f[xi + w] for xi in ctx.points()
                )
                expected = np.conj(pairing(ctx, v, w)) * fourier(f)[v]
                assert abs(lhs[v] - brute) <= 1e-12
                assert abs(lhs[v] - expected) <= 1e-12

    def test_lattice_vectors_rejected(self):
        with pytest.raises(ValueError):
            FiniteVector.zero(GroupContext.lattice(1))
