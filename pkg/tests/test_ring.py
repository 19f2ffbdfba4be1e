import itertools
import math

import numpy as np
import pytest

from nbldpc.ring import (
    MIN_SUM,
    SUM_PRODUCT,
    RingElement,
    big_xi,
    ring_add,
    ring_mul,
    semiring_for_kappa,
    soft_min,
    xi,
)


def z4(v):
    return RingElement(v, 4)


class TestRingArithmetic:
    @pytest.mark.parametrize("a,b,want", [(1, 3, 0), (0, 2, 2), (3, 3, 2)])
    def test_add_z4(self, a, b, want):
        assert ring_add(z4(a), z4(b)) == z4(want)

    @pytest.mark.parametrize("a,b,want", [(3, 3, 1), (2, 2, 0), (1, 3, 3)])
    def test_mul_z4(self, a, b, want):
        assert ring_mul(z4(a), z4(b)) == z4(want)

    def test_modulus_mismatch(self):
        with pytest.raises(ValueError, match="modulus mismatch"):
            ring_add(RingElement(1, 4), RingElement(1, 5))
        with pytest.raises(ValueError, match="modulus mismatch"):
            ring_mul(RingElement(1, 4), RingElement(1, 5))

    @pytest.mark.parametrize("q", range(2, 9))
    def test_ring_axioms_exhaustive(self, q):
        elems = [RingElement(v, q) for v in range(q)]
        zero = RingElement(0, q)
        for a, b, c in itertools.product(elems, repeat=3):
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
        for a in elems:
            assert a + (-a) == zero
            assert a + zero == a
            assert a * RingElement(1, q) == a

    def test_units_and_inverse(self):
        assert z4(3).inverse() == z4(3)
        assert not z4(2).is_unit()
        with pytest.raises(ValueError):
            z4(2).inverse()


class TestIndicator:
    @pytest.mark.parametrize("v,want", [(0, [0, 0, 0]), (1, [1, 0, 0]), (3, [0, 0, 1])])
    def test_xi_z4(self, v, want):
        assert xi(z4(v)).tolist() == want

    def test_xi_injective_on_nonzero(self):
        for q in (2, 4, 8):
            vecs = {tuple(xi(RingElement(v, q))) for v in range(1, q)}
            assert len(vecs) == q - 1
            assert not xi(RingElement(0, q)).any()

    def test_xi_inner_product(self):
        rng = np.random.default_rng(0)
        for q in (2, 4, 8):
            w = rng.normal(size=q - 1)
            assert w @ xi(RingElement(0, q)) == 0.0
            for a in range(1, q):
                assert w @ xi(RingElement(a, q)) == w[a - 1]

    def test_big_xi(self):
        out = big_xi([z4(0), z4(1)])
        assert out.tolist() == [[0, 0, 0], [1, 0, 0]]
        assert big_xi([]).shape[0] == 0
        out = big_xi([z4(3), z4(2), z4(0)])
        assert out.tolist() == [[0, 0, 1], [0, 1, 0], [0, 0, 0]]


class TestSoftMin:
    def test_singleton(self):
        assert soft_min([5.0], 1.0) == pytest.approx(5.0)

    def test_two_zeros(self):
        assert soft_min([0.0, 0.0], 1.0) == pytest.approx(-math.log(2))

    def test_infinite_kappa_is_plain_min(self):
        assert soft_min([3.0, 7.0], math.inf) == 3.0

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            soft_min([], 1.0)

    def test_bound_and_gap(self):
        rng = np.random.default_rng(1)
        for _ in range(500):
            vals = rng.normal(size=rng.integers(1, 12)) * 10
            kappa = float(rng.uniform(0.05, 50))
            sm = soft_min(vals, kappa)
            assert sm <= vals.min() + 1e-12
            assert vals.min() - sm <= math.log(len(vals)) / kappa + 1e-12

    def test_monotone_in_kappa(self):
        rng = np.random.default_rng(2)
        for _ in range(500):
            vals = rng.normal(size=rng.integers(1, 10))
            k1, k2 = sorted(rng.uniform(0.05, 30, size=2))
            assert soft_min(vals, k1) <= soft_min(vals, k2) + 1e-12

    def test_large_kappa_no_overflow(self):
        vals = [1000.0, 1000.5]
        assert soft_min(vals, 1e6) == pytest.approx(1000.0, abs=1e-9)


class TestSemiring:
    @pytest.mark.parametrize("sr", [SUM_PRODUCT, MIN_SUM], ids=lambda s: s.name)
    def test_axioms_random_triples(self, sr):
        rng = np.random.default_rng(3)
        a, b, c = rng.normal(size=(3, 10_000))
        if sr is SUM_PRODUCT:
            a, b, c = np.abs(a), np.abs(b), np.abs(c)
        assert np.allclose(sr.combine(sr.combine(a, b), c), sr.combine(a, sr.combine(b, c)), rtol=1e-9)
        assert np.allclose(sr.extend(sr.extend(a, b), c), sr.extend(a, sr.extend(b, c)), rtol=1e-9)
        assert np.allclose(
            sr.extend(a, sr.combine(b, c)),
            sr.combine(sr.extend(a, b), sr.extend(a, c)),
            rtol=1e-9,
        )
        assert np.allclose(sr.combine(a, sr.combine_identity), a)
        assert np.allclose(sr.extend(a, sr.extend_identity), a)

    def test_selection(self):
        assert semiring_for_kappa(1.0) is SUM_PRODUCT
        assert semiring_for_kappa(math.inf) is MIN_SUM
        with pytest.raises(ValueError):
            semiring_for_kappa(0.0)

    def test_counting(self):
        sr = SUM_PRODUCT.counting()
        sr.red(sr.ext(np.ones((4, 4)), np.ones(4)), axis=0)
        assert sr.ops.count == 32
        assert SUM_PRODUCT.ops is None
