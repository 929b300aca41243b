import numpy as np
import pytest

from hegp.bgv.ntt import NttPlan, RingPlan
from hegp.bgv.slots import SlotTable
from hegp.numtheory import multiplicative_order, ntt_prime_pool


def ring_mul_oracle(a, b, m, q):
    """Schoolbook product mod (Phi_m, q), m prime."""
    prod = np.convolve(a.astype(object), b.astype(object))
    full = np.zeros(2 * m, dtype=object)
    full[: prod.shape[0]] = prod
    low = full[:m].copy()
    low[: full[m:].shape[0]] += full[m:]
    return ((low[: m - 1] - low[m - 1]) % q).astype(np.int64)


class TestNtt:
    def test_roundtrip(self):
        primes = tuple(ntt_prime_pool(512, max_bits=26)[:3])
        plan = RingPlan(257, primes)
        rng = np.random.default_rng(0)
        active = np.arange(3)
        coeffs = rng.integers(0, np.array(primes)[:, None], (3, 256))
        back = plan.inverse(plan.forward(coeffs, active), active)
        np.testing.assert_array_equal(back, coeffs)

    def test_multiply_matches_schoolbook(self):
        primes = tuple(ntt_prime_pool(512, max_bits=26)[:2])
        plan = RingPlan(257, primes)
        rng = np.random.default_rng(1)
        active = np.arange(2)
        a = rng.integers(0, np.array(primes)[:, None], (2, 256))
        b = rng.integers(0, np.array(primes)[:, None], (2, 256))
        got = plan.multiply(a, b, active)
        for k, q in enumerate(primes):
            want = ring_mul_oracle(a[k], b[k], 257, q)
            np.testing.assert_array_equal(got[k], want)

    def test_active_subset(self):
        primes = tuple(ntt_prime_pool(512, max_bits=26)[:4])
        plan = RingPlan(257, primes)
        rng = np.random.default_rng(2)
        active = np.array([1, 3])
        ps = np.array([primes[1], primes[3]])[:, None]
        a = rng.integers(0, ps, (2, 256))
        b = rng.integers(0, ps, (2, 256))
        got = plan.multiply(a, b, active)
        np.testing.assert_array_equal(got[0], ring_mul_oracle(a[0], b[0], 257, primes[1]))
        np.testing.assert_array_equal(got[1], ring_mul_oracle(a[1], b[1], 257, primes[3]))


class TestSlots:
    @pytest.mark.parametrize("m,p", [(257, 2), (31, 2), (127, 2), (97, 10007), (4523, 10061)])
    def test_roundtrip(self, m, p):
        tab = SlotTable(m, p)
        assert tab.slots == (m - 1) // multiplicative_order(p, m)
        rng = np.random.default_rng(m)
        vals = rng.integers(0, p, tab.slots)
        got = tab.decode(tab.encode(vals))
        np.testing.assert_array_equal(got, vals)

    @pytest.mark.parametrize("m,p", [(257, 2), (97, 10007)])
    def test_slotwise_ring_ops(self, m, p):
        tab = SlotTable(m, p)
        rng = np.random.default_rng(m + 1)
        u = rng.integers(0, p, tab.slots)
        v = rng.integers(0, p, tab.slots)
        pu, pv = tab.encode(u), tab.encode(v)
        np.testing.assert_array_equal(tab.decode((pu + pv) % p), (u + v) % p)
        np.testing.assert_array_equal(tab.decode(tab.ring_mul_plain(pu, pv)), u * v % p)

    def test_constant_encodes_to_constant_poly(self):
        tab = SlotTable(257, 2)
        poly = tab.encode(np.ones(tab.slots, dtype=np.int64))
        want = np.zeros(tab.n, dtype=np.int64)
        want[0] = 1
        np.testing.assert_array_equal(poly, want)

    def test_factor_count_against_sympy(self):
        import sympy
        x = sympy.symbols("x")
        for m, p in [(31, 2), (97, 3)]:
            tab = SlotTable(m, p)
            phi = sum(x**k for k in range(m))  # cyclotomic poly for prime m
            factors = sympy.Poly(phi, x, modulus=p).factor_list()[1]
            assert sum(mult for _, mult in factors) == tab.slots
            assert all(f.degree() == tab.degree for f, _ in factors)
