import numpy as np
import pytest

from hegp import fixedpoint as fxp
from hegp.errors import RangeOverflowError


def exact_oracle(value, scale, primes):
    """Big-integer modular arithmetic oracle for a single encode."""
    v = round(value * scale)
    return [v % p for p in primes], v


class TestBasis:
    def test_primes_above_floor(self):
        ps = fxp.basis_primes(4)
        assert ps == (10007, 10009, 10037, 10039)

    def test_choose_basis_capacity(self):
        b = fxp.choose_basis(10**14)
        assert b.capacity > 10**14
        assert all(p > 10000 for p in b.primes)
        # one prime fewer must not suffice
        smaller = fxp.CrtBasis(b.primes[:-1], b.scale)
        assert smaller.capacity <= 10**14


class TestEncodeDecode:
    def test_zero(self):
        b = fxp.choose_basis(10**13)
        fp = fxp.encode([0.0], b)
        assert not fp.residues.any()

    def test_one_exact(self):
        b = fxp.choose_basis(10**13)
        assert fxp.decode(fxp.encode([1.0], b))[0] == 1.0

    def test_pi_against_bigint_oracle(self):
        b = fxp.CrtBasis(fxp.basis_primes(3), scale=10**6)
        fp = fxp.encode([3.14159], b)
        want, v = exact_oracle(3.14159, 10**6, b.primes)
        assert fp.residues[:, 0].tolist() == want
        assert fxp.decode(fp)[0] == v / 10**6

    def test_roundtrip_random(self):
        rng = np.random.default_rng(1)
        b = fxp.choose_basis(10**15)
        vals = rng.uniform(-400, 400, 64)
        got = fxp.decode(fxp.encode(vals, b))
        np.testing.assert_allclose(got, np.rint(vals * b.scale) / b.scale, rtol=0, atol=0)

    def test_negative_symmetric_range(self):
        b = fxp.choose_basis(10**13)
        assert fxp.decode(fxp.encode([-2.5], b))[0] == -2.5

    def test_overflow_is_loud(self):
        b = fxp.CrtBasis(fxp.basis_primes(2), scale=10**6)
        with pytest.raises(RangeOverflowError):
            fxp.encode([1e9], b)

    def test_integer_encode_roundtrip(self):
        b = fxp.choose_basis(10**9)
        res = fxp.encode_int([-12345, 0, 999999], b)
        assert fxp.decode_integers(res, b) == [-12345, 0, 999999]


class TestArithmetic:
    def test_mul_tracks_scale_and_degree(self):
        b = fxp.choose_basis(10**15)
        a = fxp.encode([2.0], b)
        c = fxp.encode([3.5], b)
        prod = fxp.mul(a, c)
        assert prod.scale == b.scale**2 and prod.degree == 2
        assert fxp.decode(prod)[0] == pytest.approx(7.0)

    def test_wrong_degree_off_by_scale_factor(self):
        b = fxp.choose_basis(10**15)
        prod = fxp.mul(fxp.encode([2.0], b), fxp.encode([3.0], b))
        right = fxp.decode(prod)[0]
        wrong = fxp.decode(prod, degree=3)[0]
        assert right == pytest.approx(wrong * b.scale)

    def test_add(self):
        b = fxp.choose_basis(10**12)
        s = fxp.add(fxp.encode([1.25], b), fxp.encode([-0.75], b))
        assert fxp.decode(s)[0] == pytest.approx(0.5)

    def test_crt_soundness_prime_removal(self):
        # reconstruction from any t-1 primes must differ for a value
        # chosen to need the full basis
        b = fxp.CrtBasis(fxp.basis_primes(3), scale=1)
        big = b.capacity - 17
        fp = fxp.encode([float(big)], b, scale=1)
        full = fxp.decode_integers(fp.residues, b)[0]
        assert full == big
        for drop in range(3):
            keep = [i for i in range(3) if i != drop]
            sub = fxp.CrtBasis(tuple(b.primes[i] for i in keep), scale=1)
            partial = fxp.decode_integers(fp.residues[keep], sub)[0]
            assert partial != big
