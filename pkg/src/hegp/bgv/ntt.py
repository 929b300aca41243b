"""Number-theoretic transforms over word-sized primes, numba-compiled.

All ring arithmetic in the BGV engine reduces to negligible-overhead
batched transforms: each residue row (one modulus-chain prime) is
transformed independently, so batches parallelize across rows.

Primes are below 2^27 and congruent to 1 mod the transform size, so
every butterfly product fits comfortably in uint64.  Twiddle factors
are stored in Montgomery form (R = 2^32); data stays in the plain
domain because multiplying a plain value by a Montgomery-form constant
yields a plain product.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

from ..numtheory import primitive_root

_R_BITS = 32
_R_MASK = (1 << 32) - 1


@njit(cache=True, inline="always")
def _mont(prod, p, pinv):
    # Montgomery reduction of prod < 2^52: returns prod * 2^-32 mod p
    m = ((prod & _R_MASK) * pinv) & _R_MASK
    u = (prod + m * p) >> _R_BITS
    if u >= p:
        u -= p
    return u


@njit(cache=True)
def _ntt_row(a, tw, p, pinv):
    n = a.shape[0]
    t = n
    m = 1
    idx = 0
    while m < n:
        t >>= 1
        for i in range(m):
            w = tw[idx]
            idx += 1
            j1 = 2 * i * t
            for j in range(j1, j1 + t):
                u = a[j]
                v = _mont(a[j + t] * w, p, pinv)
                x = u + v
                if x >= p:
                    x -= p
                a[j] = x
                y = u + p - v
                if y >= p:
                    y -= p
                a[j + t] = y
        m <<= 1


@njit(cache=True)
def _intt_row(a, itw, p, pinv, n_inv_mont):
    n = a.shape[0]
    t = 1
    m = n >> 1
    idx = 0
    while m >= 1:
        j1 = 0
        for i in range(m):
            w = itw[idx]
            idx += 1
            for j in range(j1, j1 + t):
                u = a[j]
                v = a[j + t]
                x = u + v
                if x >= p:
                    x -= p
                a[j] = x
                a[j + t] = _mont((u + p - v) * w, p, pinv)
            j1 += 2 * t
        t <<= 1
        m >>= 1
    for j in range(n):
        a[j] = _mont(a[j] * n_inv_mont, p, pinv)


@njit(cache=True, parallel=True)
def ntt_rows(mat, tw, ps, pinvs):
    for k in prange(mat.shape[0]):
        _ntt_row(mat[k], tw[k], ps[k], pinvs[k])


@njit(cache=True, parallel=True)
def intt_rows(mat, itw, ps, pinvs, n_inv_monts):
    for k in prange(mat.shape[0]):
        _intt_row(mat[k], itw[k], ps[k], pinvs[k], n_inv_monts[k])


@njit(cache=True, parallel=True)
def pointwise_mul(out, a, b, ps):
    # out = a*b mod p, rowwise; operands < p < 2^27
    for k in prange(a.shape[0]):
        p = ps[k]
        for j in range(a.shape[1]):
            out[k, j] = (a[k, j] * b[k, j]) % p


@njit(cache=True, parallel=True)
def pointwise_mul_acc(acc, a, b, ps):
    # acc += a*b, deferring the reduction; caller keeps few enough
    # accumulations that the uint64 sum cannot wrap (checked at setup)
    for k in prange(a.shape[0]):
        for j in range(a.shape[1]):
            acc[k, j] += (a[k, j] * b[k, j]) % ps[k]


@njit(cache=True, parallel=True)
def reduce_rows(mat, ps):
    for k in prange(mat.shape[0]):
        p = ps[k]
        for j in range(mat.shape[1]):
            mat[k, j] %= p


class NttPlan:
    """Per-(prime, size) transform tables, shared across the engine."""

    _cache: dict = {}

    def __new__(cls, prime: int, size: int):
        key = (prime, size)
        hit = cls._cache.get(key)
        if hit is not None:
            return hit
        self = super().__new__(cls)
        cls._cache[key] = self
        self.prime = prime
        self.size = size
        assert (prime - 1) % size == 0, "prime does not support this transform size"
        self.pinv = (-pow(prime, -1, 1 << _R_BITS)) % (1 << _R_BITS)
        g = primitive_root(prime)
        w = pow(g, (prime - 1) // size, prime)
        r_mod = (1 << _R_BITS) % prime
        self.tw = _twiddle_table(w, size, prime, r_mod)
        self.itw = _twiddle_table_inv(pow(w, -1, prime), size, prime, r_mod)
        self.n_inv_mont = pow(size, -1, prime) * r_mod % prime
        return self


def _bit_reverse(x, bits):
    r = 0
    for _ in range(bits):
        r = (r << 1) | (x & 1)
        x >>= 1
    return r


def _twiddle_table(w, n, p, r_mod):
    # stage m uses roots w_m^bitrev(i), w_m of order 2m, consumed sequentially
    out = np.zeros(n, dtype=np.uint64)
    idx = 0
    m = 1
    while m < n:
        wm = pow(w, n // (2 * m), p)
        bits = m.bit_length() - 1
        for i in range(m):
            out[idx] = pow(wm, _bit_reverse(i, bits), p) * r_mod % p
            idx += 1
        m <<= 1
    return out


def _twiddle_table_inv(winv, n, p, r_mod):
    # Gentleman-Sande stages from m = n/2 down to 1
    out = np.zeros(n, dtype=np.uint64)
    idx = 0
    m = n >> 1
    while m >= 1:
        wm = pow(winv, n // (2 * m), p)
        bits = m.bit_length() - 1
        for i in range(m):
            out[idx] = pow(wm, _bit_reverse(i, bits), p) * r_mod % p
            idx += 1
        m >>= 1
    return out


class RingPlan:
    """Multiplication plan for Z[X]/Phi_m(X), m prime: coefficients are
    length m-1 vectors; products are computed by a zero-padded
    power-of-two transform, folded mod X^m - 1, then reduced by
    X^(m-1) = -(1 + X + ... + X^(m-2))."""

    _cache: dict = {}

    def __new__(cls, m: int, primes: tuple):
        key = (m, primes)
        hit = cls._cache.get(key)
        if hit is not None:
            return hit
        self = super().__new__(cls)
        cls._cache[key] = self
        self.m = m
        self.n = m - 1
        size = 1
        while size < 2 * self.n - 1:
            size <<= 1
        self.size = size
        self.primes = primes
        self.plans = [NttPlan(p, size) for p in primes]
        self.ps = np.array(primes, dtype=np.uint64)
        self.pinvs = np.array([pl.pinv for pl in self.plans], dtype=np.uint64)
        self.tw = np.stack([pl.tw for pl in self.plans])
        self.itw = np.stack([pl.itw for pl in self.plans])
        self.n_inv_monts = np.array([pl.n_inv_mont for pl in self.plans], dtype=np.uint64)
        return self

    def row_indices(self, active):
        return np.asarray(active, dtype=np.int64)

    def forward(self, coeffs, active):
        """coeffs: (k, n) int array of residues, rows matching `active`
        prime indices; returns (k, size) uint64 eval-domain rows."""
        k = coeffs.shape[0]
        out = np.zeros((k, self.size), dtype=np.uint64)
        out[:, : self.n] = coeffs
        ntt_rows(out, self.tw[active], self.ps[active], self.pinvs[active])
        return out

    def inverse(self, evals, active):
        """eval rows back to ring coefficients (k, n), reduced mod Phi_m."""
        work = evals.copy()
        intt_rows(work, self.itw[active], self.ps[active],
                  self.pinvs[active], self.n_inv_monts[active])
        return self.fold(work, active)

    def fold(self, full, active):
        # wrap X^m -> X^0 (degrees up to 2n-2 = 2m-4 < size), then
        # substitute X^(m-1); all entries stay below p < 2^27 so the
        # intermediate sums cannot wrap uint64
        n, m = self.n, self.m
        ps = self.ps[active][:, None]
        low = full[:, :m].copy()
        high = full[:, m : 2 * n - 1]
        low[:, : high.shape[1]] += high
        top = low[:, n].copy()  # X^(m-1) coefficient
        out = (low[:, :n] + ps) - top[:, None] % ps
        out %= ps
        return out.astype(np.int64)

    def multiply(self, a_coeffs, b_coeffs, active):
        fa = self.forward(a_coeffs, active)
        fb = self.forward(b_coeffs, active)
        prod = np.empty_like(fa)
        pointwise_mul(prod, fa, fb, self.ps[active])
        return self.inverse(prod, active)
