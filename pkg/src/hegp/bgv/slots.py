"""Slot packing for prime cyclotomic indices.

For prime m and plaintext prime p with gcd(p, m) = 1, the m-th
cyclotomic polynomial splits mod p into (m-1)/d irreducible factors of
degree d = ord_m(p); each factor is one SIMD slot.  We only ever store
Z_p constants per slot (never full extension-field elements), which
keeps encoding and decoding linear:

  encode: P = sum_j v_j E_j with E_j the primitive idempotent of slot j,
          whose coefficients are Gauss periods and live in Z_p;
  decode: v_j = P(omega^(c_j)), read off as the Z_p coordinate of an
          extension-field evaluation, again a Z_p-linear map.

Both maps are precomputed as (slots x degree) integer matrices per
(m, p) pair and cached; homomorphic add/mul act slotwise on constants,
so constant-slot plaintexts are closed under every circuit we build.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from ..numtheory import factorize, is_prime, multiplicative_order


def _poly_mod(coeffs, p):
    return np.mod(coeffs, p)


def _find_irreducible(p, d, rng):
    """Random monic irreducible of degree d over Z_p.

    Random candidates are irreducible with probability ~1/d, so the
    per-candidate test must fail fast: we walk the Frobenius tower
    x -> x^p -> x^(p^2) -> ... and abort as soon as gcd(x^(p^k) - x, f)
    turns up a degree-k factor, which catches almost all reducibles
    within a few cheap steps.
    """
    while True:
        f = np.concatenate([rng.integers(0, p, d), [1]]).astype(np.int64)
        if f[0] == 0:
            continue  # divisible by X
        if _is_irreducible(f, p, d):
            return f


def _reduction_rows(f, p):
    """Rows X^(d+j) mod f for j = 0..d-2, monic f of degree d."""
    d = len(f) - 1
    rows = np.zeros((d - 1, d), dtype=np.int64)
    cur = (-f[:d]) % p  # X^d mod f
    for j in range(d - 1):
        rows[j] = cur
        top = cur[d - 1]
        cur = np.roll(cur, 1)
        cur[0] = 0
        cur = (cur + top * ((-f[:d]) % p)) % p
    return rows


def _polymulmod(a, b, f, p, rows=None):
    prod = np.convolve(a, b) % p
    d = len(f) - 1
    if prod.shape[0] <= d:
        out = np.zeros(d, dtype=np.int64)
        out[: prod.shape[0]] = prod
        return out
    if rows is None:
        rows = _reduction_rows(f, p)
    high = prod[d:]
    out = prod[:d].copy()
    out[:] = (out + high @ rows[: high.shape[0]]) % p
    return out


def _polypowmod(a, e, f, p, rows=None):
    d = len(f) - 1
    if rows is None:
        rows = _reduction_rows(f, p)
    acc = np.zeros(d, dtype=np.int64)
    acc[0] = 1
    base = a.copy()
    while e:
        if e & 1:
            acc = _polymulmod(acc, base, f, p, rows)
        base = _polymulmod(base, base, f, p, rows)
        e >>= 1
    return acc


def _poly_gcd_is_one(a, f, p):
    """gcd(a, f) == 1 over Z_p[X], a reduced mod monic f."""
    u = np.trim_zeros(np.asarray(a) % p, "b")
    v = np.trim_zeros(np.asarray(f) % p, "b")
    while u.shape[0] > 0:
        # v mod u
        lead_inv = pow(int(u[-1]), -1, p)
        while v.shape[0] >= u.shape[0]:
            c = v[-1] * lead_inv % p
            if c:
                v[-u.shape[0] :] = (v[-u.shape[0] :] - c * u) % p
            v = np.trim_zeros(v, "b")
            if v.shape[0] == 0:
                break
        u, v = v, u
    return v.shape[0] == 1


def _is_irreducible(f, p, d):
    if d == 1:
        return True
    rows = _reduction_rows(f, p)
    x = np.zeros(d, dtype=np.int64)
    x[1] = 1
    frob = x
    for k in range(1, d // 2 + 1):
        frob = _polypowmod(frob, p, f, p, rows)  # x^(p^k)
        if not _poly_gcd_is_one((frob - x) % p, f, p):
            return False  # factor of degree k exists
    # no factor of degree <= d/2 -> irreducible for monic degree d
    return True


class SlotTable:
    """Encode/decode matrices for constant-per-slot packing."""

    _cache: dict = {}

    def __new__(cls, m: int, p: int):
        key = (m, p)
        hit = cls._cache.get(key)
        if hit is not None:
            return hit
        self = super().__new__(cls)
        self._build(m, p)
        cls._cache[key] = self
        return self

    def _build(self, m, p):
        if not is_prime(m) or not is_prime(p) or m == p:
            raise ConfigError("slot table needs distinct primes m, p")
        self.m = m
        self.p = p
        self.degree = d = multiplicative_order(p, m)
        self.slots = ell = (m - 1) // d
        self.n = m - 1

        # cyclotomic cosets of <p> acting on Z_m^*
        coset_id = np.full(m, -1, dtype=np.int64)
        reps = []
        for c in range(1, m):
            if coset_id[c] >= 0:
                continue
            rep = len(reps)
            reps.append(c)
            x = c
            while coset_id[x] < 0:
                coset_id[x] = rep
                x = x * p % m
        if len(reps) != ell:
            raise ConfigError("coset structure inconsistent with slot count")
        self.coset_reps = np.array(reps, dtype=np.int64)
        self._coset_id = coset_id

        rng = np.random.default_rng(m * 131 + p)
        f = _find_irreducible(p, d, rng)
        rows = _reduction_rows(f, p)

        # element of order m in GF(p^d): m | p^d - 1 by choice of d
        order = p**d - 1
        assert order % m == 0
        while True:
            g = rng.integers(0, p, d).astype(np.int64)
            if not g.any():
                continue
            omega = _polypowmod(g, order // m, f, p, rows)
            if omega.any() and not (omega[0] == 1 and not omega[1:].any()):
                break

        # all powers omega^i, i in [0, m)
        powers = np.zeros((m, d), dtype=np.int64)
        powers[0, 0] = 1
        for i in range(1, m):
            powers[i] = _polymulmod(powers[i - 1], omega, f, p, rows)
        if not np.array_equal(_polymulmod(powers[m - 1], omega, f, p, rows), powers[0]):
            raise ConfigError("omega does not have order m")

        # Gauss periods: sum of omega^i over each coset lands in Z_p
        periods = np.zeros(ell, dtype=np.int64)
        sums = np.zeros((ell, d), dtype=np.int64)
        for i in range(1, m):
            sums[coset_id[i]] += powers[i]
        sums %= p
        if sums[:, 1:].any():
            raise ConfigError("period sums escaped the prime field")
        periods[:] = sums[:, 0]

        m_inv = pow(m % p, -1, p)
        # idempotent coefficients over X^m - 1: a_k = m^-1 * period(coset(-c_j k)),
        # a_0 = m^-1 * d;     then reduce by X^(m-1) = -(1 + ... + X^(m-2))
        ks = np.arange(m, dtype=np.int64)
        enc = np.zeros((ell, m), dtype=np.int64)
        for j, c in enumerate(self.coset_reps):
            idx = (-c * ks) % m
            enc[j, 1:] = periods[coset_id[idx[1:]]]
            enc[j, 0] = d % p
        enc = enc * m_inv % p
        self.encode_matrix = (enc[:, : self.n] - enc[:, self.n][:, None]) % p

        # decode: value of slot j is coordinate 0 of P(omega^(c_j))
        dec = np.zeros((ell, self.n), dtype=np.int64)
        for j, c in enumerate(self.coset_reps):
            idx = (c * ks[: self.n]) % m
            dec[j] = powers[idx, 0]
        self.decode_matrix = dec

    def encode(self, values):
        """Slot constants -> plaintext polynomial (length m-1, mod p)."""
        v = np.zeros(self.slots, dtype=np.int64)
        values = np.asarray(values, dtype=np.int64) % self.p
        if values.shape[0] > self.slots:
            raise ConfigError(f"{values.shape[0]} values exceed {self.slots} slots")
        v[: values.shape[0]] = values
        return v @ self.encode_matrix % self.p

    def decode(self, poly):
        """Plaintext polynomial -> slot constants."""
        return self.decode_matrix @ (np.asarray(poly, dtype=np.int64) % self.p) % self.p

    def ring_mul_plain(self, a, b):
        """Plaintext-side multiplication mod (Phi_m, p); test/oracle use."""
        prod = np.convolve(a, b) % self.p
        full = np.zeros(2 * self.m, dtype=np.int64)
        full[: prod.shape[0]] = prod
        low = full[: self.m].copy()
        high = full[self.m :]
        low[: high.shape[0]] += high
        return (low[: self.n] - low[self.n]) % self.p
