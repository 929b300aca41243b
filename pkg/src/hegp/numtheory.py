"""Small number-theoretic helpers: primality, orders, prime searches.

Everything here operates on Python ints well inside 64 bits; the sizes
involved (cyclotomic indices below 2^17, modulus-chain primes below
2^27) keep trial division and deterministic Miller-Rabin cheap.
"""

from __future__ import annotations

from .errors import ConfigError

# deterministic Miller-Rabin witness set for n < 3.3e24
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division; fine for n < ~2^40."""
    if n < 1:
        raise ConfigError("factorize expects a positive integer")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def multiplicative_order(a: int, m: int) -> int:
    """Order of a in (Z/m)*; m prime."""
    a %= m
    if a == 0:
        raise ConfigError("zero has no multiplicative order")
    order = m - 1
    for q in factorize(m - 1):
        while order % q == 0 and pow(a, order // q, m) == 1:
            order //= q
    return order


def primitive_root(m: int) -> int:
    """Smallest generator of (Z/m)*; m prime."""
    phi = m - 1
    factors = list(factorize(phi))
    for g in range(2, m):
        if all(pow(g, phi // q, m) != 1 for q in factors):
            return g
    raise ConfigError(f"no primitive root found mod {m}")


def ntt_prime_pool(transform_size: int, max_bits: int = 26, min_bits: int = 17):
    """Primes p = k * transform_size + 1 usable for power-of-two NTTs,
    ascending, within the given bit range."""
    out = []
    k = max(1, ((1 << (min_bits - 1)) // transform_size))
    while True:
        p = k * transform_size + 1
        k += 1
        if p.bit_length() < min_bits:
            continue
        if p.bit_length() > max_bits:
            return out
        if is_prime(p):
            out.append(p)


def find_cyclotomic_index(base: int, lo: int, hi: int, min_slots: int):
    """Smallest prime m in [lo, hi] whose slot count for plaintext prime
    `base` is at least min_slots.

    Slot count is (m-1)/ord_m(base): the number of irreducible factors
    of the m-th cyclotomic polynomial mod base.
    """
    m = lo | 1
    while m <= hi:
        if m != base and is_prime(m):
            d = multiplicative_order(base, m)
            if (m - 1) // d >= min_slots:
                return m, d, (m - 1) // d
        m += 2
    return None


def garner_digits(residues, primes):
    """Mixed-radix digits v of x from residues mod pairwise-coprime primes:
    x = v[0] + p[0]*(v[1] + p[1]*(...)), each v[k] in [0, p[k])."""
    k = len(primes)
    digits = []
    for i in range(k):
        t = 0
        # partial value v0 + p0 (v1 + ...) reduced mod p[i]
        for j in range(i - 1, -1, -1):
            t = (t * primes[j] + digits[j]) % primes[i]
        inv = pow(_prefix_product_mod(primes, i), -1, primes[i])
        digits.append((residues[i] - t) * inv % primes[i])
    return digits


def _prefix_product_mod(primes, i):
    acc = 1
    for j in range(i):
        acc = acc * primes[j] % primes[i]
    return acc


def crt_reconstruct(residues, primes, symmetric=True):
    """Exact integer from residues; symmetric range (-Q/2, Q/2] if asked."""
    digits = garner_digits(residues, primes)
    x = 0
    for d, p in zip(reversed(digits), reversed(primes)):
        x = x * p + d
    if symmetric:
        q = 1
        for p in primes:
            q *= p
        if x > q // 2:
            x -= q
    return x
