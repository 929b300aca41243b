"""Fixed-point reals as residues over a basis of ~10000-sized primes.

Real numbers are scaled by a large factor S, rounded to integers, and
split by the Chinese Remainder Theorem across a basis of primes just
above 10000, each small enough to serve as a plaintext modulus of its
own encryption instance.  Negative values use the symmetric range
(-Q/2, Q/2] of the basis product Q.

Multiplying two encodings multiplies their scales; the `degree` tag
counts accumulated powers of S so the consumer knows what to divide
out.  Scales are tracked as exact integers (countermeasure handling
can boost the base scale by a non-power-of-S factor).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, RangeOverflowError
from .numtheory import crt_reconstruct, is_prime

DEFAULT_SCALE = 10**6
PRIME_FLOOR = 10000
RANGE_SAFETY = 2


def basis_primes(count, floor=PRIME_FLOOR, skip=()):
    """First `count` primes above `floor`, skipping any in `skip`."""
    out = []
    p = floor + 1
    while len(out) < count:
        if is_prime(p) and p not in skip:
            out.append(p)
        p += 2 if p % 2 else 1
    return tuple(out)


@dataclass(frozen=True)
class CrtBasis:
    """Prime basis plus the session's base scale S."""

    primes: tuple
    scale: int = DEFAULT_SCALE

    def __post_init__(self):
        if len(set(self.primes)) != len(self.primes):
            raise ConfigError("basis primes must be distinct")
        if self.scale < 1:
            raise ConfigError("scale must be a positive integer")

    @property
    def modulus(self):
        q = 1
        for p in self.primes:
            q *= p
        return q

    @property
    def capacity(self):
        """Largest magnitude encodable with the range safety factor."""
        return self.modulus // (2 * RANGE_SAFETY)


def choose_basis(max_abs, scale=DEFAULT_SCALE, floor=PRIME_FLOOR, skip=()):
    """Smallest basis whose capacity covers integers up to max_abs."""
    need = int(max_abs) + 1
    primes = []
    p = floor + 1
    q = 1
    while q // (2 * RANGE_SAFETY) < need:
        if is_prime(p) and p not in skip:
            primes.append(p)
            q *= p
        p += 2 if p % 2 else 1
    return CrtBasis(primes=tuple(primes), scale=scale)


@dataclass(frozen=True)
class CrtFixedPoint:
    """Residue representation of scaled integers.

    residues has shape (len(primes), k) for k packed values; scale is
    the exact integer factor dividing the represented integer back to
    the real value; degree counts how many base-scale factors the
    scale carries.
    """

    residues: np.ndarray
    basis: CrtBasis
    scale: int
    degree: int = 1

    @property
    def count(self):
        return self.residues.shape[1]


def encode_int(values, basis):
    """Residues of exact integers (no scaling); checks the range bound."""
    vals = np.atleast_1d(np.asarray(values, dtype=np.int64))
    if np.any(np.abs(vals) > basis.capacity):
        raise RangeOverflowError(
            f"|value| {np.abs(vals).max()} exceeds basis capacity {basis.capacity}"
        )
    ps = np.asarray(basis.primes, dtype=np.int64)
    return np.mod(vals[None, :], ps[:, None])


def encode(values, basis, scale=None, degree=1):
    """Scale reals by S (or an explicit exact scale), round, and split."""
    s = basis.scale if scale is None else int(scale)
    vals = np.atleast_1d(np.asarray(values, dtype=float))
    scaled = np.rint(vals * s)
    if np.any(np.abs(scaled) > basis.capacity):
        raise RangeOverflowError(
            f"|value*scale| {np.abs(scaled).max():.3g} exceeds capacity {basis.capacity}"
        )
    residues = np.mod(scaled.astype(np.int64)[None, :],
                      np.asarray(basis.primes, dtype=np.int64)[:, None])
    return CrtFixedPoint(residues=residues, basis=basis, scale=s, degree=degree)


def decode_integers(residues, basis):
    """Exact signed integers from residues (symmetric range)."""
    residues = np.asarray(residues)
    out = []
    for k in range(residues.shape[1]):
        out.append(crt_reconstruct([int(r) for r in residues[:, k]],
                                   list(basis.primes)))
    return out


def decode(fp, degree=None):
    """Real values; decoding at the wrong degree is off by exact powers
    of the base scale."""
    ints = decode_integers(fp.residues, fp.basis)
    if degree is None or degree == fp.degree:
        s = fp.scale
    else:
        s = fp.scale * fp.basis.scale ** (degree - fp.degree)
    return np.array([v / s for v in ints])


def add(a, b):
    if a.basis != b.basis or a.scale != b.scale:
        raise ConfigError("fixed-point addition needs matching basis and scale")
    ps = np.asarray(a.basis.primes, dtype=np.int64)[:, None]
    return CrtFixedPoint(residues=(a.residues + b.residues) % ps,
                         basis=a.basis, scale=a.scale, degree=a.degree)


def mul(a, b):
    if a.basis != b.basis:
        raise ConfigError("fixed-point product needs a shared basis")
    ps = np.asarray(a.basis.primes, dtype=np.int64)[:, None]
    return CrtFixedPoint(residues=(a.residues * b.residues) % ps,
                         basis=a.basis, scale=a.scale * b.scale,
                         degree=a.degree + b.degree)
