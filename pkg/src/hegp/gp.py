"""Plaintext Gaussian process regression over Hamming, Jaccard and
Euclidean distances.

This module is the reference path of the two-party workflow: the same
numbers it produces are what the encrypted pipeline must reproduce, so
everything here is kept dependency-light and exact.  Kernels are
isotropic squared exponentials k(a, b) = exp(-d(a, b)^2 / (2 l^2)).

Feature vectors are numpy arrays: binary metrics expect 0/1 integer
arrays, Euclidean expects float arrays.  Sets of vectors are 2-D arrays
of shape (count, d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import ConfigError, DimensionMismatchError, NotPositiveDefiniteError

HAMMING = "hamming"
JACCARD = "jaccard"
EUCLIDEAN = "euclidean"
METRICS = (HAMMING, JACCARD, EUCLIDEAN)

DEFAULT_JITTER = 1e-6

# lengthscales fitted on MACCS-key screening data, one per metric
REFERENCE_LENGTHSCALES = {HAMMING: 11.0315, JACCARD: 0.1175, EUCLIDEAN: 3.8058}


def _check_pair(a, b, metric):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionMismatchError(
            f"distance operands must be equal-length vectors, got {a.shape} vs {b.shape}"
        )
    if metric in (HAMMING, JACCARD):
        for v in (a, b):
            if not np.isin(v, (0, 1)).all():
                raise ConfigError(f"{metric} distance needs 0/1 vectors")
    return a, b


def distance(metric, a, b):
    """Distance between two feature vectors under the given metric.

    Hamming counts differing positions, Jaccard is
    (|union| - |intersection|) / |union| on the supports, Euclidean is
    the usual L2 norm of the difference.  Jaccard on two all-zero
    vectors has no defined value and raises.
    """
    a, b = _check_pair(a, b, metric)
    if metric == HAMMING:
        return float(np.count_nonzero(a != b))
    if metric == JACCARD:
        union = int(np.count_nonzero(a | b))
        if union == 0:
            raise ConfigError("Jaccard distance of two empty sets is undefined")
        inter = int(np.count_nonzero(a & b))
        return (union - inter) / union
    if metric == EUCLIDEAN:
        d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
        return float(np.sqrt(np.dot(d, d)))
    raise ConfigError(f"unknown metric {metric!r}")


def pairwise_distances(metric, rows, cols):
    """Distance matrix D[i, j] = distance(rows[i], cols[j])."""
    rows = np.atleast_2d(np.asarray(rows))
    cols = np.atleast_2d(np.asarray(cols))
    if rows.shape[1] != cols.shape[1]:
        raise DimensionMismatchError(
            f"row/col dimension mismatch: {rows.shape[1]} vs {cols.shape[1]}"
        )
    out = np.empty((rows.shape[0], cols.shape[0]))
    for i in range(rows.shape[0]):
        for j in range(cols.shape[0]):
            out[i, j] = distance(metric, rows[i], cols[j])
    return out


def rbf_kernel(dist, lengthscale):
    """Squared-exponential kernel value exp(-d^2 / (2 l^2))."""
    if lengthscale <= 0:
        raise ConfigError(f"lengthscale must be positive, got {lengthscale}")
    d = np.asarray(dist, dtype=float)
    if np.any(d < 0):
        raise ConfigError("distances must be non-negative")
    out = np.exp(-(d * d) / (2.0 * lengthscale * lengthscale))
    return float(out) if np.isscalar(dist) or d.ndim == 0 else out


@dataclass(frozen=True)
class KernelSpec:
    """Isotropic kernel: metric, lengthscale, and diagonal jitter."""

    metric: str
    lengthscale: float
    jitter: float = DEFAULT_JITTER

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ConfigError(f"unknown metric {self.metric!r}")
        if self.lengthscale <= 0:
            raise ConfigError("lengthscale must be positive")
        if self.jitter < 0:
            raise ConfigError("jitter must be non-negative")


def build_covariance(rows, cols, kernel, add_jitter=False):
    """Covariance matrix K[i, j] = k(rows[i], cols[j]).

    With add_jitter the kernel's jitter is added on the diagonal; only
    meaningful when rows and cols are the same set.
    """
    dists = pairwise_distances(kernel.metric, rows, cols)
    K = rbf_kernel(dists, kernel.lengthscale)
    if add_jitter:
        K = K + kernel.jitter * np.eye(*K.shape)
    return K


def invert_covariance(K):
    """Inverse of a symmetric positive-definite covariance matrix.

    Uses a Cholesky factorization; a failure means the matrix is not
    positive definite within floating precision and usually wants a
    larger jitter term on the diagonal.
    """
    K = np.asarray(K, dtype=float)
    try:
        c = cho_factor(K, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(
            "covariance factorization failed; increase the jitter"
        ) from exc
    return cho_solve(c, np.eye(K.shape[0]))


@dataclass(frozen=True)
class Prediction:
    """Posterior means and (non-negative) variances for the test points."""

    means: np.ndarray
    variances: np.ndarray


def clamp_variances(variances, tol=1e-9):
    v = np.asarray(variances, dtype=float)
    if np.any(v < -tol):
        raise ConfigError(f"variance {v.min():.3g} below round-off tolerance")
    return np.maximum(v, 0.0)


@dataclass(frozen=True)
class GPModel:
    """Zero-mean GP regression model with a precomputed precision matrix.

    Immutable after construction; safe to share across threads and
    sessions.
    """

    train_x: np.ndarray
    train_y: np.ndarray
    kernel: KernelSpec
    k_inverse: np.ndarray = field(repr=False)

    @classmethod
    def fit(cls, train_x, train_y, kernel):
        train_x = np.atleast_2d(np.asarray(train_x))
        train_y = np.asarray(train_y, dtype=float).ravel()
        if train_x.shape[0] != train_y.shape[0]:
            raise DimensionMismatchError(
                f"{train_x.shape[0]} feature vectors vs {train_y.shape[0]} targets"
            )
        if train_x.shape[0] < 1:
            raise ConfigError("need n >= 1 training points")
        K = build_covariance(train_x, train_x, kernel, add_jitter=True)
        return cls(train_x=train_x, train_y=train_y, kernel=kernel,
                   k_inverse=invert_covariance(K))

    @property
    def n(self):
        return self.train_x.shape[0]

    def weights(self):
        """K^-1 y, the vector the mean prediction is linear in."""
        return self.k_inverse @ self.train_y


def gp_predict(model, test_x):
    """Posterior prediction at the test points.

    Means are K* K^-1 y; variances are diag(K**) - diag(K* K^-1 K*^T),
    with tiny negative round-off clamped to zero.
    """
    test_x = np.atleast_2d(np.asarray(test_x))
    k_star = build_covariance(test_x, model.train_x, model.kernel)
    k_star_star_diag = np.ones(test_x.shape[0])  # k(x, x) = 1 for the RBF kernel
    means = k_star @ model.k_inverse @ model.train_y
    cross = np.einsum("ij,jk,ik->i", k_star, model.k_inverse, k_star)
    variances = clamp_variances(k_star_star_diag - cross)
    return Prediction(means=means, variances=variances)


@dataclass(frozen=True)
class PolynomialApprox:
    """Polynomial c0 + c1 (x - center) + ... + c_deg (x - center)^deg."""

    coefficients: tuple
    center: float = 0.0

    def __post_init__(self):
        if len(self.coefficients) < 1:
            raise ConfigError("need at least a constant coefficient")

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def __call__(self, x):
        x = np.asarray(x, dtype=float) - self.center
        acc = np.zeros_like(x, dtype=float) + self.coefficients[-1]
        for c in self.coefficients[-2::-1]:
            acc = acc * x + c
        return float(acc) if acc.ndim == 0 else acc


def taylor_kernel_poly(degree, lengthscale):
    """Taylor series of exp(-u / (2 l^2)) about u = 0, in u = d^2.

    Working in the squared distance halves the composed degree of the
    single-stage pipeline relative to a series in d itself, since the
    kernel is analytic in d^2.
    """
    if degree < 0:
        raise ConfigError("degree must be non-negative")
    if lengthscale <= 0:
        raise ConfigError("lengthscale must be positive")
    a = -1.0 / (2.0 * lengthscale * lengthscale)
    return PolynomialApprox(
        coefficients=tuple(a**j / math.factorial(j) for j in range(degree + 1))
    )


def taylor_reciprocal_poly(degree, center):
    """Taylor series of 1/U about U = center."""
    if degree < 0:
        raise ConfigError("degree must be non-negative")
    if center <= 0:
        raise ConfigError("expansion center must be positive")
    return PolynomialApprox(
        coefficients=tuple((-1.0) ** j / center ** (j + 1) for j in range(degree + 1)),
        center=center,
    )
