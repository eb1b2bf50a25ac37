"""Scalar and matrix primitives: Gaussian probabilities, a jittered Cholesky
factorization, log-domain magnitudes, and reproducible seed streams.

Everything downstream funnels its floating-point risk through this module, so
the contracts here are deliberately strict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering

import numpy as np
from scipy import special as _special
from scipy.linalg import lapack as _lapack

from .errors import InvalidArgumentError, NotPositiveSemidefiniteError

__all__ = [
    "gaussian_cdf",
    "gaussian_interval_prob",
    "cholesky_psd",
    "LogValue",
    "Seed",
]

# Jitter schedule for nearly-semidefinite matrices: start at
# 1e-12 * trace/dim, escalate by 10x, give up after 4 retries.
_JITTER_REL = 1e-12
_JITTER_GROWTH = 10.0
_JITTER_RETRIES = 4


def gaussian_cdf(z):
    """Standard normal CDF, accurate to well below 1e-12 absolute error.

    Accepts scalars or arrays; scalars come back as floats.
    """
    out = _special.ndtr(z)
    if np.isscalar(z) or np.ndim(z) == 0:
        return float(out)
    return out


def gaussian_interval_prob(rho, a, r):
    """P(rho * N lies in the closed ball B(a, r)) for N standard normal.

    rho >= 0 and r >= 0 are required.  The degenerate case rho == 0 is the
    point mass at 0: the probability is 1 exactly when |a| <= r, else 0.
    Symmetric in a -> -a by construction (only |a| enters).

    Broadcasts over array inputs; scalar inputs return a float.
    """
    rho_arr = np.asarray(rho, dtype=float)
    a_arr = np.asarray(a, dtype=float)
    r_arr = np.asarray(r, dtype=float)
    if np.any(rho_arr < 0):
        raise InvalidArgumentError("rho must be nonnegative")
    if np.any(r_arr < 0):
        raise InvalidArgumentError("r must be nonnegative")

    a_abs = np.abs(a_arr)
    # Guard the division; the rho == 0 lanes are overwritten below.
    safe_rho = np.where(rho_arr > 0, rho_arr, 1.0)
    upper = _special.ndtr((a_abs + r_arr) / safe_rho)
    lower = _special.ndtr((a_abs - r_arr) / safe_rho)
    prob = upper - lower
    point_mass = (a_abs <= r_arr).astype(float)
    out = np.where(rho_arr > 0, prob, point_mass)
    if out.ndim == 0:
        return float(out)
    return out


def cholesky_psd(matrix) -> np.ndarray:
    """Lower-triangular L with L @ L.T reproducing ``matrix``.

    The input must be symmetric.  If plain factorization fails, a diagonal
    jitter of 1e-12 * trace/dim is added and escalated by 10x for at most 4
    retries; if the matrix still resists, NotPositiveSemidefiniteError is
    raised carrying the failing pivot index.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidArgumentError("matrix must be square")
    if not np.allclose(m, m.T, rtol=0.0, atol=1e-10 * (1.0 + np.abs(m).max(initial=0.0))):
        raise InvalidArgumentError("matrix must be symmetric")

    dim = m.shape[0]
    if dim == 0:
        return np.zeros((0, 0))
    base = _JITTER_REL * (np.trace(m) / dim)
    if base <= 0:
        base = _JITTER_REL

    jitter = 0.0
    last_pivot = 0
    for attempt in range(_JITTER_RETRIES + 1):
        c, info = _lapack.dpotrf(m + jitter * np.eye(dim), lower=1)
        if info == 0:
            return np.tril(c)
        last_pivot = int(info) - 1  # LAPACK reports 1-based pivots
        jitter = base * (_JITTER_GROWTH ** attempt)
    raise NotPositiveSemidefiniteError(last_pivot)


@total_ordering
@dataclass(frozen=True, slots=True)
class LogValue:
    """A positive magnitude stored as its natural log.

    Keeps products, powers and comparisons exact-to-rounding far below the
    double underflow threshold.  ``logv`` must be finite.
    """

    logv: float

    def __post_init__(self):
        if not math.isfinite(self.logv):
            raise InvalidArgumentError("log magnitude must be finite")

    @classmethod
    def of(cls, x: float) -> "LogValue":
        if not (x > 0) or not math.isfinite(x):
            raise InvalidArgumentError("LogValue.of needs a finite positive value")
        return cls(math.log(x))

    @classmethod
    def from_log(cls, logv: float) -> "LogValue":
        return cls(float(logv))

    @property
    def value(self) -> float:
        """The magnitude itself.  Overflows to inf and underflows to 0.0."""
        try:
            return math.exp(self.logv)
        except OverflowError:
            return math.inf

    def __mul__(self, other: "LogValue") -> "LogValue":
        return LogValue(self.logv + other.logv)

    def __truediv__(self, other: "LogValue") -> "LogValue":
        return LogValue(self.logv - other.logv)

    def __pow__(self, exponent: float) -> "LogValue":
        return LogValue(self.logv * exponent)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogValue):
            return NotImplemented
        return self.logv == other.logv

    def __lt__(self, other: "LogValue") -> bool:
        if not isinstance(other, LogValue):
            return NotImplemented
        return self.logv < other.logv

    def __hash__(self):
        return hash(("LogValue", self.logv))

    def __repr__(self):
        return f"LogValue(logv={self.logv!r})"


_MASTER_BOUND = 1 << 64


@dataclass(frozen=True, slots=True)
class Seed:
    """Reproducible randomness root.

    ``master`` is a 64-bit unsigned integer.  Stream ``i`` (the i-th replica)
    draws from a Philox4x64 counter-based generator keyed by

        key = master + i * 2**64

    with the counter starting at zero.  The rule is part of the public
    contract: the same (master, i) yields a bit-identical stream on any
    platform, and distinct (master, i) pairs never collide because master
    and i occupy disjoint 64-bit halves of the 128-bit key.
    """

    master: int
    stream: int = 0

    def __post_init__(self):
        if not (0 <= self.master < _MASTER_BOUND):
            raise InvalidArgumentError("master seed must be a 64-bit unsigned integer")
        if not (0 <= self.stream < _MASTER_BOUND):
            raise InvalidArgumentError("stream index must be a 64-bit unsigned integer")

    def replica(self, i: int) -> "Seed":
        """The seed for replica ``i`` (stream derivation rule above)."""
        return Seed(self.master, i)

    def generator(self) -> np.random.Generator:
        key = self.master + (self.stream << 64)
        return np.random.Generator(np.random.Philox(key=key))
