"""Kernels whose integrals against a measure bound expected ball masses.

The chain runs: ball mass <= truncated-power kernel integral <= product
kernel integral, and for a Gaussian field with drift the expected measure of
a ball around Z(t) is an exact integral of per-coordinate Gaussian interval
probabilities.  R^d and R^{n+d} carry the maximum norm throughout; Euclidean
ball probabilities are available as an option on expected_ball_mass for the
norm-robustness checks downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2, ncx2

from .errors import InvalidArgumentError
from .fields import DriftSpec, FieldSpec
from .measures import DiscreteMeasure, slice_measure
from .numerics import gaussian_interval_prob

__all__ = [
    "KernelContext",
    "product_kernel",
    "profile_kernel",
    "slice_kernel",
    "increment_kernel",
    "increment_prob",
    "expected_ball_mass",
    "ball_mass_profile",
]


def product_kernel(x) -> float:
    """prod_i min(1, 1/|x_i|), with the value 1 on coordinates that vanish.
    Equals 1 exactly when all |x_i| <= 1."""
    v = np.abs(np.atleast_1d(np.asarray(x, dtype=float)))
    if not np.all(np.isfinite(v)):
        raise InvalidArgumentError("kernel argument must be finite")
    with np.errstate(divide="ignore"):
        factors = np.where(v <= 1.0, 1.0, 1.0 / v)
    return float(np.prod(factors))


def profile_kernel(mu: DiscreteMeasure, beta: float, x, r: float) -> float:
    """Integral of min(1, r^beta |y - x|^-beta) dmu(y), the truncated power
    kernel behind dimension profiles.  Euclidean distances; an atom at x
    itself contributes its full weight."""
    if not (beta > 0):
        raise InvalidArgumentError("beta must be positive")
    if not (r > 0):
        raise InvalidArgumentError("r must be positive")
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    if xv.shape != (mu.dim,):
        raise InvalidArgumentError("point dimension does not match the measure")
    dist = np.linalg.norm(mu.atoms - xv[None, :], axis=1)
    with np.errstate(divide="ignore"):
        vals = np.minimum(1.0, (r / dist) ** beta)
    vals[dist == 0.0] = 1.0
    return float(np.dot(mu.weights, vals))


def slice_kernel(mu: DiscreteMeasure, n: int, d: int, x, r: float) -> float:
    """Slice the measure to the max-norm box around the first n coordinates
    of x, then integrate the product kernel of the remaining d coordinates:
    sum of w(y) prod_i min(1, r / |y_i - v_i|) over surviving atoms."""
    if n < 0 or d < 1 or n + d != mu.dim:
        raise InvalidArgumentError("need n >= 0, d >= 1 with n + d matching the measure")
    if not (r > 0):
        raise InvalidArgumentError("r must be positive")
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    if xv.shape != (n + d,):
        raise InvalidArgumentError("point dimension does not match the measure")
    u, v = xv[:n], xv[n:]
    sub = slice_measure(mu, u, r, n)
    if sub.count == 0:
        return 0.0
    z = np.abs(sub.atoms - v[None, :]) / r
    with np.errstate(divide="ignore"):
        factors = np.where(z <= 1.0, 1.0, 1.0 / z)
    return float(np.dot(sub.weights, np.prod(factors, axis=1)))


def increment_kernel(fx, fy, r: float) -> float:
    """Product kernel of the scaled increment (f(y) - f(x)) / r."""
    if not (r > 0):
        raise InvalidArgumentError("r must be positive")
    a = np.atleast_1d(np.asarray(fx, dtype=float))
    b = np.atleast_1d(np.asarray(fy, dtype=float))
    if a.shape != b.shape:
        raise InvalidArgumentError("the two points must share a dimension")
    return product_kernel((b - a) / r)


@dataclass(frozen=True)
class KernelContext:
    """A drifted field together with a measure on its domain.

    mode "image" integrates over all atoms; mode "graph" restricts to the
    max-norm ball in the domain, matching balls around graph points
    (t, Z(t)) in R^{n+d}.
    """

    field: FieldSpec
    drift: DriftSpec | None
    measure: DiscreteMeasure
    mode: str = "image"

    def __post_init__(self):
        if self.mode not in ("image", "graph"):
            raise InvalidArgumentError("mode must be 'image' or 'graph'")
        if self.measure.dim != self.field.domain_dim:
            raise InvalidArgumentError("measure lives on the wrong domain dimension")
        if self.drift is not None and self.drift.range_dim != self.field.range_dim:
            raise InvalidArgumentError("drift and field range dimensions differ")

    def _drift_cancels(self) -> bool:
        return self.drift is None or self.drift.kind in ("zero", "constant")


def _point(t, n: int) -> np.ndarray:
    tv = np.atleast_1d(np.asarray(t, dtype=float))
    if tv.shape != (n,):
        raise InvalidArgumentError("point dimension does not match the domain")
    return tv


def increment_prob(ctx: KernelContext, t, s, r: float) -> float:
    """P(max_i |Z_i(t) - Z_i(s)| <= r) for the drifted field Z = X + f:
    the product over coordinates of Gaussian interval probabilities with
    scale |t-s|^alpha and center f_i(t) - f_i(s).  Constant drift cancels
    in the centers exactly, bit for bit."""
    if r < 0:
        raise InvalidArgumentError("r must be nonnegative")
    n = ctx.field.domain_dim
    tv, sv = _point(t, n), _point(s, n)
    rho = float(np.linalg.norm(tv - sv) ** ctx.field.alpha)
    d = ctx.field.range_dim
    if ctx._drift_cancels():
        return float(gaussian_interval_prob(rho, 0.0, r)) ** d
    centers = ctx.drift.increment(tv, sv)
    probs = gaussian_interval_prob(np.full(d, rho), centers, float(r))
    return float(np.prod(probs))


def _euclid_ball_prob(rho: np.ndarray, center_norm: np.ndarray, r, d: int) -> np.ndarray:
    """P(|rho N + a|_2 <= r) for an i.i.d. standard normal vector N in R^d,
    elementwise over atoms; rho = 0 lanes degenerate to point masses."""
    rho = np.asarray(rho, dtype=float)
    cn = np.broadcast_to(np.asarray(center_norm, dtype=float), rho.shape)
    rr = np.broadcast_to(np.asarray(r, dtype=float), rho.shape)
    out = np.empty(rho.shape)
    degenerate = rho == 0.0
    out[degenerate] = (cn[degenerate] <= rr[degenerate]).astype(float)
    live = ~degenerate
    if np.any(live):
        q = (rr[live] / rho[live]) ** 2
        nc = (cn[live] / rho[live]) ** 2
        central = nc == 0.0
        vals = np.empty(q.shape)
        if np.any(central):
            vals[central] = chi2.cdf(q[central], df=d)
        if np.any(~central):
            vals[~central] = ncx2.cdf(q[~central], df=d, nc=nc[~central])
        out[live] = vals
    return out


def ball_mass_profile(ctx: KernelContext, t, radii, norm: str = "max") -> np.ndarray:
    """Expected measure of balls around Z(t) (image mode) or around the
    graph point (t, Z(t)) (graph mode), for every radius in ``radii``.

    With the maximum norm this is the exact formula: the integral over the
    measure of the product of coordinate interval probabilities, restricted
    in graph mode to the domain ball.  With the Euclidean norm the value
    probability is a noncentral chi-square tail, and the graph ball couples
    the two parts through the reduced radius sqrt(r^2 - |s-t|^2).
    """
    if norm not in ("max", "euclidean"):
        raise InvalidArgumentError("norm must be 'max' or 'euclidean'")
    rs = np.atleast_1d(np.asarray(radii, dtype=float))
    if np.any(rs <= 0) or not np.all(np.isfinite(rs)):
        raise InvalidArgumentError("radii must be positive and finite")
    nv = ctx.field.domain_dim
    tv = _point(t, nv)
    atoms = ctx.measure.atoms
    w = ctx.measure.weights
    d = ctx.field.range_dim
    diff = atoms - tv[None, :]
    rho = np.linalg.norm(diff, axis=1) ** ctx.field.alpha
    cancels = ctx._drift_cancels()
    if not cancels:
        centers = ctx.drift.evaluate(atoms) - ctx.drift.evaluate(tv)[0][None, :]
    if ctx.mode == "graph":
        dom_dist = (
            np.max(np.abs(diff), axis=1) if norm == "max" else np.linalg.norm(diff, axis=1)
        )
    out = np.empty(len(rs))
    for j, r in enumerate(rs):
        if ctx.mode == "graph":
            mask = dom_dist <= r
            rho_m, w_m = rho[mask], w[mask]
        else:
            rho_m, w_m = rho, w
        if norm == "max":
            if cancels:
                probs = gaussian_interval_prob(rho_m, 0.0, r) ** d
            else:
                cen = centers[mask] if ctx.mode == "graph" else centers
                probs = np.prod(
                    gaussian_interval_prob(rho_m[:, None], cen, r), axis=1
                )
        else:
            if cancels:
                cn = np.zeros(len(rho_m))
            else:
                cen = centers[mask] if ctx.mode == "graph" else centers
                cn = np.linalg.norm(cen, axis=1)
            if ctx.mode == "graph":
                r_eff = np.sqrt(np.maximum(r**2 - dom_dist[mask] ** 2, 0.0))
            else:
                r_eff = r
            probs = _euclid_ball_prob(rho_m, cn, r_eff, d)
        out[j] = float(np.dot(w_m, probs))
    return out


def expected_ball_mass(ctx: KernelContext, t, r: float, norm: str = "max") -> float:
    """Expected mass the pushforward of the measure under Z gives to the
    radius-r ball around Z(t) (or around the graph point in graph mode)."""
    return float(ball_mass_profile(ctx, t, [r], norm)[0])
