"""Brute-force checkers for the exactly testable inequalities.

Each checker returns a CheckReport rather than raising on mathematical
failure: violations counts the offending inputs, worst_ratio records how
close the sharpest input came to the bound, and details carries per-case
diagnostics.  Invalid arguments still raise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .errors import DepthExhaustedError, InvalidArgumentError
from .fields import FieldSpec
from .fractals import ExtractedSubsystem
from .kernels import KernelContext, expected_ball_mass
from .measures import DiscreteMeasure, rect_mass
from .numerics import gaussian_interval_prob

__all__ = [
    "CheckReport",
    "check_doubling",
    "check_scale_doubling",
    "check_parts",
    "check_gaussian_interval_bound",
    "check_graph_expectation_bound",
]


@dataclass(frozen=True)
class CheckReport:
    name: str
    trials: int
    violations: int
    worst_ratio: float
    witness: str = ""
    details: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0


# ---------------------------------------------------------------------------
# Doubling bounds
# ---------------------------------------------------------------------------


def _dyadic_ints(values) -> tuple[list[int], int]:
    """Common-denominator integer form of a float list.  Every binary float
    is a dyadic rational, so (ints, scale) with value = int/scale is exact;
    the scale is the largest denominator (a power of two, hence the lcm)."""
    parts = [Fraction(float(v)) for v in values]
    scale = 1
    for f in parts:
        if f.denominator > scale:
            scale = f.denominator
    return [int(f * scale) for f in parts], scale


def check_doubling(nu: DiscreteMeasure, r: float, lambdas, M: float) -> CheckReport:
    """The mass of the set of atoms x whose (lambda r)-box holds at least M
    times the mass of their r-box is at most 4^d lambda_1 ... lambda_d / M.

    Floats are dyadic rationals, so after rescaling to integers every box
    membership, mass comparison, and the final bound test are exact; no
    tolerance enters the verdict.  Boxes are closed, as in rect_mass."""
    lam = np.atleast_1d(np.asarray(lambdas, dtype=float))
    if lam.shape != (nu.dim,) or np.any(lam < 1.0):
        raise InvalidArgumentError("need one lambda >= 1 per coordinate")
    if not (r > 0) or not (M >= 1.0):
        raise InvalidArgumentError("need r > 0 and M >= 1")
    d = nu.dim
    flat, cs = _dyadic_ints(nu.atoms.reshape(-1).tolist())
    coords = [flat[i * d : (i + 1) * d] for i in range(nu.count)]
    weights, ws = _dyadic_ints(nu.weights.tolist())
    (r_int,), rs = _dyadic_ints([float(r)])
    lam_ints, ls = _dyadic_ints([float(v) for v in lam])
    (m_int,), ms = _dyadic_ints([float(M)])
    # |p_j - c_j| <= h_j with h = r resp. lam_j r; cross-multiplied so both
    # sides sit at scale cs * rs * ls.
    diff_scale = rs * ls
    small_rhs = [r_int * ls * cs] * d
    big_rhs = [r_int * lv * cs for lv in lam_ints]
    lhs_int = 0
    for i in range(nu.count):
        center = coords[i]
        small = 0
        big = 0
        for p, w in zip(coords, weights):
            inside_big = True
            inside_small = True
            for j in range(d):
                diff = (p[j] - center[j]) * diff_scale
                if diff < 0:
                    diff = -diff
                if diff > big_rhs[j]:
                    inside_big = False
                    inside_small = False
                    break
                if diff > small_rhs[j]:
                    inside_small = False
            if inside_big:
                big += w
            if inside_small:
                small += w
        # big/ws >= (m/ms) * small/ws
        if big * ms >= m_int * small:
            lhs_int += weights[i]
    lam_prod = math.prod(lam_ints)
    # lhs/ws > 4^d * (lam_prod / ls^d) * (ms / m_int), cross-multiplied.
    lhs_side = lhs_int * ls**d * m_int
    bound_side = 4**d * lam_prod * ms * ws
    ratio = float(Fraction(lhs_side, bound_side)) if lhs_side else 0.0
    violations = int(lhs_side > bound_side)
    witness = f"lhs={Fraction(lhs_int, ws)} bound_ratio={ratio!r}" if violations else ""
    return CheckReport("doubling-bound", nu.count, violations, ratio, witness)


def check_scale_doubling(
    nu: DiscreteMeasure,
    a: float,
    eps: float,
    r0: float,
    n_scales: int = 10,
    h_multipliers=(1.0, 2.0, 4.0, 8.0),
) -> CheckReport:
    """Scan of the scale-doubling consequence: for boxes with sides
    h_i >= r^a the mass obeys nu(D(x,h)) <= nu(D(x,r)) prod (4 h_i / r)^(1+eps)
    once r is small enough (atom-dependent threshold).  An atom is
    exceptional when a violation persists in the finest scanned octave,
    i.e. no threshold within the scan works; the bound being checked says
    the exceptional mass vanishes as r0 does."""
    if not (0.0 < a < 1.0):
        raise InvalidArgumentError("a must lie in (0, 1)")
    if not (eps > 0):
        raise InvalidArgumentError("eps must be positive")
    if not (0.0 < r0 <= 0.5):
        raise InvalidArgumentError("r0 must lie in (0, 1/2]")
    if n_scales < 2:
        raise InvalidArgumentError("need at least two scanned scales")
    mult = np.atleast_1d(np.asarray(h_multipliers, dtype=float))
    if np.any(mult < 1.0):
        raise InvalidArgumentError("h multipliers must be >= 1 (h_i >= r^a)")
    d = nu.dim
    combos = np.stack(
        np.meshgrid(*([mult] * d), indexing="ij"), axis=-1
    ).reshape(-1, d)
    scales = r0 * 2.0 ** -np.arange(1, n_scales + 1, dtype=float)
    worst = 0.0
    exceptional_mass = 0.0
    exceptional_atoms = 0
    trials = 0
    finest = {n_scales - 1, n_scales}
    for i in range(nu.count):
        x = nu.atoms[i]
        finest_violation = False
        for si, r in enumerate(scales, start=1):
            base = rect_mass(nu, x, r)
            hs = combos * r**a
            for h in hs:
                trials += 1
                lhs = rect_mass(nu, x, h)
                rhs = base * float(np.prod((4.0 * h / r) ** (1.0 + eps)))
                if rhs > 0:
                    worst = max(worst, lhs / rhs)
                if lhs > rhs * (1.0 + 1e-12) and si in finest:
                    finest_violation = True
        if finest_violation:
            exceptional_atoms += 1
            exceptional_mass += nu.weights[i]
    return CheckReport(
        "scale-doubling",
        trials,
        exceptional_atoms,
        worst,
        details={"exceptional_mass": exceptional_mass, "r0": r0},
    )


# ---------------------------------------------------------------------------
# Integration by parts
# ---------------------------------------------------------------------------

_PARTS_CATALOG = {
    "exp": (lambda x: np.exp(-x), 40.0),
    "gauss": (lambda x: np.exp(-(x**2)), 8.0),
}


def check_parts(mu: DiscreteMeasure, f_name: str = "exp") -> CheckReport:
    """Both sides of the identity: the integral of f against mu equals
    (-1)^d times the Stieltjes integral of g(x) = mu(prod [0, x_i)) with
    respect to df.

    The test functions are products of one decaying factor per axis, and g
    is piecewise constant on the grid spanned by the atom coordinates, so
    the Stieltjes side is summed exactly cell by cell (mixed differences of
    f per cell) plus the analytic tail beyond the largest coordinates.
    The remaining discrepancy is pure floating-point roundoff, held to the
    advertised tolerances 1e-6 (d=1) and 1e-4 (d=2) with huge margin."""
    if f_name not in _PARTS_CATALOG:
        raise InvalidArgumentError(f"test function must be one of {sorted(_PARTS_CATALOG)}")
    d = mu.dim
    if d not in (1, 2):
        raise InvalidArgumentError("the checker covers d in {1, 2}")
    if mu.count > 32:
        raise InvalidArgumentError("at most 32 atoms are supported")
    if np.any(mu.atoms < 0):
        raise InvalidArgumentError("atoms must lie in the closed positive orthant")
    phi, margin = _PARTS_CATALOG[f_name]

    lhs = float(np.dot(mu.weights, np.prod(phi(mu.atoms), axis=1)))

    T = float(np.max(mu.atoms)) + margin
    axes = []
    for c in range(d):
        coords = np.unique(mu.atoms[:, c])
        grid = np.concatenate([[0.0], coords[coords > 0], [T]])
        axes.append(np.unique(grid))
    # Cell sum: g is constant inside each cell (no atom coordinate crosses
    # it), so g(midpoint) times the mixed difference of f is the exact
    # Stieltjes contribution of the cell.
    diffs = [np.diff(phi(ax)) for ax in axes]
    mids = [(ax[:-1] + ax[1:]) / 2.0 for ax in axes]
    if d == 1:
        mid_pts = mids[0][:, None]
        delta = diffs[0]
    else:
        mx, my = np.meshgrid(mids[0], mids[1], indexing="ij")
        mid_pts = np.stack([mx.ravel(), my.ravel()], axis=1)
        delta = np.outer(diffs[0], diffs[1]).ravel()
    below = np.all(
        mu.atoms[None, :, :] < mid_pts[:, None, :], axis=2
    )  # half-open boxes [0, x): strict comparison
    g = below @ mu.weights
    cell_sum = float(np.dot(g, delta))
    # Tail beyond [0, T]^d, where g is identically 1: the full-orthant
    # Stieltjes mass of df minus the boxed part, both in closed form.
    full = float(np.prod([0.0 - phi(np.array([0.0]))[0] for _ in range(d)]))
    boxed = float(np.prod([phi(np.array([T]))[0] - phi(np.array([0.0]))[0] for _ in range(d)]))
    rhs = (-1.0) ** d * (cell_sum + full - boxed)

    rel = abs(rhs - lhs) / max(abs(lhs), 1e-300)
    tol = 1e-6 if d == 1 else 1e-4
    violations = int(rel > tol)
    witness = f"lhs={lhs!r} rhs={rhs!r}" if violations else ""
    return CheckReport(
        "integration-by-parts", 1, violations, rel, witness, {"f": f_name}
    )


# ---------------------------------------------------------------------------
# Gaussian interval probability bound
# ---------------------------------------------------------------------------


def _interval_bound_ratios(beta: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    c = 2.0 ** (-1.0 / (1.0 - beta))
    rhos = np.concatenate([[0.0], np.geomspace(1e-6, 10.0, n)])
    cents = np.concatenate([[0.0], np.geomspace(1e-6, 10.0, n)])
    rs = np.geomspace(1e-6, c * (1.0 - 1e-9), n)
    R, A, RAD = np.meshgrid(rhos, cents, rs, indexing="ij")
    prob = gaussian_interval_prob(R, A, RAD)
    # a = rho = 0 sends the comparison power to infinity; the ratio there is
    # 0, which errstate keeps quiet.
    with np.errstate(divide="ignore"):
        denom = RAD**beta / (A + R**beta)
        ratios = prob / denom
    # Case split from the proof: I and II bound by 2, III by 4, IV by a
    # constant below 8; rho = 0 is exact.
    rb = R**beta
    case = np.zeros(R.shape, dtype=int)  # 0: rho = 0
    live = R > 0
    case_i = live & (rb <= A) & (A <= RAD**beta)
    case_ii = live & (A <= rb) & (R <= RAD)
    case_iii = live & (A <= rb) & (RAD < R)
    case_iv = live & (A >= np.maximum(rb, RAD**beta))
    for k, mask in enumerate((case_i, case_ii, case_iii, case_iv), start=1):
        case[mask & (case == 0)] = k
    maxima = np.zeros(5)
    for k in range(5):
        sel = case == k
        if np.any(sel):
            maxima[k] = float(np.max(ratios[sel]))
    return ratios, maxima


def check_gaussian_interval_bound(beta: float, n: int = 24) -> CheckReport:
    """Scan of the probability-vs-power bound: the chance that a centered
    Gaussian of scale rho lands within r of a center a is at most a constant
    times r^beta / (a + rho^beta), for r below the beta-dependent cutoff.
    The scan asserts sup ratio <= 8, requires the sup to be stable within
    10% under doubling the grid, and reports the per-case maxima of the
    proof's four regimes."""
    if not (0.0 < beta < 1.0):
        raise InvalidArgumentError("beta must lie in (0, 1)")
    if n < 8:
        raise InvalidArgumentError("need at least 8 grid points per axis")
    ratios, maxima = _interval_bound_ratios(beta, n)
    ratios2, maxima2 = _interval_bound_ratios(beta, 2 * n)
    sup1 = float(np.max(ratios))
    sup2 = float(np.max(ratios2))
    violations = int(np.sum(ratios2 > 8.0))
    stable = abs(sup2 - sup1) <= 0.1 * max(sup1, 1e-12)
    if not stable:
        violations += 1
    return CheckReport(
        "gaussian-interval-bound",
        int(ratios.size + ratios2.size),
        violations,
        sup2,
        details={
            "sup_coarse": sup1,
            "sup_fine": sup2,
            "stable": stable,
            "case_maxima": {
                "rho=0": maxima2[0],
                "I": maxima2[1],
                "II": maxima2[2],
                "III": maxima2[3],
                "IV": maxima2[4],
            },
        },
    )


# ---------------------------------------------------------------------------
# Graph expected-ball-mass bound on extracted subsystems
# ---------------------------------------------------------------------------


def check_graph_expectation_bound(
    subsystem: ExtractedSubsystem,
    field: FieldSpec,
    refine: int = 0,
    bound: float = 8.0,
) -> CheckReport:
    """On a subsystem with gap growth exponent theta and mass exponent
    gamma, the expected graph-ball mass at radius gap_n^theta must stay
    within a constant of gap_n^gamma, uniformly over levels and atoms.

    theta must equal 1 / (d + 1 - alpha d) for the field, the exponent the
    sharpness proof optimizes; drift-free graph mode; ratios are reported
    per level and must not exceed ``bound``.  ``refine`` deepens the atom
    resolution of the measure without changing interval masses, for
    stability checks.

    Usable levels run from 2 to depth - 1: at the deepest level every
    interval carries a single atom, so the windowed integral degenerates to
    that atom's point mass and shrinks under refinement instead of
    converging.  Levels strictly coarser than the atom resolution average
    over whole clusters and are stable."""
    d = field.range_dim
    ad = field.alpha * d
    if ad >= 1.0:
        raise InvalidArgumentError("the bound needs the subcritical regime alpha d < 1")
    if field.domain_dim != 1:
        raise InvalidArgumentError("subsystems live on the line")
    theta_expected = 1.0 / (d + 1.0 - ad)
    if abs(subsystem.theta - theta_expected) > 1e-9:
        raise InvalidArgumentError(
            f"subsystem theta {subsystem.theta:.6g} does not match the "
            f"field's exponent {theta_expected:.6g}"
        )
    system = subsystem.system
    levels = list(range(2, system.depth))
    if not levels:
        raise DepthExhaustedError("no usable levels: the subsystem is too shallow")
    mu = subsystem.measure(refine=refine)
    ctx = KernelContext(field, None, mu, "graph")
    gamma = subsystem.gamma
    level_ratios = []
    worst = 0.0
    violations = 0
    trials = 0
    for nlev in levels:
        eta = system.gap(nlev)
        r = eta**subsystem.theta
        target = eta**gamma
        level_worst = 0.0
        for i in range(mu.count):
            trials += 1
            ratio = expected_ball_mass(ctx, mu.atoms[i], r) / target
            level_worst = max(level_worst, ratio)
            if ratio > bound:
                violations += 1
        level_ratios.append(level_worst)
        worst = max(worst, level_worst)
    return CheckReport(
        "graph-expectation-bound",
        trials,
        violations,
        worst,
        details={
            "levels": levels,
            "level_ratios": level_ratios,
            "refine": refine,
            "theta": subsystem.theta,
            "gamma": gamma,
        },
    )
