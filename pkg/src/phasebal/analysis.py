"""Closed-form predictions for steady velocity directions and centroids.

Everything here is analytical: the steady reference direction and its
reachable interval (two and three agents), gain synthesis for a desired
direction, robustness bounds under relative gain errors, the two-agent
heading trajectories in closed form, the settled centroid via quadrature
of the transformed convergence integrals, and the locus that centroid
traces as the gain magnitude sweeps at fixed ratio.

Angles are radians and unwrapped throughout; wrapped presentation happens
at the CLI boundary.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .control import partition_subgroups, validate_gain_ordering
from .errors import (
    AnalysisScopeError,
    BalancedStartError,
    DegenerateHeadingsError,
    TargetNotReachableError,
)
from .model import GainVector, as_gain_vector
from .quadrature import adaptive_simpson

# All shifted headings within this spread are treated as coincident.
DEGENERATE_TOL = 1e-12
# Targets this close to an interval endpoint are refused: reproducing an
# endpoint exactly would need a zero gain, for which the steady-direction
# formula is undefined.
ENDPOINT_TOL = 1e-12

QUADRATURE_TOL = 1e-10
QUADRATURE_MAX_DEPTH = 40


@dataclass(frozen=True)
class Interval:
    """A real interval with per-endpoint closedness."""

    lo: float
    hi: float
    lo_closed: bool = False
    hi_closed: bool = False

    def contains(self, x: float, slack: float = 0.0) -> bool:
        above = x >= self.lo - slack if self.lo_closed else x > self.lo - slack
        below = x <= self.hi + slack if self.hi_closed else x < self.hi + slack
        return above and below


@dataclass(frozen=True)
class ShiftedInitialHeadings:
    """Initial headings with the splayed offsets 2(k-1)pi/n removed."""

    values: np.ndarray
    lo: float  # min of values
    hi: float  # max of values


def _theta_array(theta0, expected=None) -> np.ndarray:
    th = np.asarray(theta0, dtype=float)
    if th.ndim != 1 or th.size < 2:
        raise ValueError("need at least two headings")
    if not np.all(np.isfinite(th)):
        raise ValueError("headings must be finite")
    if expected is not None and th.size != expected:
        raise ValueError(f"expected {expected} headings, got {th.size}")
    return th


def shifted_headings(theta0) -> ShiftedInitialHeadings:
    """Subtract 2(k-1)pi/n from each initial heading."""
    th = _theta_array(theta0)
    n = th.size
    vals = th - 2.0 * np.arange(n) * np.pi / n
    return ShiftedInitialHeadings(vals, float(vals.min()), float(vals.max()))


def _require_small_n(n: int):
    if n not in (2, 3):
        raise AnalysisScopeError(
            f"closed-form direction results cover 2 or 3 agents, not {n}"
        )


def _require_cyclic(th: np.ndarray):
    if np.any(th <= -np.pi) or np.any(th >= np.pi):
        raise AnalysisScopeError(
            "initial headings must lie in the open interval (-pi, pi)"
        )
    if np.any(np.diff(th) <= 0):
        raise AnalysisScopeError("initial headings must be strictly increasing")


@dataclass(frozen=True)
class ReachabilityReport:
    """Predicted steady reference direction with its admissible set.

    ``reference_direction`` is the steady heading of agent 1; agent k settles
    at reference_direction + 2(k-1)pi/n. ``weights`` are the inverse-gain
    weights lambda_k; in the positive-gains regime they are a convex
    combination and the direction lies strictly inside the open interval.
    """

    reference_direction: float
    interval: Interval
    regime: str  # "positive-gains" or "two-agent-signed"
    weights: np.ndarray
    predicted_final_headings: np.ndarray


def reachable_interval(theta0) -> Interval:
    """Open interval of directions reachable with positive ordered gains."""
    th = _theta_array(theta0)
    _require_small_n(th.size)
    sh = shifted_headings(th)
    if sh.hi - sh.lo <= DEGENERATE_TOL:
        raise DegenerateHeadingsError(
            "all shifted headings coincide; the scenario is already "
            "balanced-compatible and the reachable interval is empty"
        )
    return Interval(sh.lo, sh.hi, False, False)


def predict_reference_direction(theta0, gains) -> ReachabilityReport:
    """Steady direction of agent 1 from the inverse-gain weighted mean of
    the shifted initial headings.

    Positive gains must satisfy the subgroup ordering; otherwise only the
    two-agent case with K1 + K2 > 0 is in scope. Any zero gain leaves the
    formula undefined.
    """
    th = _theta_array(theta0)
    n = th.size
    _require_small_n(n)
    g = as_gain_vector(gains).gains
    if g.size != n:
        raise ValueError(f"gain count {g.size} does not match agent count {n}")
    if np.any(g == 0.0):
        raise AnalysisScopeError(
            "a zero gain leaves the steady-direction formula undefined"
        )
    _require_cyclic(th)
    if np.all(g > 0.0):
        regime = "positive-gains"
        try:
            part = partition_subgroups(th)
        except BalancedStartError:
            part = None
            warnings.warn(
                "initially balanced arrangement: gain-ordering validation skipped",
                stacklevel=2,
            )
        if part is not None:
            res = validate_gain_ordering(part, g)
            if not res.ok:
                raise AnalysisScopeError(
                    f"gain ordering violated ({res.detail}); the steady "
                    "direction formula is proven only under the subgroup ordering"
                )
        try:
            interval = reachable_interval(th)
        except DegenerateHeadingsError:
            sh = shifted_headings(th)
            interval = Interval(sh.lo, sh.lo, True, True)
    elif n == 2 and float(g.sum()) > 0.0:
        regime = "two-agent-signed"
        interval = Interval(-np.pi, np.pi, True, True)
    else:
        raise AnalysisScopeError(
            "gains are outside the proven regimes: need all-positive ordered "
            "gains, or two agents with a positive gain sum"
        )
    inv = 1.0 / g
    lam = inv / inv.sum()
    sh = shifted_headings(th)
    ref = float(lam @ sh.values)
    finals = ref + 2.0 * np.arange(n) * np.pi / n
    return ReachabilityReport(ref, interval, regime, lam, finals)


def _three_agent_weights(values: np.ndarray, target: float, theta0: np.ndarray):
    """Positive weights summing to 1 with weights @ values = target.

    Starts from mass on the two extreme shifted headings and moves along the
    one-parameter solution family to satisfy positivity and, when possible,
    the subgroup gain ordering for gains proportional to 1/weight. Returns
    (weights, ordering_satisfied).
    """
    order = np.argsort(values)
    i_lo, i_mid, i_hi = int(order[0]), int(order[1]), int(order[2])
    w = (target - values[i_lo]) / (values[i_hi] - values[i_lo])
    base = np.zeros(3)
    base[i_hi] = w
    base[i_lo] = 1.0 - w
    null = np.array(
        [values[1] - values[2], values[2] - values[0], values[0] - values[1]]
    )
    if null[i_mid] < 0.0:
        null = -null

    def bounds(lo, hi, coeff_s, const):
        # feasibility of const + s * coeff_s >= 0
        if coeff_s > 0.0:
            return max(lo, -const / coeff_s), hi
        if coeff_s < 0.0:
            return lo, min(hi, -const / coeff_s)
        return (lo, hi) if const >= 0.0 else (np.inf, -np.inf)

    s_lo, s_hi = -np.inf, np.inf
    for i in range(3):
        s_lo, s_hi = bounds(s_lo, s_hi, null[i], base[i])
    pos_lo, pos_hi = s_lo, s_hi

    pairs = []  # (i, j) meaning weight_i <= weight_j, i.e. K_i >= K_j
    try:
        part = partition_subgroups(theta0)
    except BalancedStartError:
        part = None
    if part is not None:
        for a, b in zip(part.subgroup1, part.subgroup1[1:]):
            pairs.append((a, b))
        for a, b in zip(part.subgroup2, part.subgroup2[1:]):
            pairs.append((b, a))
    for i, j in pairs:
        s_lo, s_hi = bounds(
            s_lo, s_hi, null[j] - null[i], base[j] - base[i]
        )
    if s_lo < s_hi:
        return base + 0.5 * (s_lo + s_hi) * null, True
    warnings.warn(
        "no weight choice satisfies the subgroup gain ordering for this "
        "target; returning positive gains that reproduce it anyway",
        stacklevel=3,
    )
    return base + 0.5 * (pos_lo + pos_hi) * null, False


def synthesize_gains(theta0, target: float, c: float = 1.0) -> GainVector:
    """Gains that steer agent 1 to ``target`` (radians, unwrapped).

    Targets strictly inside the open reachable interval yield all-positive
    gains c / weight_k. For two agents any other target is produced by a
    signed pair with positive sum 1/c, built in the frame where the larger
    shifted heading sits at zero. Interval endpoints are refused.
    """
    if not (np.isfinite(c) and c > 0.0):
        raise ValueError("scale c must be positive")
    th = _theta_array(theta0)
    n = th.size
    _require_small_n(n)
    if not np.isfinite(target):
        raise ValueError("target must be finite")
    sh = shifted_headings(th)
    lo, hi = sh.lo, sh.hi
    if hi - lo <= DEGENERATE_TOL:
        raise DegenerateHeadingsError(
            "all shifted headings coincide; no direction is steerable"
        )
    if abs(target - lo) <= ENDPOINT_TOL or abs(target - hi) <= ENDPOINT_TOL:
        raise TargetNotReachableError(
            "interval endpoints are not reachable: they would require a zero gain"
        )
    if lo < target < hi:
        if n == 2:
            i_hi = int(np.argmax(sh.values))
            i_lo = 1 - i_hi
            w = (target - lo) / (hi - lo)
            sigma = np.empty(2)
            sigma[i_hi] = w
            sigma[i_lo] = 1.0 - w
        else:
            sigma, _ = _three_agent_weights(sh.values, target, th)
        return GainVector(c / sigma, "all-positive")
    if n != 2:
        raise TargetNotReachableError(
            "targets outside the open interval need signed gains, available "
            "only for two agents"
        )
    i_hi = int(np.argmax(sh.values))
    i_lo = 1 - i_hi
    shift = sh.values[i_hi]  # rotate so the larger shifted heading is zero
    target_r = target - shift
    lo_r = lo - shift  # in (-pi, 0) for cyclic two-agent inputs
    gains = np.empty(2)
    if target_r < lo_r:
        alpha = (lo_r - target_r) / (-lo_r)
        gains[i_hi] = (1.0 + alpha) / c
        gains[i_lo] = -alpha / c
    else:
        beta = target_r / (-lo_r)
        gains[i_hi] = -beta / c
        gains[i_lo] = (1.0 + beta) / c
    return GainVector(gains, "sum-condition")


def perturbation_bounds(theta0, sigma: float) -> Interval:
    """Interval containing the steady direction under relative gain errors.

    With homogeneous gains perturbed agentwise by at most a fraction
    ``sigma`` (0 <= sigma < 1) and all shifted headings non-positive, the
    perturbed direction stays within the deviation band around the
    homogeneous mean, intersected with the open reachable interval.
    """
    th = _theta_array(theta0)
    _require_small_n(th.size)
    if not (0.0 <= sigma < 1.0):
        raise ValueError("sigma must lie in [0, 1)")
    sh = shifted_headings(th)
    if np.any(sh.values > DEGENERATE_TOL):
        raise AnalysisScopeError(
            "deviation bounds require all shifted initial headings to be "
            "non-positive"
        )
    if sh.hi - sh.lo <= DEGENERATE_TOL:
        raise DegenerateHeadingsError("all shifted headings coincide")
    mean = float(sh.values.mean())
    dev_lo = -(2.0 * sigma / (1.0 - sigma)) * mean
    dev_hi = -(2.0 * sigma / (1.0 + sigma)) * mean
    raw_lo = mean - dev_lo
    raw_hi = mean + dev_hi
    lo = max(raw_lo, sh.lo)
    hi = min(raw_hi, sh.hi)
    return Interval(lo, hi, raw_lo > sh.lo, raw_hi < sh.hi)


@dataclass(frozen=True)
class TwoAgentClosedForm:
    """Constants of the explicit two-agent heading solution."""

    kappa: float    # (K1 + K2) / 2
    phi0: float     # tan(delta0 / 2), delta0 = theta20 - theta10
    c2: float       # theta10 / K1 + theta20 / K2
    lambda1: float  # K2 / (K1 + K2)
    lambda2: float  # K1 / (K1 + K2)
    k1: float
    k2: float


def two_agent_closed_form(theta0, gains) -> TwoAgentClosedForm:
    """Build the closed-form constants for two agents.

    Requires both gains nonzero with positive sum, and an initial separation
    delta0 = theta20 - theta10 strictly inside (-pi, 0) or (0, pi): outside
    that range the principal arctangent branch no longer tracks the flow.
    """
    th = _theta_array(theta0, expected=2)
    g = as_gain_vector(gains).gains
    if g.size != 2:
        raise ValueError("exactly two gains required")
    k1, k2 = float(g[0]), float(g[1])
    if k1 == 0.0 or k2 == 0.0:
        raise ValueError("both gains must be nonzero")
    kappa = 0.5 * (k1 + k2)
    if kappa <= 0.0:
        raise ValueError("gain sum must be positive")
    delta0 = float(th[1] - th[0])
    if delta0 == 0.0:
        raise ValueError("agents start synchronized; the solution is trivial")
    if abs(delta0) >= np.pi:
        raise ValueError(
            "closed form requires an initial separation strictly inside "
            "(-pi, pi)"
        )
    return TwoAgentClosedForm(
        kappa=kappa,
        phi0=float(np.tan(0.5 * delta0)),
        c2=th[0] / k1 + th[1] / k2,
        lambda1=k2 / (k1 + k2),
        lambda2=k1 / (k1 + k2),
        k1=k1,
        k2=k2,
    )


def two_agent_headings(cf: TwoAgentClosedForm, t):
    """Headings (theta1(t), theta2(t)) of the explicit two-agent solution.

    The separation theta2 - theta1 equals 2*atan(phi0 * exp(kappa * t)) and
    tends to sign(phi0) * pi.
    """
    tt = np.asarray(t, dtype=float)
    with np.errstate(over="ignore"):
        a = 2.0 * np.arctan(cf.phi0 * np.exp(cf.kappa * tt))
    th1 = cf.lambda2 * (cf.k2 * cf.c2 - a)
    th2 = cf.lambda1 * (cf.k1 * cf.c2 + a)
    return th1, th2


@dataclass(frozen=True)
class ConvergencePoint:
    """Settled centroid of a balanced two-agent run."""

    x: float
    y: float
    offset_x: float  # displacement from the initial centroid
    offset_y: float
    quadrature_error: float


def _transformed_integrals(th, lam1, lam2, tol, max_depth):
    a0 = lam1 * th[0] + lam2 * th[1]
    dl = lam1 - lam2
    half = 0.5 * float(th[1] - th[0])

    def fx(xi):
        return np.cos(a0 + dl * xi) / np.sin(xi)

    def fy(xi):
        return np.sin(a0 + dl * xi) / np.sin(xi)

    q1, e1 = adaptive_simpson(fx, half, 0.5 * np.pi, tol, max_depth)
    q2, e2 = adaptive_simpson(fy, half, 0.5 * np.pi, tol, max_depth)
    return q1, q2, e1 + e2


def convergence_point(
    theta0,
    r0,
    gains,
    tol: float = QUADRATURE_TOL,
    max_depth: int = QUADRATURE_MAX_DEPTH,
) -> ConvergencePoint:
    """Settled centroid location for two agents with positive gain sum.

    The displacement integrals are evaluated after the substitution that
    maps time to the half-separation, leaving smooth integrands on the
    finite interval between delta0/2 and pi/2. Requires
    0 < delta0 = theta20 - theta10 < 2*pi; the synchronized limits are
    excluded because the centroid never settles there.
    """
    th = _theta_array(theta0, expected=2)
    pos = np.asarray(r0, dtype=float)
    if pos.shape != (2, 2):
        raise ValueError("r0 must contain two planar positions")
    if not np.all(np.isfinite(pos)):
        raise ValueError("positions must be finite")
    g = as_gain_vector(gains).gains
    if g.size != 2:
        raise ValueError("exactly two gains required")
    k1, k2 = float(g[0]), float(g[1])
    kappa = 0.5 * (k1 + k2)
    if kappa <= 0.0:
        raise ValueError("gain sum must be positive")
    delta0 = float(th[1] - th[0])
    if not (0.0 < delta0 < 2.0 * np.pi):
        raise ValueError(
            "need theta20 > theta10 with separation strictly inside (0, 2*pi)"
        )
    lam1 = k2 / (k1 + k2)
    lam2 = k1 / (k1 + k2)
    q1, q2, err = _transformed_integrals(th, lam1, lam2, tol, max_depth)
    ox = q1 / kappa
    oy = q2 / kappa
    cx = float(pos[:, 0].mean())
    cy = float(pos[:, 1].mean())
    return ConvergencePoint(cx + ox, cy + oy, ox, oy, err / kappa)


@dataclass(frozen=True)
class LocusLine:
    """Line traced by the convergence point as the gain magnitude sweeps at
    fixed gain ratio. ``slope`` is None when the line is vertical."""

    anchor: np.ndarray  # initial centroid, the limit point for large gains
    h1: float
    h2: float
    slope: float | None
    vertical: bool


def locus_line(
    theta0,
    r0,
    rho: float,
    tol: float = QUADRATURE_TOL,
    max_depth: int = QUADRATURE_MAX_DEPTH,
) -> LocusLine:
    """Locus of convergence points for gains (eta, eta/rho) at fixed rho.

    The line passes through the initial centroid with slope h2/h1, where h1
    and h2 are the direction integrals; eta only scales the distance along
    the line. rho = -1 makes the gain sum vanish for every eta and rho = 0
    has no finite second gain; both are rejected.
    """
    th = _theta_array(theta0, expected=2)
    pos = np.asarray(r0, dtype=float)
    if pos.shape != (2, 2) or not np.all(np.isfinite(pos)):
        raise ValueError("r0 must contain two finite planar positions")
    if not np.isfinite(rho) or rho == 0.0:
        raise ValueError("gain ratio rho must be finite and nonzero")
    if rho == -1.0:
        raise ValueError("rho = -1 makes the gain sum vanish for every eta")
    delta0 = float(th[1] - th[0])
    if not (0.0 < delta0 < 2.0 * np.pi):
        raise ValueError(
            "need theta20 > theta10 with separation strictly inside (0, 2*pi)"
        )
    lam1 = 1.0 / (1.0 + rho)
    lam2 = rho / (1.0 + rho)
    h1, h2, _ = _transformed_integrals(th, lam1, lam2, tol, max_depth)
    anchor = np.array([pos[:, 0].mean(), pos[:, 1].mean()])
    vertical = bool(abs(h1) <= 1e-9 * max(1.0, abs(h2)))
    slope = None if vertical else float(h2 / h1)
    return LocusLine(anchor, float(h1), float(h2), slope, vertical)
