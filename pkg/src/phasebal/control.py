"""Steering control laws and gain admissibility checks.

All checks here are advisory: the simulator integrates any finite gain set
and the caller decides what to do with a violation report.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BalancedStartError
from .model import (
    GainVector,
    SwarmState,
    as_gain_vector,
    balancing_gradient,
    order_parameter,
    splay_gradient,
    wrap_angle,
)

# Angular tolerance on psi0 - theta_k0 = 0 when assigning agents to the
# reference axis; exact float equality would be meaningless.
ON_AXIS_TOL = 1e-9


@dataclass(frozen=True)
class ControlLaw:
    """A gradient steering law: balance or splay, with base turn rate omega0."""

    kind: str
    gains: GainVector
    omega0: float = 0.0

    def __post_init__(self):
        if self.kind not in ("balance", "splay"):
            raise ValueError(f"unknown control law kind: {self.kind!r}")
        if self.kind == "splay" and self.gains.n < 2:
            raise ValueError("splay law needs at least two agents")
        if not np.isfinite(self.omega0):
            raise ValueError("omega0 must be finite")

    @property
    def harmonics(self) -> int:
        """Number of harmonics the law acts on (derived, not stored)."""
        return self.gains.n // 2 if self.kind == "splay" else 1


def control_input(state: SwarmState, law: ControlLaw) -> np.ndarray:
    """Turn rates u_k = omega0 - K_k * dPotential/dtheta_k."""
    k = law.gains.gains
    if k.size != state.n:
        raise ValueError(
            f"gain count {k.size} does not match agent count {state.n}"
        )
    if law.kind == "splay":
        grad = splay_gradient(state.headings)
    else:
        grad = balancing_gradient(state.headings)
    return law.omega0 - k * grad


@dataclass(frozen=True)
class SubgroupPartition:
    """Agents split by which side of the initial order-parameter axis their
    velocity vector lies on. Indices are 0-based and the three sets are
    disjoint and cover all agents."""

    reference_psi: float
    subgroup1: tuple[int, ...]  # clockwise side: 0 < psi0 - theta_k0
    subgroup2: tuple[int, ...]  # anticlockwise side: psi0 - theta_k0 < 0
    on_axis: tuple[int, ...]


def partition_subgroups(
    initial_headings, on_axis_tol: float = ON_AXIS_TOL
) -> SubgroupPartition:
    """Partition agents about the initial order-parameter direction.

    Requires strictly increasing initial headings in (-pi, pi) so the unit
    velocity vectors sit in cyclic order. Raises BalancedStartError when the
    initial order parameter is too small to define a reference axis.
    """
    th = np.asarray(initial_headings, dtype=float)
    if th.ndim != 1 or th.size < 2:
        raise ValueError("need at least two initial headings")
    if not np.all(np.isfinite(th)):
        raise ValueError("initial headings must be finite")
    if np.any(th <= -np.pi) or np.any(th >= np.pi):
        raise ValueError("initial headings must lie in the open interval (-pi, pi)")
    if np.any(np.diff(th) <= 0):
        raise ValueError("initial headings must be strictly increasing")
    p = order_parameter(th)
    if not p.psi_defined:
        raise BalancedStartError(
            "initial arrangement is balanced; the reference axis is undefined"
        )
    d = wrap_angle(p.psi - th)
    on_axis = tuple(int(i) for i in np.flatnonzero(np.abs(d) <= on_axis_tol))
    sub1 = tuple(int(i) for i in np.flatnonzero(d > on_axis_tol))
    sub2 = tuple(int(i) for i in np.flatnonzero(d < -on_axis_tol))
    return SubgroupPartition(p.psi, sub1, sub2, on_axis)


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    condition: str
    detail: str = ""
    first_violation: tuple[int, int] | None = None


def validate_gain_ordering(
    partition: SubgroupPartition, gains
) -> ValidationResult:
    """Check the subgroup monotonicity the steady-direction results assume.

    Within subgroup 1 (ordered by increasing initial heading) the gains must
    be non-increasing and end nonnegative; within subgroup 2 they must be
    nonnegative and non-decreasing. On-axis gains are unconstrained.
    """
    g = as_gain_vector(gains).gains

    def chain(indices, decreasing):
        idx = sorted(indices)
        for a, b in zip(idx, idx[1:]):
            bad = g[a] < g[b] if decreasing else g[a] > g[b]
            if bad:
                rel = ">=" if decreasing else "<="
                return ValidationResult(
                    False,
                    "gain-ordering",
                    f"expected K[{a}] {rel} K[{b}], got {g[a]:g} and {g[b]:g}",
                    (a, b),
                )
        for i in idx:
            if g[i] < 0.0:
                return ValidationResult(
                    False,
                    "gain-ordering",
                    f"subgroup gain K[{i}] = {g[i]:g} is negative",
                    (i, i),
                )
        return None

    for indices, decreasing in ((partition.subgroup1, True), (partition.subgroup2, False)):
        bad = chain(indices, decreasing)
        if bad is not None:
            return bad
    return ValidationResult(True, "gain-ordering")


def validate_stability_condition(gains, mode: str) -> ValidationResult:
    """Check a sufficient stability condition on the gain vector.

    Modes: "all-positive" (every gain positive), "allow-zeros" (zeros for at
    most floor(n/2) agents, the rest positive), "two-agent-sum" (n = 2 and
    K1 + K2 > 0; raises for other n).
    """
    g = as_gain_vector(gains).gains
    n = g.size
    if mode == "all-positive":
        bad = np.flatnonzero(g <= 0.0)
        if bad.size:
            i = int(bad[0])
            return ValidationResult(
                False, mode, f"K[{i}] = {g[i]:g} is not positive", (i, i)
            )
        return ValidationResult(True, mode)
    if mode == "allow-zeros":
        zeros = int(np.count_nonzero(g == 0.0))
        neg = np.flatnonzero(g < 0.0)
        if neg.size:
            i = int(neg[0])
            return ValidationResult(
                False, mode, f"K[{i}] = {g[i]:g} is negative", (i, i)
            )
        if zeros > n // 2:
            return ValidationResult(
                False,
                mode,
                f"{zeros} zero gains exceed the floor(n/2) = {n // 2} limit",
            )
        return ValidationResult(True, mode)
    if mode == "two-agent-sum":
        if n != 2:
            raise ValueError("two-agent-sum condition applies only to n = 2")
        s = float(g[0]) + float(g[1])
        if s <= 0.0:
            return ValidationResult(False, mode, f"K1 + K2 = {s:g} is not positive")
        return ValidationResult(True, mode)
    raise ValueError(f"unknown validation mode: {mode!r}")


def circle_center(state: SwarmState, k: int, omega0: float) -> np.ndarray:
    """Center of the circular orbit agent k traverses at constant turn rate
    omega0: (x - sin(theta)/omega0, y + cos(theta)/omega0)."""
    if omega0 == 0.0:
        raise ValueError("omega0 = 0 gives straight-line motion with no finite orbit")
    x, y = state.positions[k]
    th = state.headings[k]
    return np.array([x - np.sin(th) / omega0, y + np.cos(th) / omega0])
