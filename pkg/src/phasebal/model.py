"""Core phase-model quantities: order parameters, potentials, gradients.

Headings are radians on the real line and are never reduced mod 2*pi here;
wrapping to (-pi, pi] is a presentation concern. The balancing potential is
(n/2)|p|^2 where p is the mean of the unit velocity vectors, and the splay
potential accumulates the same quantity over the first floor(n/2) harmonics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# |p| below this leaves the order-parameter phase undefined; gradient and
# Hessian formulas avoid the phase entirely so the threshold only gates
# reporting and subgroup partitioning.
PSI_UNDEFINED_THRESHOLD = 1e-9

# The rotational symmetry gives the balancing Hessian a structural zero
# eigenvalue; eigenvalues within EIG_TOL_PER_AGENT * n of zero are ignored
# when classifying critical points.
EIG_TOL_PER_AGENT = 1e-8


def wrap_angle(angle):
    """Wrap angles to (-pi, pi]."""
    a = np.asarray(angle, dtype=float)
    wrapped = np.pi - np.mod(np.pi - a, 2.0 * np.pi)
    return float(wrapped) if np.isscalar(angle) or wrapped.ndim == 0 else wrapped


def _headings_array(headings, min_agents: int = 2) -> np.ndarray:
    th = np.asarray(headings, dtype=float)
    if th.ndim != 1:
        raise ValueError("headings must be a one-dimensional sequence of angles")
    if th.size < min_agents:
        raise ValueError(f"need at least {min_agents} headings, got {th.size}")
    if not np.all(np.isfinite(th)):
        raise ValueError("headings must be finite")
    return th


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class SwarmState:
    """Positions and unwrapped headings of n agents at time t."""

    t: float
    positions: np.ndarray  # shape (n, 2)
    headings: np.ndarray  # shape (n,), radians on the real line

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        th = _headings_array(self.headings)
        if pos.ndim != 2 or pos.shape[1] != 2:
            raise ValueError("positions must have shape (n, 2)")
        if pos.shape[0] != th.size:
            raise ValueError("positions and headings must agree on the agent count")
        if not np.all(np.isfinite(pos)) or not np.isfinite(self.t):
            raise ValueError("state entries must be finite")
        object.__setattr__(self, "positions", _frozen(pos))
        object.__setattr__(self, "headings", _frozen(th))

    @property
    def n(self) -> int:
        return self.headings.size


@dataclass(frozen=True)
class GainVector:
    """Per-agent controller gains.

    ``checked_condition`` records which stability condition the vector was
    validated against: "all-positive", "allow-zeros", "sum-condition" or
    "unchecked". Validation lives in :mod:`phasebal.control`; the flag is
    bookkeeping only and never alters behaviour.
    """

    gains: np.ndarray
    checked_condition: str = "unchecked"

    def __post_init__(self):
        g = np.asarray(self.gains, dtype=float)
        if g.ndim != 1 or g.size == 0:
            raise ValueError("gains must be a non-empty one-dimensional sequence")
        if not np.all(np.isfinite(g)):
            raise ValueError("gains must be finite")
        object.__setattr__(self, "gains", _frozen(g))

    @property
    def n(self) -> int:
        return self.gains.size


def as_gain_vector(gains) -> GainVector:
    """Coerce an array-like or GainVector to a GainVector."""
    if isinstance(gains, GainVector):
        return gains
    return GainVector(np.asarray(gains, dtype=float))


@dataclass(frozen=True)
class OrderParameter:
    """Complex mean of m-fold wrapped unit velocity vectors, scaled by 1/m.

    ``psi`` is reported as 0.0 and ``psi_defined`` is False whenever the
    magnitude falls below PSI_UNDEFINED_THRESHOLD; consumers must not feed
    an undefined phase into a control law.
    """

    re: float
    im: float
    magnitude: float
    psi: float
    harmonic: int
    psi_defined: bool

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)


def order_parameter(headings, harmonic: int = 1) -> OrderParameter:
    """Return (1/(m*n)) * sum_k exp(i*m*theta_k) with magnitude and phase."""
    th = np.asarray(headings, dtype=float)
    if th.ndim != 1 or th.size == 0:
        raise ValueError("at least one heading is required")
    if not np.all(np.isfinite(th)):
        raise ValueError("headings must be finite")
    m = int(harmonic)
    if m < 1:
        raise ValueError("harmonic index must be a positive integer")
    z = np.exp(1j * m * th).sum() / (m * th.size)
    mag = float(abs(z))
    defined = mag >= PSI_UNDEFINED_THRESHOLD
    psi = float(np.angle(z)) if defined else 0.0
    return OrderParameter(float(z.real), float(z.imag), mag, psi, m, defined)


@dataclass(frozen=True)
class PotentialValue:
    """Nonnegative potential with its kind, "balance" or "splay"."""

    value: float
    kind: str


def _harmonic_potential(th: np.ndarray, m: int) -> float:
    # (n/2) |p_m|^2 for a single harmonic
    p = order_parameter(th, m)
    return 0.5 * th.size * (p.re * p.re + p.im * p.im)


def balancing_potential(headings) -> PotentialValue:
    """Potential (n/2)|p|^2, zero exactly on balanced arrangements and at
    most n/2 (attained at synchrony)."""
    th = _headings_array(headings)
    return PotentialValue(_harmonic_potential(th, 1), "balance")


def splay_potential(headings) -> PotentialValue:
    """Sum of the harmonic potentials for m = 1 .. floor(n/2); zero exactly
    on the splay arrangement."""
    th = _headings_array(headings)
    total = 0.0
    for m in range(1, th.size // 2 + 1):
        total += _harmonic_potential(th, m)
    return PotentialValue(total, "splay")


def balancing_gradient(headings) -> np.ndarray:
    """Gradient of the balancing potential.

    Component k equals Re(conj(p) * i * exp(i*theta_k)), which is
    (1/n) sum_j sin(theta_j - theta_k); no order-parameter phase is needed,
    so the expression stays well defined as p approaches zero.
    """
    th = _headings_array(headings)
    z = np.exp(1j * th)
    p = z.mean()
    return np.real(np.conj(p) * 1j * z)


def splay_gradient(headings) -> np.ndarray:
    """Gradient of the splay potential: the balancing expression summed over
    the first floor(n/2) harmonics."""
    th = _headings_array(headings)
    grad = np.zeros(th.size)
    for m in range(1, th.size // 2 + 1):
        zm = np.exp(1j * m * th)
        pm = zm.mean() / m
        grad = grad + np.real(np.conj(pm) * 1j * zm)
    return grad


def balancing_hessian(headings) -> np.ndarray:
    """Symmetric Hessian of the balancing potential.

    Diagonal entries are 1/n - Re(conj(p) * exp(i*theta_k)); off-diagonal
    entries are cos(theta_j - theta_k)/n.
    """
    th = _headings_array(headings)
    n = th.size
    z = np.exp(1j * th)
    p = z.mean()
    h = np.cos(th[None, :] - th[:, None]) / n
    np.fill_diagonal(h, 1.0 / n - np.real(np.conj(p) * z))
    return h


def classify_critical_point(headings, tol: float = 1e-9) -> str:
    """Classify a configuration of the balancing potential.

    Returns "not-critical" when the gradient sup-norm exceeds ``tol``;
    otherwise classifies by the signs of the Hessian eigenvalues, ignoring
    the rotational zero mode (eigenvalues within EIG_TOL_PER_AGENT * n of
    zero).
    """
    th = _headings_array(headings)
    grad = balancing_gradient(th)
    if np.max(np.abs(grad)) > tol:
        return "not-critical"
    eig = np.linalg.eigvalsh(balancing_hessian(th))
    eig_tol = EIG_TOL_PER_AGENT * th.size
    has_pos = bool(np.any(eig > eig_tol))
    has_neg = bool(np.any(eig < -eig_tol))
    if has_pos and has_neg:
        return "saddle"
    if has_neg:
        return "maximum"
    return "minimum"
