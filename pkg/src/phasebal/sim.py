"""Deterministic fixed-step integration of the closed loop with trace capture.

A run terminates at the first recorded sample whose convergence functional
falls below ``balance_tol`` (order-parameter magnitude for the balancing
law, splay-gradient sup norm for the splay law) or at the horizon. Headings
are never wrapped. Identical inputs produce bit-identical traces.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import _stepper
from .control import ControlLaw
from .errors import SimulationDivergedError
from .model import PSI_UNDEFINED_THRESHOLD, SwarmState

_METHODS = ("rk4", "euler")


@dataclass(frozen=True)
class IntegratorSettings:
    dt: float = 1e-3
    t_max: float = 200.0
    method: str = "rk4"
    balance_tol: float = 1e-6
    record_stride: int = 1

    def __post_init__(self):
        if not (np.isfinite(self.dt) and self.dt > 0.0):
            raise ValueError("dt must be positive and finite")
        if not (np.isfinite(self.t_max) and self.t_max >= self.dt):
            raise ValueError("t_max must be at least one step")
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}")
        if not (np.isfinite(self.balance_tol) and self.balance_tol > 0.0):
            raise ValueError("balance_tol must be positive")
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            raise ValueError("record_stride must be a positive integer")


@dataclass(frozen=True)
class Scenario:
    """Initial state, control law and integrator settings for one run."""

    initial: SwarmState
    law: ControlLaw
    settings: IntegratorSettings = IntegratorSettings()


@dataclass(frozen=True)
class SimulationTrace:
    """Recorded samples of one run.

    ``conserved`` is the per-sample sum of theta_k / K_k and is present only
    when every gain is nonzero. ``frame`` is "rotating" after a
    rotating-frame transform, in which case positions are artifacts of the
    original inertial frame.
    """

    t: np.ndarray            # (s,)
    headings: np.ndarray     # (s, n), unwrapped
    positions: np.ndarray    # (s, n, 2)
    u: np.ndarray            # (s, n)
    p_mag: np.ndarray        # (s,)
    psi: np.ndarray          # (s,), 0.0 where undefined
    psi_defined: np.ndarray  # (s,), bool
    centroid: np.ndarray     # (s, 2)
    conserved: np.ndarray | None
    outcome: str             # "converged" or "horizon"
    t_converged: float | None
    law: ControlLaw
    settings: IntegratorSettings
    frame: str = "inertial"

    @property
    def n_samples(self) -> int:
        return self.t.size

    @property
    def n_agents(self) -> int:
        return self.headings.shape[1]

    def state_at(self, i: int) -> SwarmState:
        return SwarmState(float(self.t[i]), self.positions[i], self.headings[i])

    def final_state(self) -> SwarmState:
        return self.state_at(self.n_samples - 1)


def _derived_channels(t, headings, gains):
    z = np.exp(1j * headings).mean(axis=1)
    psi_defined = np.abs(z) >= PSI_UNDEFINED_THRESHOLD
    psi = np.where(psi_defined, np.angle(z), 0.0)
    conserved = None
    if np.all(gains != 0.0):
        conserved = headings @ (1.0 / gains)
    return psi, psi_defined, conserved


def simulate(scenario: Scenario) -> SimulationTrace:
    """Integrate the scenario and capture a trace.

    Raises SimulationDivergedError when a non-finite state is encountered,
    reporting the offending step and the last good sample.
    """
    st = scenario.initial
    law = scenario.law
    cfg = scenario.settings
    gains = law.gains.gains
    if gains.size != st.n:
        raise ValueError(
            f"gain count {gains.size} does not match agent count {st.n}"
        )
    n_steps = max(1, int(round(cfg.t_max / cfg.dt)))
    ts, th, xs, ys, us, pm, crits, n_rec, status, stop_step = _stepper.integrate(
        st.headings.copy(),
        st.positions[:, 0].copy(),
        st.positions[:, 1].copy(),
        gains.copy(),
        float(law.omega0),
        law.harmonics,
        float(cfg.dt),
        n_steps,
        int(cfg.record_stride),
        float(cfg.balance_tol),
        cfg.method == "rk4",
        law.kind == "splay",
    )
    t = np.ascontiguousarray(ts[:n_rec])
    headings = np.ascontiguousarray(th[:n_rec])
    positions = np.stack(
        [np.ascontiguousarray(xs[:n_rec]), np.ascontiguousarray(ys[:n_rec])], axis=2
    )
    u = np.ascontiguousarray(us[:n_rec])
    p_mag = np.ascontiguousarray(pm[:n_rec])
    if status == _stepper.NONFINITE:
        last = SwarmState(float(t[-1]), positions[-1], headings[-1])
        raise SimulationDivergedError(stop_step, stop_step * cfg.dt, last)
    psi, psi_defined, conserved = _derived_channels(t, headings, gains)
    centroid = positions.mean(axis=1)
    converged = status == _stepper.CONVERGED
    return SimulationTrace(
        t=t,
        headings=headings,
        positions=positions,
        u=u,
        p_mag=p_mag,
        psi=psi,
        psi_defined=psi_defined,
        centroid=centroid,
        conserved=conserved,
        outcome="converged" if converged else "horizon",
        t_converged=float(t[-1]) if converged else None,
        law=law,
        settings=cfg,
    )


def rotating_frame(trace: SimulationTrace, omega0: float) -> SimulationTrace:
    """Re-express headings in a frame rotating at omega0.

    Headings become theta_k(t) - omega0 * t and turn rates drop by omega0.
    Positions are kept as recorded; they belong to the original frame and the
    returned trace is flagged accordingly. Derived channels are recomputed
    from the transformed headings.
    """
    if omega0 == 0.0:
        return trace
    headings = trace.headings - omega0 * trace.t[:, None]
    u = trace.u - omega0
    z = np.exp(1j * headings).mean(axis=1)
    p_mag = np.abs(z)
    psi, psi_defined, conserved = _derived_channels(
        trace.t, headings, trace.law.gains.gains
    )
    return replace(
        trace,
        headings=headings,
        u=u,
        p_mag=p_mag,
        psi=psi,
        psi_defined=psi_defined,
        conserved=conserved,
        frame="rotating",
    )


def detect_steady_headings(trace: SimulationTrace) -> np.ndarray:
    """Final-sample headings of a converged run.

    Also checks that the final turn rates have settled: away from the base
    rotation they can be at most max|K| times the convergence threshold.
    """
    if trace.outcome != "converged":
        raise ValueError("steady headings are defined only for converged runs")
    base = 0.0 if trace.frame == "rotating" else trace.law.omega0
    residual = float(np.max(np.abs(trace.u[-1] - base)))
    bound = float(np.max(np.abs(trace.law.gains.gains))) * trace.settings.balance_tol
    bound *= 1.0 + 1e-9
    if residual > bound:
        raise RuntimeError(
            f"final turn rates not settled: residual {residual:g} exceeds {bound:g}"
        )
    return trace.headings[-1].copy()
