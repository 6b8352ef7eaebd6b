"""Independent oracles and scenario generators shared by the test modules."""

import numpy as np

from phasebal import (
    ControlLaw,
    GainVector,
    IntegratorSettings,
    Scenario,
    SwarmState,
    order_parameter,
    partition_subgroups,
    simulate,
)


def fd_gradient(f, x, h=1e-5):
    """Centered finite-difference gradient of a scalar function."""
    x = np.asarray(x, dtype=float)
    g = np.empty(x.size)
    for i in range(x.size):
        e = np.zeros(x.size)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2.0 * h)
    return g


def fd_hessian(f, x, h=1e-4):
    """Centered finite-difference Hessian of a scalar function."""
    x = np.asarray(x, dtype=float)
    n = x.size
    hess = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            ei = np.zeros(n)
            ej = np.zeros(n)
            ei[i] = h
            ej[j] = h
            hess[i, j] = (
                f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)
            ) / (4.0 * h * h)
    return hess


def pairwise_gradient(theta):
    """Balancing gradient via the pairwise-sine route (independent oracle)."""
    th = np.asarray(theta, dtype=float)
    return np.sin(th[None, :] - th[:, None]).sum(axis=1) / th.size


def random_cyclic_headings(rng, n, min_gap_deg=4.0, min_p=5e-3):
    """Strictly increasing headings in (-pi, pi), not initially balanced."""
    gap = np.deg2rad(min_gap_deg)
    while True:
        th = np.sort(rng.uniform(-0.95 * np.pi, 0.95 * np.pi, n))
        if np.min(np.diff(th)) < gap:
            continue
        if order_parameter(th).magnitude < min_p:
            continue
        return th


def ordered_gains(rng, theta0, lo=0.8, hi=4.0):
    """Positive gains obeying the subgroup monotonicity for theta0."""
    part = partition_subgroups(theta0)
    g = np.empty(len(theta0))
    sub1 = np.sort(rng.uniform(lo, hi, len(part.subgroup1)))[::-1]
    for idx, val in zip(part.subgroup1, sub1):
        g[idx] = val
    sub2 = np.sort(rng.uniform(lo, hi, len(part.subgroup2)))
    for idx, val in zip(part.subgroup2, sub2):
        g[idx] = val
    for idx in part.on_axis:
        g[idx] = rng.uniform(lo, hi)
    return g


def run(theta0, gains, *, omega0=0.0, law="balance", positions=None, **settings):
    """Simulate a scenario assembled from raw arrays."""
    th = np.asarray(theta0, dtype=float)
    if positions is None:
        positions = np.stack([2.0 * np.arange(th.size), np.zeros(th.size)], axis=1)
    state = SwarmState(0.0, positions, th)
    law_obj = ControlLaw(law, GainVector(np.asarray(gains, dtype=float)), omega0)
    return simulate(Scenario(state, law_obj, IntegratorSettings(**settings)))


def winding(wrapped_headings):
    """Turns made when visiting agents in index order around the circle.

    1.0 means the final arrangement preserves the initial cyclic order of
    agents sorted by heading.
    """
    th = np.asarray(wrapped_headings, dtype=float)
    gaps = np.mod(np.roll(th, -1) - th, 2.0 * np.pi)
    return gaps.sum() / (2.0 * np.pi)
