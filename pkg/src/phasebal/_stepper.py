"""Fixed-step integration kernel, JIT compiled for throughput.

The turn-rate expression is the pairwise-sine form of the gradient laws:
u_k = omega0 - (K_k / n) * sum_j sum_m (1/m) sin(m (theta_j - theta_k)),
with the harmonic count 1 for the balancing law and floor(n/2) for the
splay law. Loop order is fixed so traces are bit-identical across runs.
"""

import numpy as np
from numba import njit

# status codes returned by integrate()
HORIZON = 0
CONVERGED = 1
NONFINITE = 2


@njit(cache=True)
def _turn_rates(theta, gains, omega0, harmonics, out):
    n = theta.shape[0]
    for k in range(n):
        acc = 0.0
        for m in range(1, harmonics + 1):
            s = 0.0
            for j in range(n):
                s += np.sin(m * (theta[j] - theta[k]))
            acc += s / m
        out[k] = omega0 - gains[k] * acc / n


@njit(cache=True)
def _order_magnitude(theta):
    n = theta.shape[0]
    c = 0.0
    s = 0.0
    for j in range(n):
        c += np.cos(theta[j])
        s += np.sin(theta[j])
    return np.sqrt(c * c + s * s) / n


@njit(cache=True)
def _splay_grad_sup(theta, harmonics):
    n = theta.shape[0]
    worst = 0.0
    for k in range(n):
        g = 0.0
        for m in range(1, harmonics + 1):
            s = 0.0
            for j in range(n):
                s += np.sin(m * (theta[j] - theta[k]))
            g += s / (m * n)
        a = abs(g)
        if a > worst:
            worst = a
    return worst


@njit(cache=True)
def integrate(
    theta0,
    x0,
    y0,
    gains,
    omega0,
    harmonics,
    dt,
    n_steps,
    stride,
    tol,
    use_rk4,
    grad_criterion,
):
    """Integrate the closed loop, recording every ``stride`` steps.

    Returns (ts, thetas, xs, ys, us, p_mags, crits, n_rec, status, stop_step).
    Convergence is evaluated at recorded samples only: on the splay-gradient
    sup norm when grad_criterion is true, else on the order-parameter
    magnitude.
    """
    n = theta0.shape[0]
    max_rec = n_steps // stride + 2
    ts = np.empty(max_rec)
    thetas = np.empty((max_rec, n))
    xs = np.empty((max_rec, n))
    ys = np.empty((max_rec, n))
    us = np.empty((max_rec, n))
    p_mags = np.empty(max_rec)
    crits = np.empty(max_rec)

    theta = theta0.copy()
    x = x0.copy()
    y = y0.copy()
    u = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    stage = np.empty(n)

    n_rec = 0
    status = HORIZON
    stop_step = n_steps
    step = 0
    while True:
        if step % stride == 0 or step == n_steps:
            finite = True
            for i in range(n):
                if not (
                    np.isfinite(theta[i]) and np.isfinite(x[i]) and np.isfinite(y[i])
                ):
                    finite = False
                    break
            if not finite:
                status = NONFINITE
                stop_step = step
                break
            _turn_rates(theta, gains, omega0, harmonics, u)
            pm = _order_magnitude(theta)
            if grad_criterion:
                crit = _splay_grad_sup(theta, harmonics)
            else:
                crit = pm
            ts[n_rec] = step * dt
            for i in range(n):
                thetas[n_rec, i] = theta[i]
                xs[n_rec, i] = x[i]
                ys[n_rec, i] = y[i]
                us[n_rec, i] = u[i]
            p_mags[n_rec] = pm
            crits[n_rec] = crit
            n_rec += 1
            if crit < tol:
                status = CONVERGED
                stop_step = step
                break
            if step >= n_steps:
                status = HORIZON
                stop_step = step
                break
        if use_rk4:
            _turn_rates(theta, gains, omega0, harmonics, u)  # k1
            for i in range(n):
                stage[i] = theta[i] + 0.5 * dt * u[i]
            _turn_rates(stage, gains, omega0, harmonics, k2)
            dx = np.cos(theta) + 2.0 * np.cos(stage)
            dy = np.sin(theta) + 2.0 * np.sin(stage)
            for i in range(n):
                stage[i] = theta[i] + 0.5 * dt * k2[i]
            _turn_rates(stage, gains, omega0, harmonics, k3)
            dx += 2.0 * np.cos(stage)
            dy += 2.0 * np.sin(stage)
            for i in range(n):
                stage[i] = theta[i] + dt * k3[i]
            _turn_rates(stage, gains, omega0, harmonics, k4)
            dx += np.cos(stage)
            dy += np.sin(stage)
            for i in range(n):
                theta[i] += dt / 6.0 * (u[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
                x[i] += dt / 6.0 * dx[i]
                y[i] += dt / 6.0 * dy[i]
        else:
            _turn_rates(theta, gains, omega0, harmonics, u)
            for i in range(n):
                x[i] += dt * np.cos(theta[i])
                y[i] += dt * np.sin(theta[i])
                theta[i] += dt * u[i]
        step += 1
    return ts, thetas, xs, ys, us, p_mags, crits, n_rec, status, stop_step
