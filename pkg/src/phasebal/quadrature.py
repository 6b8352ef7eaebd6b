"""Adaptive Simpson quadrature on a finite interval."""

from __future__ import annotations


def _simpson(fa, fm, fb, h):
    return h * (fa + 4.0 * fm + fb) / 6.0


def _refine(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(fa, flm, fm, m - a)
    right = _simpson(fm, frm, fb, b - m)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0, abs(delta) / 15.0
    lv, le = _refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
    rv, re = _refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    return lv + rv, le + re


def adaptive_simpson(f, a, b, tol: float = 1e-10, max_depth: int = 40):
    """Integrate f from a to b (oriented) to absolute tolerance ``tol``.

    Returns (value, error_estimate). Subdivision stops at ``max_depth``
    bisection levels.
    """
    if a == b:
        return 0.0, 0.0
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0
    fa = f(a)
    m = 0.5 * (a + b)
    fm = f(m)
    fb = f(b)
    whole = _simpson(fa, fm, fb, b - a)
    value, err = _refine(f, a, b, fa, fm, fb, whole, tol, max_depth)
    return sign * value, err
