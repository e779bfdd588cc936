"""Vectorized safeguarded Newton for monotone scalar equations."""

from __future__ import annotations

import numpy as np


def bracketed_newton(f, df, lo, hi, x0=None, tol=1e-12, max_iter=50):
    """Solve f(y) = 0 componentwise for increasing f with f(lo) <= 0 <= f(hi).

    Newton steps are clipped to the bracket; a step that escapes it or hits a
    small derivative falls back to bisection.  Returns the solution array or
    raises RuntimeError after max_iter iterations.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    y = 0.5 * (lo + hi) if x0 is None else np.clip(np.asarray(x0, float), lo, hi)
    for _ in range(max_iter):
        fy = f(y)
        if np.max(np.abs(fy)) < tol:
            return y
        neg = fy <= 0.0
        lo = np.where(neg, y, lo)
        hi = np.where(neg, hi, y)
        d = df(y)
        safe = np.abs(d) > 1e-14
        step = fy / np.where(safe, d, 1.0)
        y_new = y - step
        bad = ~safe | ~np.isfinite(y_new) | (y_new <= lo) | (y_new >= hi)
        y = np.where(bad, 0.5 * (lo + hi), y_new)
    raise RuntimeError(
        f"bracketed Newton did not reach |f| < {tol} in {max_iter} iterations "
        f"(residual {np.max(np.abs(f(y))):.3g})"
    )
