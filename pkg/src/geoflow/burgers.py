"""The degenerate L2 (k = 0) case: u_t + 3 u u_x = 0 by characteristics.

Solutions follow foot points of the characteristic map xi -> xi + 3 u0(xi) t,
which stays monotone up to the gradient catastrophe at
T* = -1 / (3 min u0') (infinite when u0' >= 0).  A finite-difference probe
contrasts the rough k = 0 exponential with the smooth k >= 1 case.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rootfind import bracketed_newton
from .diffeo import CircleDiffeo
from .errors import PastBlowupError
from .explog import riemann_exp
from .spectral import (
    PeriodicField,
    derivative,
    evaluate_at,
    oversampled_range,
)


@dataclass
class CharacteristicSolution:
    """u(t, x) = u0(xi) with x = xi + 3 u0(xi) t solved per grid point."""

    u0: PeriodicField
    t: float
    foot_points: np.ndarray
    u_values: np.ndarray

    @property
    def field(self):
        return PeriodicField(self.u0.grid, self.u_values)


def _min_slope_refined(du, oversample=16):
    """Min of u0' over a refined grid with parabolic refinement at the argmin."""
    n = du.grid.n_points * oversample
    fine = np.fft.irfft(du.spectrum * n, n)
    i = int(np.argmin(fine))
    ym, y0, yp = fine[(i - 1) % n], fine[i], fine[(i + 1) % n]
    denom = ym - 2.0 * y0 + yp
    if abs(denom) < 1e-300:
        return float(y0)
    return float(y0 - (yp - ym) ** 2 / (8.0 * denom))


def blowup_time(u0):
    """Gradient-catastrophe time T* = -1/(3 min u0'), or +inf if u0' >= 0."""
    m = _min_slope_refined(derivative(u0))
    if m >= -1e-13:
        return float("inf")
    return -1.0 / (3.0 * m)


def detect_blowup_time(u0, t_max=10.0, rtol=1e-3, oversample=8):
    """First loss of monotonicity of the sampled characteristic map, by bisection.

    Independent of the analytic slope formula: only checks that consecutive
    samples of xi + 3 u0(xi) t stay increasing on a refined grid.
    """
    n = u0.grid.n_points * oversample
    xi = np.arange(n + 1) / n
    uvals = evaluate_at(u0, xi)

    def monotone(t):
        return bool(np.all(np.diff(xi + 3.0 * uvals * t) > 0.0))

    if monotone(t_max):
        return float("inf")
    lo, hi = 0.0, t_max
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if monotone(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _check_before_blowup(u0, t):
    tstar = blowup_time(u0)
    if t >= tstar:
        raise PastBlowupError(
            f"t = {t:.6g} is at or past the gradient catastrophe T* = {tstar:.6g}"
        )


def _foot_points(u0, t, targets, guess=None):
    """Solve x = xi + 3 t u0(xi) for xi at each target x (monotone lift)."""
    umin, umax = oversampled_range(u0)
    pad = 3.0 * abs(t) * 1e-2 * (umax - umin + 1e-9) + 1e-9
    lo = targets - 3.0 * t * umax - pad
    hi = targets - 3.0 * t * umin + pad
    du = derivative(u0)

    def res(xi):
        return xi + 3.0 * t * evaluate_at(u0, xi) - targets

    def dres(xi):
        return 1.0 + 3.0 * t * evaluate_at(du, xi)

    try:
        return bracketed_newton(res, dres, lo, hi, x0=guess, tol=1e-12)
    except RuntimeError as exc:
        raise PastBlowupError(
            f"characteristic solve failed near t = {t:.6g}: {exc}"
        ) from exc


def characteristics_solve(u0, t):
    """Exact-in-space solution of u_t + 3 u u_x = 0 at time t < T*."""
    t = float(t)
    _check_before_blowup(u0, t)
    targets = u0.grid.nodes
    xi = _foot_points(u0, t, targets)
    return CharacteristicSolution(
        u0=u0, t=t, foot_points=xi, u_values=evaluate_at(u0, xi)
    )


def evaluate_solution(u0, t, points, guess=None):
    """u(t, .) at arbitrary points via the characteristic map."""
    xi = _foot_points(u0, t, np.asarray(points, dtype=float), guess=guess)
    return evaluate_at(u0, xi), xi


def flow_map_k0(u0, t, n_steps=128):
    """Flow map of the L2 geodesic: RK4 on phi_t = u(t, phi), u by characteristics."""
    t = float(t)
    _check_before_blowup(u0, t)
    grid = u0.grid
    x = grid.nodes
    y = x.copy()
    h = t / max(1, int(n_steps))
    guess = x.copy()
    s = 0.0
    for _ in range(max(1, int(n_steps))):
        k1, guess = evaluate_solution(u0, s, y, guess)
        k2, _ = evaluate_solution(u0, s + 0.5 * h, y + 0.5 * h * k1, guess)
        k3, _ = evaluate_solution(u0, s + 0.5 * h, y + 0.5 * h * k2, guess)
        k4, _ = evaluate_solution(u0, s + h, y + h * k3, guess)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        s += h
    return CircleDiffeo(PeriodicField(grid, y - x))


@dataclass
class ProbeRow:
    direction_id: int
    h: float
    fd_norm: float
    ratio: float
    valid: bool


@dataclass
class ProbeReport:
    """h-dependence tables of finite-difference derivatives of exp."""

    k0_rows: list
    control_rows: list


def _fd_table(exp_fn, u0, directions, h_values):
    rows = []
    for j, w in enumerate(directions):
        prev = None
        for h in h_values:
            try:
                plus = exp_fn(u0 + h * w).displacement.values
                minus = exp_fn(u0 + (-h) * w).displacement.values
            except Exception:
                rows.append(ProbeRow(j, float(h), float("nan"), float("nan"), False))
                prev = None
                continue
            d = (plus - minus) / (2.0 * h)
            fd_norm = float(np.max(np.abs(d)))
            if prev is None:
                ratio = float("nan")
            else:
                ratio = float(np.max(np.abs(d - prev)) / max(fd_norm, 1e-300))
            rows.append(ProbeRow(j, float(h), fd_norm, ratio, True))
            prev = d
    return rows


def exp_c1_failure_probe(u0, directions, h_values, cfg, flow_steps=128,
                         control_k=1):
    """Finite-difference probes of the k = 0 exponential at time one.

    Reports the h-dependence of directional-derivative estimates (ratio of
    successive differences); the same probe at k = control_k converges and
    serves as the smooth control.  No pass/fail threshold is attached to the
    k = 0 table: it is a qualitative diagnostic.
    """
    def exp_k0(v):
        if blowup_time(v) <= 1.0:
            raise PastBlowupError("probe field breaks before t = 1")
        return flow_map_k0(v, 1.0, n_steps=flow_steps)

    def exp_control(v):
        return riemann_exp(control_k, v, cfg)

    return ProbeReport(
        k0_rows=_fd_table(exp_k0, u0, directions, h_values),
        control_rows=_fd_table(exp_control, u0, directions, h_values),
    )
