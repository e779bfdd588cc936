"""Riemannian exponential map, its directional derivative, and the logarithm.

The exponential is the time-one geodesic flow from the identity.  The
logarithm inverts it near the identity by damped Newton shooting over a
truncated Fourier parameterization of the unknown initial velocity; the
Jacobian columns are finite-difference directional derivatives of exp.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .diffeo import invert
from .errors import LogConvergenceError
from .geodesic import SolverConfig, integrate_geodesic
from .spectral import (
    TWO_PI,
    PeriodicField,
    evaluate_at,
    norm_k,
    validate_order,
)


@dataclass
class ExpConfig:
    """Integration and shooting parameters for exp/log computations."""

    solver: SolverConfig
    fd_step: float = 1e-4
    newton_tol: float = 1e-10
    newton_max_iter: int = 30
    shooting_modes: int = 0  # 0 means the grid default 2*max_mode + 1
    trust_radius: float = 0.1

    def __post_init__(self):
        if not 1e-6 <= self.fd_step <= 1e-2:
            raise ValueError("fd_step must lie in [1e-6, 1e-2]")
        if self.shooting_modes == 0:
            self.shooting_modes = 2 * self.solver.grid.max_mode + 1
        if self.shooting_modes < 1:
            raise ValueError("shooting_modes must be positive")

    def geodesic_config(self, k):
        return self.solver.with_(k=validate_order(k), t_end=1.0)


def riemann_exp(k, u0, cfg):
    """Riemannian exponential exp(u0) = phi(1; u0).

    Propagates BlowupError when u0 lies outside the domain of definition.
    """
    traj = integrate_geodesic(u0, cfg.geodesic_config(k))
    return traj.final.phi


def d_exp(k, u0, w, cfg):
    """Directional derivative of exp at u0 by central finite differences."""
    h = cfg.fd_step
    plus = riemann_exp(k, u0 + h * w, cfg).displacement
    minus = riemann_exp(k, u0 - h * w, cfg).displacement
    return PeriodicField(u0.grid, (plus.values - minus.values) / (2.0 * h))


def _n_coeffs_to_modes(n_coeffs):
    """Largest mode M with 2M + 1 <= n_coeffs."""
    return max(0, (int(n_coeffs) - 1) // 2)


def _coeffs_to_field(grid, coeffs):
    """Real coefficient vector [a0, a1, b1, ..., aM, bM] -> field."""
    M = _n_coeffs_to_modes(len(coeffs))
    spec = np.zeros(grid.n_points // 2 + 1, dtype=complex)
    spec[0] = coeffs[0]
    for m in range(1, M + 1):
        a = coeffs[2 * m - 1]
        b = coeffs[2 * m]
        spec[m] = 0.5 * (a - 1j * b)
    return PeriodicField.from_spectrum(grid, spec)


def _field_to_coeffs(u, M):
    spec = u.spectrum
    out = np.empty(2 * M + 1)
    out[0] = spec[0].real
    for m in range(1, M + 1):
        out[2 * m - 1] = 2.0 * spec[m].real
        out[2 * m] = -2.0 * spec[m].imag
    return out


def _basis_field(grid, i, M):
    e = np.zeros(2 * M + 1)
    e[i] = 1.0
    return _coeffs_to_field(grid, e)


@dataclass
class LogResult:
    """Shooting solution with its convergence trace."""

    u0: PeriodicField
    residuals: list = field(default_factory=list)
    iterations: int = 0


def riemann_log(k, psi, cfg, full_output=False):
    """Inverse of the exponential near the identity by Newton shooting.

    The unknown initial velocity is parameterized by its first
    cfg.shooting_modes Fourier coefficients; the residual is the
    displacement of exp(u0) o psi^{-1}, driven below cfg.newton_tol in
    sup-norm.  Raises LogConvergenceError outside the trust region or when
    Newton stalls.
    """
    k = validate_order(k)
    grid = psi.grid
    disp_sup = float(np.max(np.abs(psi.displacement.values)))
    if disp_sup > cfg.trust_radius:
        raise LogConvergenceError(
            f"psi displacement sup-norm {disp_sup:.3g} exceeds trust radius "
            f"{cfg.trust_radius:.3g}"
        )
    M = _n_coeffs_to_modes(cfg.shooting_modes)
    dim = 2 * M + 1
    inv_psi = invert(psi)
    inv_pts = inv_psi.points

    def residual_field(coeffs):
        u0 = _coeffs_to_field(grid, coeffs)
        phi = riemann_exp(k, u0, cfg)
        # displacement of exp(u0) o psi^{-1}
        g = evaluate_at(phi.displacement, inv_pts) + inv_psi.displacement.values
        return u0, PeriodicField(grid, g)

    coeffs = _field_to_coeffs(psi.displacement, M)
    u0, res = residual_field(coeffs)
    res_sup = float(np.max(np.abs(res.values)))
    trace = [res_sup]

    it = 0
    while res_sup > cfg.newton_tol:
        if it >= cfg.newton_max_iter:
            raise LogConvergenceError(
                f"no convergence in {cfg.newton_max_iter} iterations "
                f"(residual {res_sup:.3g}); psi may lie outside the "
                "invertibility neighborhood"
            )
        jac = np.empty((dim, dim))
        for i in range(dim):
            col = d_exp(k, u0, _basis_field(grid, i, M), cfg)
            col_vals = evaluate_at(col, inv_pts)
            jac[:, i] = _field_to_coeffs(PeriodicField(grid, col_vals), M)
        rhs = -_field_to_coeffs(res, M)
        delta = np.linalg.solve(jac, rhs)

        lam = 1.0
        while True:
            trial = coeffs + lam * delta
            u0_new, res_new = residual_field(trial)
            new_sup = float(np.max(np.abs(res_new.values)))
            if new_sup <= (1.0 - 0.5 * lam) * res_sup or lam < 1.0 / 64.0:
                break
            lam *= 0.5
        coeffs, u0, res, res_sup = trial, u0_new, res_new, new_sup
        trace.append(res_sup)
        it += 1

    if full_output:
        return LogResult(u0=u0, residuals=trace, iterations=it)
    return u0
