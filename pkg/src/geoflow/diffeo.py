"""Orientation-preserving circle diffeomorphisms as identity-plus-displacement.

A diffeomorphism phi is stored through its periodic displacement f with
phi(x) = x + f(x) mod 1; its lift F(x) = x + f(x) satisfies F(x+1) = F(x)+1
and validity means min(1 + f') > 0.
"""

from __future__ import annotations

import numpy as np

from ._rootfind import bracketed_newton
from .errors import DegenerateDiffeoError, InversionError
from .spectral import (
    PeriodicField,
    check_same_grid,
    derivative,
    evaluate_at,
    oversampled_range,
)


class CircleDiffeo:
    """Circle diffeomorphism phi(x) = x + f(x) with periodic displacement f."""

    __slots__ = ("displacement",)

    def __init__(self, displacement, check=True):
        if check:
            slope = 1.0 + derivative(displacement).values
            m = float(np.min(slope))
            if m <= 0.0:
                raise DegenerateDiffeoError(
                    f"min(1 + f_x) = {m:.3g} <= 0: not orientation-preserving"
                )
        self.displacement = displacement

    @property
    def grid(self):
        return self.displacement.grid

    @property
    def points(self):
        """Images phi(x_j) of the grid nodes on the lift (not reduced mod 1)."""
        return self.grid.nodes + self.displacement.values

    def min_slope(self):
        return float(np.min(1.0 + derivative(self.displacement).values))

    def __repr__(self):
        return (
            f"CircleDiffeo(n={self.grid.n_points}, "
            f"sup|f|~{np.max(np.abs(self.displacement.values)):.3g})"
        )


def identity_diffeo(grid):
    return CircleDiffeo(PeriodicField.zero(grid), check=False)


def rotation(grid, angle):
    """Rigid rotation x -> x + angle mod 1."""
    return CircleDiffeo(PeriodicField.constant(grid, angle), check=False)


def compose(phi, psi):
    """Group product phi o psi, re-sampled on the common grid.

    Displacement: g(x) = f_phi(psi(x)) + f_psi(x), with f_phi evaluated by
    trigonometric interpolation.
    """
    check_same_grid(phi.displacement, psi.displacement)
    g = evaluate_at(phi.displacement, psi.points) + psi.displacement.values
    return CircleDiffeo(PeriodicField(phi.grid, g))


def invert(phi, tol=1e-12, max_iter=50):
    """Inverse diffeomorphism by per-node solves of phi(y) = x on the lift."""
    grid = phi.grid
    x = grid.nodes
    f = phi.displacement
    fx = derivative(f)
    fmin, fmax = oversampled_range(f)
    pad = 1e-2 * (fmax - fmin) + 1e-9
    lo = x - fmax - pad
    hi = x - fmin + pad

    def res(y):
        return y + evaluate_at(f, y) - x

    def dres(y):
        return 1.0 + evaluate_at(fx, y)

    try:
        y = bracketed_newton(res, dres, lo, hi, x0=x - f.values, tol=tol,
                             max_iter=max_iter)
    except RuntimeError as exc:
        raise InversionError(str(exc)) from exc
    return CircleDiffeo(PeriodicField(grid, y - x))


def right_translate(u, eta):
    """Right translation of a velocity field: u o eta."""
    check_same_grid(u, eta.displacement)
    return PeriodicField(u.grid, evaluate_at(u, eta.points))


def jacobian(phi):
    """phi_x = 1 + f_x, computed spectrally; strictly positive for valid maps."""
    return PeriodicField(phi.grid, 1.0 + derivative(phi.displacement).values)
