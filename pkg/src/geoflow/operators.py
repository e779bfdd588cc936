"""Lie-algebraic and metric operators on periodic velocity fields.

All operators act on tangent vectors at the identity; products are dealiased
so that the adjoint-identity test stays meaningful at finite resolution.
"""

from __future__ import annotations

from .spectral import (
    apply_inertia,
    check_same_grid,
    derivative,
    invert_inertia,
    multiply,
    validate_order,
)


def lie_bracket(u, v):
    """Vector-field bracket [u, v] = -(u_x v - u v_x)."""
    check_same_grid(u, v)
    return multiply(u, derivative(v)) - multiply(derivative(u), v)


def bilinear_B(k, u, v):
    """B_k(u, v) = -A_k^{-1}( 2 v_x A_k(u) + v A_k(u_x) ).

    The defining property is <B_k(u,v), w>_k = <u, [v,w]>_k.  A_k(u_x) is
    computed as (A_k u)_x, valid since A_k has constant coefficients.
    """
    k = validate_order(k)
    check_same_grid(u, v)
    Au = apply_inertia(k, u)
    inner = 2.0 * multiply(derivative(v), Au) + multiply(v, derivative(Au))
    return -1.0 * invert_inertia(k, inner)


def q_operator(k, u, v):
    """Symmetric part Q_k(u,v) = (u_x v + u v_x + B_k(u,v) + B_k(v,u)) / 2."""
    k = validate_order(k)
    check_same_grid(u, v)
    sym = (
        multiply(derivative(u), v)
        + multiply(u, derivative(v))
        + bilinear_B(k, u, v)
        + bilinear_B(k, v, u)
    )
    return 0.5 * sym


def theta_operator(k, u, v):
    """Transport operator with v_t + u v_x + Theta_k(u, v) = 0 along a curve.

    Theta_k(u,v) = A_k^{-1}[v_x A_k u + u_x A_k v]
                 + (1/2) A_k^{-1}[v A_k(u_x) + u A_k(v_x)]
                 - (1/2) (v u_x + u v_x).
    """
    k = validate_order(k)
    check_same_grid(u, v)
    Au = apply_inertia(k, u)
    Av = apply_inertia(k, v)
    smooth = (
        multiply(derivative(v), Au)
        + multiply(derivative(u), Av)
        + 0.5 * (multiply(v, derivative(Au)) + multiply(u, derivative(Av)))
    )
    local = 0.5 * (multiply(v, derivative(u)) + multiply(u, derivative(v)))
    return invert_inertia(k, smooth) - local
