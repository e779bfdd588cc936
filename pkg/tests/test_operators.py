"""Metric operator identities: bracket, bilinear map, symmetrized forms."""

import numpy as np
import pytest

from geoflow.operators import bilinear_B, lie_bracket, q_operator, theta_operator
from geoflow.spectral import (
    GridSpec,
    PeriodicField,
    derivative,
    inertia_symbol,
    inner_k,
    multiply,
    random_band_limited,
)

GRID = GridSpec(128)


def _fields(seed, n=3, max_mode=12, amplitude=1.0):
    return [
        random_band_limited(GRID, seed + 37 * i, max_mode, amplitude)
        for i in range(n)
    ]


def test_bracket_antisymmetry_and_closed_form():
    u, v, _ = _fields(0)
    b1 = lie_bracket(u, v)
    b2 = lie_bracket(v, u)
    assert np.max(np.abs(b1.values + b2.values)) < 1e-10
    ref = multiply(u, derivative(v)) - multiply(derivative(u), v)
    assert np.max(np.abs(b1.values - ref.values)) < 1e-14


def test_bracket_jacobi_identity():
    u, v, w = _fields(5, max_mode=8)
    s = (
        lie_bracket(u, lie_bracket(v, w))
        + lie_bracket(v, lie_bracket(w, u))
        + lie_bracket(w, lie_bracket(u, v))
    )
    scale = max(np.max(np.abs(f.values)) for f in (u, v, w))
    assert np.max(np.abs(s.values)) / scale**3 < 1e-9


def test_bilinear_adjoint_identity():
    # <B_k(u,v), w>_k = <u, [v,w]>_k for band-limited fields
    for seed in range(4):
        u, v, w = _fields(100 + seed, max_mode=10)
        for k in range(5):
            lhs = inner_k(k, bilinear_B(k, u, v), w)
            rhs = inner_k(k, u, lie_bracket(v, w))
            # roundoff is amplified by the inertia symbol at the bracket's
            # bandwidth (twice the field bandwidth), ~1e14 for k = 4
            scale = max(abs(inner_k(k, f, f)) for f in (u, v, w))
            cond = inertia_symbol(GRID, k)[20]
            assert abs(lhs - rhs) / scale < 1e3 * np.finfo(float).eps * cond


def test_bilinear_is_bilinear():
    u, v, w = _fields(40, max_mode=8)
    k = 2
    left = bilinear_B(k, u + 2.0 * w, v)
    ref = bilinear_B(k, u, v) + 2.0 * bilinear_B(k, w, v)
    assert np.max(np.abs(left.values - ref.values)) < 1e-9
    left = bilinear_B(k, u, v + 0.5 * w)
    ref = bilinear_B(k, u, v) + 0.5 * bilinear_B(k, u, w)
    assert np.max(np.abs(left.values - ref.values)) < 1e-9


def test_q_is_symmetric_part_relation():
    # Q_k(u,u) = (u u_x) + B_k(u,u) by the definition of the symmetrization
    u, _, _ = _fields(7, max_mode=10)
    k = 1
    q = q_operator(k, u, u)
    ref = multiply(u, derivative(u)) + bilinear_B(k, u, u)
    assert np.max(np.abs(q.values - ref.values)) < 1e-10


def test_q_symmetry():
    u, v, _ = _fields(11, max_mode=10)
    for k in (0, 1, 3):
        a = q_operator(k, u, v)
        b = q_operator(k, v, u)
        assert np.max(np.abs(a.values - b.values)) < 1e-9


def test_theta_is_negative_q():
    # [DERIVED] expanding both definitions gives Theta_k(u,v) = -Q_k(u,v)
    u, v, _ = _fields(23, max_mode=10)
    for k in (0, 1, 2):
        th = theta_operator(k, u, v)
        q = q_operator(k, u, v)
        assert np.max(np.abs(th.values + q.values)) < 1e-9


def test_theta_k0_closed_form():
    # [DERIVED] at k = 0 the correction reduces to u v_x + u_x v
    u, v, _ = _fields(31, max_mode=10)
    th = theta_operator(0, u, v)
    ref = multiply(u, derivative(v)) + multiply(derivative(u), v)
    assert np.max(np.abs(th.values - ref.values)) < 1e-10


def test_b0_closed_form():
    # [DERIVED] B_0(u,u) = -3 u u_x, giving u_t + 3 u u_x = 0 at k = 0
    u, _, _ = _fields(53, max_mode=10)
    b = bilinear_B(0, u, u)
    ref = -3.0 * multiply(u, derivative(u))
    assert np.max(np.abs(b.values - ref.values)) < 1e-10
