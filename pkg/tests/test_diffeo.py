"""Circle diffeomorphism construction, composition and inversion tests."""

import numpy as np
import pytest

from geoflow.diffeo import (
    CircleDiffeo,
    compose,
    identity_diffeo,
    invert,
    jacobian,
    right_translate,
    rotation,
)
from geoflow.errors import DegenerateDiffeoError
from geoflow.spectral import GridSpec, PeriodicField, evaluate_at, random_band_limited


def _small_diffeo(grid, seed, amplitude=0.05):
    return CircleDiffeo(random_band_limited(grid, seed, 6, amplitude))


def test_identity_and_rotation():
    g = GridSpec(64)
    e = identity_diffeo(g)
    assert np.allclose(e.points, g.nodes)
    r = rotation(g, 0.25)
    assert np.allclose(r.points, g.nodes + 0.25)


def test_degenerate_displacement_rejected():
    g = GridSpec(64)
    x = g.nodes
    steep = PeriodicField(g, -0.3 * np.sin(2 * np.pi * x))  # slope < -1
    with pytest.raises(DegenerateDiffeoError):
        CircleDiffeo(steep)


def test_compose_against_pointwise():
    g = GridSpec(128)
    phi = _small_diffeo(g, 1)
    psi = _small_diffeo(g, 2)
    comp = compose(phi, psi)
    ref = evaluate_at(phi.displacement, psi.points) + psi.points
    assert np.max(np.abs(comp.points - ref)) < 1e-12


def test_compose_with_identity():
    g = GridSpec(64)
    phi = _small_diffeo(g, 3)
    e = identity_diffeo(g)
    for c in (compose(phi, e), compose(e, phi)):
        assert np.max(np.abs(c.points - phi.points)) < 1e-11


def test_inverse_right_side_exact():
    # phi o phi^{-1} is evaluated at the solved points, so it is tight
    g = GridSpec(128)
    for seed in range(5):
        phi = _small_diffeo(g, seed)
        right = compose(phi, invert(phi))
        assert np.max(np.abs(right.displacement.values)) < 1e-10


def test_inverse_left_side_for_smooth_maps():
    # the inverse displacement is not band-limited; the left composition
    # carries its spectral truncation error, small for gentle maps
    g = GridSpec(128)
    for seed in range(5):
        phi = _small_diffeo(g, seed, amplitude=0.02)
        left = compose(invert(phi), phi)
        assert np.max(np.abs(left.displacement.values)) < 1e-7


def test_inverse_of_rotation_is_negative_rotation():
    g = GridSpec(64)
    inv = invert(rotation(g, 0.3))
    assert np.max(np.abs(inv.displacement.values + 0.3)) < 1e-12


def test_jacobian_positive_and_exact():
    g = GridSpec(64)
    x = g.nodes
    phi = CircleDiffeo(PeriodicField(g, 0.05 * np.sin(2 * np.pi * x)))
    j = jacobian(phi)
    ref = 1.0 + 0.05 * 2 * np.pi * np.cos(2 * np.pi * x)
    assert np.max(np.abs(j.values - ref)) < 1e-12
    assert np.min(j.values) > 0


def test_right_translate_is_composition_of_values():
    g = GridSpec(64)
    u = random_band_limited(g, 9, 8)
    eta = _small_diffeo(g, 10)
    tr = right_translate(u, eta)
    assert np.max(np.abs(tr.values - evaluate_at(u, eta.points))) < 1e-12


def test_min_slope_reported():
    g = GridSpec(64)
    x = g.nodes
    phi = CircleDiffeo(PeriodicField(g, 0.1 * np.sin(2 * np.pi * x)))
    assert phi.min_slope() == pytest.approx(1.0 - 0.2 * np.pi, rel=1e-6)
