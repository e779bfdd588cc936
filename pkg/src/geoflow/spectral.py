"""Pseudo-spectral representation of real periodic functions on the unit circle.

Fields are sampled on a uniform grid of [0, 1) and carry a cached Fourier
view.  Nonlinear products are dealiased with the 2/3 rule; derivatives and
the Sobolev inertia operator act as Fourier multipliers.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError

TWO_PI = 2.0 * np.pi

#: Largest supported Sobolev order.  The inertia multiplier grows like
#: (2*pi*m)^(2k); beyond k = 4 the apply/invert round trip loses too much
#: precision in double arithmetic.
MAX_SOBOLEV_ORDER = 4


def validate_order(k):
    """Check that k is a supported Sobolev order and return it as an int."""
    k = int(k)
    if not 0 <= k <= MAX_SOBOLEV_ORDER:
        raise ValueError(f"Sobolev order must be in 0..{MAX_SOBOLEV_ORDER}, got {k}")
    return k


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid of n_points samples of [0, 1) with a dealiasing cutoff.

    max_mode is the largest retained Fourier mode; it must respect the 2/3
    rule (max_mode <= n_points // 3) so that quadratic products of retained
    modes are alias-free.
    """

    n_points: int
    max_mode: int = 0

    def __post_init__(self):
        n = int(self.n_points)
        if n < 8 or n % 2 != 0:
            raise ValueError(f"n_points must be even and >= 8, got {n}")
        object.__setattr__(self, "n_points", n)
        m = int(self.max_mode)
        if m == 0:
            m = n // 3
        if not 1 <= m <= n // 3:
            raise ValueError(f"max_mode must be in 1..{n // 3}, got {m}")
        object.__setattr__(self, "max_mode", m)

    @property
    def nodes(self):
        """Sample locations x_j = j / n_points."""
        return np.arange(self.n_points) / self.n_points


@functools.lru_cache(maxsize=128)
def _modes(grid):
    return np.arange(grid.n_points // 2 + 1)


@functools.lru_cache(maxsize=128)
def deriv_symbol(grid, order):
    """Fourier multiplier of d^order/dx^order on the rfft modes."""
    m = _modes(grid)
    sym = (TWO_PI * 1j * m) ** order
    if order % 2 == 1 and grid.n_points % 2 == 0:
        sym = sym.copy()
        sym[-1] = 0.0  # Nyquist mode has no well-defined odd derivative
    return sym


@functools.lru_cache(maxsize=128)
def inertia_symbol(grid, k):
    """Multiplier a_k(m) = sum_{i=0}^{k} (2 pi m)^(2i) of 1 - d2 + ... + (-1)^k d2k."""
    m = _modes(grid)
    a = np.zeros(m.shape)
    for i in range(k + 1):
        a += (TWO_PI * m) ** (2 * i)
    return a


@functools.lru_cache(maxsize=128)
def dealias_mask(grid):
    """Boolean mask keeping modes |m| <= max_mode."""
    return _modes(grid) <= grid.max_mode


@functools.lru_cache(maxsize=128)
def parseval_weights(grid):
    """Mode multiplicities for quadratic spectral sums (2 for m >= 1 except Nyquist)."""
    w = np.full(grid.n_points // 2 + 1, 2.0)
    w[0] = 1.0
    w[-1] = 1.0
    return w


def rfft_norm(values):
    """Forward transform normalized so coefficients are Fourier-series coefficients."""
    return np.fft.rfft(values) / len(values)


def irfft_norm(coeffs, n):
    return np.fft.irfft(coeffs * n, n)


class PeriodicField:
    """Real periodic function of period one, stored by its grid samples.

    The spectrum is a lazily computed cache; instances are immutable and
    safe to share between threads.
    """

    __slots__ = ("grid", "values", "_spectrum")

    def __init__(self, grid, values, _spectrum=None):
        values = np.asarray(values, dtype=float)
        if values.shape != (grid.n_points,):
            raise ValueError(
                f"expected {grid.n_points} samples, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        values = values.copy()
        values.flags.writeable = False
        self.grid = grid
        self.values = values
        self._spectrum = _spectrum

    @property
    def spectrum(self):
        """Normalized rfft coefficients c_m, m = 0 .. n/2 (c_{-m} = conj(c_m))."""
        if self._spectrum is None:
            self._spectrum = rfft_norm(self.values)
        return self._spectrum

    @classmethod
    def from_spectrum(cls, grid, coeffs):
        coeffs = np.asarray(coeffs, dtype=complex)
        values = irfft_norm(coeffs, grid.n_points)
        return cls(grid, values, _spectrum=coeffs.copy())

    @classmethod
    def from_function(cls, grid, fn):
        return cls(grid, fn(grid.nodes))

    @classmethod
    def zero(cls, grid):
        return cls(grid, np.zeros(grid.n_points))

    @classmethod
    def constant(cls, grid, c):
        return cls(grid, np.full(grid.n_points, float(c)))

    # Pointwise algebra, mostly for tests and small compositions.  Heavy
    # inner loops work on raw arrays instead.
    def __add__(self, other):
        check_same_grid(self, other)
        return PeriodicField(self.grid, self.values + other.values)

    def __sub__(self, other):
        check_same_grid(self, other)
        return PeriodicField(self.grid, self.values - other.values)

    def __neg__(self):
        return PeriodicField(self.grid, -self.values)

    def __mul__(self, scalar):
        return PeriodicField(self.grid, self.values * float(scalar))

    __rmul__ = __mul__

    def __repr__(self):
        return (
            f"PeriodicField(n={self.grid.n_points}, "
            f"sup~{np.max(np.abs(self.values)):.3g})"
        )


def check_same_grid(u, v):
    if u.grid != v.grid:
        raise GridMismatchError(f"grids differ: {u.grid} vs {v.grid}")


def derivative(u, order=1):
    """Spectral derivative d^order u / dx^order (exact for band-limited u)."""
    order = int(order)
    if order < 0:
        raise ValueError("derivative order must be non-negative")
    if order == 0:
        return u
    return PeriodicField.from_spectrum(u.grid, u.spectrum * deriv_symbol(u.grid, order))


def dealias(u):
    """Truncate the spectrum to |m| <= max_mode (2/3 rule)."""
    return PeriodicField.from_spectrum(u.grid, u.spectrum * dealias_mask(u.grid))


def multiply(u, v):
    """Pointwise product with the result dealiased."""
    check_same_grid(u, v)
    prod = u.values * v.values
    return PeriodicField.from_spectrum(u.grid, rfft_norm(prod) * dealias_mask(u.grid))


def apply_inertia(k, u):
    """Apply A_k = 1 - d2/dx2 + ... + (-1)^k d2k/dx2k as a Fourier multiplier."""
    k = validate_order(k)
    if k == 0:
        return u
    return PeriodicField.from_spectrum(u.grid, u.spectrum * inertia_symbol(u.grid, k))


def invert_inertia(k, f):
    """Apply A_k^{-1}; the multiplier a_k(m) >= 1 never vanishes."""
    k = validate_order(k)
    if k == 0:
        return f
    return PeriodicField.from_spectrum(f.grid, f.spectrum / inertia_symbol(f.grid, k))


def inner_k(k, u, v):
    """H^k inner product sum_{i<=k} int (d^i u)(d^i v) dx, computed spectrally."""
    k = validate_order(k)
    check_same_grid(u, v)
    a = inertia_symbol(u.grid, k)
    w = parseval_weights(u.grid)
    return float(np.sum(w * a * (u.spectrum * np.conj(v.spectrum)).real))


def norm_k(k, u):
    return np.sqrt(max(inner_k(k, u, u), 0.0))


def evaluate_spectrum_at(coeffs, max_mode, points):
    """Evaluate the band-limited interpolant sum_{|m|<=M} c_m e^{2 pi i m x}.

    Horner recurrence in z = e^{2 pi i x}; periodicity in x is automatic.
    """
    pts = np.asarray(points, dtype=float)
    M = min(int(max_mode), len(coeffs) - 1)
    z = np.exp(TWO_PI * 1j * pts)
    acc = np.zeros_like(z)
    for m in range(M, 0, -1):
        acc = (acc + coeffs[m]) * z
    return coeffs[0].real + 2.0 * acc.real


def evaluate_at(u, points):
    """Evaluate u at arbitrary points (interpreted mod 1) by direct summation."""
    scalar = np.ndim(points) == 0
    out = evaluate_spectrum_at(u.spectrum, u.grid.max_mode, points)
    return float(out) if scalar else out


def sup_norm(u, oversample=8):
    """Sup-norm of the band-limited interpolant, estimated on a refined grid."""
    n = u.grid.n_points
    fine = np.fft.irfft(u.spectrum * (oversample * n), oversample * n)
    return float(np.max(np.abs(fine)))


def oversampled_range(u, oversample=8):
    """(min, max) of the interpolant on a refined grid."""
    n = u.grid.n_points
    fine = np.fft.irfft(u.spectrum * (oversample * n), oversample * n)
    return float(np.min(fine)), float(np.max(fine))


def random_band_limited(grid, seed, max_mode=None, amplitude=1.0):
    """Deterministic random field with spectrum supported on |m| <= max_mode.

    Coefficients decay like e^{-m/2}; the result is rescaled so its sup-norm
    equals amplitude (zero amplitude gives the zero field).
    """
    M = grid.max_mode if max_mode is None else int(max_mode)
    if not 0 <= M <= grid.max_mode:
        raise ValueError(f"max_mode must be in 0..{grid.max_mode}, got {M}")
    rng = np.random.default_rng(seed)
    coeffs = np.zeros(grid.n_points // 2 + 1, dtype=complex)
    coeffs[0] = 0.3 * rng.standard_normal()
    if M >= 1:
        decay = np.exp(-0.5 * np.arange(1, M + 1))
        coeffs[1 : M + 1] = (
            rng.standard_normal(M) + 1j * rng.standard_normal(M)
        ) * decay
    field = PeriodicField.from_spectrum(grid, coeffs)
    s = sup_norm(field)
    if s == 0.0 or amplitude == 0.0:
        return PeriodicField.zero(grid)
    return field * (float(amplitude) / s)
