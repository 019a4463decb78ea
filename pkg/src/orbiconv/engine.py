"""Spectral analysis, synthesis and convolution of sampled orbifold fields.

Fields live on the uniform torus grid and are swap-symmetric.  Inner products
use the rectangle rule scaled by 1/2 (orbifold area is half the torus area);
the rule is exact for products of modes below the grid's Nyquist frequency,
so the sampled basis is orthonormal to rounding error.

Transforms are direct sums over modes, one mode at a time in basis order, so
results do not depend on any thread schedule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import (
    SymmetricMode,
    evaluate_mode,
    is_resolvable,
    max_resolvable_modes,
    sample_mode,
)
from .field import GridField, _check_compatible


class NyquistError(ValueError):
    """A requested mode cannot be represented on the sampling grid."""


@dataclass(frozen=True, eq=False)
class SpectrumCoeffs:
    basis_id: str
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 1:
            raise ValueError("coefficients must be a 1-d sequence")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __len__(self):
        return len(self.coeffs)


class FilterCoeffs(SpectrumCoeffs):
    pass


def basis_id(basis) -> str:
    if not basis:
        return "empty"
    m = basis[0]
    return f"dyad-sym-torus(gamma={m.gamma:g}, n_modes={len(basis)})"


def check_resolvable(basis, n: int) -> None:
    bad = [m for m in basis if not is_resolvable(m, n)]
    if bad:
        m = bad[0]
        raise NyquistError(
            f"mode k={m.k} with frequencies ({m.c1}, {m.c2}) needs a grid finer than "
            f"{2 * m.max_frequency}; an {n}x{n} grid resolves only the first "
            f"{max_resolvable_modes(n, m.gamma)} modes"
        )


def _weight(gamma: float, n: int) -> float:
    return 0.5 * (gamma / n) ** 2


def inner_product(f: GridField, g: GridField) -> float:
    _check_compatible(f, g)
    return _weight(f.gamma, f.n) * float(np.dot(f.samples.ravel(), g.samples.ravel()))


def norm(f: GridField) -> float:
    return float(np.sqrt(inner_product(f, f)))


def sample_basis_field(m: SymmetricMode, n: int) -> GridField:
    return GridField(m.gamma, sample_mode(m, n))


def forward_transform(f: GridField, basis) -> SpectrumCoeffs:
    """Coefficients <f, psi_k> for every mode of ``basis``."""
    if not f.is_symmetric():
        raise ValueError("field is not swap-symmetric; symmetrize it first")
    check_resolvable(basis, f.n)
    w = _weight(f.gamma, f.n)
    flat = f.samples.ravel()
    out = np.empty(len(basis))
    for idx, m in enumerate(basis):
        out[idx] = w * np.dot(sample_mode(m, f.n).ravel(), flat)
    return SpectrumCoeffs(basis_id(basis), out)


def inverse_transform(c: SpectrumCoeffs, basis, gamma: float, n: int) -> GridField:
    """Synthesize sum_k c[k] psi_k on the n x n grid."""
    coeffs = c.coeffs if isinstance(c, SpectrumCoeffs) else np.asarray(c, dtype=float)
    if len(coeffs) != len(basis):
        raise ValueError(f"{len(coeffs)} coefficients for a basis of {len(basis)} modes")
    check_resolvable(basis, n)
    acc = np.zeros((n, n))
    for ck, m in zip(coeffs, basis):
        if ck != 0.0:
            acc += ck * sample_mode(m, n)
    return GridField(gamma, acc)


def evaluate_expansion(c, basis, x, y):
    """Evaluate sum_k c[k] psi_k at arbitrary points (vectorized)."""
    coeffs = c.coeffs if isinstance(c, SpectrumCoeffs) else np.asarray(c, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    acc = np.zeros(np.broadcast(x, y).shape)
    for ck, m in zip(coeffs, basis):
        if ck != 0.0:
            acc = acc + ck * evaluate_mode(m, x, y)
    return acc


def spectral_product(fc: SpectrumCoeffs, gc: SpectrumCoeffs) -> SpectrumCoeffs:
    if len(fc) != len(gc):
        raise ValueError("coefficient sequences differ in length")
    return SpectrumCoeffs(fc.basis_id, fc.coeffs * gc.coeffs)


def convolve(f: GridField, g: GridField, basis) -> GridField:
    """Spectral convolution: inverse transform of the pointwise coefficient product."""
    _check_compatible(f, g)
    prod = spectral_product(forward_transform(f, basis), forward_transform(g, basis))
    return inverse_transform(prod, basis, f.gamma, f.n)


def lowpass_coeffs(n_cut: int, basis) -> FilterCoeffs:
    """Indicator of the first ``n_cut + 1`` modes."""
    if not 0 <= n_cut < len(basis):
        raise ValueError(f"n_cut={n_cut} outside [0, {len(basis) - 1}]")
    c = np.zeros(len(basis))
    c[: n_cut + 1] = 1.0
    return FilterCoeffs(basis_id(basis), c)


def lowpass_filter_field(n_cut: int, basis, gamma: float, n: int) -> GridField:
    """The filter kernel sum_{k <= n_cut} psi_k sampled on the grid."""
    return inverse_transform(lowpass_coeffs(n_cut, basis), basis, gamma, n)


def truncate(c: SpectrumCoeffs, n_cut: int) -> SpectrumCoeffs:
    out = np.array(c.coeffs, copy=True)
    out[n_cut + 1:] = 0.0
    return SpectrumCoeffs(c.basis_id, out)


def smooth(f: GridField, n_cut: int, basis) -> GridField:
    """Low-pass smoothing, i.e. orthogonal projection onto span{psi_0..psi_n_cut}.

    Equal to ``convolve(f, lowpass_filter_field(n_cut, ...), basis)`` but only
    synthesizes the retained modes.
    """
    lowpass_coeffs(n_cut, basis)  # range check
    kept = basis[: n_cut + 1]
    fc = forward_transform(f, kept)
    return inverse_transform(fc, kept, f.gamma, f.n)


def dirichlet_energy(f, basis) -> float:
    """sum_k lambda_k fhat(k)^2 over ``basis``.

    Accepts a field or precomputed coefficients.  For a field with energy
    above the basis's highest eigenvalue this is a truncated (lower) value.
    """
    fc = f if isinstance(f, SpectrumCoeffs) else forward_transform(f, basis)
    lam = np.array([m.eigenvalue for m in basis])
    return float(np.dot(lam, fc.coeffs**2))
