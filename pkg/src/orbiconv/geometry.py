"""Dyad orbifold geometry: fundamental domain, intervals and the Moebius strip picture.

A dyad is an unordered pair of pitch classes, i.e. a point of the torus
(R / gamma Z)^2 modulo the coordinate swap.  Its fundamental domain is the
triangle ``0 <= y <= x < gamma``.  After rescaling to gamma = 1 the triangle
maps homeomorphically onto a Moebius strip embedded in R^3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

F0_HZ = 261.626  # C4


@dataclass(frozen=True)
class DyadPoint:
    x: float
    y: float


@dataclass(frozen=True)
class StripCoords:
    alpha: float
    r: float


def pitch(freq: float, f0: float = F0_HZ) -> float:
    """Pitch in semitones relative to ``f0``."""
    return 12.0 * math.log2(freq / f0)


def frequency(p: float, f0: float = F0_HZ) -> float:
    return f0 * 2.0 ** (p / 12.0)


def _mod(v: float, gamma: float) -> float:
    r = math.fmod(v, gamma)
    if r < 0:
        r += gamma
    # fmod of a tiny negative can round up to exactly gamma
    return 0.0 if r >= gamma else r


def canonicalize(x: float, y: float, gamma: float = 12.0) -> DyadPoint:
    """Representative of (x, y) in the triangle ``0 <= y <= x < gamma``."""
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    a, b = _mod(float(x), gamma), _mod(float(y), gamma)
    return DyadPoint(a, b) if a >= b else DyadPoint(b, a)


def interval_cents(p: DyadPoint, gamma: float = 12.0) -> float:
    """Size of the canonical dyad's interval in cents, in [0, 1200).

    gamma is taken to be one octave, so for gamma = 12 this is 100 * (x - y).
    """
    return 1200.0 * (p.x - p.y) / gamma


def phi(x: float, y: float) -> StripCoords:
    """Map the unit triangle ``0 <= y <= x < 1`` onto strip coordinates (alpha, r)."""
    if not (0.0 <= y <= x < 1.0):
        raise ValueError(f"({x}, {y}) is outside the unit fundamental domain")
    if x + y < 1.0:
        return StripCoords(math.pi * (x + y), x - y - 0.5)
    return StripCoords(math.pi * (x + y - 1.0), y - x + 0.5)


def phi_inverse(alpha, r):
    """Inverse of :func:`phi`; accepts scalars or arrays, returns (x, y) in the unit triangle."""
    alpha = np.asarray(alpha, dtype=float)
    r = np.asarray(r, dtype=float)
    s = alpha / math.pi
    lower = r <= s - 0.5
    x = np.where(lower, (s + r + 0.5) / 2.0, (s + 1.5 - r) / 2.0)
    y = np.where(lower, (s - r - 0.5) / 2.0, (s + r + 0.5) / 2.0)
    # rounding can push boundary points one ulp outside the triangle
    y = np.clip(y, 0.0, x)
    return x, y


def moebius_embed(alpha, r):
    """Embed strip coordinates in R^3.  Works elementwise on arrays.

    The strip is ``[0, pi] x [-1/2, 1/2]`` glued along ``(0, r) ~ (pi, -r)``.
    """
    alpha = np.asarray(alpha, dtype=float)
    r = np.asarray(r, dtype=float)
    radial = 1.0 + r * np.cos(alpha)
    return np.stack(
        [np.cos(2 * alpha) * radial, np.sin(2 * alpha) * radial, r * np.sin(alpha)],
        axis=-1,
    )


@dataclass
class StripMesh:
    vertices: np.ndarray  # (V, 3)
    faces: np.ndarray  # (F, 3) vertex indices
    scalars: np.ndarray  # (V,)
    alpha: np.ndarray  # (V,) strip coordinates of each vertex
    r: np.ndarray
    n_alpha: int
    n_r: int


def mesh_vertex_count(resolution: int) -> int:
    return 2 * resolution * (resolution + 1)


def build_strip_mesh(field: Callable, resolution: int, gamma: float = 12.0) -> StripMesh:
    """Triangulate the Moebius strip and attach ``field`` values as vertex scalars.

    The strip parameter domain is sampled with ``2 * resolution`` columns in
    alpha (alpha = pi is not stored) and ``resolution + 1`` rows in r.  The
    last column of quads is closed against column 0 with r reversed, so the
    seam vertices are shared rather than duplicated.

    ``field(x, y)`` is evaluated elementwise on arrays of pitch coordinates in
    ``[0, gamma)``, at the preimage of each vertex in the fundamental domain.
    """
    if resolution < 1:
        raise ValueError(f"resolution must be >= 1, got {resolution}")
    n_alpha, n_r = 2 * resolution, resolution + 1
    alphas = math.pi * np.arange(n_alpha) / n_alpha
    rs = -0.5 + np.arange(n_r) / resolution
    A, Rr = np.meshgrid(alphas, rs, indexing="ij")
    A, Rr = A.ravel(), Rr.ravel()
    vertices = moebius_embed(A, Rr)
    ux, uy = phi_inverse(A, Rr)
    scalars = np.asarray(field(gamma * ux, gamma * uy), dtype=float)
    scalars = np.broadcast_to(scalars, A.shape).astype(float)

    def vid(i, j):
        return i * n_r + j

    faces = []
    for i in range(n_alpha):
        for j in range(resolution):
            if i + 1 < n_alpha:
                v00, v01 = vid(i, j), vid(i, j + 1)
                v10, v11 = vid(i + 1, j), vid(i + 1, j + 1)
            else:
                # glue to column 0 with r -> -r
                v00, v01 = vid(i, j), vid(i, j + 1)
                v10, v11 = vid(0, resolution - j), vid(0, resolution - j - 1)
            faces.append((v00, v10, v11))
            faces.append((v00, v11, v01))
    return StripMesh(vertices, np.asarray(faces, dtype=np.int64), scalars,
                     A, Rr, n_alpha, n_r)


def write_ply(mesh: StripMesh, path) -> Path:
    """Write an ASCII PLY file with a float ``scalar`` vertex property."""
    from .export import fmt

    path = Path(path)
    lines = [
        "ply",
        "format ascii 1.0",
        f"element vertex {len(mesh.vertices)}",
        "property double x",
        "property double y",
        "property double z",
        "property double scalar",
        f"element face {len(mesh.faces)}",
        "property list uchar int vertex_indices",
        "end_header",
    ]
    for (vx, vy, vz), s in zip(mesh.vertices, mesh.scalars):
        lines.append(f"{fmt(vx)} {fmt(vy)} {fmt(vz)} {fmt(s)}")
    for a, b, c in mesh.faces:
        lines.append(f"3 {a} {b} {c}")
    path.write_text("\n".join(lines) + "\n", encoding="ascii")
    return path


def export_mesh(field: Callable, resolution: int, path, gamma: float = 12.0) -> StripMesh:
    mesh = build_strip_mesh(field, resolution, gamma)
    write_ply(mesh, path)
    return mesh
