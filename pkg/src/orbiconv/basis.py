"""Real orthonormal Laplace eigenbasis of the dyad orbifold T^2_gamma / S_2.

Torus eigenfunctions are the exponentials exp(2 pi i (c1 x + c2 y) / gamma)
with eigenvalue (2 pi / gamma)^2 (c1^2 + c2^2).  The ones that descend to the
quotient are the swap-symmetric combinations.  Grouping each frequency with
its negative and its swap gives real modes

    norm * (trig(c1 x + c2 y) + trig(c2 x + c1 y)) / 2,    trig in {cos, sin}

indexed by a canonical representative with ``c1 >= |c2|``.  The sine of an
anti-diagonal frequency (c, -c) is antisymmetric and vanishes under the
symmetrizer, so that orbit contributes a cosine only.

Normalization is with respect to the orbifold inner product, which is half
the torus integral (the orbifold has half the torus's area).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

import numpy as np

from .field import GridField

KINDS = ("constant", "diagonal-cos", "diagonal-sin", "offdiag-cos", "offdiag-sin")
_KIND_RANK = {k: i for i, k in enumerate(KINDS)}

ORDERING = (
    "ascending c1^2+c2^2; ties by kind "
    "(constant < diagonal-cos < diagonal-sin < offdiag-cos < offdiag-sin), "
    "then lexicographic (c1, c2) on the representative with c1 >= |c2|"
)


@dataclass(frozen=True)
class TorusMode:
    c1: int
    c2: int
    gamma: float = 12.0

    @property
    def eigenvalue(self) -> float:
        return torus_eigenvalue(self.c1, self.c2, self.gamma)

    def __call__(self, x, y):
        return np.exp(2j * np.pi * (self.c1 * np.asarray(x) + self.c2 * np.asarray(y)) / self.gamma)


@dataclass(frozen=True)
class SymmetricMode:
    k: int
    kind: str
    c1: int
    c2: int
    eigenvalue: float
    norm_const: float
    gamma: float = 12.0

    @property
    def max_frequency(self) -> int:
        return max(abs(self.c1), abs(self.c2))

    def as_record(self) -> dict:
        return {
            "k": self.k,
            "kind": self.kind,
            "c1": self.c1,
            "c2": self.c2,
            "eigenvalue": self.eigenvalue,
            "norm_const": self.norm_const,
        }


@dataclass(frozen=True)
class BasisSpec:
    gamma: float = 12.0
    n_modes: int = 2048

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValueError(f"n_modes must be >= 1, got {self.n_modes}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")

    @property
    def basis_id(self) -> str:
        return f"dyad-sym-torus(gamma={self.gamma:g}, n_modes={self.n_modes})"


def torus_eigenvalue(c1: int, c2: int, gamma: float = 12.0) -> float:
    return (2 * math.pi / gamma) ** 2 * (c1 * c1 + c2 * c2)


def symmetrize(f: GridField) -> GridField:
    """Average a torus field with its reflection across the diagonal."""
    s = f.samples
    return GridField(f.gamma, 0.5 * (s + s.T))


def _orbit_kinds(c1: int, c2: int) -> list[str]:
    if c1 == 0 and c2 == 0:
        return ["constant"]
    if c1 == c2:
        return ["diagonal-cos", "diagonal-sin"]
    if c1 == -c2:
        return ["offdiag-cos"]
    return ["offdiag-cos", "offdiag-sin"]


def _norm_const(kind: str, c1: int, c2: int, gamma: float) -> float:
    if kind == "constant":
        return math.sqrt(2.0) / gamma
    if c1 == c2 or c1 == -c2:
        # symmetrized function is a single cos/sin of c(x +- y)
        return 2.0 / gamma
    return 2.0 * math.sqrt(2.0) / gamma


@lru_cache(maxsize=32)
def _enumerate(gamma: float, n_modes: int) -> tuple[SymmetricMode, ...]:
    # the number of modes with c1^2 + c2^2 <= R2 grows like pi * R2 / 2
    r2 = max(4, n_modes)
    while True:
        keys = []
        cmax = isqrt(r2)
        for c1 in range(cmax + 1):
            for c2 in range(-c1, c1 + 1):
                s = c1 * c1 + c2 * c2
                if s > r2:
                    continue
                for kind in _orbit_kinds(c1, c2):
                    keys.append((s, _KIND_RANK[kind], c1, c2, kind))
        if len(keys) >= n_modes:
            break
        r2 *= 2
    keys.sort()
    return tuple(
        SymmetricMode(
            k=k,
            kind=kind,
            c1=c1,
            c2=c2,
            eigenvalue=torus_eigenvalue(c1, c2, gamma),
            norm_const=_norm_const(kind, c1, c2, gamma),
            gamma=gamma,
        )
        for k, (_, _, c1, c2, kind) in enumerate(keys[:n_modes])
    )


def enumerate_basis(spec: BasisSpec) -> list[SymmetricMode]:
    """The first ``spec.n_modes`` symmetric modes in ascending eigenvalue order."""
    return list(_enumerate(float(spec.gamma), spec.n_modes))


def evaluate_mode(m: SymmetricMode, x, y):
    """Value of the orthonormal mode at pitch coordinates (x, y); vectorized."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if m.kind == "constant":
        return np.full(np.broadcast(x, y).shape, m.norm_const)[()]
    w = 2 * np.pi / m.gamma
    trig = np.sin if m.kind.endswith("sin") else np.cos
    return m.norm_const * 0.5 * (trig(w * (m.c1 * x + m.c2 * y)) + trig(w * (m.c2 * x + m.c1 * y)))


@lru_cache(maxsize=16)
def _trig_tables(n: int):
    t = 2 * np.pi * np.arange(n) / n
    return np.cos(t), np.sin(t)


def sample_mode(m: SymmetricMode, n: int) -> np.ndarray:
    """Mode values on the n x n grid.

    Phases are reduced modulo n in integer arithmetic before the table
    lookup, and the two swap terms are added commutatively, so the result is
    exactly symmetric.
    """
    if m.kind == "constant":
        return np.full((n, n), m.norm_const)
    cos_t, sin_t = _trig_tables(n)
    table = sin_t if m.kind.endswith("sin") else cos_t
    i = np.arange(n, dtype=np.int64)[:, None]
    j = np.arange(n, dtype=np.int64)[None, :]
    p1 = (m.c1 * i + m.c2 * j) % n
    p2 = (m.c2 * i + m.c1 * j) % n
    return m.norm_const * (0.5 * (table[p1] + table[p2]))


def is_resolvable(m: SymmetricMode, n: int) -> bool:
    """Whether rectangle-rule inner products against this mode are exact on an n-grid."""
    return 2 * m.max_frequency < n


def max_resolvable_modes(n: int, gamma: float = 12.0) -> int:
    """Length of the longest basis prefix whose modes are all resolvable on an n-grid."""
    if n < 1:
        return 0
    cmax = (n - 1) // 2
    # every frequency with c1^2 + c2^2 <= cmax^2 is resolvable; the first
    # unresolvable mode lies beyond that radius
    total = 0
    for c1 in range(cmax + 1):
        for c2 in range(-c1, c1 + 1):
            total += len(_orbit_kinds(c1, c2))
    basis = _enumerate(float(gamma), 4 * total + 16)
    for m in basis:
        if not is_resolvable(m, n):
            return m.k
    return len(basis)


def _is_sum_of_two_squares(s: int) -> bool:
    for a in range(isqrt(s) + 1):
        b2 = s - a * a
        if isqrt(b2) ** 2 == b2:
            return True
    return False


def spectrum_inclusion_check(basis, gamma: float = 12.0, rtol: float = 1e-12) -> bool:
    """True iff every mode eigenvalue is a torus eigenvalue (2 pi / gamma)^2 (c1^2 + c2^2)."""
    unit = (2 * math.pi / gamma) ** 2
    for m in basis:
        s = m.eigenvalue / unit
        si = round(s)
        if si < 0 or abs(s - si) > rtol * max(1.0, s):
            return False
        if not _is_sum_of_two_squares(si):
            return False
    return True


def fd_laplacian(samples: np.ndarray, gamma: float) -> np.ndarray:
    """Five-point periodic approximation of -(d^2/dx^2 + d^2/dy^2)."""
    h = gamma / samples.shape[0]
    nb = (
        np.roll(samples, 1, 0) + np.roll(samples, -1, 0)
        + np.roll(samples, 1, 1) + np.roll(samples, -1, 1)
    )
    return (4.0 * samples - nb) / (h * h)


def fd_residual(m: SymmetricMode, n: int) -> float:
    """Relative residual ||L_h psi - lambda psi|| / ||psi|| of a sampled mode."""
    s = sample_mode(m, n)
    r = fd_laplacian(s, m.gamma) - m.eigenvalue * s
    return float(np.linalg.norm(r) / np.linalg.norm(s))
