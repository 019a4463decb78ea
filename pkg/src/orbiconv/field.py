from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class GridField:
    """Real samples on the uniform n x n torus grid of period ``gamma``.

    ``samples[i, j]`` is the value at ``(gamma * i / n, gamma * j / n)``.  A
    field that is symmetric under ``i <-> j`` is the pullback of a function on
    the dyad orbifold.
    """

    gamma: float
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ValueError(f"samples must be a square 2-d array, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def spacing(self) -> float:
        return self.gamma / self.n

    def coords(self) -> np.ndarray:
        return self.gamma * np.arange(self.n) / self.n

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.samples, self.samples.T))

    def __add__(self, other: "GridField") -> "GridField":
        _check_compatible(self, other)
        return GridField(self.gamma, self.samples + other.samples)

    def __sub__(self, other: "GridField") -> "GridField":
        _check_compatible(self, other)
        return GridField(self.gamma, self.samples - other.samples)

    def __mul__(self, scale: float) -> "GridField":
        return GridField(self.gamma, self.samples * float(scale))

    __rmul__ = __mul__

    @classmethod
    def from_function(cls, fn, n: int, gamma: float = 12.0) -> "GridField":
        """Sample ``fn(x, y)`` (vectorized over arrays) at the grid nodes."""
        c = gamma * np.arange(n) / n
        X, Y = np.meshgrid(c, c, indexing="ij")
        return cls(gamma, np.broadcast_to(fn(X, Y), X.shape))

    @classmethod
    def zeros(cls, n: int, gamma: float = 12.0) -> "GridField":
        return cls(gamma, np.zeros((n, n)))


def _check_compatible(f: GridField, g: GridField):
    if f.samples.shape != g.samples.shape or f.gamma != g.gamma:
        raise ValueError(
            f"field mismatch: shape {f.samples.shape} gamma {f.gamma} vs "
            f"shape {g.samples.shape} gamma {g.gamma}"
        )
