"""Logarithmic periodicity of intervals with a pitch-discrimination tolerance.

An interval with reduced frequency ratio a/b has periodicity b, the number of
periods of the lower tone after which the two waveforms realign.  Its
logarithmic periodicity is log2(b).  With a tolerance of ``jnd_cents``, an
interval of ``d`` cents is assigned the smallest periodicity of any rational
ratio within ``d +/- jnd_cents``; the inversion-symmetric version takes the
minimum over the interval and its octave complement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .field import GridField
from .geometry import canonicalize, interval_cents

CENTS_PER_OCTAVE = 1200.0


class EmptyIntervalError(ValueError):
    pass


class GuardExceededError(ArithmeticError):
    pass


@dataclass(frozen=True)
class RationalRatio:
    """Reduced positive fraction a/b."""

    a: int
    b: int

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise ValueError(f"ratio terms must be positive, got {self.a}/{self.b}")
        if math.gcd(self.a, self.b) != 1:
            raise ValueError(f"ratio {self.a}/{self.b} is not reduced")

    @property
    def value(self) -> float:
        return self.a / self.b

    @property
    def cents(self) -> float:
        return CENTS_PER_OCTAVE * math.log2(self.a / self.b)

    def __str__(self):
        return f"{self.a}/{self.b}"


@dataclass(frozen=True)
class PeriodicityConfig:
    jnd_cents: float = 20.0
    max_denominator_guard: int = 10**6

    def __post_init__(self):
        if not self.jnd_cents > 0:
            raise ValueError(f"jnd_cents must be positive, got {self.jnd_cents}")
        if self.max_denominator_guard < 1:
            raise ValueError("max_denominator_guard must be >= 1")


DEFAULT_CONFIG = PeriodicityConfig()


def _as_fraction(x) -> Fraction:
    # Fraction(float) is exact, so comparisons below carry no rounding.
    return x if isinstance(x, Fraction) else Fraction(x)


def min_denominator_rational(lo, hi, max_denominator_guard: int = 10**6) -> RationalRatio:
    """Return the fraction with the smallest denominator in the closed interval [lo, hi].

    Walks the Stern-Brocot tree from its root, replacing one bound by the
    mediant until the mediant falls inside the interval.  Consecutive moves in
    the same direction are taken in one step, so the loop runs once per
    continued-fraction term rather than once per tree level.  The first tree
    node inside an interval has both the smallest denominator and, among
    those, the smallest numerator.

    ``lo`` and ``hi`` may be floats or Fractions; floats are taken at their
    exact binary value.
    """
    flo, fhi = _as_fraction(lo), _as_fraction(hi)
    if flo <= 0:
        raise ValueError(f"lower bound must be positive, got {lo}")
    if flo > fhi:
        raise EmptyIntervalError(f"empty interval [{lo}, {hi}]")
    lp, lq = flo.numerator, flo.denominator
    hp, hq = fhi.numerator, fhi.denominator

    # left = la/lb < lo and right = ra/rb > hi hold on every iteration
    la, lb, ra, rb = 0, 1, 1, 0
    while True:
        ma, mb = la + ra, lb + rb
        if mb > max_denominator_guard:
            raise GuardExceededError(
                f"no fraction with denominator <= {max_denominator_guard} in [{lo}, {hi}]"
            )
        if ma * lq < lp * mb:
            # mediant below lo: advance left by k steps toward right, staying below lo
            k = (lp * lb - la * lq - 1) // (ra * lq - lp * rb)
            la, lb = la + k * ra, lb + k * rb
        elif ma * hq > hp * mb:
            k = (ra * hq - hp * rb - 1) // (hp * lb - la * hq)
            ra, rb = ra + k * la, rb + k * lb
        else:
            return RationalRatio(ma, mb)


def periodicity_log(r: RationalRatio) -> float:
    return math.log2(r.b)


def _jnd_window(d: float, jnd: float) -> tuple[float, float]:
    lo = 2.0 ** ((d - jnd) / CENTS_PER_OCTAVE)
    hi = 2.0 ** ((d + jnd) / CENTS_PER_OCTAVE)
    # d >= 0 means hi >= 1; below unison 1/1 is already admissible
    return max(lo, 1.0), hi


def simplest_ratio(d: float, cfg: PeriodicityConfig = DEFAULT_CONFIG) -> RationalRatio:
    """The minimal-denominator ratio within ``cfg.jnd_cents`` of ``d`` cents."""
    if not d >= 0:
        raise ValueError(f"interval must be non-negative, got {d} cents")
    lo, hi = _jnd_window(float(d), cfg.jnd_cents)
    return min_denominator_rational(lo, hi, cfg.max_denominator_guard)


@lru_cache(maxsize=65536)
def p_jnd(d: float, cfg: PeriodicityConfig = DEFAULT_CONFIG) -> float:
    """JND-tolerant logarithmic periodicity of an interval of ``d`` cents."""
    return periodicity_log(simplest_ratio(d, cfg))


def p_jnd_sym(d: float, cfg: PeriodicityConfig = DEFAULT_CONFIG) -> float:
    """Inversion-symmetric periodicity: min of ``d`` and its octave complement."""
    if not 0.0 <= d <= CENTS_PER_OCTAVE:
        raise ValueError(f"interval must lie in [0, 1200] cents, got {d}")
    return min(p_jnd(d, cfg), p_jnd(CENTS_PER_OCTAVE - d, cfg))


def p_plus_field(x: float, y: float, cfg: PeriodicityConfig = DEFAULT_CONFIG,
                 gamma: float = 12.0) -> float:
    """Symmetric periodicity as a function on the dyad space, pitches in semitones."""
    p = canonicalize(x, y, gamma)
    return p_jnd_sym(interval_cents(p, gamma), cfg)


def p_plus_grid(n: int, gamma: float = 12.0,
                cfg: PeriodicityConfig = DEFAULT_CONFIG) -> GridField:
    """Sample :func:`p_plus_field` at every node of the n x n torus grid."""
    c = gamma * np.arange(n) / n
    out = np.empty((n, n))
    for i in range(n):
        for j in range(i + 1):
            out[i, j] = out[j, i] = p_plus_field(c[i], c[j], cfg, gamma)
    return GridField(gamma, out)
