"""Volumes of RP^{2n-1} and T^{2n-1} in CP^{2n-1} and the intersection-count bound.

Products are accumulated factor by factor so nothing overflows for moderate n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")


def vol_rp(n: int) -> float:
    """pi^n / (n-1)!: half the volume of the unit sphere S^{2n-1}."""
    _check_n(n)
    v = math.pi
    for j in range(1, n):
        v *= math.pi / j
    return v


def vol_torus(n: int) -> float:
    """(1 / 2 pi) (2 pi / sqrt(2n))^{2n}, written as (2 pi)^{2n-1} / (2n)^n."""
    _check_n(n)
    two_pi = 2 * math.pi
    v = two_pi / (2 * n)
    for _ in range(n - 1):
        v *= two_pi * two_pi / (2 * n)
    return v


def volume_ratio(n: int) -> float:
    """vol(T^{2n-1}) / vol(RP^{2n-1}) = (2 pi)^{n-1} (n-1)! / n^n."""
    _check_n(n)
    r = 1.0 / n
    for j in range(1, n):
        r *= 2 * math.pi * j / n
    return r


def crofton_bound(n: int) -> Fraction:
    """Lower bound 2^n / 2n on vol(phi(T^{2n-1})) / vol(RP^{2n-1})."""
    _check_n(n)
    return Fraction(2**n, 2 * n)


@dataclass(frozen=True)
class TableRow:
    n: int
    ratio: float
    bound: Fraction

    @property
    def active(self) -> bool:
        """True when the bound already certifies T^{2n-1} as volume minimising."""
        return self.bound >= self.ratio

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "ratio": self.ratio,
            "bound": float(self.bound),
            "bound_exact": f"{self.bound.numerator}/{self.bound.denominator}",
            "active": self.active,
        }


def comparison_table(n_max: int) -> list[TableRow]:
    _check_n(n_max)
    return [TableRow(n, volume_ratio(n), crofton_bound(n)) for n in range(1, n_max + 1)]
