"""Sign-vector encoding of the intersection points [±1:...:±1].

A point of RP^k ∩ T^k is stored by its canonical representative with leading
homogeneous coordinate +1. Bit ``i - 1`` of the mask is set exactly when the
tail coordinate ``eps_i`` equals -1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import CapacityError, DimensionMismatchError, UnsupportedDimensionError

MAX_K = 63


def _check_k(k: int) -> None:
    if not isinstance(k, (int,)) or k < 1:
        raise DimensionMismatchError(f"k must be a positive integer, got {k!r}")
    if k > MAX_K:
        raise CapacityError(f"k={k} exceeds the word-size cap {MAX_K}")


@dataclass(frozen=True, order=True)
class PointCode:
    k: int
    mask: int

    def __post_init__(self):
        _check_k(self.k)
        if not 0 <= self.mask < (1 << self.k):
            raise DimensionMismatchError(f"mask {self.mask} out of range for k={self.k}")

    @property
    def full(self) -> int:
        return (1 << self.k) - 1

    def signs(self) -> tuple[int, ...]:
        """Homogeneous signs (eps_0, ..., eps_k) of the canonical representative."""
        return (1,) + tuple(-1 if (self.mask >> i) & 1 else 1 for i in range(self.k))

    def plus_count(self) -> int:
        """Number of +1 homogeneous coordinates in the canonical representative."""
        return self.k + 1 - bin(self.mask).count("1")

    def to_string(self) -> str:
        return "".join("-" if (self.mask >> i) & 1 else "+" for i in range(self.k))

    @classmethod
    def from_string(cls, s: str) -> "PointCode":
        s = s.replace("−", "-")
        if not s or set(s) - {"+", "-"}:
            raise DimensionMismatchError(f"not a sign string: {s!r}")
        mask = sum(1 << i for i, ch in enumerate(s) if ch == "-")
        return cls(len(s), mask)

    def to_json(self) -> dict:
        return {"k": self.k, "mask": self.mask}

    @classmethod
    def from_json(cls, obj: dict) -> "PointCode":
        return cls(int(obj["k"]), int(obj["mask"]))

    def __str__(self) -> str:
        return self.to_string()


def canonicalize(signs: Sequence[int], k: int | None = None) -> PointCode:
    """Encode homogeneous signs, negating everything first if ``signs[0] == -1``."""
    signs = list(signs)
    if k is None:
        k = len(signs) - 1
    if len(signs) != k + 1:
        raise DimensionMismatchError(f"expected {k + 1} signs for k={k}, got {len(signs)}")
    if any(s not in (1, -1) for s in signs):
        raise DimensionMismatchError(f"signs must be +1 or -1: {signs}")
    if signs[0] == -1:
        signs = [-s for s in signs]
    mask = sum(1 << (i - 1) for i in range(1, k + 1) if signs[i] == -1)
    return PointCode(k, mask)


def flip_mask(k: int, i: int) -> int:
    """XOR mask realising ``flip(., i)`` on canonical codes."""
    if not 0 <= i <= k:
        raise IndexError(f"coordinate index {i} out of range 0..{k}")
    return (1 << k) - 1 if i == 0 else 1 << (i - 1)


def flip(p: PointCode, i: int) -> PointCode:
    """Negate homogeneous coordinate ``i`` and re-canonicalize.

    ``i = 0`` negates the leading +1, which after re-canonicalization is the
    global involution eta (complement of the mask).
    """
    return PointCode(p.k, p.mask ^ flip_mask(p.k, i))


def eta(p: PointCode) -> PointCode:
    return flip(p, 0)


def plus_one_count_parity(p: PointCode) -> int:
    """0 if the +1 count is even, 1 if odd. Only well defined for odd k."""
    if p.k % 2 == 0:
        raise UnsupportedDimensionError(
            f"k={p.k} is even: the +1 count depends on the representative"
        )
    return p.plus_count() % 2


def all_points(k: int) -> Iterator[PointCode]:
    _check_k(k)
    for mask in range(1 << k):
        yield PointCode(k, mask)


def parse_point(text: str, k: int) -> PointCode:
    """Accept a decimal mask, ``0b`` binary, or a +/- string of length k."""
    text = text.strip()
    if text and set(text) <= {"+", "-", "−"}:
        p = PointCode.from_string(text)
        if p.k != k:
            raise DimensionMismatchError(f"sign string has length {p.k}, expected k={k}")
        return p
    try:
        mask = int(text, 0)
    except ValueError:
        raise DimensionMismatchError(f"cannot parse point {text!r}") from None
    return PointCode(k, mask)
