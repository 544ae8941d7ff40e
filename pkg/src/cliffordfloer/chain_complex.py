"""The Floer complex CF(RP^k, T^k; Z/2).

Generators are the ``2**k`` point codes. Each generator bounds the sum of its
``k + 1`` single-coordinate sign flips; for ``k = 1`` the two flips coincide and
cancel, so the differential vanishes without any special casing.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError, ObstructionError, UnsupportedDimensionError
from .gf2linalg import WORD, BitMatrix, Chain, matmul, rank
from .signvec import PointCode, flip_mask

# dense 2^k x 2^k matrix; k = 15 is 128 MiB
MAX_MATRIX_K = 15


def _check_matrix_k(k: int) -> None:
    if not isinstance(k, int) or k < 1:
        raise UnsupportedDimensionError(f"k must be a positive integer, got {k!r}")
    if k > MAX_MATRIX_K:
        raise CapacityError(
            f"k={k}: dense boundary matrix needs 2^{2 * k} bits; max supported k is {MAX_MATRIX_K}"
        )


def _image(p: PointCode, indices) -> Chain:
    bits = 0
    for i in indices:
        bits ^= 1 << (p.mask ^ flip_mask(p.k, i))
    return Chain(p.k, bits)


def boundary_image(p: PointCode) -> Chain:
    """Sum of the flips ``flip(p, i)`` for ``i = 0..k``, reduced mod 2."""
    return _image(p, range(p.k + 1))


def boundary_tilde(p: PointCode) -> Chain:
    """Tail part of the differential: flips ``i = 1..k`` only."""
    return _image(p, range(1, p.k + 1))


def eta_image(p: PointCode) -> Chain:
    """Leading-coordinate flip, i.e. the global sign involution."""
    return _image(p, (0,))


# ---------------------------------------------------------------------------
# chain-level maps via index permutations of the bitset
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _low_half_mask(k: int, i: int) -> int:
    """Bitset of generator indices whose bit ``i`` is clear."""
    step = 1 << i
    block = (1 << step) - 1
    out = 0
    for start in range(0, 1 << k, 2 * step):
        out |= block << start
    return out


def _xor_permute(x: Chain, m: int) -> Chain:
    """Relabel generators ``p -> p ^ m``."""
    bits = x.bits
    i = 0
    while m >> i:
        if (m >> i) & 1:
            low = _low_half_mask(x.k, i)
            s = 1 << i
            bits = ((bits & low) << s) | ((bits >> s) & low)
        i += 1
    return Chain(x.k, bits)


def eta(x: Chain) -> Chain:
    return _xor_permute(x, (1 << x.k) - 1)


def tilde_boundary(x: Chain) -> Chain:
    bits = 0
    for i in range(x.k):
        bits ^= _xor_permute(x, 1 << i).bits
    return Chain(x.k, bits)


def boundary(x: Chain) -> Chain:
    """The differential applied to a chain: ``tilde_boundary(x) + eta(x)``."""
    return Chain(x.k, tilde_boundary(x).bits ^ eta(x).bits)


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


def boundary_matrix(k: int) -> BitMatrix:
    """``2**k`` square matrix whose column ``p`` is ``boundary_image(p)``."""
    _check_matrix_k(k)
    n = 1 << k
    m = BitMatrix(n, n)
    cols = np.arange(n, dtype=np.int64)
    masks = np.array([flip_mask(k, i) for i in range(k + 1)], dtype=np.int64)
    rows = (cols[:, None] ^ masks[None, :]).ravel()
    cc = np.repeat(cols, k + 1)
    bit = np.left_shift(np.uint64(1), (cc % WORD).astype(np.uint64))
    # XOR accumulation makes coinciding flips cancel
    np.bitwise_xor.at(m.data, (rows, cc // WORD), bit)
    return m


def boundary_rank(k: int, threads: int | None = None) -> int:
    return rank(boundary_matrix(k), threads=threads)


def hf_dimension(k: int, threads: int | None = None) -> int:
    """dim HF = 2^k - 2 rank(d). Refuses even k, where d∘d ≠ 0."""
    _check_matrix_k(k)
    if k % 2 == 0:
        raise ObstructionError(k, (k + 1) % 2)
    return (1 << k) - 2 * boundary_rank(k, threads=threads)


def homology(k: int, threads: int | None = None) -> dict:
    _check_matrix_k(k)
    if k % 2 == 0:
        raise ObstructionError(k, (k + 1) % 2)
    r = boundary_rank(k, threads=threads)
    return {"k": k, "rank": r, "hf_dim": (1 << k) - 2 * r}


# ---------------------------------------------------------------------------
# obstruction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ObstructionReport:
    k: int
    phi_rp: int
    phi_t: int
    square_is_zero: bool
    square_matches: bool

    @property
    def phi_total(self) -> int:
        return self.phi_rp + self.phi_t

    def to_json(self) -> dict:
        return asdict(self) | {"phi_total": self.phi_total}


def boundary_square(k: int) -> BitMatrix:
    d = boundary_matrix(k)
    return matmul(d, d)


def obstruction(k: int) -> ObstructionReport:
    """Count Maslov-2 disks through a generator and check d∘d against it.

    ``square_matches`` records whether d∘d equals ``(k+1) mod 2`` times the
    identity as an exact matrix.
    """
    from .disks import maslov_two_disks_through

    _check_matrix_k(k)
    if k < 2:
        raise UnsupportedDimensionError("obstruction count requires k >= 2")
    # RP^k has minimal Maslov number k+1 > 2, so no index-2 disks on it
    phi_rp = 0
    phi_t = maslov_two_disks_through(PointCode(k, 0))
    total = phi_rp + phi_t
    sq = boundary_square(k)
    expected = BitMatrix.identity(1 << k) if total % 2 else BitMatrix.zeros(1 << k, 1 << k)
    return ObstructionReport(k, phi_rp, phi_t, sq.is_zero(), sq == expected)
