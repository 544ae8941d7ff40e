"""Dense bit-packed linear algebra over GF(2).

Rows are packed little-endian into ``uint64`` words: column ``j`` of a row is
bit ``j % 64`` of word ``j // 64``. Padding bits past ``cols`` are always zero.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import DimensionMismatchError

WORD = 64
_ONE = np.uint64(1)

# below this many target rows a thread pool costs more than it saves
_PARALLEL_MIN_ROWS = 2048


def _nwords(cols: int) -> int:
    return (cols + WORD - 1) // WORD


def _pack_bits(bits: np.ndarray, cols: int) -> np.ndarray:
    """Pack a (rows, cols) 0/1 array into (rows, nwords) uint64."""
    bits = np.ascontiguousarray(bits, dtype=np.uint8) & 1
    nw = _nwords(cols)
    packed = np.packbits(bits, axis=-1, bitorder="little")
    out = np.zeros(bits.shape[:-1] + (nw * 8,), dtype=np.uint8)
    out[..., : packed.shape[-1]] = packed
    return out.view("<u8").astype(np.uint64)


def _unpack_bits(words: np.ndarray, cols: int) -> np.ndarray:
    as_bytes = np.ascontiguousarray(words.astype("<u8")).view(np.uint8)
    return np.unpackbits(as_bytes, axis=-1, bitorder="little")[..., :cols]


def resolve_threads(threads: int | None) -> int:
    """Explicit value, else the FLOER_THREADS environment variable, else 1."""
    if threads is None:
        threads = int(os.environ.get("FLOER_THREADS", "1") or 1)
    return max(1, int(threads))


class BitMatrix:
    """Dense GF(2) matrix with word-packed rows.

    Treated as immutable: every operation that eliminates or combines rows
    works on a private copy.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        if rows < 0 or cols < 0:
            raise DimensionMismatchError("matrix shape must be non-negative")
        self.rows = rows
        self.cols = cols
        nw = _nwords(cols)
        if data is None:
            data = np.zeros((rows, nw), dtype=np.uint64)
        else:
            data = np.asarray(data, dtype=np.uint64)
            if data.shape != (rows, nw):
                raise DimensionMismatchError(
                    f"packed data has shape {data.shape}, expected {(rows, nw)}"
                )
            rem = cols % WORD
            if rem and nw and np.any(data[:, -1] >> np.uint64(rem)):
                raise ValueError("padding bits beyond cols must be zero")
        self.data = data

    # construction -----------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        m = cls(n, n)
        idx = np.arange(n)
        m.data[idx, idx // WORD] = _ONE << (idx % WORD).astype(np.uint64)
        return m

    @classmethod
    def from_dense(cls, array) -> "BitMatrix":
        array = np.asarray(array)
        if array.ndim != 2:
            raise DimensionMismatchError("expected a 2-D array")
        rows, cols = array.shape
        return cls(rows, cols, _pack_bits(array, cols))

    def to_dense(self) -> np.ndarray:
        return _unpack_bits(self.data, self.cols)

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, self.data.copy())

    # element access ---------------------------------------------------------

    def __getitem__(self, ij) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return int((self.data[i, j // WORD] >> np.uint64(j % WORD)) & _ONE)

    def row_bits(self, i: int) -> int:
        """Row ``i`` as a Python integer bitset."""
        return int.from_bytes(self.data[i].astype("<u8").tobytes(), "little")

    def column(self, j: int) -> np.ndarray:
        return ((self.data[:, j // WORD] >> np.uint64(j % WORD)) & _ONE).astype(np.uint8)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.data, other.data)

    __hash__ = None

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"

    def is_zero(self) -> bool:
        return not self.data.any()

    # algebra ----------------------------------------------------------------

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise DimensionMismatchError(f"{self.shape} + {other.shape}")
        return BitMatrix(self.rows, self.cols, self.data ^ other.data)

    __xor__ = __add__

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)

    @property
    def T(self) -> "BitMatrix":
        return self.transpose()

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return matmul(self, other)

    def apply(self, v) -> np.ndarray:
        return apply(self, v)

    def rank(self, threads: int | None = None) -> int:
        return rank(self, threads=threads)

    def permute(self, row_order, col_order) -> "BitMatrix":
        """Matrix whose entry (a, b) is ``self[row_order[a], col_order[b]]``."""
        dense = self.to_dense()
        return BitMatrix.from_dense(dense[np.asarray(row_order)][:, np.asarray(col_order)])

    # serialization ----------------------------------------------------------

    def dumps(self) -> str:
        """Text dump: ``gf2 rows cols`` then one lowercase hex string per row.

        Each hex string is the row's bytes in little-endian bit order: column
        ``j`` is bit ``j % 8`` of byte ``j // 8``.
        """
        nbytes = (self.cols + 7) // 8
        raw = np.ascontiguousarray(self.data.astype("<u8")).view(np.uint8)
        lines = [f"gf2 {self.rows} {self.cols}"]
        lines.extend(raw[i, :nbytes].tobytes().hex() for i in range(self.rows))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "BitMatrix":
        lines = text.splitlines()
        if not lines:
            raise ValueError("empty matrix dump")
        head = lines[0].split()
        if len(head) != 3 or head[0] != "gf2":
            raise ValueError(f"bad matrix dump header: {lines[0]!r}")
        rows, cols = int(head[1]), int(head[2])
        body = lines[1 : 1 + rows]
        if len(body) != rows:
            raise ValueError(f"expected {rows} rows, found {len(body)}")
        nbytes = (cols + 7) // 8
        buf = np.zeros((rows, _nwords(cols) * 8), dtype=np.uint8)
        for i, line in enumerate(body):
            row = bytes.fromhex(line.strip())
            if len(row) != nbytes:
                raise ValueError(f"row {i}: expected {nbytes} bytes, got {len(row)}")
            buf[i, :nbytes] = np.frombuffer(row, dtype=np.uint8)
        return cls(rows, cols, buf.view("<u8").astype(np.uint64))

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path) -> "BitMatrix":
        with open(path) as fh:
            return cls.loads(fh.read())


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------


def _xor_rows(a: np.ndarray, targets: np.ndarray, pivot_row: np.ndarray, w: int, pool) -> None:
    if pool is None or targets.size < _PARALLEL_MIN_ROWS:
        a[targets, w:] ^= pivot_row
        return

    # row blocks are disjoint, so the result cannot depend on scheduling
    def work(block):
        a[block, w:] ^= pivot_row

    list(pool.map(work, np.array_split(targets, pool._max_workers)))


def _echelon(a: np.ndarray, cols: int, reduced: bool, threads: int) -> list[int]:
    """In-place Gaussian elimination on packed rows; returns pivot columns.

    Pivot for each column is the first row (in current order) with that bit set.
    """
    nrows = a.shape[0]
    pivots: list[int] = []
    r = 0
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        for c in range(cols):
            if r == nrows:
                break
            w, b = divmod(c, WORD)
            shift = np.uint64(b)
            nz = np.flatnonzero((a[r:, w] >> shift) & _ONE)
            if nz.size == 0:
                continue
            p = r + int(nz[0])
            if p != r:
                a[[r, p]] = a[[p, r]]
            targets = r + nz[1:]
            if reduced and r:
                above = np.flatnonzero((a[:r, w] >> shift) & _ONE)
                targets = np.concatenate([above, targets])
            if targets.size:
                _xor_rows(a, targets, a[r, w:].copy(), w, pool)
            pivots.append(c)
            r += 1
    finally:
        if pool is not None:
            pool.shutdown()
    return pivots


def rank(m: BitMatrix, threads: int | None = None) -> int:
    """Rank over GF(2). The input matrix is left untouched."""
    # eliminate along the shorter side
    work = m if m.rows <= m.cols else m.transpose()
    if work.rows == 0 or work.cols == 0:
        return 0
    return len(_echelon(work.data.copy(), work.cols, False, resolve_threads(threads)))


def rref(m: BitMatrix, threads: int | None = None) -> tuple[BitMatrix, list[int]]:
    """Reduced row echelon form and its pivot columns."""
    a = m.data.copy()
    pivots = _echelon(a, m.cols, True, resolve_threads(threads))
    return BitMatrix(m.rows, m.cols, a), pivots


def kernel_basis(m: BitMatrix) -> BitMatrix:
    """Basis of the right null space, one basis vector per row."""
    red, pivots = rref(m)
    r = len(pivots)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    basis = np.zeros((len(free), m.cols), dtype=np.uint8)
    if free:
        dense = red.to_dense()[:r]
        for b, f in enumerate(free):
            basis[b, f] = 1
            basis[b, pivots] = dense[:, f]
    return BitMatrix.from_dense(basis.reshape(len(free), m.cols))


def compose_rank_checks(m: BitMatrix, threads: int | None = None) -> tuple[int, int]:
    """``(rank, kernel_dim)`` with ``kernel_dim = cols - rank``."""
    r = rank(m, threads=threads)
    return r, m.cols - r


def apply(m: BitMatrix, v) -> np.ndarray:
    """Matrix-vector product over GF(2); ``v`` is a 0/1 sequence of length cols."""
    v = np.asarray(v, dtype=np.uint8).ravel()
    if v.size != m.cols:
        raise DimensionMismatchError(f"vector length {v.size} != cols {m.cols}")
    packed = _pack_bits(v[None, :], m.cols)[0]
    return (np.bitwise_count(m.data & packed).sum(axis=1) & 1).astype(np.uint8)


def matmul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Product over GF(2) by the method of four Russians with 8-bit groups."""
    if a.cols != b.rows:
        raise DimensionMismatchError(f"{a.shape} @ {b.shape}")
    out = np.zeros((a.rows, _nwords(b.cols)), dtype=np.uint64)
    if a.rows == 0 or b.cols == 0 or a.cols == 0:
        return BitMatrix(a.rows, b.cols, out)
    a_bytes = np.ascontiguousarray(a.data.astype("<u8")).view(np.uint8)
    table = np.zeros((256, out.shape[1]), dtype=np.uint64)
    for g in range((a.cols + 7) // 8):
        table[:] = 0
        for t in range(min(8, a.cols - 8 * g)):
            half = 1 << t
            table[half : 2 * half] = table[:half] ^ b.data[8 * g + t]
        out ^= table[a_bytes[:, g]]
    return BitMatrix(a.rows, b.cols, out)


# ---------------------------------------------------------------------------
# chains
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Chain:
    """A GF(2) combination of the ``2**k`` generators, as an integer bitset.

    Bit ``p`` is set when the generator with mask ``p`` has coefficient 1.
    """

    k: int
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0 or self.bits >> (1 << self.k):
            raise DimensionMismatchError(f"chain bits exceed 2**{self.k} generators")

    @classmethod
    def from_codes(cls, k: int, codes: Iterable) -> "Chain":
        bits = 0
        for c in codes:
            bits ^= 1 << int(getattr(c, "mask", c))
        return cls(k, bits)

    @classmethod
    def zero(cls, k: int) -> "Chain":
        return cls(k, 0)

    @property
    def dim(self) -> int:
        return 1 << self.k

    def codes(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def support(self) -> set[int]:
        return set(self.codes())

    def weight(self) -> int:
        return bin(self.bits).count("1")

    def is_zero(self) -> bool:
        return self.bits == 0

    def __bool__(self) -> bool:
        return self.bits != 0

    def __add__(self, other: "Chain") -> "Chain":
        if self.k != other.k:
            raise DimensionMismatchError(f"chains of k={self.k} and k={other.k}")
        return Chain(self.k, self.bits ^ other.bits)

    __xor__ = __add__
    __sub__ = __add__

    def to_array(self) -> np.ndarray:
        n = self.dim
        raw = self.bits.to_bytes((n + 7) // 8, "little")
        return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:n]

    @classmethod
    def from_array(cls, k: int, v) -> "Chain":
        v = np.asarray(v, dtype=np.uint8).ravel()
        if v.size != 1 << k:
            raise DimensionMismatchError(f"vector length {v.size} != 2**{k}")
        return cls(k, int.from_bytes(np.packbits(v & 1, bitorder="little").tobytes(), "little"))
