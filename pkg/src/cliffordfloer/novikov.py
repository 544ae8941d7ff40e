"""Floer complex over the Novikov field of Z/2 Laurent series in ``e``.

A scalar is ``sum a_j e^j`` with finitely many negative powers. Values are
either exact (finite Laurent polynomials) or known only modulo
``e^abs_prec``; arithmetic tracks that bound and never drops a leading term.

The complex uses the basis ``v_q = e^{-j} [q, u_q]`` where ``u_q`` is a chain of
index-1 strips from ``q0 = [1:...:1]`` to ``q``. Gradings and actions follow the
rule "even number of +1 coordinates <=> grading 0, action 0".
"""
from __future__ import annotations

import re
from dataclasses import asdict, dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    NovikovZeroDivisionError,
    ObstructionError,
    PrecisionError,
    UnsupportedDimensionError,
)
from .gf2linalg import BitMatrix
from .signvec import PointCode, all_points, flip_mask

# widest coefficient window an entry of NovikovMatrix can hold
WINDOW = 64


def _clmul(a: int, b: int) -> int:
    """Carry-less product of two bitsets (polynomial product over Z/2)."""
    if a.bit_length() > b.bit_length():
        a, b = b, a
    out = 0
    i = 0
    while a:
        if a & 1:
            out ^= b << i
        a >>= 1
        i += 1
    return out


def _min_prec(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class NovikovScalar:
    """Element of the Novikov field over Z/2.

    ``valuation`` is the lowest exponent present (``None`` for zero),
    ``coeffs`` holds a_valuation, a_valuation+1, ... as bits 0, 1, ... and
    ``abs_prec`` is the exponent from which coefficients are unknown (``None``
    when the value is exact).
    """

    __slots__ = ("valuation", "coeffs", "abs_prec")

    def __init__(self, valuation: int | None, coeffs: int, abs_prec: int | None = None):
        if coeffs < 0:
            raise ValueError("coeffs must be a non-negative bitset")
        if coeffs == 0:
            valuation = None
        else:
            if valuation is None:
                raise ValueError("nonzero scalar needs a valuation")
            tz = (coeffs & -coeffs).bit_length() - 1
            valuation += tz
            coeffs >>= tz
            if abs_prec is not None:
                if abs_prec <= valuation:
                    valuation, coeffs = None, 0
                elif coeffs.bit_length() > abs_prec - valuation:
                    coeffs &= (1 << (abs_prec - valuation)) - 1
        self.valuation = valuation
        self.coeffs = coeffs
        self.abs_prec = abs_prec

    # constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, abs_prec: int | None = None) -> "NovikovScalar":
        return cls(None, 0, abs_prec)

    @classmethod
    def one(cls) -> "NovikovScalar":
        return cls(0, 1)

    @classmethod
    def monomial(cls, j: int, precision: int | None = None) -> "NovikovScalar":
        return cls(j, 1, None if precision is None else j + precision)

    @classmethod
    def from_exponents(cls, exponents, precision: int | None = None) -> "NovikovScalar":
        """Sum of ``e^j`` over ``exponents`` (repeats cancel).

        With ``precision`` the value is known only on a window of that many
        terms starting at its lowest exponent.
        """
        exps = [int(j) for j in exponents]
        if not exps:
            return cls.zero()
        low = min(exps)
        bits = 0
        for j in exps:
            bits ^= 1 << (j - low)
        s = cls(low, bits)
        if precision is not None and not s.is_zero():
            s = cls(s.valuation, s.coeffs, s.valuation + precision)
        return s

    # properties -------------------------------------------------------------

    @property
    def precision(self) -> int | None:
        """Relative window length (``None`` if exact)."""
        if self.abs_prec is None:
            return None
        if self.valuation is None:
            return 0
        return self.abs_prec - self.valuation

    @property
    def exact(self) -> bool:
        return self.abs_prec is None

    def is_zero(self) -> bool:
        return self.coeffs == 0

    def __bool__(self) -> bool:
        return self.coeffs != 0

    def exponents(self) -> list[int]:
        out = []
        bits, i = self.coeffs, 0
        while bits:
            if bits & 1:
                out.append(self.valuation + i)
            bits >>= 1
            i += 1
        return out

    def is_monomial(self) -> bool:
        return self.coeffs == 1

    # arithmetic -------------------------------------------------------------

    def __add__(self, other: "NovikovScalar") -> "NovikovScalar":
        if not isinstance(other, NovikovScalar):
            return NotImplemented
        ap = _min_prec(self.abs_prec, other.abs_prec)
        if self.is_zero():
            return NovikovScalar(other.valuation, other.coeffs, ap)
        if other.is_zero():
            return NovikovScalar(self.valuation, self.coeffs, ap)
        low = min(self.valuation, other.valuation)
        bits = (self.coeffs << (self.valuation - low)) ^ (other.coeffs << (other.valuation - low))
        return NovikovScalar(low, bits, ap)

    __sub__ = __add__

    def __neg__(self) -> "NovikovScalar":
        return self

    def __mul__(self, other: "NovikovScalar") -> "NovikovScalar":
        if not isinstance(other, NovikovScalar):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            if (self.is_zero() and self.exact) or (other.is_zero() and other.exact):
                return NovikovScalar.zero()
            # bound of the unknown part: lowest possible term of the product
            a = self.abs_prec if self.is_zero() else self.valuation
            b = other.abs_prec if other.is_zero() else other.valuation
            return NovikovScalar.zero(a + b)
        rel = _min_prec(self.precision, other.precision)
        val = self.valuation + other.valuation
        return NovikovScalar(
            val, _clmul(self.coeffs, other.coeffs), None if rel is None else val + rel
        )

    def inv(self, precision: int | None = None) -> "NovikovScalar":
        """Multiplicative inverse.

        The leading term is inverted by negating the valuation; the unit part
        ``1 + ...`` is inverted by Newton iteration ``y <- x y^2``, doubling the
        number of correct terms per step. ``precision`` bounds the window when
        the result is an infinite series.
        """
        if self.is_zero():
            if self.exact:
                raise NovikovZeroDivisionError("inverse of zero")
            raise PrecisionError(
                f"cannot invert a value known only to be O(e^{self.abs_prec})"
            )
        if self.coeffs == 1 and self.exact:
            return NovikovScalar(-self.valuation, 1)
        window = _min_prec(self.precision, precision)
        if window is None:
            raise PrecisionError("inverse of a non-monomial is an infinite series; give a precision")
        if window < 1:
            raise PrecisionError("precision window must be at least 1")
        x = self.coeffs & ((1 << window) - 1)
        y, have = 1, 1
        while have < window:
            have = min(2 * have, window)
            mask = (1 << have) - 1
            y = _clmul(x & mask, _clmul(y, y)) & mask
        return NovikovScalar(-self.valuation, y, -self.valuation + window)

    def __truediv__(self, other: "NovikovScalar") -> "NovikovScalar":
        return self * other.inv()

    def truncate(self, precision: int) -> "NovikovScalar":
        """Forget everything past ``precision`` terms from the leading one."""
        if self.is_zero():
            return self
        ap = _min_prec(self.abs_prec, self.valuation + precision)
        return NovikovScalar(self.valuation, self.coeffs, ap)

    # comparison / io --------------------------------------------------------

    def _key(self):
        return self.valuation, self.coeffs, self.abs_prec

    def __eq__(self, other) -> bool:
        if not isinstance(other, NovikovScalar):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def congruent(self, other: "NovikovScalar", abs_prec: int) -> bool:
        """Equal modulo ``e^abs_prec`` (ignoring recorded precision)."""
        a = NovikovScalar(self.valuation, self.coeffs, abs_prec)
        b = NovikovScalar(other.valuation, other.coeffs, abs_prec)
        return a.valuation == b.valuation and a.coeffs == b.coeffs

    def __str__(self) -> str:
        terms = [f"e^{j}" for j in self.exponents()]
        if self.abs_prec is not None:
            terms.append(f"O(e^{self.abs_prec})")
        return "+".join(terms) if terms else "0"

    def __repr__(self) -> str:
        return f"NovikovScalar({self})"

    @classmethod
    def parse(cls, text: str) -> "NovikovScalar":
        """Inverse of ``str``: e.g. ``"e^0+e^2"``, ``"e^-1+O(e^3)"``, ``"0"``."""
        text = text.replace(" ", "")
        if text in ("", "0"):
            return cls.zero()
        exps, abs_prec = [], None
        for term in text.split("+"):
            m = re.fullmatch(r"O\(e\^(-?\d+)\)", term)
            if m:
                abs_prec = int(m.group(1))
                continue
            m = re.fullmatch(r"e\^(-?\d+)", term)
            if not m:
                raise ValueError(f"bad Novikov term {term!r}")
            exps.append(int(m.group(1)))
        s = cls.from_exponents(exps)
        return cls(s.valuation, s.coeffs, abs_prec) if abs_prec is not None else s


def to_universal(s: NovikovScalar) -> list[tuple[int, int]]:
    """Image under e^j -> T^{2jc} e^{-j}, as (T exponent in units of c, e exponent)."""
    return [(2 * j, -j) for j in s.exponents()]


def format_universal(s: NovikovScalar) -> str:
    terms = [f"T^{{{t}c}}e^{{{d}}}" for t, d in to_universal(s)]
    return "+".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# graded generators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedGenerator:
    point: PointCode
    j_offset: int
    grading: int
    action_c: int  # action as an integer multiple of c

    def action(self, c: float = 1.0) -> float:
        return self.action_c * c

    def shifted(self, j: int) -> tuple[int, int]:
        """(grading, action_c) of ``e^j`` times this generator."""
        return self.grading - 2 * j, self.action_c - 2 * j

    def to_json(self) -> dict:
        d = asdict(self)
        d["point"] = self.point.to_json()
        return d


def strip_distance(q: PointCode) -> int:
    """Fewest index-1 strips joining q0 = [1:...:1] to ``q``."""
    minus = bin(q.mask).count("1")
    return min(minus, q.k + 1 - minus)


def grade_and_action(q: PointCode) -> GradedGenerator:
    """Grading and action of ``v_q``; even +1 count gives (0, 0), odd (-1, -c)."""
    if q.k % 2 == 0:
        raise UnsupportedDimensionError(f"k={q.k}: grading needs odd k")
    m = strip_distance(q)
    even = q.plus_count() % 2 == 0
    # u_q with m strips has energy m c; v_q = e^{-m//2} [q, u_q]
    return GradedGenerator(q, m // 2, 0 if even else -1, 0 if even else -1)


# ---------------------------------------------------------------------------
# vectorised entries: (valuation, bits, abs_prec) arrays
# ---------------------------------------------------------------------------

_BIG = np.int64(1 << 62)  # exact / no nonzero term
_U1 = np.uint64(1)
_ALL = np.uint64(0xFFFFFFFFFFFFFFFF)


def _bitlen(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64, copy=True)
    n = np.zeros(x.shape, dtype=np.int64)
    for s in (32, 16, 8, 4, 2, 1):
        hi = (x >> np.uint64(s)) != 0
        n += np.where(hi, s, 0)
        x = np.where(hi, x >> np.uint64(s), x)
    return n + (x != 0)


def _trailing_zeros(x: np.ndarray) -> np.ndarray:
    low = x & (~x + _U1)
    return np.maximum(_bitlen(low) - 1, 0)


def _low_mask(width: np.ndarray) -> np.ndarray:
    w = np.clip(width, 0, 64).astype(np.uint64)
    return np.where(w >= 64, _ALL, (_U1 << np.minimum(w, 63)) - _U1)


def _shl(x: np.ndarray, s: np.ndarray) -> np.ndarray:
    s = np.asarray(s)
    ok = (s >= 0) & (s < 64)
    return np.where(ok, x << np.clip(s, 0, 63).astype(np.uint64), np.uint64(0))


def _vec_add(a, b):
    va, ba, pa = a
    vb, bb, pb = b
    nza, nzb = ba != 0, bb != 0
    low = np.minimum(np.where(nza, va, _BIG), np.where(nzb, vb, _BIG))
    has = low < _BIG
    lowc = np.where(has, low, 0)
    ap = np.minimum(pa, pb)
    # window cap: a value whose terms outgrow WINDOW becomes approximate
    top = np.maximum(
        np.where(nza, va + _bitlen(ba), 0), np.where(nzb, vb + _bitlen(bb), 0)
    )
    ap = np.where(has & (top - lowc > WINDOW), np.minimum(ap, lowc + WINDOW), ap)
    width = np.where(has, ap - lowc, 0)
    x = np.where(nza, _shl(ba, va - lowc), 0) ^ np.where(nzb, _shl(bb, vb - lowc), 0)
    x = x.astype(np.uint64) & _low_mask(width)
    nz = x != 0
    tz = _trailing_zeros(x)
    val = np.where(nz, lowc + tz, _BIG)
    bits = np.where(nz, x >> tz.astype(np.uint64), np.uint64(0))
    return val, bits.astype(np.uint64), ap


def _vec_mul(a, b):
    """Elementwise product with numpy broadcasting."""
    va, ba, pa = a
    vb, bb, pb = b
    va, ba, pa, vb, bb, pb = np.broadcast_arrays(va, ba, pa, vb, bb, pb)
    nza, nzb = ba != 0, bb != 0
    exa, exb = pa >= _BIG, pb >= _BIG
    rela = np.where(exa, _BIG, pa - np.where(nza, va, 0))
    relb = np.where(exb, _BIG, pb - np.where(nzb, vb, 0))

    prod = np.zeros(ba.shape, dtype=np.uint64)
    la, lb = _bitlen(ba), _bitlen(bb)
    # loop over the bits of whichever side is shorter overall
    if la.max(initial=0) > lb.max(initial=0):
        ba, bb, la, lb = bb, ba, lb, la
    for i in range(int(la.max(initial=0))):
        sel = ((ba >> np.uint64(i)) & _U1) != 0
        prod ^= np.where(sel, bb << np.uint64(i), np.uint64(0))
    overflow = (la + lb - 1) > 64
    rel = np.minimum(rela, relb)
    rel = np.where(overflow, np.minimum(rel, 64), rel)
    val = np.where(nza & nzb, va + vb, _BIG)
    exact_out = rel >= _BIG
    prod = np.where(exact_out, prod, prod & _low_mask(np.minimum(rel, 64)))
    ap_nz = np.where(exact_out, _BIG, val + np.minimum(rel, 64))

    # zero operands: exact zero annihilates, approximate zero leaves a bound
    za_exact = ~nza & exa
    zb_exact = ~nzb & exb
    bound_a = np.where(nza, va, np.minimum(pa, _BIG // 4))
    bound_b = np.where(nzb, vb, np.minimum(pb, _BIG // 4))
    ap_zero = np.where(za_exact | zb_exact, _BIG, bound_a + bound_b)

    both = nza & nzb
    return (
        np.where(both, val, _BIG),
        np.where(both, prod, np.uint64(0)).astype(np.uint64),
        np.where(both, ap_nz, ap_zero),
    )


def _entries_from_scalars(scalars) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    scalars = list(scalars)
    val = np.empty(len(scalars), dtype=np.int64)
    bits = np.empty(len(scalars), dtype=np.uint64)
    ap = np.empty(len(scalars), dtype=np.int64)
    for i, s in enumerate(scalars):
        if s.coeffs.bit_length() > WINDOW:
            raise PrecisionError(f"scalar {s} does not fit a {WINDOW}-term window")
        val[i] = _BIG if s.valuation is None else s.valuation
        bits[i] = s.coeffs
        ap[i] = _BIG if s.abs_prec is None else s.abs_prec
    return val, bits, ap


def _scalar_at(val, bits, ap) -> NovikovScalar:
    v = None if bits == 0 else int(val)
    return NovikovScalar(v, int(bits), None if ap >= _BIG else int(ap))


class NovikovMatrix:
    """Dense matrix of Novikov scalars stored as three parallel arrays."""

    def __init__(self, val: np.ndarray, bits: np.ndarray, abs_prec: np.ndarray):
        if not (val.shape == bits.shape == abs_prec.shape) or val.ndim != 2:
            raise DimensionMismatchError("entry arrays must share one 2-D shape")
        self.val = val.astype(np.int64)
        self.bits = bits.astype(np.uint64)
        self.abs_prec = abs_prec.astype(np.int64)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "NovikovMatrix":
        shape = (rows, cols)
        return cls(
            np.full(shape, _BIG, dtype=np.int64),
            np.zeros(shape, dtype=np.uint64),
            np.full(shape, _BIG, dtype=np.int64),
        )

    @classmethod
    def from_scalars(cls, rows) -> "NovikovMatrix":
        rows = [list(r) for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        if any(len(r) != nc for r in rows):
            raise DimensionMismatchError("ragged rows")
        val, bits, ap = _entries_from_scalars(s for r in rows for s in r)
        return cls(val.reshape(nr, nc), bits.reshape(nr, nc), ap.reshape(nr, nc))

    @property
    def shape(self) -> tuple[int, int]:
        return self.val.shape

    def __getitem__(self, ij) -> NovikovScalar:
        i, j = ij
        return _scalar_at(self.val[i, j], self.bits[i, j], self.abs_prec[i, j])

    def __setitem__(self, ij, s: NovikovScalar) -> None:
        v, b, a = _entries_from_scalars([s])
        i, j = ij
        self.val[i, j], self.bits[i, j], self.abs_prec[i, j] = v[0], b[0], a[0]

    def copy(self) -> "NovikovMatrix":
        return NovikovMatrix(self.val.copy(), self.bits.copy(), self.abs_prec.copy())

    def nonzero(self) -> np.ndarray:
        return self.bits != 0

    def triples(self) -> list[tuple[int, int, str]]:
        """(row, col, scalar string) for every nonzero entry, row-major."""
        rows, cols = np.nonzero(self.bits)
        return [(int(i), int(j), str(self[i, j])) for i, j in zip(rows, cols)]

    def rank(self, precision: int = 4, pivot: str = "first") -> int:
        return novikov_rank(self, precision=precision, pivot=pivot)


def novikov_rank(m: NovikovMatrix, precision: int = 4, pivot: str = "first") -> int:
    """Rank by column-wise elimination with a minimal-valuation pivot.

    ``pivot`` chooses the first or last row among equal minimal valuations.
    Raises PrecisionError when a column holds no certain nonzero but some
    entry is only known to be O(e^A).
    """
    if precision < 1 or precision > WINDOW:
        raise ValueError(f"precision must be in 1..{WINDOW}")
    if pivot not in ("first", "last"):
        raise ValueError("pivot must be 'first' or 'last'")
    val, bits, ap = m.val.copy(), m.bits.copy(), m.abs_prec.copy()
    nrows, ncols = val.shape
    used = np.zeros(nrows, dtype=bool)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        free = ~used
        cand = free & (bits[:, c] != 0)
        if not cand.any():
            if np.any(free & (ap[:, c] < _BIG)):
                raise PrecisionError(
                    f"column {c}: entries indistinguishable from zero at precision {precision}"
                )
            continue
        vals = np.where(cand, val[:, c], _BIG)
        ties = np.flatnonzero(vals == vals.min())
        p = int(ties[0] if pivot == "first" else ties[-1])
        used[p] = True
        r += 1
        targets = np.flatnonzero(~used & ((bits[:, c] != 0) | (ap[:, c] < _BIG)))
        if targets.size == 0:
            continue
        pinv = _scalar_at(val[p, c], bits[p, c], ap[p, c]).inv(precision)
        pv, pb, pa = _entries_from_scalars([pinv])
        f = _vec_mul((val[targets, c], bits[targets, c], ap[targets, c]), (pv, pb, pa))
        act = np.flatnonzero((bits[p] != 0) | (ap[p] < _BIG))
        act = act[act != c]
        if act.size:
            row = (val[p, act], bits[p, act], ap[p, act])
            prod = _vec_mul(
                tuple(x[:, None] for x in f), tuple(x[None, :] for x in row)
            )
            sub = np.ix_(targets, act)
            nv, nb, na = _vec_add((val[sub], bits[sub], ap[sub]), prod)
            val[sub], bits[sub], ap[sub] = nv, nb, na
        # a_jc - (a_jc / p) p vanishes identically
        val[targets, c], bits[targets, c], ap[targets, c] = _BIG, 0, _BIG
    return r


# ---------------------------------------------------------------------------
# the deformed differential
# ---------------------------------------------------------------------------


def _check_odd(k: int) -> None:
    if k % 2 == 0:
        raise ObstructionError(k, (k + 1) % 2)


def generators(k: int) -> list[GradedGenerator]:
    _check_odd(k)
    return [grade_and_action(q) for q in all_points(k)]


def novikov_boundary_matrix(k: int) -> NovikovMatrix:
    """Matrix of the deformed differential in the basis {v_q}, ordered by mask.

    Column ``q`` lists n'(v_q, v_q') over rows ``q'``: the Z/2 column when
    ``q`` has an even +1 count, ``e`` times it when odd.
    """
    from .chain_complex import _check_matrix_k

    _check_matrix_k(k)
    _check_odd(k)
    n = 1 << k
    m = NovikovMatrix.zeros(n, n)
    masks = [flip_mask(k, i) for i in range(k + 1)]
    for q in all_points(k):
        scale = 0 if q.plus_count() % 2 == 0 else 1
        hits: dict[int, int] = {}
        for fm in masks:
            hits[q.mask ^ fm] = hits.get(q.mask ^ fm, 0) ^ 1
        for row, on in hits.items():
            if on:
                m.val[row, q.mask] = scale
                m.bits[row, q.mask] = 1
                m.abs_prec[row, q.mask] = _BIG
    return m


def column_factorization(m: NovikovMatrix) -> tuple[BitMatrix, list[int | None]]:
    """Split m = Z D with Z over Z/2 and D diagonal with monomial entries.

    Returns Z and the exponent of each column's monomial (``None`` for an
    empty column). Raises ValueError if some column is not a monomial
    multiple of a 0/1 column.
    """
    nr, nc = m.shape
    z = np.zeros((nr, nc), dtype=np.uint8)
    scales: list[int | None] = []
    for j in range(nc):
        rows = np.flatnonzero(m.bits[:, j])
        if rows.size == 0:
            scales.append(None)
            continue
        if np.any(m.bits[rows, j] != 1) or np.any(m.abs_prec[rows, j] < _BIG):
            raise ValueError(f"column {j} has a non-monomial entry")
        exps = np.unique(m.val[rows, j])
        if exps.size != 1:
            raise ValueError(f"column {j} mixes exponents {exps.tolist()}")
        scales.append(int(exps[0]))
        z[rows, j] = 1
    return BitMatrix.from_dense(z), scales


def check_filtration(k: int) -> bool:
    """Every nonzero n'(v_q, v_q') lowers grading by one and strictly lowers action."""
    gens = generators(k)
    m = novikov_boundary_matrix(k)
    for row, col in zip(*np.nonzero(m.bits)):
        src, dst = gens[col], gens[row]
        shift = int(m.val[row, col])
        gr_t, act_t = dst.shifted(shift)
        if gr_t != src.grading - 1 or not src.action_c > act_t:
            return False
    return True


def hf_dimension_novikov(k: int, precision: int = 4, pivot: str = "first") -> int:
    """dim over the Novikov field of the homology of the deformed complex."""
    from .chain_complex import boundary_rank

    if precision < 1:
        raise ValueError("precision must be >= 1")
    m = novikov_boundary_matrix(k)
    r = novikov_rank(m, precision=precision, pivot=pivot)
    z2 = boundary_rank(k)
    if r != z2:
        raise AssertionError(f"Novikov rank {r} differs from Z/2 rank {z2}")
    return (1 << k) - 2 * r


def novikov_report(k: int, precision: int = 4) -> dict:
    from .chain_complex import boundary_rank

    m = novikov_boundary_matrix(k)
    r = novikov_rank(m, precision=precision)
    gens = generators(k)
    return {
        "k": k,
        "precision": precision,
        "rank": r,
        "rank_z2": boundary_rank(k),
        "hf_dim": (1 << k) - 2 * r,
        "grading_counts": {
            "0": sum(g.grading == 0 for g in gens),
            "-1": sum(g.grading == -1 for g in gens),
        },
    }
