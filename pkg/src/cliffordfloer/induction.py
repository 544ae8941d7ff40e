"""Dimension recursion from CF(n) to CF(N), N = n + 1.

Here CF(m) is the complex for k = 2m - 1. A generator of CF(N) is written
``(a, b, y)`` where ``a, b`` are its first two tail signs and ``y`` is a
generator of CF(n); in mask form that is ``(y << 2) | [a = -1] | [b = -1] << 1``.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .chain_complex import boundary, boundary_matrix, eta, tilde_boundary
from .errors import (
    CapacityError,
    DimensionMismatchError,
    DomainConstraintError,
    NotInPreimageError,
)
from .gf2linalg import BitMatrix, Chain, kernel_basis, rank

MAX_RECURSION_N = 6

# block offsets in the low two mask bits
PP, MM, MP, PM = 0b00, 0b11, 0b01, 0b10  # (1,1) (-1,-1) (-1,1) (1,-1)


def k_of(n: int) -> int:
    return 2 * n - 1


def _offset(a: int, b: int) -> int:
    if a not in (1, -1) or b not in (1, -1):
        raise ValueError("block signs must be +1 or -1")
    return (a == -1) | ((b == -1) << 1)


def embed(a: int, b: int, y: Chain) -> Chain:
    """The chain ``(a, b, y)`` in the complex two dimensions up."""
    off = _offset(a, b)
    bits = 0
    for q in y.codes():
        bits |= 1 << ((q << 2) | off)
    return Chain(y.k + 2, bits)


def block(x: Chain, a: int, b: int) -> Chain:
    """Coefficient chain of the generators of ``x`` starting with ``(a, b)``."""
    if x.k < 3:
        raise DimensionMismatchError(f"chain with k={x.k} has no two-coordinate blocks")
    off = _offset(a, b)
    bits = 0
    for p in x.codes():
        if p & 3 == off:
            bits |= 1 << (p >> 2)
    return Chain(x.k - 2, bits)


def project(x: Chain) -> Chain:
    """Delete the first two tail coordinates of every generator, mod 2."""
    if x.k < 3 or x.k % 2 == 0:
        raise DimensionMismatchError(f"project expects k = 2N - 1 >= 3, got k={x.k}")
    bits = 0
    for p in x.codes():
        bits ^= 1 << (p >> 2)
    return Chain(x.k - 2, bits)


def rebuild(u: Chain, v: Chain, w: Chain, t: Chain) -> Chain:
    """x = (1,1,u)+(-1,-1,u)+(-1,1,v)+(1,-1,v)+(1,1,w)+(-1,1,w)+(1,1,t)."""
    _same_k(u, v, w, t)
    return (
        embed(1, 1, u)
        + embed(-1, -1, u)
        + embed(-1, 1, v)
        + embed(1, -1, v)
        + embed(1, 1, w)
        + embed(-1, 1, w)
        + embed(1, 1, t)
    )


def decompose(x: Chain) -> tuple[Chain, Chain, Chain, Chain]:
    """Unique ``(u, v, w, t)`` with ``rebuild(u, v, w, t) == x``.

    Requires ``boundary(project(x)) == 0``; then ``t = project(x)``.
    """
    if boundary(project(x)):
        raise NotInPreimageError("x is not in the preimage of the cycles under project")
    u = block(x, -1, -1)
    v = block(x, 1, -1)
    w = block(x, -1, 1) + v
    t = block(x, 1, 1) + u + w
    if rebuild(u, v, w, t) != x or boundary(t):
        raise AssertionError("decomposition failed to reproduce its input")
    return u, v, w, t


def _same_k(*chains: Chain) -> None:
    if len({c.k for c in chains}) != 1:
        raise DimensionMismatchError("chains live in different complexes")


def check_cycle_relations(u: Chain, v: Chain, w: Chain, t: Chain) -> bool:
    """The three relations that make ``rebuild(u, v, w, t)`` a cycle."""
    _same_k(u, v, w, t)
    return (
        boundary(v) == w + t + eta(w)
        and boundary(u) == w + eta(t) + eta(w)
        and not boundary(w)
    )


def block_equations(u: Chain, v: Chain, w: Chain, t: Chain) -> tuple[bool, bool, bool, bool]:
    """The four per-block vanishing conditions of d(rebuild(u, v, w, t)).

    Order of blocks: (-1,1), (1,-1), (1,1), (-1,-1). Valid for ``t`` a cycle.
    """
    _same_k(u, v, w, t)
    tb, e = tilde_boundary, eta
    return (
        not (tb(w) + w + tb(v) + e(v) + t),
        not (e(w) + w + e(v) + tb(v) + t),
        not (w + tb(w) + e(u) + tb(u) + tb(t)),
        not (w + e(w) + tb(u) + e(u) + e(t)),
    )


def alpha(u: Chain, v: Chain, w: Chain, t: Chain) -> tuple[Chain, Chain]:
    """(u, v, w, t) -> (d(eta u) + d v, d(eta u) + w + t + eta w).

    ``w`` and ``t`` must be cycles. The first component is a boundary and the
    second a cycle.
    """
    _same_k(u, v, w, t)
    if boundary(w) or boundary(t):
        raise DomainConstraintError("alpha is only defined for cycles w and t")
    deu = boundary(eta(u))
    first = deu + boundary(v)
    second = deu + w + t + eta(w)
    if boundary(second):
        raise AssertionError("second component of alpha is not a cycle")
    return first, second


def commutation_holds(N: int) -> bool:
    """project∘d_N == d_n∘project on every generator of CF(N)."""
    K = k_of(N)
    for p in range(1 << K):
        x = Chain(K, 1 << p)
        if project(boundary(x)) != boundary(project(x)):
            return False
    return True


# ---------------------------------------------------------------------------
# dimension bookkeeping
# ---------------------------------------------------------------------------


def _eta_perm(k: int) -> np.ndarray:
    return np.arange(1 << k) ^ ((1 << k) - 1)


def alpha_matrix(n: int) -> tuple[BitMatrix, BitMatrix]:
    """Matrix of alpha in the coordinates (u, v, w-coeffs, t-coeffs).

    ``w`` and ``t`` are expressed in the returned kernel basis of ``d_n``
    (one basis vector per row).
    """
    k = k_of(n)
    d = boundary_matrix(k).to_dense().astype(np.uint8)
    ker = kernel_basis(boundary_matrix(k))
    basis = ker.to_dense().T.astype(np.uint8)  # 2^k x dim ker
    dim = 1 << k
    # column p of d∘eta is column eta(p) of d
    d_eta = d[:, _eta_perm(k)]
    eta_basis = basis[_eta_perm(k), :]
    zeros_cf = np.zeros((dim, dim), dtype=np.uint8)
    zeros_ker = np.zeros((dim, basis.shape[1]), dtype=np.uint8)
    top = np.hstack([d_eta, d, zeros_ker, zeros_ker])
    bottom = np.hstack([d_eta, zeros_cf, basis ^ eta_basis, basis])
    return BitMatrix.from_dense(np.vstack([top, bottom]) & 1), ker


@dataclass(frozen=True)
class RecursionReport:
    n: int
    N: int
    dim_cf_n: int
    dim_cf_N: int
    dim_ker_alpha: int
    half_cf_N_plus_hf_n: int
    hf_n: int
    hf_N: int
    dim_ker_boundary_N: int
    alpha_rank: int
    alpha_onto: bool
    holds: bool

    def to_json(self) -> dict:
        return asdict(self)


def recursion_check(n: int, threads: int | None = None) -> RecursionReport:
    """Verify dim Ker(alpha) = dim CF(N)/2 + dim HF(n) and HF(N) = 2 HF(n)."""
    if n < 1:
        raise DimensionMismatchError("n must be >= 1")
    if n > MAX_RECURSION_N:
        raise CapacityError(f"n={n} exceeds desk-scale cap {MAX_RECURSION_N}")
    N = n + 1
    k, K = k_of(n), k_of(N)
    rank_n = rank(boundary_matrix(k), threads=threads)
    rank_N = rank(boundary_matrix(K), threads=threads)
    dim_cf_n, dim_cf_N = 1 << k, 1 << K
    ker_n = dim_cf_n - rank_n
    hf_n = dim_cf_n - 2 * rank_n
    hf_N = dim_cf_N - 2 * rank_N

    amat, ker = alpha_matrix(n)
    a_rank = rank(amat, threads=threads)
    dim_ker_alpha = amat.cols - a_rank
    half_plus = dim_cf_N // 2 + hf_n
    onto = a_rank == rank_n + ker_n
    holds = (
        ker.rows == ker_n
        and dim_ker_alpha == half_plus
        and dim_ker_alpha == dim_cf_N - rank_N
        and hf_N == 2 * hf_n
        and onto
    )
    return RecursionReport(
        n=n,
        N=N,
        dim_cf_n=dim_cf_n,
        dim_cf_N=dim_cf_N,
        dim_ker_alpha=dim_ker_alpha,
        half_cf_N_plus_hf_n=half_plus,
        hf_n=hf_n,
        hf_N=hf_N,
        dim_ker_boundary_N=dim_cf_N - rank_N,
        alpha_rank=a_rank,
        alpha_onto=onto,
        holds=holds,
    )
