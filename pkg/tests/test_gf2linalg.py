import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cliffordfloer.gf2linalg import (
    BitMatrix,
    Chain,
    apply,
    compose_rank_checks,
    kernel_basis,
    matmul,
    rank,
    rref,
)
from conftest import naive_rank_mod2


def test_rank_matches_naive_elimination_on_many_small_matrices(rng):
    for _ in range(10_000):
        r, c = rng.integers(1, 13, size=2)
        density = rng.uniform(0.05, 0.95)
        a = (rng.random((r, c)) < density).astype(np.uint8)
        assert rank(BitMatrix.from_dense(a)) == naive_rank_mod2(a), a


@pytest.mark.parametrize("shape", [(70, 130), (200, 65), (129, 129)])
def test_rank_multiword(rng, shape):
    a = (rng.random(shape) < 0.5).astype(np.uint8)
    assert rank(BitMatrix.from_dense(a)) == naive_rank_mod2(a)


def test_rank_of_structured_matrices():
    assert rank(BitMatrix.identity(100)) == 100
    assert rank(BitMatrix.zeros(7, 9)) == 0
    a = np.zeros((4, 4), dtype=np.uint8)
    a[:, 0] = 1
    assert rank(BitMatrix.from_dense(a)) == 1


def test_rank_is_thread_count_independent(rng):
    a = BitMatrix.from_dense((rng.random((3000, 300)) < 0.5).astype(np.uint8))
    assert rank(a, threads=1) == rank(a, threads=3)


def test_rref_and_kernel(rng):
    for _ in range(200):
        r, c = rng.integers(1, 20, size=2)
        a = (rng.random((r, c)) < 0.4).astype(np.uint8)
        m = BitMatrix.from_dense(a)
        red, pivots = rref(m)
        assert len(pivots) == rank(m)
        d = red.to_dense()
        for i, p in enumerate(pivots):
            assert d[:, p].tolist() == [int(j == i) for j in range(d.shape[0])]
        ker = kernel_basis(m)
        assert ker.rows == c - rank(m)
        if ker.rows:
            assert not ((a.astype(int) @ ker.to_dense().T.astype(int)) % 2).any()
            assert rank(ker) == ker.rows
        assert compose_rank_checks(m) == (rank(m), c - rank(m))


def test_matmul_and_apply_match_integer_products(rng):
    for _ in range(100):
        n, m, p = rng.integers(1, 90, size=3)
        a = (rng.random((n, m)) < 0.5).astype(np.uint8)
        b = (rng.random((m, p)) < 0.5).astype(np.uint8)
        ref = (a.astype(int) @ b.astype(int)) % 2
        got = matmul(BitMatrix.from_dense(a), BitMatrix.from_dense(b)).to_dense()
        assert np.array_equal(got, ref)
        v = (rng.random(m) < 0.5).astype(np.uint8)
        assert np.array_equal(apply(BitMatrix.from_dense(a), v), (a.astype(int) @ v) % 2)


def test_transpose_add_permute(rng):
    a = (rng.random((37, 70)) < 0.5).astype(np.uint8)
    b = (rng.random((37, 70)) < 0.5).astype(np.uint8)
    A, B = BitMatrix.from_dense(a), BitMatrix.from_dense(b)
    assert np.array_equal(A.T.to_dense(), a.T)
    assert np.array_equal((A + B).to_dense(), a ^ b)
    ro, co = rng.permutation(37), rng.permutation(70)
    assert np.array_equal(A.permute(ro, co).to_dense(), a[np.ix_(ro, co)])


@settings(max_examples=60)
@given(st.integers(1, 40), st.integers(1, 140), st.integers(0, 2**32 - 1))
def test_dump_round_trip(r, c, seed):
    a = (np.random.default_rng(seed).random((r, c)) < 0.5).astype(np.uint8)
    m = BitMatrix.from_dense(a)
    text = m.dumps()
    lines = text.strip().split("\n")
    assert lines[0] == f"gf2 {r} {c}"
    assert all(len(line) == 2 * ((c + 7) // 8) for line in lines[1:])
    assert BitMatrix.loads(text) == m


def test_dump_bit_order():
    m = BitMatrix.from_dense(np.array([[1, 0, 0, 0, 0, 0, 0, 0, 1]], dtype=np.uint8))
    assert m.dumps().split("\n")[1] == "0101"


def test_loads_rejects_garbage():
    with pytest.raises(ValueError):
        BitMatrix.loads("gf2 1 8\nzz\n")
    with pytest.raises(ValueError):
        BitMatrix.loads("nope 1 1\n00\n")


def test_chain_arithmetic():
    x = Chain.from_codes(3, [0, 1, 1, 5])
    assert sorted(x.codes()) == [0, 5]
    y = Chain.from_codes(3, [5, 6])
    assert sorted((x + y).codes()) == [0, 6]
    assert (x + x).is_zero()
    assert Chain.from_array(3, x.to_array()) == x
    assert x.weight() == 2
