import numpy as np
import pytest

from cliffordfloer.chain_complex import (
    boundary,
    boundary_image,
    boundary_matrix,
    boundary_rank,
    boundary_square,
    eta,
    hf_dimension,
    homology,
    obstruction,
    tilde_boundary,
)
from cliffordfloer.errors import CapacityError, ObstructionError, UnsupportedDimensionError
from cliffordfloer.gf2linalg import Chain, rank
from cliffordfloer.signvec import PointCode, all_points, canonicalize
from conftest import naive_rank_mod2


def oracle_boundary(k):
    """Negate each homogeneous sign in turn and count the resulting points mod 2."""
    n = 1 << k
    d = np.zeros((n, n), dtype=np.int64)
    for p in all_points(k):
        signs = p.signs()
        for i in range(k + 1):
            s = list(signs)
            s[i] = -s[i]
            d[canonicalize(s).mask, p.mask] += 1
    return d % 2


@pytest.mark.parametrize("k", range(1, 9))
def test_boundary_matrix_matches_sign_negation_oracle(k):
    assert np.array_equal(boundary_matrix(k).to_dense(), oracle_boundary(k))


def test_k1_differential_vanishes():
    assert boundary_matrix(1).is_zero()
    assert hf_dimension(1) == 2


def test_k3_images():
    q0 = PointCode(3, 0)
    assert sorted(boundary_image(q0).codes()) == [1, 2, 4, 7]
    # generator 0b111 = [1:-1:-1:-1] flips to [-1:-1:-1:-1] = q0 and its three neighbours
    assert sorted(boundary_image(PointCode(3, 7)).codes()) == [0, 3, 5, 6]


@pytest.mark.parametrize("k", [2, 3, 5, 6])
def test_chain_maps_agree_with_matrix(k, rng):
    d = boundary_matrix(k).to_dense().astype(int)
    n = 1 << k
    for _ in range(50):
        v = (rng.random(n) < 0.5).astype(int)
        x = Chain.from_array(k, v)
        assert np.array_equal(boundary(x).to_array(), (d @ v) % 2)
        assert boundary(x) == tilde_boundary(x) + eta(x)
        assert eta(eta(x)) == x


@pytest.mark.parametrize("k", range(1, 7))
def test_rank_agrees_with_naive_oracle(k):
    assert boundary_rank(k) == naive_rank_mod2(oracle_boundary(k))


# dims frozen from the naive oracle above for small k and from the packed rank beyond
FROZEN = {1: (0, 2), 3: (2, 4), 5: (12, 8), 7: (56, 16), 9: (240, 32), 11: (992, 64)}


@pytest.mark.parametrize("k", sorted(FROZEN))
def test_homology_dimensions(k):
    r, h = FROZEN[k]
    assert homology(k) == {"k": k, "rank": r, "hf_dim": h}
    assert h == 2 ** ((k + 1) // 2)


def test_even_k_refused():
    with pytest.raises(ObstructionError, match="disk bubbling"):
        hf_dimension(4)
    with pytest.raises(ObstructionError):
        homology(2)


def test_capacity_and_range():
    with pytest.raises(CapacityError):
        boundary_matrix(16)
    with pytest.raises(UnsupportedDimensionError):
        boundary_matrix(0)


@pytest.mark.parametrize("k", range(1, 9))
def test_square_against_integer_product(k):
    d = oracle_boundary(k)
    ref = (d @ d) % 2
    assert np.array_equal(boundary_square(k).to_dense(), ref)
    assert np.array_equal(ref, ((k + 1) % 2) * np.eye(1 << k, dtype=ref.dtype))


@pytest.mark.parametrize("k,total,zero", [(2, 3, False), (3, 4, True), (4, 5, False), (7, 8, True)])
def test_obstruction(k, total, zero):
    rep = obstruction(k)
    assert rep.phi_rp == 0
    assert rep.phi_total == total
    assert rep.square_is_zero is zero
    assert rep.square_matches


def test_obstruction_needs_k_at_least_two():
    with pytest.raises(UnsupportedDimensionError):
        obstruction(1)


def test_cycles_have_expected_dimension():
    for k in (3, 5):
        assert (1 << k) - rank(boundary_matrix(k)) == (1 << (k - 1)) + hf_dimension(k) // 2
