import itertools

import numpy as np
import pytest

from cliffordfloer.chain_complex import boundary, boundary_matrix, eta
from cliffordfloer.errors import (
    CapacityError,
    DimensionMismatchError,
    DomainConstraintError,
    NotInPreimageError,
)
from cliffordfloer.gf2linalg import Chain, kernel_basis
from cliffordfloer.induction import (
    alpha,
    block_equations,
    check_cycle_relations,
    commutation_holds,
    decompose,
    embed,
    project,
    rebuild,
    recursion_check,
)
from cliffordfloer.signvec import canonicalize
from oracles import decomposition_samples


def test_project_deletes_two_coordinates():
    # [1:-1:1:1:1:1] -> [1:1:1:1]
    x = Chain.from_codes(5, [canonicalize([1, -1, 1, 1, 1, 1]).mask])
    assert project(x) == Chain.from_codes(3, [0])
    y = Chain.from_codes(3, [5])
    assert project(embed(1, 1, y) + embed(-1, -1, y)).is_zero()


def test_project_by_signs_oracle():
    # delete tail coordinates 1 and 2 from an explicit sign vector
    for mask in range(1 << 5):
        signs = [1] + [-1 if (mask >> i) & 1 else 1 for i in range(5)]
        expect = canonicalize([signs[0]] + signs[3:])
        assert project(Chain(5, 1 << mask)) == Chain.from_codes(3, [expect.mask])


def test_project_dimension_guard():
    with pytest.raises(DimensionMismatchError):
        project(Chain.zero(4))
    with pytest.raises(DimensionMismatchError):
        project(Chain.zero(1))


@pytest.mark.parametrize("N", [2, 3, 4])
def test_commutation(N):
    assert commutation_holds(N)


def test_decompose_examples():
    t0 = Chain.zero(3)
    for b in kernel_basis(boundary_matrix(3)).to_dense()[:2]:
        t0 = t0 + Chain.from_array(3, b)
    z = Chain.zero(3)
    assert decompose(embed(1, 1, t0)) == (z, z, z, t0)
    y = Chain.from_codes(3, [2, 6])
    assert decompose(embed(1, 1, y) + embed(-1, -1, y)) == (y, z, z, z)


def test_decompose_refuses_outside_preimage():
    x = embed(1, 1, Chain.from_codes(3, [0]))
    with pytest.raises(NotInPreimageError):
        decompose(x)


def test_round_trip_exhaustive_at_N2():
    # every chain of the k=3 complex lies over a cycle because d vanishes for k=1
    for bits in range(1 << 8):
        x = Chain(3, bits)
        assert rebuild(*decompose(x)) == x
    for u, v, w, t in itertools.product(range(4), repeat=4):
        q = tuple(Chain(1, b) for b in (u, v, w, t))
        assert decompose(rebuild(*q)) == q


def test_round_trip_random_at_N3():
    assert decomposition_samples(3, 2000, seed=11) == 0


def test_relations_biject_onto_cycles_at_N2():
    images = set()
    count = 0
    for u, v, w, t in itertools.product(range(4), repeat=4):
        q = tuple(Chain(1, b) for b in (u, v, w, t))
        if check_cycle_relations(*q):
            count += 1
            images.add(rebuild(*q).bits)
    cycles = {b for b in range(1 << 8) if boundary(Chain(3, b)).is_zero()}
    assert count == len(images) == len(cycles) == 64
    assert images == cycles


@pytest.mark.parametrize("N", [2, 3])
def test_relations_equivalent_to_cycle_and_block_equations(N, rng):
    k = 2 * N - 3
    dim = 1 << k
    ker = [Chain.from_array(k, r) for r in kernel_basis(boundary_matrix(k)).to_dense()]
    for _ in range(3000):
        u, v, w = (Chain.from_array(k, rng.integers(0, 2, dim)) for _ in range(3))
        if rng.random() < 0.5:
            # half the samples use a cycle w, so the third relation holds
            w = sum((b for b, on in zip(ker, rng.integers(0, 2, len(ker))) if on), Chain.zero(k))
        t = sum((b for b, on in zip(ker, rng.integers(0, 2, len(ker))) if on), Chain.zero(k))
        rel = check_cycle_relations(u, v, w, t)
        assert rel == boundary(rebuild(u, v, w, t)).is_zero()
        assert rel == all(block_equations(u, v, w, t))


def test_relations_hold_on_trivial_and_fail_without_cycle_w():
    k = 3
    z = Chain.zero(k)
    assert check_cycle_relations(z, z, z, z)
    w = Chain.from_codes(k, [0])
    assert not boundary(w).is_zero()
    assert not check_cycle_relations(z, z, w, z)


def test_alpha_examples_and_domain():
    k = 3
    z = Chain.zero(k)
    v = Chain.from_codes(k, [1, 6])
    assert alpha(z, v, z, z) == (boundary(v), z)
    with pytest.raises(DomainConstraintError):
        alpha(z, z, Chain.from_codes(k, [0]), z)


def test_alpha_kernel_agrees_with_relations_on_random_quadruples(rng):
    k = 5
    dim = 1 << k
    ker = [Chain.from_array(k, r) for r in kernel_basis(boundary_matrix(k)).to_dense()]

    def rand_cycle():
        return sum((b for b, on in zip(ker, rng.integers(0, 2, len(ker))) if on), Chain.zero(k))

    for _ in range(2000):
        w, t = rand_cycle(), rand_cycle()
        u = Chain.from_array(k, rng.integers(0, 2, dim))
        v = Chain.from_array(k, rng.integers(0, 2, dim))
        a1, a2 = alpha(u, v, w, t)
        assert (a1.is_zero() and a2.is_zero()) == check_cycle_relations(u, v, w, t)
        assert a1 == boundary(eta(u) + v)
        assert boundary(a2).is_zero()


@pytest.mark.parametrize(
    "n,ker_alpha,hf_n,hf_N", [(1, 6, 2, 4), (2, 20, 4, 8), (3, 72, 8, 16), (4, 272, 16, 32)]
)
def test_recursion_report(n, ker_alpha, hf_n, hf_N):
    rep = recursion_check(n)
    assert rep.holds and rep.alpha_onto
    assert rep.dim_ker_alpha == ker_alpha == rep.dim_cf_N // 2 + rep.hf_n
    assert (rep.hf_n, rep.hf_N) == (hf_n, hf_N)


def test_recursion_limits():
    with pytest.raises(CapacityError):
        recursion_check(7)
    with pytest.raises(DimensionMismatchError):
        recursion_check(0)
