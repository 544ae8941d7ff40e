import itertools

import pytest
from hypothesis import given, strategies as st

from cliffordfloer.errors import (
    CapacityError,
    DimensionMismatchError,
    UnsupportedDimensionError,
)
from cliffordfloer.signvec import (
    PointCode,
    all_points,
    canonicalize,
    eta,
    flip,
    parse_point,
    plus_one_count_parity,
)


def test_canonicalize_examples():
    assert canonicalize([1, 1, 1, 1]).mask == 0
    assert canonicalize([-1, 1, 1, 1]).mask == 0b111
    assert canonicalize([1, -1, 1, 1]).mask == 0b001
    assert canonicalize([-1, -1, -1, -1]).mask == 0


def test_canonicalize_rejects_bad_input():
    with pytest.raises(DimensionMismatchError):
        canonicalize([1, 0, 1])
    with pytest.raises(DimensionMismatchError):
        canonicalize([1, 1], k=3)


def test_all_sign_vectors_cover_each_code_twice():
    for k in range(1, 6):
        seen = {}
        for signs in itertools.product((1, -1), repeat=k + 1):
            p = canonicalize(signs)
            seen[p.mask] = seen.get(p.mask, 0) + 1
        assert sorted(seen) == list(range(1 << k))
        assert set(seen.values()) == {2}


@given(st.integers(1, 20).flatmap(lambda k: st.tuples(st.just(k), st.integers(0, (1 << k) - 1))))
def test_flip_is_involution_and_matches_sign_negation(km):
    k, mask = km
    p = PointCode(k, mask)
    for i in range(k + 1):
        q = flip(p, i)
        assert flip(q, i) == p
        signs = list(p.signs())
        signs[i] = -signs[i]
        assert canonicalize(signs) == q


def test_eta_is_complement():
    p = PointCode(5, 0b10110)
    assert eta(p).mask == 0b01001


def test_parity_needs_odd_k():
    assert plus_one_count_parity(PointCode(3, 0)) == 0
    assert plus_one_count_parity(PointCode(3, 1)) == 1
    with pytest.raises(UnsupportedDimensionError):
        plus_one_count_parity(PointCode(4, 0))


def test_parity_independent_of_representative_for_odd_k():
    for k in (1, 3, 5):
        for p in all_points(k):
            neg_plus = k + 1 - p.plus_count()
            assert neg_plus % 2 == p.plus_count() % 2


def test_string_and_json_round_trip():
    for p in all_points(4):
        assert PointCode.from_string(p.to_string()) == p
        assert PointCode.from_json(p.to_json()) == p


def test_parse_point_forms():
    assert parse_point("5", 3) == PointCode(3, 5)
    assert parse_point("0b101", 3) == PointCode(3, 5)
    assert parse_point("-+-", 3) == PointCode(3, 5)
    with pytest.raises(DimensionMismatchError):
        parse_point("8", 3)
    with pytest.raises(DimensionMismatchError):
        parse_point("-+", 3)


def test_range_checks():
    with pytest.raises(DimensionMismatchError):
        PointCode(0, 0)
    with pytest.raises(CapacityError):
        PointCode(64, 0)
    with pytest.raises(IndexError):
        flip(PointCode(3, 0), 4)
