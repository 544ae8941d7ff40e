import math
from fractions import Fraction

import pytest

from cliffordfloer.volume import comparison_table, crofton_bound, vol_rp, vol_torus, volume_ratio


def test_examples():
    assert vol_rp(1) == pytest.approx(math.pi)
    assert vol_rp(2) == pytest.approx(math.pi**2)
    assert vol_rp(3) == pytest.approx(math.pi**3 / 2)
    assert vol_torus(2) == pytest.approx(math.pi**3 / 2)
    assert vol_torus(1) == vol_rp(1)


@pytest.mark.parametrize("n", range(1, 21))
def test_ratio_against_closed_forms(n):
    direct = (1 / (2 * math.pi)) * (2 * math.pi / math.sqrt(2 * n)) ** (2 * n) / (
        math.pi**n / math.factorial(n - 1)
    )
    quotient = (2 * math.pi) ** (n - 1) * math.factorial(n - 1) / n**n
    assert volume_ratio(n) == pytest.approx(direct, rel=1e-12)
    assert volume_ratio(n) == pytest.approx(quotient, rel=1e-12)
    assert vol_torus(n) / vol_rp(n) == pytest.approx(quotient, rel=1e-12)


def test_exact_values():
    assert volume_ratio(1) == 1.0
    assert abs(volume_ratio(2) - math.pi / 2) < 1e-12
    assert crofton_bound(1) == 1 and crofton_bound(2) == 1
    assert crofton_bound(5) == Fraction(16, 5)
    assert all(crofton_bound(n) == Fraction(2**n, 2 * n) for n in range(1, 30))


def test_bound_active_only_for_circle():
    rows = comparison_table(10)
    assert [r.n for r in rows] == list(range(1, 11))
    assert [r.active for r in rows] == [True] + [False] * 9
    js = rows[1].to_json()
    assert js == {"n": 2, "ratio": volume_ratio(2), "bound": 1.0, "bound_exact": "1/1", "active": False}


def test_range():
    for f in (vol_rp, vol_torus, volume_ratio, crofton_bound, comparison_table):
        with pytest.raises(ValueError):
            f(0)
