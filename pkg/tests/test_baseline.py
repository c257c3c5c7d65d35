import math

import pytest

from expansion_bounds.baseline import (
    SMALL_SET_ALPHA, baseline, bollobas_bound, bollobas_eta, small_set_floor,
)
from expansion_bounds.errors import OutOfDomain
from expansion_bounds.symmetric import nu_star

TABLE = {4: 0.4401, 6: 1.0437, 8: 1.7160}


def lhs(eta):
    return (1 - eta) * math.log2(1 - eta) + (1 + eta) * math.log2(1 + eta)


@pytest.mark.parametrize("delta", sorted(TABLE))
def test_table_column(delta):
    assert round(bollobas_bound(delta), 4) == TABLE[delta]


def test_eta_delta4():
    # consistent with the 0.4401 column entry: eta = 1 - 0.4401/2
    eta = bollobas_eta(4)
    assert eta == pytest.approx(0.77994, abs=1e-5)
    assert (1 - eta) * 4 / 2 == pytest.approx(0.4401, abs=5e-5)


@pytest.mark.parametrize("delta", [4, 6, 8, 20, 100])
def test_eta_residual(delta):
    assert lhs(bollobas_eta(delta)) == pytest.approx(4 / delta, abs=1e-12)


def test_eta_decreases_with_delta():
    assert bollobas_eta(100) < bollobas_eta(8) < bollobas_eta(6) < bollobas_eta(4)


@pytest.mark.parametrize("delta", [2, 3, 5, 0, -4])
def test_invalid_delta(delta):
    with pytest.raises(OutOfDomain):
        bollobas_eta(delta)


def test_tol_floor():
    with pytest.raises(ValueError):
        bollobas_eta(4, tol=1e-15)


@pytest.mark.parametrize("delta", [4, 6, 8])
def test_result_fields(delta):
    r = baseline(delta)
    assert r.delta == delta
    assert 0 < r.eta < 1
    assert r.nu_lower < (1 - r.eta) * delta / 2 + 1e-12
    assert r.nu_lower == pytest.approx((1 - r.eta) * delta / 2, abs=1e-12)
    assert r.small_set_alpha == SMALL_SET_ALPHA == 0.1
    assert r.small_set_floor == small_set_floor(delta) == 3 * delta / 8 - 1


def test_improvement_ratios():
    ratios = {d: nu_star(d) / bollobas_bound(d) for d in (4, 6, 8)}
    assert all(r > 1.05 for r in ratios.values())
    assert ratios[4] > 1.10
