import math
from fractions import Fraction

import pytest

from thin_gasket.errors import DomainError, RealizationError
from thin_gasket.realization import (EtaFunction, comparability_report,
                                     compose_params, elementary_params,
                                     eta_doubling_check,
                                     growth_criterion_check, realize_sequence,
                                     result_horizon, slow_decay_eta,
                                     summability_report)

GOLDEN_LEVELS = (9, 58, 3001, 8888829, 78962962144297)


def test_elementary_eta_values():
    eta = EtaFunction.elementary()
    assert eta(1.0) == pytest.approx(1.0, rel=1e-15)
    r = 0.01
    assert eta(r) == pytest.approx(1 / math.log(math.e - 1 + 1 / r), rel=1e-14)
    y = eta(0.37)
    assert eta.inverse(y) == pytest.approx(0.37, rel=1e-12)


def test_realized_sequence_golden_prefix():
    res = realize_sequence(EtaFunction.elementary(), 5)
    assert res.certified
    assert res.n0 == 1
    assert res.entries == GOLDEN_LEVELS
    assert all(rec.bracket_ok for rec in res.records)
    assert [rec.n for rec in res.records] == [1, 2, 3, 4, 5]
    assert res.sequence.diverging


def test_realized_levels_grow_doubly_exponentially():
    res = realize_sequence(EtaFunction.elementary(), 9)
    logs = [math.log(l) for l in res.entries]
    for a, b in zip(logs, logs[1:]):
        assert b > 1.8 * a


def test_realization_certifies_at_scale():
    res = realize_sequence(EtaFunction.elementary(), 12)
    assert res.certified
    assert res.entries[:2] == (9, 58)
    assert result_horizon(res) >= 12
    # the largest level far exceeds float range; log must still work
    assert math.log(res.entries[-1]) > 4000


def test_comparability_report():
    eta = EtaFunction.elementary()
    res = realize_sequence(eta, 8)
    rep = comparability_report(eta, res)
    assert rep["passed"]
    assert rep["knot_identity_exact"]
    lo, hi = rep["budget"]
    assert lo < rep["ratio_min"] <= rep["ratio_max"] < hi
    ratios = rep["knot_ratios"]
    assert all(a > b for a, b in zip(ratios, ratios[1:]))


def test_growth_criterion_elementary():
    eta = EtaFunction.elementary()
    params = elementary_params(1.0)
    assert (params.delta, params.alpha, params.beta) == (0.0, 1.0, 1.0)
    assert params.c == pytest.approx(1 / math.e, rel=1e-12)
    rep = growth_criterion_check(eta, params)
    assert rep["passed"]
    assert rep["violations"] == []


def test_composition_slows_decay():
    p1 = elementary_params(1.0)
    eta1 = EtaFunction.elementary()
    p2 = compose_params(p1, eta1, p1)
    assert p2.delta == pytest.approx(0.5, rel=1e-12)
    assert p2.c == pytest.approx(0.903124, abs=1e-6)
    eta2 = EtaFunction.iterated(2)
    rep = growth_criterion_check(eta2, p2)
    assert rep["passed"]


def test_eta_doubling():
    eta = EtaFunction.elementary()
    rep = eta_doubling_check(eta, 1.0)
    assert rep["passed"]


def test_summability_of_elementary():
    rep = summability_report(EtaFunction.elementary())
    assert rep["summable"]


def test_non_summable_eta_rejected():
    # the identity profile stalls: every summability term equals 1/2
    ident = EtaFunction.piecewise(
        [(Fraction(1, 2 ** k), Fraction(1, 2 ** k)) for k in range(16, -1, -1)],
        label="identity")
    rep = summability_report(ident, n_terms=6)
    assert not rep["summable"]
    assert rep["terms"][-1] == pytest.approx(0.5, rel=1e-9)
    with pytest.raises(RealizationError):
        realize_sequence(ident, 4)


def test_slow_decay_profile():
    eta, rep = slow_decay_eta(lambda r: r ** 2.5, n_max=6)
    assert rep["passed"]
    assert rep["dominates"] and rep["terms_below_geometric"]
    for n, s in enumerate(rep["s_values"]):
        assert s == pytest.approx(4.0 ** (-n), rel=1e-6)
    assert eta(0.125) == pytest.approx(0.5, rel=1e-9)
    for n, t in enumerate(rep["terms"], 1):
        assert t <= 2.0 ** (1 - 2 * n) * (1 + 1e-12)
    assert rep["partial_sums"][-1] <= 2 / 3 + 1e-12
    summ = summability_report(eta, n_terms=6)
    assert summ["summable"]


def test_slow_decay_rejects_empty():
    with pytest.raises(DomainError):
        slow_decay_eta(lambda r: r ** 2, n_max=0)
