from fractions import Fraction

import numpy as np
import pytest

from thin_gasket.geometry import build_graph
from thin_gasket.sequence import LevelSequence
from thin_gasket.walks import (WalkConfig, commute_time_check,
                               exit_time_profile, hitting_time)


def _graph(seq, depth):
    return build_graph(LevelSequence(seq, continuation="repeat-last"), depth)


def test_hitting_time_triangle_mean():
    g = _graph((5,), 0)
    cfg = WalkConfig(trials=40_000, seed=3)
    stats = hitting_time(g, int(g.corner_id(0)), int(g.corner_id(1)), cfg)
    # on a triangle the expected hitting time of one fixed corner is 2
    assert stats.mean == pytest.approx(2.0, abs=5 * stats.stderr)
    assert stats.capped == 0
    assert stats.min_steps >= 1
    assert stats.trials == 40_000


def test_hitting_time_reproducible():
    g = _graph((5,), 1)
    cfg = WalkConfig(trials=5_000, seed=11)
    a = hitting_time(g, 0, [int(g.corner_id(1))], cfg)
    b = hitting_time(g, 0, [int(g.corner_id(1))], cfg)
    assert a == b


def test_commute_time_exact_predictions():
    exact = {0: Fraction(4), 1: Fraction(496, 3), 2: Fraction(61504, 9)}
    for depth, value in exact.items():
        g = _graph((5,), depth)
        trials = 4_000 if depth == 2 else 20_000
        rep = commute_time_check(g, cfg=WalkConfig(trials=trials, seed=17))
        assert rep["predicted_exact"] == value
        assert rep["predicted"] == pytest.approx(float(value), rel=1e-12)
        assert rep["passed"], rep["z_score"]
        assert abs(rep["z_score"]) < 4.0


def test_commute_prediction_scales_with_time_factor():
    g0 = _graph((5,), 0)
    g1 = _graph((5,), 1)
    cfg = WalkConfig(trials=200, seed=1)
    r0 = commute_time_check(g0, cfg=cfg)
    r1 = commute_time_check(g1, cfg=cfg)
    # one subdivision multiplies the commute time by t_5 = 124/3
    assert r1["predicted_exact"] == r0["predicted_exact"] * Fraction(124, 3)


def test_exit_time_profile_shape():
    g = _graph((5,), 2)
    rows = exit_time_profile(g, ((0, 0), (0, 0)), radii=(1, 2, 3),
                             cfg=WalkConfig(trials=800, seed=9))
    assert [row["k"] for row in rows] == [1, 2, 3]
    means = [row["mean"] for row in rows]
    assert all(b > a for a, b in zip(means, means[1:]))
    assert rows[0]["n_cells"] == 3
    for row in rows:
        assert row["trials"] == 800
        assert row["mean"] > 0


def test_walk_config_validation():
    g = _graph((5,), 0)
    with pytest.raises(Exception):
        commute_time_check(g, x=0, y=0, cfg=WalkConfig(trials=10, seed=0))
