from fractions import Fraction

import numpy as np
import pytest

from thin_gasket.geometry import build_graph
from thin_gasket.resistance import (ResistanceSolver, corner_resistance,
                                    corner_trace, effective_resistance,
                                    ring_reduce)
from thin_gasket.sequence import LevelSequence

TRIANGLE = [[Fraction(2), Fraction(-1), Fraction(-1)],
            [Fraction(-1), Fraction(2), Fraction(-1)],
            [Fraction(-1), Fraction(-1), Fraction(2)]]


def test_corner_resistance_invariant_exact(ls5):
    for depth in range(4):
        res = corner_resistance(ls5, depth, precision="rational")
        assert res.exact
        assert res.value == Fraction(2, 3)


def test_corner_resistance_all_pairs(ls576):
    for j, k in ((0, 1), (0, 2), (1, 2)):
        res = corner_resistance(ls576, 2, j, k, precision="rational")
        assert res.value == Fraction(2, 3)
        assert (res.x, res.y) == (j, k)


def test_corner_trace_is_scaled_triangle(ls576):
    for depth in range(3):
        r = ls576.R(depth)
        trace = corner_trace(ls576, depth)
        for j in range(3):
            for k in range(3):
                assert trace[j][k] == r * TRIANGLE[j][k]


def test_float_fold_accuracy_small_levels(ls5):
    for depth in range(4):
        res = corner_resistance(ls5, depth, precision="float")
        assert abs(res.value - 2 / 3) < 1e-12


def test_float_fold_accuracy_large_levels():
    ls = LevelSequence((9, 58), continuation="repeat-last")
    for depth in range(4):
        res = corner_resistance(ls, depth, precision="float")
        assert abs(res.value - 2 / 3) < 1e-12


def test_ring_reduce_renormalizes_triangle():
    # one fold of the scaled triangle reproduces the scaling by r_l
    from thin_gasket.sequence import resistance_ratio
    for l in (5, 8):
        folded = ring_reduce(l, TRIANGLE, precision="rational")
        r = resistance_ratio(l)
        for j in range(3):
            for k in range(3):
                assert folded[j][k] == r * TRIANGLE[j][k]


def test_effective_resistance_methods_agree(ls5):
    g = build_graph(ls5, 1)
    x, y = int(g.corner_id(0)), int(g.corner_id(1))
    exact = effective_resistance(ls5, 1, x, y, graph=g, method="rational")
    direct = effective_resistance(ls5, 1, x, y, graph=g, method="direct")
    cg = effective_resistance(ls5, 1, x, y, graph=g, method="cg")
    assert exact.exact and exact.value == Fraction(2, 3)
    assert float(direct) == pytest.approx(float(exact), rel=1e-10)
    assert float(cg) == pytest.approx(float(exact), rel=1e-8)


def test_effective_resistance_symmetry_and_identity(ls5):
    g = build_graph(ls5, 1)
    a = effective_resistance(ls5, 1, 3, 11, graph=g, method="direct")
    b = effective_resistance(ls5, 1, 11, 3, graph=g, method="direct")
    assert float(a) == pytest.approx(float(b), rel=1e-12)
    same = effective_resistance(ls5, 1, 3, 3, graph=g, method="direct")
    assert float(same) == 0.0


def test_resistance_is_a_metric_on_samples(ls5):
    g = build_graph(ls5, 1)
    solver = ResistanceSolver(g)
    scale = ls5.R(1)
    ids = [int(g.corner_id(0)), 5, 9, int(g.corner_id(2))]
    r = {}
    for x in ids:
        for y in ids:
            if x < y:
                r[x, y] = solver.unit_resistance(x, y) * float(scale)
    for x in ids:
        for y in ids:
            for z in ids:
                if x < y and y < z:
                    assert r[x, z] <= r[x, y] + r[y, z] + 1e-10
                    assert r[x, y] >= 0


def test_solver_matches_direct(ls5):
    g = build_graph(ls5, 2)
    solver = ResistanceSolver(g)
    scale = ls5.R(2)
    got = solver.resistances([(0, 7), (3, 40)], scale)
    for (x, y), val in zip([(0, 7), (3, 40)], got):
        ref = effective_resistance(ls5, 2, x, y, graph=g, method="direct")
        assert val == pytest.approx(float(ref), rel=1e-9)
