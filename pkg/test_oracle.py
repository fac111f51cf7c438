#!/usr/bin/env python3
"""
测试暴力枚举 oracle
"""
import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent / "src"))

from lp_model import normalize_rows, random_lp
from models.errors import AmbiguousCone, OracleInfeasible, TooLarge
from models.lp_models import FoldedLP
from oracle import enumerate_vertices, exhaustive_shadow_path, solve_by_enumeration

SQUARE = FoldedLP.from_box(np.zeros(2), np.ones(2))
CUT = np.array([[1.0, 1.0]]) / math.sqrt(2.0)


def _with_cut(rhs: float) -> FoldedLP:
    return FoldedLP.from_box(np.zeros(2), np.ones(2), A=CUT, b=np.array([rhs]))


class TestEnumerateVertices:
    def test_square(self):
        catalog = enumerate_vertices(SQUARE)
        assert len(catalog.entries) == 4
        assert catalog.singular == 2
        assert len(catalog.feasible) == 4

    def test_triangle_has_three_points(self):
        catalog = enumerate_vertices(_with_cut(1.0 / math.sqrt(2.0)))
        points = {tuple(np.round(e.point, 9)) for e in catalog.feasible}
        assert points == {(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)}

    def test_empty_region(self):
        assert enumerate_vertices(_with_cut(-5.0)).feasible == []

    def test_budget(self):
        with pytest.raises(TooLarge):
            enumerate_vertices(SQUARE, max_subsets=5)

    def test_feasible_points_satisfy_system(self):
        lp = normalize_rows(random_lp(5, 3, np.random.default_rng(2)))
        folded = FoldedLP.from_box(lp.lower, lp.upper, A=lp.A, b=lp.b)
        for entry in enumerate_vertices(folded).feasible:
            assert np.all(folded.matrix @ entry.point <= folded.rhs + 1e-9 * (1 + np.abs(folded.rhs)))


class TestSolveByEnumeration:
    def test_square_corner(self):
        value, point, indices = solve_by_enumeration(SQUARE, np.array([1.0, 1.0]))
        assert value == pytest.approx(2.0)
        np.testing.assert_allclose(point, [1.0, 1.0])
        assert indices == (0, 1)

    def test_tie_returns_lexicographic_basis(self):
        value, point, indices = solve_by_enumeration(SQUARE, np.array([-1.0, 0.0]))
        assert value == pytest.approx(0.0)
        assert indices == (1, 2)
        np.testing.assert_allclose(point, [0.0, 1.0])

    def test_infeasible(self):
        with pytest.raises(OracleInfeasible):
            solve_by_enumeration(_with_cut(-5.0), np.array([1.0, 0.0]))

    def test_maximality(self):
        rng = np.random.default_rng(6)
        lp = normalize_rows(random_lp(6, 3, rng))
        folded = FoldedLP.from_box(lp.lower, lp.upper, A=lp.A, b=lp.b)
        catalog = enumerate_vertices(folded)
        value, _, _ = solve_by_enumeration(folded, lp.c, catalog)
        for entry in catalog.feasible:
            assert float(lp.c @ entry.point) <= value + 1e-12

    def test_region_growth_never_decreases_optimum(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            lp = normalize_rows(random_lp(4, 2, rng))
            small = FoldedLP.from_box(lp.lower, lp.upper, A=lp.A, b=lp.b)
            grown = FoldedLP.from_box(
                lp.lower - rng.uniform(0, 0.1, 2),
                lp.upper + rng.uniform(0, 0.1, 2),
                A=lp.A,
                b=lp.b + rng.uniform(0, 0.1, lp.num_rows),
            )
            before, _, _ = solve_by_enumeration(small, lp.c)
            after, _, _ = solve_by_enumeration(grown, lp.c)
            assert after >= before - 1e-12


class TestExhaustiveShadowPath:
    Z = np.array([0.6, 0.8])

    def test_no_switch(self):
        assert exhaustive_shadow_path(SQUARE, self.Z, np.array([1.0, 2.0]), 10.0) == [(0, 1)]

    def test_three_bases(self):
        path = exhaustive_shadow_path(SQUARE, self.Z, np.array([-1.0, -2.0]), 1e3)
        # (1,1) -> (1,0) -> (0,0)
        assert path == [(0, 1), (0, 3), (2, 3)]

    def test_zero_t_stop(self):
        assert exhaustive_shadow_path(SQUARE, self.Z, np.array([-1.0, -2.0]), 0.0) == [(0, 1)]

    def test_degenerate_direction(self):
        with pytest.raises(AmbiguousCone):
            exhaustive_shadow_path(SQUARE, np.array([1.0, 0.0]), np.array([1.0, 0.0]), 1.0)
