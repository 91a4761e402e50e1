import itertools

import pytest

from hblm.config import Settings
from hblm.core.exceptions import BudgetExceededError
from hblm.core.lattices import Lattice, is_point
from hblm.schemas.enumeration import EnumConfig
from hblm.schemas.ring import RingSpec
from hblm.services.enumeration import EnumerationService, estimate_candidates
from tests.strategies import ring


def _config(text: str, **kwargs) -> EnumConfig:
    return EnumConfig(ring=RingSpec.from_text(text), **kwargs)


def _full_scan(text: str) -> set[str]:
    """Points of N found by spanning every g-tuple of vectors of M."""
    ctx = ring(text)
    vectors = list(itertools.product(ctx.base.elements(), repeat=2 * ctx.g))
    keys = set()
    for combo in itertools.combinations(vectors, ctx.g):
        lat = Lattice.from_vectors(ctx, list(combo))
        if is_point(lat):
            keys.add(lat.key)
    return keys


def _subspace_scan(text: str) -> set[str]:
    """Points of N over a field base, one reduced echelon basis per g-dimensional subspace."""
    ctx = ring(text)
    field = ctx.base
    assert field.is_field
    dim, g = 2 * ctx.g, ctx.g
    keys = set()
    for pivots in itertools.combinations(range(dim), g):
        free = [(r, c) for r in range(g) for c in range(pivots[r] + 1, dim) if c not in pivots]
        for values in itertools.product(field.elements(), repeat=len(free)):
            rows = [[0] * dim for _ in range(g)]
            for r, c in enumerate(pivots):
                rows[r][c] = 1
            for (r, c), value in zip(free, values):
                rows[r][c] = value
            lat = Lattice.from_vectors(ctx, rows)
            if is_point(lat):
                keys.add(lat.key)
    return keys


class TestEnumeratePoints:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("p=2 e=1", 3),
            ("p=3 e=1", 4),
            ("p=5 e=1", 6),
            ("p=2 e=2", 7),
            ("p=3 e=2", 13),
            ("p=2 f=2 e=1", 5),
            ("p=2 eps=1 e=1", 6),
            ("p=2 n=2 e=1", 6),
        ],
    )
    def test_counts(self, enumeration, text, expected):
        assert len(enumeration.enum_n_points(_config(text))) == expected

    @pytest.mark.parametrize("text", ["p=2 e=2", "p=2 eps=1 e=1", "p=3 e=1"])
    def test_matches_full_scan(self, enumeration, text):
        found = {lat.key for lat in enumeration.enum_n_points(_config(text))}
        assert found == _full_scan(text)

    @pytest.mark.parametrize(
        "text",
        ["p=2 e=1", "p=2 e=2", "p=2 e=3", "p=3 e=1", "p=3 e=2", "p=3 e=3", "p=2 f=2 e=1", "p=3 f=2 e=1", "p=2 f=3 e=1"],
    )
    def test_matches_subspace_scan(self, enumeration, text):
        found = {lat.key for lat in enumeration.enum_n_points(_config(text))}
        assert found == _subspace_scan(text)

    @pytest.mark.parametrize(
        "text, other_u",
        [("p=3 e=1", 2), ("p=3 e=2", 2), ("p=2 n=2 e=2", 3), ("p=3 n=2 e=2", 2)],
    )
    def test_counts_do_not_depend_on_u(self, enumeration, text, other_u):
        first = enumeration.classify(_config(text)).counts
        second = enumeration.classify(_config(f"{text} u={other_u}")).counts
        assert first == second

    @pytest.mark.parametrize("text", ["p=2 n=2 e=2", "p=3 eps=1 e=1"])
    def test_direct_search_agrees(self, enumeration, text):
        direct = EnumerationService(Settings(WORKERS=1, LIFT_RESIDUE_FIRST=False))
        lifted = [lat.key for lat in enumeration.enum_n_points(_config(text))]
        assert [lat.key for lat in direct.enum_n_points(_config(text))] == lifted

    def test_sorted_and_distinct(self, enumeration):
        points = enumeration.enum_n_points(_config("p=3 n=2 e=1"))
        keys = [lat.key for lat in points]
        assert keys == sorted(set(keys))
        assert all(is_point(lat) for lat in points)

    def test_worker_count_does_not_change_the_result(self, enumeration):
        one = enumeration.enum_n_points(_config("p=3 e=2", workers=1))
        two = enumeration.enum_n_points(_config("p=3 e=2", workers=2))
        assert [lat.key for lat in one] == [lat.key for lat in two]

    def test_filters(self, enumeration):
        assert len(enumeration.enum_n_points(_config("p=3 e=2", filters=("R",)))) == 12
        assert len(enumeration.enum_n_points(_config("p=3 e=2", filters=("DP", "K")))) == 13


class TestBudget:
    def test_estimate(self):
        assert estimate_candidates(ring("p=2 e=2")) == 96

    def test_exceeded(self, enumeration):
        with pytest.raises(BudgetExceededError) as info:
            enumeration.enum_n_points(_config("p=7 eps=1 e=3"))
        assert info.value.exit_code == 2

    def test_config_budget_wins(self, enumeration):
        with pytest.raises(BudgetExceededError):
            enumeration.enum_n_points(_config("p=2 e=2", max_candidates=10))


class TestClassify:
    def test_f2_e2(self, enumeration):
        result = enumeration.classify(_config("p=2 e=2"))
        assert (result.counts.N, result.counts.DP, result.counts.K, result.counts.R) == (7, 7, 7, 6)
        assert [(t.i, t.j, t.count) for t in result.types] == [(0, 2, 6), (1, 1, 1)]
        assert result.dp_equals_k

    def test_f3_e2(self, enumeration):
        result = enumeration.classify(_config("p=3 e=2"))
        assert (result.counts.N, result.counts.DP, result.counts.K, result.counts.R) == (13, 13, 13, 12)
        assert result.counts.K_pi == 13
        assert result.k_pi_mismatch == []

    def test_dual_numbers_separate_dp_from_k(self, enumeration):
        result = enumeration.classify(_config("p=2 eps=1 e=2"))
        assert result.counts.N > result.counts.DP
        assert result.counts.R == ring("p=2 eps=1 e=2").order_size() + ring("p=2 eps=1 e=2").maximal_ideal_size()

    def test_records_match_conditions(self, enumeration):
        records = enumeration.point_records(_config("p=3 eps=1 e=1"))
        assert len(records) == 12
        assert all(rec.dp and rec.k and rec.r for rec in records)
