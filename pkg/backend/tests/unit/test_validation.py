# File: backend/tests/unit/test_validation.py
# Purpose: Grid validation, list parsing, the ordered worker map and the tabular result model.
import threading

import pytest

from app.api.schemas.sweep import SweepResult
from app.core.errors import InvalidParameterError
from app.infrastructure.tasks.pool import ordered_map
from app.utils.validation import GridValidator


class TestGridValidator:
    def test_accepts_increasing_grid(self):
        assert GridValidator.validate([0, 0.05, 0.1]) == [0.0, 0.05, 0.1]

    @pytest.mark.parametrize("grid", [[], [0.1, 0.1], [0.2, 0.1], [-0.1, 0.2], [0.0, float("nan")]])
    def test_rejects_bad_grids(self, grid):
        with pytest.raises(InvalidParameterError):
            GridValidator.validate(grid, "chi grid")

    def test_uniform_includes_maximum(self):
        assert GridValidator.uniform(0.2, 0.05) == [0.0, 0.05, 0.1, 0.15, 0.2]
        assert GridValidator.uniform(1.0, 0.3) == [0.0, 0.3, 0.6, 0.9]
        assert GridValidator.uniform(0.0, 0.1) == [0.0]

    def test_uniform_rejects_bad_step(self):
        with pytest.raises(InvalidParameterError):
            GridValidator.uniform(1.0, 0.0)

    def test_parse_list(self):
        assert GridValidator.parse_list("0, 2.5,5,") == [0.0, 2.5, 5.0]
        with pytest.raises(InvalidParameterError):
            GridValidator.parse_list("0,five")


class TestOrderedMap:
    def test_inline_and_threaded_agree(self):
        items = list(range(40))
        assert ordered_map(lambda x: x * x, items) == ordered_map(lambda x: x * x, items, max_workers=4)

    def test_single_worker_runs_inline(self):
        seen = set()

        def record(x):
            seen.add(threading.get_ident())
            return x

        assert ordered_map(record, range(8), max_workers=1) == list(range(8))
        assert len(seen) == 1

    def test_errors_propagate(self):
        def boom(x):
            if x == 3:
                raise ValueError("bad item")
            return x

        with pytest.raises(ValueError):
            ordered_map(boom, range(6), max_workers=3)


class TestSweepResult:
    def test_rows_must_match_columns(self):
        with pytest.raises(ValueError):
            SweepResult(kind="jitter", columns=["a", "b"], rows=[{"a": 1}])

    def test_frame_keeps_column_order(self):
        result = SweepResult(kind="positions", columns=["b", "a"], rows=[{"a": 1, "b": 2}])
        assert list(result.to_frame().columns) == ["b", "a"]
        assert result.column("a") == [1]

    def test_concat(self):
        first = SweepResult(kind="jitter", columns=["x"], rows=[{"x": 1}], summary={"p": 1}, seed=4)
        second = SweepResult(kind="jitter", columns=["x"], rows=[{"x": 2}], summary={"q": 2}, seed=4)
        stacked = SweepResult.concat([first, second])
        assert stacked.column("x") == [1, 2]
        assert stacked.summary == {"p": 1, "q": 2}
        assert stacked.seed == 4

    def test_concat_rejects_mixed_kinds(self):
        first = SweepResult(kind="jitter", columns=["x"], rows=[])
        second = SweepResult(kind="sasa", columns=["x"], rows=[])
        with pytest.raises(ValueError):
            SweepResult.concat([first, second])
