"""Problem JSON wire format: round-trips, validation, inference."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from drplane.errors import BackendError, ProblemFormatError
from drplane.geometry import TiePolicy
from drplane.problems import (
    Problem,
    load_problem,
    make_problem,
    problem_from_dict,
    problem_to_dict,
    save_problem,
)
from drplane.scalars import Surd

FIXTURES = Path(__file__).resolve().parent.parent / "problems"


class TestRoundTrip:
    @pytest.mark.parametrize(
        "name",
        [
            "rational_cycle.json",
            "surd_aperiodic.json",
            "halfspace_divergent.json",
            "halfspace_fixed.json",
            "r2_beatty.json",
        ],
    )
    def test_exact_fixture_round_trips(self, name):
        p = load_problem(FIXTURES / name)
        again = problem_from_dict(problem_to_dict(p))
        assert again == p  # frozen dataclasses compare by value

    def test_save_then_load(self, tmp_path):
        p = make_problem((0, 1), [(0, -1), (1, Surd(0, 1, 2))], (Fraction(1, 3), 0))
        path = tmp_path / "out.json"
        save_problem(p, path)
        assert load_problem(path) == p

    def test_fixture_files_are_canonical(self):
        # encoded dict values survive a dump/parse cycle untouched
        for name in ("rational_cycle.json", "r2_beatty.json"):
            p = load_problem(FIXTURES / name)
            encoded = problem_to_dict(p)
            assert json.loads(json.dumps(encoded)) == encoded


class TestValidation:
    def test_unknown_key(self):
        with pytest.raises(ProblemFormatError, match="unknown problem keys"):
            problem_from_dict(
                {"normal": [1], "points": [[1]], "x0": [0],
                 "backend": "rational", "extra": 1}
            )

    def test_missing_key(self):
        with pytest.raises(ProblemFormatError, match="missing"):
            problem_from_dict({"normal": [1], "points": [[1]], "backend": "rational"})

    def test_unknown_backend(self):
        with pytest.raises(ProblemFormatError, match="unknown backend"):
            problem_from_dict(
                {"normal": [1], "points": [[1]], "x0": [0], "backend": "decimal"}
            )

    def test_surd_d_required(self):
        with pytest.raises(ProblemFormatError, match="surd_d"):
            problem_from_dict(
                {"normal": [1], "points": [[1]], "x0": [0], "backend": "surd"}
            )

    def test_surd_d_rejected_elsewhere(self):
        with pytest.raises(ProblemFormatError, match="surd_d"):
            problem_from_dict(
                {"normal": [1], "points": [[1]], "x0": [0],
                 "backend": "rational", "surd_d": 2}
            )

    def test_noninteger_float_rejected_on_exact_backend(self):
        with pytest.raises(ProblemFormatError, match="exact backends"):
            problem_from_dict(
                {"normal": [1], "points": [[0.5]], "x0": [0], "backend": "rational"}
            )

    def test_bad_tie_policy(self):
        with pytest.raises(ProblemFormatError, match="tie_policy"):
            problem_from_dict(
                {"normal": [1], "points": [[1]], "x0": [0],
                 "backend": "rational", "tie_policy": "coin_flip"}
            )

    def test_non_unit_normal_rejected(self):
        with pytest.raises(ProblemFormatError, match="bad normal"):
            problem_from_dict(
                {"normal": [2], "points": [[1]], "x0": [0], "backend": "rational"}
            )

    def test_duplicate_points_rejected(self):
        with pytest.raises(ProblemFormatError, match="bad points"):
            problem_from_dict(
                {"normal": [1], "points": [[1], [1]], "x0": [0],
                 "backend": "rational"}
            )


class TestMakeProblem:
    def test_backend_inference(self):
        assert make_problem((1,), [(-1,), (2,)], (0,)).backend == "rational"
        assert make_problem((1.0,), [(-1,), (2.5,)], (0,)).backend == "f64"
        assert make_problem((1,), [(-1,), (Surd(0, 1, 2),)], (0,)).backend == "surd"

    def test_points_sorted_by_offset(self):
        p = make_problem((1,), [(2,), (-1,)], (0,))
        assert p.points.inners == (Fraction(-1), Fraction(2))

    def test_tie_policy_carried(self):
        p = make_problem((1,), [(-1,), (1,)], (0,), tie_policy=TiePolicy.LOWER_INNER)
        assert p.tie_policy is TiePolicy.LOWER_INNER

    def test_float_exact_mix_rejected(self):
        with pytest.raises(BackendError):
            make_problem((1.0,), [(Fraction(1, 3),), (2.0,)], (0.0,))

    def test_mixed_radicands_rejected(self):
        with pytest.raises(BackendError):
            make_problem((1,), [(Surd(0, 1, 2),), (Surd(0, 1, 3),)], (0,))
