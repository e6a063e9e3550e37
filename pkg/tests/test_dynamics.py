"""Iteration driver: traces, classification, stopping rules, exports."""

import io
from fractions import Fraction

import pytest

from drplane.dynamics import (
    Classification,
    ClassificationKind,
    Outcome,
    check_step_gap,
    classify,
    detect_finite_convergence,
    iterate,
    reconstruct_shadow,
    reconstruct_x,
    run_report,
    trace_csv_header,
    write_trace_csv,
)
from drplane.errors import BackendError, DimensionMismatch, PreconditionError
from drplane.geometry import FiniteSet, Hyperplane
from drplane.scalars import Surd


def F(*nums):
    return tuple(Fraction(n) for n in nums)


def line_problem(points):
    A = Hyperplane((Fraction(1),))
    B = FiniteSet.ordered([(Fraction(p),) for p in points], A)
    return A, B


def plane_problem(points, normal=(0, 1)):
    A = Hyperplane(tuple(Fraction(c) for c in normal))
    B = FiniteSet.ordered([F(*p) for p in points], A)
    return A, B


def surd_line_problem(points):
    A = Hyperplane((Surd(1, 0, 2),))
    B = FiniteSet.ordered([(p if isinstance(p, Surd) else Surd(p, 0, 2),) for p in points], A)
    return A, B


class TestClassify:
    def test_straddling(self):
        A, B = line_problem([-1, 2])
        c = classify(A, B)
        assert c == Classification(ClassificationKind.STRADDLING, False)

    def test_halfspace_disjoint(self):
        A, B = plane_problem([(0, 1), (0, 2)])
        c = classify(A, B)
        assert c.kind == ClassificationKind.HALFSPACE_CONTAINED
        assert not c.intersects

    def test_halfspace_touching(self):
        A, B = plane_problem([(0, 0), (0, 2)])
        c = classify(A, B)
        assert c.kind == ClassificationKind.HALFSPACE_CONTAINED
        assert c.intersects

    def test_straddling_with_contact(self):
        A, B = plane_problem([(0, -1), (1, 0), (0, 2)])
        c = classify(A, B)
        assert c.kind == ClassificationKind.STRADDLING
        assert c.intersects


class TestIterate:
    def test_periodic_line_run(self):
        A, B = line_problem([-1, 2])
        result = iterate(A, B, (Fraction(0),), 6)
        xs = [rec.x[0] for rec in result.trace]
        assert xs == [0, -1, 1, 0, -1, 1, 0]
        assert result.outcome == Outcome.HORIZON
        ks = [rec.selector_k for rec in result.trace]
        assert ks == [None, 1, 2, 1, 1, 2, 1]
        assert result.trace[-1].counts == (4, 2)
        assert result.final_counts == (4, 2)

    def test_surd_line_run_first_terms(self):
        A, B = surd_line_problem([-1, Surd(0, 1, 2)])
        result = iterate(A, B, (Surd(0, 0, 2),), 7)
        xs = [rec.x[0] for rec in result.trace]
        expected = [
            Surd(0, 0, 2),
            Surd(-1, 0, 2),
            Surd(-1, 1, 2),
            Surd(-2, 1, 2),
            Surd(-2, 2, 2),
            Surd(-3, 2, 2),
            Surd(-4, 2, 2),
            Surd(-4, 3, 2),
        ]
        assert xs == expected

    def test_divergent_run_trace_prefix(self):
        A, B = plane_problem([(0, 1), (0, 2)])
        result = iterate(A, B, F(0, 0), 3)
        xs = [rec.x for rec in result.trace]
        assert xs == [F(0, 0), F(0, 1), F(0, 2), F(0, 3)]
        assert [tuple(s) for s in result.shadow] == [F(0, 0)] * 4

    def test_divergence_detected(self):
        A, B = plane_problem([(0, 1), (0, 2)])
        result = iterate(A, B, F(0, 0), 5000, divergence_window=1000)
        assert result.outcome == Outcome.DIVERGENCE
        assert len(result.trace) <= 1002
        assert result.shadow_limit == F(0, 0)

    def test_divergence_needs_disjoint_halfspace(self):
        # straddling problems stay bounded and must never be declared divergent
        A, B = line_problem([-1, 2])
        result = iterate(A, B, (Fraction(0),), 4000, divergence_window=3)
        assert result.outcome == Outcome.HORIZON

    def test_fixed_point_run(self):
        A, B = plane_problem([(0, 0), (0, 2)])
        result = iterate(A, B, F(1, 1), 10)
        assert result.outcome == Outcome.FIXED_POINT
        assert result.fixed_at == 1
        assert result.trace[-1].x == F(0, 1)
        pair = detect_finite_convergence(result, A, B)
        assert pair == (F(0, 1), F(0, 0))

    def test_fixed_point_at_start(self):
        A, B = plane_problem([(0, 0), (0, 2)])
        result = iterate(A, B, F(0, 1), 10)
        assert result.outcome == Outcome.FIXED_POINT
        assert result.fixed_at == 0
        assert len(result.trace) == 1

    def test_detect_finite_convergence_none_for_horizon(self):
        A, B = line_problem([-1, 2])
        result = iterate(A, B, (Fraction(0),), 5)
        assert detect_finite_convergence(result, A, B) is None

    def test_counts_and_inner_invariants(self):
        A, B = line_problem([-2, 3])
        result = iterate(A, B, (Fraction(1, 3),), 200)
        u = A.normal
        for n, rec in enumerate(result.trace):
            assert rec.n == n
            if n == 0:
                continue
            assert sum(rec.counts) == n
            # inner recurrence: <x_n,u> = <x_{n-1},u> + <b_k,u>
            assert rec.inner == result.trace[n - 1].inner + B.inners[rec.selector_k - 1]
            # reconstruction from counts
            total = result.trace[0].inner
            for i, c in enumerate(rec.counts):
                total += c * B.inners[i]
            assert rec.inner == total
            # every iterate after the first sits on a line b_k + span(u)
            assert rec.x == tuple(
                result.trace[n - 1].inner * u[j] + B.points[rec.selector_k - 1][j]
                for j in range(A.dim)
            )

    def test_no_consecutive_equal_when_straddling_disjoint(self):
        A, B = line_problem([-1, 2])
        result = iterate(A, B, (Fraction(0),), 100)
        for a, b in zip(result.trace, result.trace[1:]):
            assert a.x != b.x

    def test_slim_matches_full(self):
        A, B = plane_problem([(1, -1), (0, 2), (3, 1)])
        full = iterate(A, B, F(2, 5), 50)
        slim = iterate(A, B, F(2, 5), 50, slim=True)
        assert [r.inner for r in slim.trace] == [r.inner for r in full.trace]
        assert [r.selector_k for r in slim.trace] == [r.selector_k for r in full.trace]
        for n in range(len(full.trace)):
            assert reconstruct_x(slim, A, B, n) == full.trace[n].x
            assert reconstruct_shadow(slim, A, B, n) == full.shadow[n]

    def test_validation(self):
        A, B = line_problem([-1, 2])
        with pytest.raises(DimensionMismatch):
            iterate(A, B, F(0, 0), 5)
        with pytest.raises(BackendError):
            iterate(A, B, (0.0,), 5)
        with pytest.raises(ValueError):
            iterate(A, B, (Fraction(0),), -1)

    def test_float_backend_run(self):
        A = Hyperplane((1.0,))
        B = FiniteSet.ordered([(-1.0,), (2.0,)], A)
        result = iterate(A, B, (0.0,), 6)
        assert [rec.x[0] for rec in result.trace] == [0.0, -1.0, 1.0, 0.0, -1.0, 1.0, 0.0]


class TestStepGap:
    def test_holds_on_periodic_run(self):
        A, B = line_problem([-1, 2])
        result = iterate(A, B, (Fraction(0),), 60)
        assert check_step_gap(result, A, B) is True

    def test_holds_on_surd_run(self):
        A, B = surd_line_problem([-1, Surd(0, 1, 2)])
        result = iterate(A, B, (Surd(0, 0, 2),), 200)
        assert check_step_gap(result, A, B) is True

    def test_requires_straddling_disjoint(self):
        A, B = plane_problem([(0, 1), (0, 2)])
        result = iterate(A, B, F(0, 0), 5)
        with pytest.raises(PreconditionError):
            check_step_gap(result, A, B)
        A2, B2 = plane_problem([(0, -1), (1, 0), (0, 2)])
        result2 = iterate(A2, B2, F(0, 0), 5)
        with pytest.raises(PreconditionError):
            check_step_gap(result2, A2, B2)


class TestExport:
    def test_csv_shape_and_values(self):
        A, B = line_problem([-1, 2])
        result = iterate(A, B, (Fraction(0),), 6)
        buf = io.StringIO()
        write_trace_csv(result, A, B, buf)
        lines = buf.getvalue().strip().splitlines()
        assert lines[0] == "n,k,inner,count_1,count_2,x_1"
        assert len(lines) == 8  # header + horizon + 1
        assert lines[1] == "0,,0,0,0,0"
        assert lines[2] == "1,1,-1,1,0,-1"
        assert lines[3] == "2,2,1,1,1,1"

    def test_csv_from_slim_trace(self):
        A, B = line_problem([-1, 2])
        full = iterate(A, B, (Fraction(0),), 9)
        slim = iterate(A, B, (Fraction(0),), 9, slim=True)
        buf_full, buf_slim = io.StringIO(), io.StringIO()
        write_trace_csv(full, A, B, buf_full)
        write_trace_csv(slim, A, B, buf_slim)
        assert buf_full.getvalue() == buf_slim.getvalue()

    def test_header_matches_dimensions(self):
        assert trace_csv_header(3, 2) == [
            "n", "k", "inner", "count_1", "count_2", "count_3", "x_1", "x_2"
        ]

    def test_run_report(self):
        A, B = plane_problem([(0, 0), (0, 2)])
        result = iterate(A, B, F(1, 1), 10)
        report = run_report(result, A, B)
        assert report["method"] == "dr"
        assert report["outcome"] == "fixed_point"
        assert report["fixed_at"] == 1
        assert report["classification"] == {
            "kind": "halfspace_contained",
            "intersects": True,
        }
        assert report["records"][1]["x"] == ["0", "1"]
        assert report["records"][1]["k"] == 1
