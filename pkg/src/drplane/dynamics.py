"""Iteration driver, trajectory traces, and qualitative classification.

The driving dichotomy: if the point set lies in one closed halfspace of the
hyperplane, the iteration either reaches a fixed point after finitely many
steps (feasible case) or marches off to infinity while its hyperplane shadow
stabilizes (infeasible case).  If the point set straddles the hyperplane the
iterates stay bounded, and in the infeasible case they can never settle:
consecutive iterates always stay at least ``min_i d_A(b_i)`` apart.

``iterate`` records a full trace by default; ``slim=True`` keeps only
``(n, selector, inner)`` per step, from which full iterates are
reconstructible (every iterate after the first sits on one of the lines
``b_k + span(u)``).
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass

from .errors import BackendError, DimensionMismatch, PreconditionError
from .geometry import (
    FiniteSet,
    Hyperplane,
    Vector,
    _dr_step_parts,
    norm_sq,
    project_hyperplane,
    vadd,
    vec_equal,
    vector_backend,
    vscale,
    vsub,
)
from .scalars import F64, Scalar, encode_scalar, format_scalar

DEFAULT_HORIZON = 10**6
# Consecutive strictly-monotone inner products required before an
# (already known infeasible, one-sided) run is declared divergent.
DIVERGENCE_WINDOW = 1000

FLOAT_FIXED_POINT_TOL = 1e-12


class ClassificationKind(str, enum.Enum):
    HALFSPACE_CONTAINED = "halfspace_contained"
    STRADDLING = "straddling"


@dataclass(frozen=True)
class Classification:
    kind: ClassificationKind
    intersects: bool  # some point lies on the hyperplane


class Outcome(str, enum.Enum):
    FIXED_POINT = "fixed_point"
    HORIZON = "horizon"
    DIVERGENCE = "divergence"


@dataclass
class TraceRecord:
    n: int
    x: Vector | None           # None in slim traces for n >= 1
    selector_k: int | None     # 1-based selected point; None at n = 0
    inner: Scalar              # <x_n, u>
    counts: tuple[int, ...] | None  # cumulative selector usage; None when slim


@dataclass
class RunResult:
    trace: list[TraceRecord]
    outcome: Outcome
    fixed_at: int | None = None
    shadow: list[Vector] | None = None   # P_A x_n per record (full traces)
    shadow_limit: Vector | None = None   # stabilized shadow on divergence
    final_counts: tuple[int, ...] = ()
    slim: bool = False


def classify(A: Hyperplane, B: FiniteSet) -> Classification:
    """One-sided vs straddling, and whether B touches the hyperplane."""
    inners = B.inners
    if A.backend == F64:
        zero = lambda v: abs(v) <= 1e-12  # noqa: E731
    else:
        zero = lambda v: v == 0  # noqa: E731
    intersects = any(zero(v) for v in inners)
    straddling = inners[0] < 0 < inners[-1]
    kind = ClassificationKind.STRADDLING if straddling else ClassificationKind.HALFSPACE_CONTAINED
    return Classification(kind, intersects)


def _check_start(A: Hyperplane, B: FiniteSet, x0: Vector) -> None:
    if len(x0) != A.dim:
        raise DimensionMismatch(f"x0 dimension {len(x0)} != {A.dim}")
    if vector_backend(x0) != A.backend:
        raise BackendError("x0 backend does not match the problem backend")
    if B.dim != A.dim:
        raise DimensionMismatch("finite set dimension does not match hyperplane")


def iterate(
    A: Hyperplane,
    B: FiniteSet,
    x0: Vector,
    max_n: int,
    *,
    slim: bool = False,
    divergence_window: int = DIVERGENCE_WINDOW,
) -> RunResult:
    """Run up to max_n DR steps from x0, stopping early on a fixed point or
    on detected divergence (one-sided infeasible problems only)."""
    if max_n < 0:
        raise ValueError("max_n must be >= 0")
    _check_start(A, B, x0)
    backend = A.backend
    cls = classify(A, B)
    may_diverge = (
        cls.kind == ClassificationKind.HALFSPACE_CONTAINED and not cls.intersects
    )

    x0 = tuple(x0)
    m = B.m
    counts = [0] * m
    inner0 = A.inner(x0)
    trace = [TraceRecord(0, x0, None, inner0, None if slim else (0,) * m)]
    shadow = None if slim else [project_hyperplane(A, x0)]

    outcome = Outcome.HORIZON
    fixed_at = None
    shadow_limit = None
    x = x0
    prev_inner = inner0
    mono_sign = 0
    mono_run = 0

    for n in range(1, max_n + 1):
        nxt, k, pa = _dr_step_parts(A, B, x)
        if vec_equal(nxt, x, backend):
            outcome = Outcome.FIXED_POINT
            fixed_at = n - 1
            break
        counts[k - 1] += 1
        inner = A.inner(nxt)
        if slim:
            trace.append(TraceRecord(n, None, k, inner, None))
        else:
            trace.append(TraceRecord(n, nxt, k, inner, tuple(counts)))
            shadow.append(vsub(nxt, vscale(inner, A.normal)))
        x = nxt

        if may_diverge:
            if inner > prev_inner:
                step_sign = 1
            elif inner < prev_inner:
                step_sign = -1
            else:
                step_sign = 0
            if step_sign != 0 and step_sign == mono_sign:
                mono_run += 1
            else:
                mono_sign = step_sign
                mono_run = 1 if step_sign != 0 else 0
            prev_inner = inner
            if mono_run >= divergence_window:
                outcome = Outcome.DIVERGENCE
                shadow_limit = vsub(x, vscale(inner, A.normal))
                break

    return RunResult(
        trace=trace,
        outcome=outcome,
        fixed_at=fixed_at,
        shadow=shadow,
        shadow_limit=shadow_limit,
        final_counts=tuple(counts),
        slim=slim,
    )


def reconstruct_x(result: RunResult, A: Hyperplane, B: FiniteSet, n: int) -> Vector:
    """Iterate n of a (possibly slim) trace; exact for exact backends."""
    rec = result.trace[n]
    if rec.x is not None:
        return rec.x
    prev = result.trace[n - 1]
    return vadd(vscale(prev.inner, A.normal), B.points[rec.selector_k - 1])


def reconstruct_shadow(result: RunResult, A: Hyperplane, B: FiniteSet, n: int) -> Vector:
    x = reconstruct_x(result, A, B, n)
    return vsub(x, vscale(result.trace[n].inner, A.normal))


def detect_finite_convergence(result: RunResult, A: Hyperplane, B: FiniteSet):
    """(fixed point, feasible shadow) when the run converged finitely, else None.

    The shadow of a fixed point must belong to both sets; if it does not,
    an internal invariant is broken and we fail loudly rather than return
    nonsense.
    """
    if result.outcome != Outcome.FIXED_POINT:
        return None
    x = reconstruct_x(result, A, B, len(result.trace) - 1)
    feasible = project_hyperplane(A, x)
    backend = A.backend
    if not any(vec_equal(feasible, b, backend) for b in B.points):
        raise RuntimeError(
            "fixed point reached but its hyperplane shadow is not in the finite "
            "set; this contradicts the finite-convergence characterization"
        )
    return x, feasible


def check_step_gap(result: RunResult, A: Hyperplane, B: FiniteSet) -> bool:
    """Every consecutive gap ||x_{n+1} - x_n|| >= min_i d_A(b_i)?

    Only meaningful (and only claimed) for straddling, disjoint problems;
    anything else raises PreconditionError.
    """
    cls = classify(A, B)
    if cls.kind != ClassificationKind.STRADDLING or cls.intersects:
        raise PreconditionError(
            "step-gap bound only asserted for the straddling, disjoint case"
        )
    min_dist_sq = min(v * v for v in B.inners)
    backend = A.backend
    prev = reconstruct_x(result, A, B, 0)
    for n in range(1, len(result.trace)):
        cur = reconstruct_x(result, A, B, n)
        gap_sq = norm_sq(vsub(cur, prev))
        if backend == F64:
            if math.sqrt(gap_sq) < math.sqrt(min_dist_sq) - 1e-12:
                return False
        elif gap_sq < min_dist_sq:
            return False
        prev = cur
    return True


# -- export -----------------------------------------------------------------


def trace_csv_header(m: int, dim: int) -> list[str]:
    return (
        ["n", "k", "inner"]
        + [f"count_{i}" for i in range(1, m + 1)]
        + [f"x_{i}" for i in range(1, dim + 1)]
    )


def trace_rows(result: RunResult, A: Hyperplane, B: FiniteSet):
    """CSV/table rows; selector counts are re-tallied so slim traces export
    the same columns as full ones."""
    counts = [0] * B.m
    for n, rec in enumerate(result.trace):
        if rec.selector_k is not None:
            counts[rec.selector_k - 1] += 1
        x = reconstruct_x(result, A, B, n)
        yield (
            [str(rec.n), "" if rec.selector_k is None else str(rec.selector_k),
             format_scalar(rec.inner)]
            + [str(c) for c in counts]
            + [format_scalar(c) for c in x]
        )


def write_trace_csv(result: RunResult, A: Hyperplane, B: FiniteSet, fp) -> None:
    writer = csv.writer(fp)
    writer.writerow(trace_csv_header(B.m, A.dim))
    for row in trace_rows(result, A, B):
        writer.writerow(row)


def run_report(result: RunResult, A: Hyperplane, B: FiniteSet) -> dict:
    """JSON-ready mirror of a RunResult."""
    cls = classify(A, B)
    records = []
    counts = [0] * B.m
    for n, rec in enumerate(result.trace):
        if rec.selector_k is not None:
            counts[rec.selector_k - 1] += 1
        records.append(
            {
                "n": rec.n,
                "k": rec.selector_k,
                "inner": encode_scalar(rec.inner),
                "counts": list(counts),
                "x": [encode_scalar(c) for c in reconstruct_x(result, A, B, n)],
            }
        )
    report = {
        "method": "dr",
        "outcome": result.outcome.value,
        "classification": {
            "kind": cls.kind.value,
            "intersects": cls.intersects,
        },
        "records": records,
    }
    if result.fixed_at is not None:
        report["fixed_at"] = result.fixed_at
    if result.shadow_limit is not None:
        report["shadow_limit"] = [encode_scalar(c) for c in result.shadow_limit]
    return report
