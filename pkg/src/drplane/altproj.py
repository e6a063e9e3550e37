"""Alternating projections baseline.

Same two sets as the reflected iteration, but the plain composition: project
onto the hyperplane, then onto the nearest point of the finite set, keeping
every intermediate point. Useful as a contrast run, since this scheme settles
into a short back-and-forth regardless of the offset arithmetic that governs
the reflected dynamics.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

from .dynamics import Outcome, _check_start, classify, trace_csv_header
from .geometry import (
    FiniteSet,
    Hyperplane,
    Vector,
    project_finite_set,
    project_hyperplane,
)
from .scalars import encode_scalar, format_scalar


@dataclass
class ApTrace:
    """Interleaved projection outputs: x0, onto-plane, onto-set, onto-plane, ...

    selectors[i] is the 1-based index of the chosen set point when entry i
    came from the finite-set projector, else None.
    """

    points: list[Vector]
    selectors: list[int | None]

    def __len__(self) -> int:
        return len(self.points)


def ap_iterate(A: Hyperplane, B: FiniteSet, x0: Vector, steps: int) -> ApTrace:
    """Apply the projectors alternately for `steps` applications.

    Entry 0 is x0. Odd entries are hyperplane projections (offset exactly
    zero on exact backends); even entries from 2 on are members of B, ties
    resolved by B's tie policy.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    _check_start(A, B, x0)
    points = [x0]
    selectors: list[int | None] = [None]
    x = x0
    for i in range(1, steps + 1):
        if i % 2 == 1:
            x = project_hyperplane(A, x)
            selectors.append(None)
        else:
            x, k = project_finite_set(B, x)
            selectors.append(k)
        points.append(x)
    return ApTrace(points, selectors)


def ap_rows(trace: ApTrace, A: Hyperplane, B: FiniteSet):
    counts = [0] * B.m
    for n, (x, k) in enumerate(zip(trace.points, trace.selectors)):
        if k is not None:
            counts[k - 1] += 1
        yield (
            [str(n), "" if k is None else str(k), format_scalar(A.inner(x))]
            + [str(c) for c in counts]
            + [format_scalar(c) for c in x]
        )


def write_ap_csv(trace: ApTrace, A: Hyperplane, B: FiniteSet, fp) -> None:
    """Same column layout as the reflected-iteration CSV."""
    writer = csv.writer(fp)
    writer.writerow(trace_csv_header(B.m, A.dim))
    for row in ap_rows(trace, A, B):
        writer.writerow(row)


def ap_report(trace: ApTrace, A: Hyperplane, B: FiniteSet) -> dict:
    cls = classify(A, B)
    records = []
    counts = [0] * B.m
    for n, (x, k) in enumerate(zip(trace.points, trace.selectors)):
        if k is not None:
            counts[k - 1] += 1
        records.append(
            {
                "n": n,
                "k": k,
                "inner": encode_scalar(A.inner(x)),
                "counts": list(counts),
                "x": [encode_scalar(c) for c in x],
            }
        )
    return {
        "method": "map",
        "outcome": Outcome.HORIZON.value,
        "classification": {"kind": cls.kind.value, "intersects": cls.intersects},
        "records": records,
    }
