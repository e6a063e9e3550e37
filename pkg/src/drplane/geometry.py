"""Vectors, hyperplanes through the origin, finite point sets, and the
Douglas-Rachford step built from their projectors.

Vectors are plain tuples of scalars (see :mod:`drplane.scalars`), all from one
backend.  For a hyperplane ``A = {x : <x,u> = 0}`` with unit normal ``u``:

* projection:  ``P_A x = x - <x,u> u``
* reflection:  ``R_A x = x - 2 <x,u> u``
* distance:    ``d_A(x) = |<x,u>|``

The projector onto a finite set picks the nearest point by exact comparison
of squared distances; distance ties are broken by a deterministic, explicit
policy so that runs are reproducible.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import BackendError, DimensionMismatch
from .scalars import F64, Scalar, backend_of

Vector = tuple  # tuple of scalars, one backend per problem

# Float-backend tolerances: unit-normal drift and point-coincidence tests.
FLOAT_GEOMETRY_TOL = 1e-12


def vector_backend(v: Sequence[Scalar]) -> str:
    """Common backend of all coordinates; BackendError if mixed or empty."""
    if len(v) == 0:
        raise BackendError("empty vector has no backend")
    tag = backend_of(v[0])
    for c in v[1:]:
        if backend_of(c) != tag:
            raise BackendError(f"vector mixes backends: {v!r}")
    return tag


def _check_dims(x, y) -> None:
    if len(x) != len(y):
        raise DimensionMismatch(f"dimension mismatch: {len(x)} vs {len(y)}")


def dot(x: Vector, y: Vector) -> Scalar:
    _check_dims(x, y)
    total = x[0] * y[0]
    for i in range(1, len(x)):
        total = total + x[i] * y[i]
    return total


def vadd(x: Vector, y: Vector) -> Vector:
    _check_dims(x, y)
    return tuple(a + b for a, b in zip(x, y))


def vsub(x: Vector, y: Vector) -> Vector:
    _check_dims(x, y)
    return tuple(a - b for a, b in zip(x, y))


def vscale(c: Scalar, x: Vector) -> Vector:
    return tuple(c * a for a in x)


def norm_sq(x: Vector) -> Scalar:
    return dot(x, x)


def vec_equal(x: Vector, y: Vector, backend: str) -> bool:
    """Coordinate-wise equality; on f64, within FLOAT_GEOMETRY_TOL per axis."""
    _check_dims(x, y)
    if backend == F64:
        return all(abs(a - b) <= FLOAT_GEOMETRY_TOL for a, b in zip(x, y))
    return x == y


class TiePolicy(str, enum.Enum):
    """How the finite-set projector resolves exact distance ties."""

    HIGHER_INNER = "higher_inner"
    LOWER_INNER = "lower_inner"
    LOWEST_INDEX = "lowest_index"


DEFAULT_TIE_POLICY = TiePolicy.HIGHER_INNER


@dataclass(frozen=True)
class Hyperplane:
    """Hyperplane through the origin, stored with a unit normal.

    Float normals are normalized on construction; exact backends must supply
    a normal with <u,u> = 1 exactly (signed standard basis vectors and
    rational unit vectors like (3/5, 4/5) qualify), otherwise the promise of
    exact projections cannot be kept.
    """

    normal: Vector

    def __post_init__(self):
        normal = tuple(self.normal)
        if not normal:
            raise ValueError("hyperplane normal must be non-empty")
        backend = vector_backend(normal)
        ns = norm_sq(normal)
        if backend == F64:
            length = math.sqrt(ns)
            if length == 0.0:
                raise ValueError("hyperplane normal must be nonzero")
            normal = tuple(c / length for c in normal)
            if abs(norm_sq(normal) - 1.0) > FLOAT_GEOMETRY_TOL:
                raise ValueError("could not normalize float normal to unit length")
        else:
            if ns == 0:
                raise ValueError("hyperplane normal must be nonzero")
            if ns != 1:
                raise ValueError(
                    "exact backends require an exactly unit normal, "
                    f"got <u,u> = {ns}"
                )
        object.__setattr__(self, "normal", normal)

    @property
    def dim(self) -> int:
        return len(self.normal)

    @property
    def backend(self) -> str:
        return vector_backend(self.normal)

    @property
    def normal_norm_sq(self) -> Scalar:
        return norm_sq(self.normal)

    def inner(self, x: Vector) -> Scalar:
        """<x, u>; the signed offset of x from the hyperplane."""
        return dot(x, self.normal)


@dataclass(frozen=True)
class FiniteSet:
    """Finite point set, stored sorted by signed offset along a unit normal.

    ``inners[i]`` caches <points[i], u> for the hyperplane the set was built
    against; the whole analysis reads geometry through those offsets.
    """

    points: tuple[Vector, ...]
    inners: tuple
    tie_policy: TiePolicy = DEFAULT_TIE_POLICY

    def __post_init__(self):
        if not self.points:
            raise ValueError("finite set needs at least one point")
        if len(self.points) != len(self.inners):
            raise ValueError("points/inners length mismatch")
        object.__setattr__(self, "tie_policy", TiePolicy(self.tie_policy))

    @classmethod
    def ordered(
        cls,
        points: Sequence[Sequence[Scalar]],
        hyperplane: Hyperplane,
        tie_policy: TiePolicy = DEFAULT_TIE_POLICY,
    ) -> "FiniteSet":
        pts = [tuple(p) for p in points]
        if not pts:
            raise ValueError("finite set needs at least one point")
        backend = hyperplane.backend
        for p in pts:
            if len(p) != hyperplane.dim:
                raise DimensionMismatch(
                    f"point dimension {len(p)} != hyperplane dimension {hyperplane.dim}"
                )
            if vector_backend(p) != backend:
                raise BackendError("finite set points must share the hyperplane backend")
        inners = [hyperplane.inner(p) for p in pts]
        order = sorted(range(len(pts)), key=lambda i: inners[i])
        pts = [pts[i] for i in order]
        inners = [inners[i] for i in order]
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if vec_equal(pts[i], pts[j], backend):
                    raise ValueError(f"finite set points must be pairwise distinct: {pts[i]}")
        return cls(tuple(pts), tuple(inners), TiePolicy(tie_policy))

    @property
    def m(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return len(self.points[0])


def project_hyperplane(A: Hyperplane, x: Vector) -> Vector:
    c = A.inner(x)
    return vsub(x, vscale(c, A.normal))


def reflect_hyperplane(A: Hyperplane, x: Vector) -> Vector:
    c = A.inner(x)
    return vsub(x, vscale(2 * c, A.normal))


def dist_hyperplane(A: Hyperplane, x: Vector) -> Scalar:
    return abs(A.inner(x))


def _pick_winner(winners: list[int], inners, policy: TiePolicy) -> int:
    if policy == TiePolicy.LOWEST_INDEX or len(winners) == 1:
        return winners[0]
    best = winners[0]
    for i in winners[1:]:
        if policy == TiePolicy.HIGHER_INNER:
            if inners[i] > inners[best]:  # equal offsets keep the lower index
                best = i
        else:
            if inners[i] < inners[best]:
                best = i
    return best


def project_finite_set(B: FiniteSet, x: Vector) -> tuple[Vector, int]:
    """Nearest point of B and its 1-based index in the sorted order.

    Squared distances are compared (exactly, on exact backends); ties go to
    the policy, with equal-offset ties falling back to the lowest index.
    """
    dists = [norm_sq(vsub(x, b)) for b in B.points]
    dmin = dists[0]
    for dv in dists[1:]:
        if dv < dmin:
            dmin = dv
    winners = [i for i, dv in enumerate(dists) if dv == dmin]
    best = _pick_winner(winners, B.inners, B.tie_policy)
    return B.points[best], best + 1


def _dr_step_parts(A: Hyperplane, B: FiniteSet, x: Vector):
    """One DR step plus the intermediates the dynamics layer wants.

    next = x - P_A x + P_B(R_A x); with cu = <x,u> u this is cu + P_B(R_A x),
    so the new iterate visibly sits on the line b_k + span(u).
    """
    c = A.inner(x)
    cu = vscale(c, A.normal)
    pa = vsub(x, cu)
    ra = vsub(pa, cu)
    pb, k = project_finite_set(B, ra)
    nxt = vadd(cu, pb)
    return nxt, k, pa


def dr_step(A: Hyperplane, B: FiniteSet, x: Vector) -> tuple[Vector, int]:
    """One Douglas-Rachford step: (next iterate, 1-based selected point index).

    The selected point always satisfies b_k = next - x + P_A x.
    """
    nxt, k, _ = _dr_step_parts(A, B, x)
    return nxt, k
