"""Floor-function formulas for the two-point iteration.

Once the orbit enters the absorbing window (one interval of offsets per
selector), every later iterate is given in closed form: the count of
selector-2 choices among the first n steps is a single floor expression, and
the offset, the selector, and the full point all follow from it.  This module
evaluates those formulas, the simplified variant available when the start
lies on the hyperplane, and the square-root-of-two integer sequences that the
planar instance generates; verify_closed_form cross-checks everything against
the step-by-step driver.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .cycling import DoubletonProblem
from .dynamics import iterate
from .errors import PreconditionError
from .geometry import Vector, dot, dr_step, norm_sq, vsub
from .scalars import F64, Scalar, Surd, encode_scalar, floor, format_scalar

F64_INVARIANT_SLACK = 1e-9
NOT_APPLICABLE = "closed form not applicable; use iterate"


@dataclass(frozen=True)
class Betas:
    """Offset constants of a doubleton instance.

    beta1/beta2 are the signed offsets of the two points; beta is the
    negative constant where the absorbing window starts.  The window
    geometry forces beta < 0 and -2*beta >= beta2 - beta1.
    """

    beta1: Scalar
    beta2: Scalar
    beta: Scalar

    @property
    def span(self):
        return self.beta2 - self.beta1


class RegionLabel(enum.Enum):
    S1 = "S1"
    S2 = "S2"
    OUTSIDE = "outside"


def compute_betas(p: DoubletonProblem) -> Betas:
    """Derive (beta1, beta2, beta) and assert their sign invariants."""
    beta1, beta2 = p.beta1, p.beta2
    beta = norm_sq(vsub(p.b1, p.b2)) / (2 * (beta1 - beta2))
    slack = F64_INVARIANT_SLACK if p.backend == F64 else 0
    if not beta < slack:
        raise PreconditionError(f"window constant must be negative, got {beta!r}")
    if (-2) * beta + slack < beta2 - beta1:
        raise PreconditionError(
            "offset span exceeds -2x the window constant; doubleton data corrupt"
        )
    return Betas(beta1, beta2, beta)


def region_of(betas: Betas, inner, k: int) -> RegionLabel:
    """Classify a post-step state (offset, selector) against the absorbing
    window: S1 covers selector 1 with offset in ]beta, beta+beta2], S2 covers
    selector 2 with offset in ]beta+beta2, beta-beta1+beta2]."""
    if k not in (1, 2):
        raise ValueError(f"selector must be 1 or 2, got {k}")
    lo = betas.beta
    mid = betas.beta + betas.beta2
    hi = mid - betas.beta1
    if k == 1 and lo < inner <= mid:
        return RegionLabel.S1
    if k == 2 and mid < inner <= hi:
        return RegionLabel.S2
    return RegionLabel.OUTSIDE


def successor_rule(betas: Betas, inner, k: int) -> tuple[int, object]:
    """One step of the in-window recursion: (selector, offset) -> next pair.

    Matches the iteration under the default tie policy; the boundary state
    offset == beta - beta1 with selector 1 hands off to selector 2.  The S2
    branch is only proved when beta + beta2 >= 0, so it is refused otherwise.
    """
    region = region_of(betas, inner, k)
    if region is RegionLabel.OUTSIDE:
        raise PreconditionError("absorption region not entered")
    if region is RegionLabel.S1:
        if inner > betas.beta - betas.beta1:
            return 1, inner + betas.beta1
        return 2, inner + betas.beta2
    if not betas.beta + betas.beta2 >= 0:
        raise PreconditionError(
            "successor rule in the upper window requires beta + beta2 >= 0"
        )
    return 1, inner + betas.beta1


def _require_applicable(betas: Betas, inner0) -> None:
    if not betas.beta + betas.beta2 >= 0:
        raise PreconditionError(f"{NOT_APPLICABLE} (beta + beta2 < 0)")
    # observable shadow of the entry hypothesis: the start offset must sit
    # in the union window shifted back by one step
    if not betas.beta < inner0 <= betas.beta - betas.beta1 + betas.beta2:
        raise PreconditionError(f"{NOT_APPLICABLE} (start offset outside the window)")


def _count2(betas: Betas, inner0, n: int) -> int:
    # selector-2 choices among steps 1..n
    return floor((-inner0 + betas.beta - (n + 1) * betas.beta1 + betas.beta2) / betas.span)


def _count1(betas: Betas, inner0, n: int) -> int:
    # independent floor for the selector-1 count; equals n - _count2
    return -floor((-inner0 + betas.beta - betas.beta1 - (n - 1) * betas.beta2) / betas.span)


def selector_counts(betas: Betas, inner0, n: int) -> tuple[int, int]:
    """How often each selector fires among steps 1..n, from two independent
    floor expressions (their sum reproducing n is a nontrivial identity)."""
    if n < 0:
        raise ValueError(f"step count must be >= 0, got {n}")
    return _count1(betas, inner0, n), _count2(betas, inner0, n)


def closed_form_inner(betas: Betas, inner0, n: int):
    """Offset of the n-th iterate, n >= 1, without iterating."""
    if n < 1:
        raise ValueError(f"closed form is stated for n >= 1, got {n}")
    _require_applicable(betas, inner0)
    return inner0 + n * betas.beta1 + _count2(betas, inner0, n) * betas.span


def closed_form_inner_alt(betas: Betas, inner0, n: int):
    """Same offset via the second published expression; kept separate so the
    equality of the two forms stays an executable fact."""
    if n < 1:
        raise ValueError(f"closed form is stated for n >= 1, got {n}")
    _require_applicable(betas, inner0)
    return (
        inner0
        + _count1(betas, inner0, n) * betas.beta1
        + _count2(betas, inner0, n) * betas.beta2
    )


def _entry_state(p: DoubletonProblem, betas: Betas):
    """First iterate and its selector, with the entry hypothesis enforced."""
    x1, k1 = dr_step(p.hyperplane, p.finite_set(), p.x0)
    if region_of(betas, p.hyperplane.inner(x1), k1) is RegionLabel.OUTSIDE:
        raise PreconditionError(f"{NOT_APPLICABLE} (first iterate misses the window)")
    return x1, k1


def _point_unchecked(p: DoubletonProblem, betas: Betas, inner0, n: int):
    k = _count2(betas, inner0, n) - _count2(betas, inner0, n - 1) + 1
    prev = inner0 if n == 1 else (
        inner0 + (n - 1) * betas.beta1 + _count2(betas, inner0, n - 1) * betas.span
    )
    b = p.b1 if k == 1 else p.b2
    u = p.hyperplane.normal
    x = tuple(prev * u[i] + b[i] for i in range(len(u)))
    return x, k


def closed_form_point(p: DoubletonProblem, betas: Betas, n: int):
    """The n-th iterate (point and selector), n >= 1, without iterating.

    Requires beta + beta2 >= 0 and that the first iterate lands in the
    absorbing window; refuses otherwise rather than extrapolate.
    """
    if n < 1:
        raise ValueError(f"closed form is stated for n >= 1, got {n}")
    inner0 = p.hyperplane.inner(p.x0)
    _require_applicable(betas, inner0)
    _entry_state(p, betas)
    return _point_unchecked(p, betas, inner0, n)


def corollary_point(p: DoubletonProblem, n: int):
    """Simplified closed form for starts on the hyperplane.

    Needs beta1 > beta >= -beta2, x0 on the hyperplane, and x0 strictly
    closer to b1 than to b2; each failed hypothesis is named.  The start
    offset drops out of all formulas.
    """
    if n < 1:
        raise ValueError(f"closed form is stated for n >= 1, got {n}")
    betas = compute_betas(p)
    if not betas.beta1 > betas.beta:
        raise PreconditionError(
            f"hypothesis beta1 > beta fails: {format_scalar(betas.beta1)} <= "
            f"{format_scalar(betas.beta)}"
        )
    if not betas.beta >= -betas.beta2:
        raise PreconditionError(
            f"hypothesis beta >= -beta2 fails: {format_scalar(betas.beta)} < "
            f"{format_scalar(-betas.beta2)}"
        )
    inner0 = p.hyperplane.inner(p.x0)
    if inner0 != 0 and not (p.backend == F64 and abs(inner0) <= F64_INVARIANT_SLACK):
        raise PreconditionError(
            f"hypothesis x0 on the hyperplane fails: offset {format_scalar(inner0)}"
        )
    margin = 2 * dot(p.x0, vsub(p.b1, p.b2)) - (norm_sq(p.b1) - norm_sq(p.b2))
    if not margin > 0:
        raise PreconditionError(
            "hypothesis 2<x0, b1-b2> > |b1|^2 - |b2|^2 fails: "
            f"margin {format_scalar(margin)}"
        )
    k = _count2(betas, 0, n) - _count2(betas, 0, n - 1) + 1
    prev = (n - 1) * betas.beta1 + _count2(betas, 0, n - 1) * betas.span
    b = p.b1 if k == 1 else p.b2
    u = p.hyperplane.normal
    return tuple(prev * u[i] + b[i] for i in range(len(u))), k


def beatty_triple(n: int) -> tuple[int, int, int]:
    """Integer triple driving the planar sqrt(2) instance.

    u_n flags whether the selector advanced, v_n and w_n are the integer and
    sqrt(2) parts of the offset: x_n = (u_n, -v_n + w_n*sqrt(2)).
    """
    if n < 0:
        raise ValueError(f"index must be >= 0, got {n}")
    f_next = floor(Surd(0, n + 1, 2))  # floor((n+1)*sqrt(2))
    u_n = f_next - floor(Surd(0, n, 2)) - 1
    v_n = floor(Surd(2 * (n + 1), -(n + 1), 2))  # floor((n+1)*(2-sqrt(2)))
    w_n = f_next - n - 1
    return u_n, v_n, w_n


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of the formula-vs-iteration cross-check."""

    ok: bool
    checked: int
    horizon: int
    first_mismatch: dict | None = None

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checked": self.checked,
            "horizon": self.horizon,
            "first_mismatch": self.first_mismatch,
        }


def _points_agree(x, y, backend: str) -> bool:
    if backend != F64:
        return x == y
    for a, b in zip(x, y):
        if abs(a - b) > F64_INVARIANT_SLACK * max(1.0, abs(a), abs(b)):
            return False
    return True


def verify_closed_form(p: DoubletonProblem, horizon: int) -> VerifyReport:
    """Compare the closed form against direct iteration for n = 1..horizon.

    Exact backends demand exact equality of points and selectors; the float
    backend allows 1e-9 relative error on coordinates.  Stops at the first
    mismatch and reports both values.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    betas = compute_betas(p)
    inner0 = p.hyperplane.inner(p.x0)
    _require_applicable(betas, inner0)
    _entry_state(p, betas)
    run = iterate(p.hyperplane, p.finite_set(), p.x0, horizon)
    for n in range(1, horizon + 1):
        rec = run.trace[n]
        x, k = _point_unchecked(p, betas, inner0, n)
        if k != rec.selector_k or not _points_agree(x, rec.x, p.backend):
            return VerifyReport(
                ok=False,
                checked=n,
                horizon=horizon,
                first_mismatch={
                    "n": n,
                    "iterated": [encode_scalar(c) for c in rec.x],
                    "closed_form": [encode_scalar(c) for c in x],
                    "iterated_selector": rec.selector_k,
                    "closed_form_selector": k,
                },
            )
    return VerifyReport(ok=True, checked=horizon, horizon=horizon)
