"""Cycle analysis for two-point targets.

For a doubleton B = {b1, b2} straddling the hyperplane, the iteration either
settles into an exact cycle or never repeats; which one happens is decided by
whether the distance ratio d_A(b1)/d_A(b2) is rational.  This module exposes
that predicate, an empirical cycle detector with exact state hashing, and the
long-run frequencies of the two selectors.

The detector exploits the fact that after the first step the whole state is
captured by the pair (selector, signed offset): the iterate itself is
recoverable as x_n = (offset - beta_k) * u + b_k.  Offsets evolve by adding
beta_1 or beta_2, and the next selector depends only on the current pair via
fixed thresholds, so the search loop runs on small integers instead of
vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BackendError, PreconditionError
from .geometry import (
    FiniteSet,
    Hyperplane,
    TiePolicy,
    Vector,
    dr_step,
    norm_sq,
    vector_backend,
    vsub,
)
from .problems import Problem
from .scalars import (
    F64,
    RATIONAL,
    SURD,
    Surd,
    as_fraction,
    encode_scalar,
    format_scalar,
    is_rational,
)

F64_SIGN_MARGIN = 1e-12
FLOAT_CYCLE_REL_TOL = 1e-9


@dataclass(frozen=True)
class DoubletonProblem:
    """Two-point feasibility instance with b1 below the hyperplane, b2 above."""

    hyperplane: Hyperplane
    b1: Vector
    b2: Vector
    x0: Vector
    tie_policy: TiePolicy = TiePolicy.HIGHER_INNER

    def __post_init__(self):
        A = self.hyperplane
        for name, v in (("b1", self.b1), ("b2", self.b2), ("x0", self.x0)):
            if len(v) != A.dim:
                raise PreconditionError(
                    f"{name} dimension {len(v)} != hyperplane dimension {A.dim}"
                )
            if vector_backend(v) != A.backend:
                raise BackendError(f"{name} does not match the hyperplane backend")
        object.__setattr__(self, "tie_policy", TiePolicy(self.tie_policy))
        b1_off, b2_off = self.beta1, self.beta2
        if A.backend == F64:
            ok = b1_off < -F64_SIGN_MARGIN and b2_off > F64_SIGN_MARGIN
        else:
            ok = b1_off < 0 < b2_off
        if not ok:
            raise PreconditionError(
                "doubleton must straddle the hyperplane strictly: "
                f"offsets {format_scalar(b1_off)}, {format_scalar(b2_off)}"
            )

    @property
    def beta1(self):
        return self.hyperplane.inner(self.b1)

    @property
    def beta2(self):
        return self.hyperplane.inner(self.b2)

    @property
    def backend(self) -> str:
        return self.hyperplane.backend

    def finite_set(self) -> FiniteSet:
        return FiniteSet.ordered((self.b1, self.b2), self.hyperplane, self.tie_policy)

    @classmethod
    def from_problem(cls, problem: Problem) -> "DoubletonProblem":
        if problem.points.m != 2:
            raise PreconditionError(
                f"cycling analysis requires a doubleton (got {problem.points.m} points)"
            )
        b1, b2 = problem.points.points  # already sorted by offset
        return cls(problem.hyperplane, b1, b2, problem.x0, problem.tie_policy)


@dataclass(frozen=True)
class CycleReport:
    """Outcome of a bounded cycle search.

    status 'cycle': x_{preperiod} onward repeats with the given minimal
    period; states lists one full cycle starting at x_{preperiod}.
    status 'no_cycle': no exact state recurrence within the horizon.
    """

    status: str
    horizon: int
    preperiod: int | None = None
    period: int | None = None
    states: tuple[Vector, ...] | None = None
    approximate: bool = False

    def to_dict(self) -> dict:
        if self.status != "cycle":
            return {"status": "no_cycle", "horizon": self.horizon}
        out = {
            "status": "cycle",
            "preperiod": self.preperiod,
            "period": self.period,
            "states": [[encode_scalar(c) for c in x] for x in self.states],
        }
        if self.approximate:
            out["approximate"] = True
        return out


def rationality_predicate(p: DoubletonProblem) -> bool:
    """Exact test: is d_A(b1)/d_A(b2) a rational number?

    True predicts eventual cycling from any start; false predicts that no
    state ever recurs.  Exact backends only.
    """
    if p.backend == F64:
        raise BackendError(
            "rationality is undecidable on floats; use an exact backend "
            "or the CLI heuristic flag"
        )
    return is_rational((-p.beta1) / p.beta2)


def cycle_relation(p: DoubletonProblem) -> tuple[int, int] | None:
    """Minimal coprime positive (q1, q2) with q1*d_A(b1) = q2*d_A(b2).

    None when the distance ratio is irrational.  The relation constrains
    selector counts over one period; it is arithmetic only, not a period.
    """
    if p.backend == F64:
        raise BackendError("cycle relation needs an exact backend")
    ratio = (-p.beta1) / p.beta2
    if not is_rational(ratio):
        return None
    frac = as_fraction(ratio)
    return frac.denominator, frac.numerator


def _threshold_constants(p: DoubletonProblem):
    """Selector thresholds: from state (k, offset), the next selector is 1
    when offset > t_k, 2 when offset < t_k, and the tie policy decides at
    equality."""
    beta1, beta2 = p.beta1, p.beta2
    gap_sq = norm_sq(vsub(p.b1, p.b2))
    beta = gap_sq / (2 * (beta1 - beta2))
    return beta1, beta2, beta - beta1, -beta - beta2


def _tie_selector(policy: TiePolicy) -> int:
    # equidistant reflections resolve to the higher offset (b2) only under
    # the default policy; both alternatives pick b1
    return 2 if policy is TiePolicy.HIGHER_INNER else 1


def _int_of(fr: Fraction, scale: int) -> int:
    scaled = fr * scale
    if scaled.denominator != 1:
        raise AssertionError("lattice scale does not clear denominators")
    return scaled.numerator


def _pair_sign(a: int, b: int, d: int) -> int:
    """Sign of a + b*sqrt(d) for integers a, b without leaving Z."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return 1 if b > 0 else -1
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    lhs, rhs = a * a, b * b * d
    if lhs == rhs:
        return 0
    if a > 0:
        return 1 if lhs > rhs else -1
    return -1 if lhs > rhs else 1


def detect_cycle(p: DoubletonProblem, horizon: int) -> CycleReport:
    """Search for a state recurrence within the first `horizon` iterates.

    Exact backends hash exact states, so a hit certifies a genuine cycle and
    the returned preperiod/period are minimal.  The float backend quantizes
    offsets at relative tolerance 1e-9 and labels the report approximate.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    A = p.hyperplane
    x1, k1 = dr_step(A, p.finite_set(), p.x0)
    if horizon == 1:
        return CycleReport("no_cycle", horizon)
    inner1 = A.inner(x1)
    consts = _threshold_constants(p)
    if p.backend == RATIONAL:
        return _detect_exact_rational(p, horizon, k1, inner1, consts)
    if p.backend == SURD:
        return _detect_exact_surd(p, horizon, k1, inner1, consts)
    return _detect_float(p, horizon, k1, inner1, consts)


def _detect_exact_rational(p, horizon, k1, inner1, consts):
    beta1, beta2, t1, t2 = consts
    scale = math.lcm(
        inner1.denominator,
        beta1.denominator,
        beta2.denominator,
        t1.denominator,
        t2.denominator,
    )
    s1, s2 = _int_of(beta1, scale), _int_of(beta2, scale)
    th1, th2 = _int_of(t1, scale), _int_of(t2, scale)
    tie = _tie_selector(p.tie_policy)

    def decode(key):
        k, off = key
        return _state_vector(p, k, Fraction(off, scale))

    k, off = k1, _int_of(inner1, scale)
    seen = {(k, off): 1}
    hist = [(k, off)]
    for n in range(2, horizon + 1):
        th = th1 if k == 1 else th2
        if off > th:
            k = 1
        elif off < th:
            k = 2
        else:
            k = tie
        off += s1 if k == 1 else s2
        key = (k, off)
        first = seen.get(key)
        if first is not None:
            return _finalize_cycle(p, horizon, hist, first, n - first, decode)
        seen[key] = n
        hist.append(key)
    return CycleReport("no_cycle", horizon)


def _detect_exact_surd(p, horizon, k1, inner1, consts):
    d = p.hyperplane.normal[0].d
    vals = [inner1 if isinstance(inner1, Surd) else Surd(inner1, 0, d)]
    for c in consts:
        vals.append(c if isinstance(c, Surd) else Surd(c, 0, d))
    dens = []
    for v in vals:
        dens.extend((v.a.denominator, v.b.denominator))
    scale = math.lcm(*dens)

    def pair_of(v: Surd) -> tuple[int, int]:
        return _int_of(v.a, scale), _int_of(v.b, scale)

    (i_a, i_b), (b1_a, b1_b), (b2_a, b2_b), (t1_a, t1_b), (t2_a, t2_b) = map(
        pair_of, vals
    )
    tie = _tie_selector(p.tie_policy)

    def decode(key):
        k, pa, pb = key
        return _state_vector(p, k, Surd(Fraction(pa, scale), Fraction(pb, scale), d))

    k = k1
    seen = {(k, i_a, i_b): 1}
    hist = [(k, i_a, i_b)]
    for n in range(2, horizon + 1):
        ta, tb = (t1_a, t1_b) if k == 1 else (t2_a, t2_b)
        sign = _pair_sign(i_a - ta, i_b - tb, d)
        if sign > 0:
            k = 1
        elif sign < 0:
            k = 2
        else:
            k = tie
        if k == 1:
            i_a += b1_a
            i_b += b1_b
        else:
            i_a += b2_a
            i_b += b2_b
        key = (k, i_a, i_b)
        first = seen.get(key)
        if first is not None:
            return _finalize_cycle(p, horizon, hist, first, n - first, decode)
        seen[key] = n
        hist.append(key)
    return CycleReport("no_cycle", horizon)


def _detect_float(p, horizon, k1, inner1, consts):
    beta1, beta2, t1, t2 = consts
    qstep = FLOAT_CYCLE_REL_TOL * max(
        1.0, abs(inner1), abs(beta1), abs(beta2), abs(t1), abs(t2)
    )
    tie = _tie_selector(p.tie_policy)

    def decode(key):
        k, off = key
        return _state_vector(p, k, off)

    k, off = k1, inner1
    seen = {(k, round(off / qstep)): (1, off)}
    hist = [(k, off)]
    for n in range(2, horizon + 1):
        th = t1 if k == 1 else t2
        if off > th:
            k = 1
        elif off < th:
            k = 2
        else:
            k = tie
        off += beta1 if k == 1 else beta2
        cell = round(off / qstep)
        first = None
        for probe in (cell - 1, cell, cell + 1):
            entry = seen.get((k, probe))
            if entry is not None and abs(entry[1] - off) <= qstep:
                first = entry[0]
                break
        if first is not None:
            return _finalize_cycle(
                p, horizon, hist, first, n - first, decode, approximate=True
            )
        seen.setdefault((k, cell), (n, off))
        hist.append((k, off))
    return CycleReport("no_cycle", horizon)


def _state_vector(p: DoubletonProblem, k: int, offset) -> Vector:
    # invert the line confinement: x sits on b_k + span(u) at height offset
    b = p.b1 if k == 1 else p.b2
    beta = p.beta1 if k == 1 else p.beta2
    u = p.hyperplane.normal
    c = offset - beta
    return tuple(c * u[i] + b[i] for i in range(len(u)))


def _vectors_match(p: DoubletonProblem, x, y, approximate: bool) -> bool:
    if not approximate:
        return x == y
    tol = FLOAT_CYCLE_REL_TOL * max(1.0, *(abs(c) for c in x))
    return all(abs(a - b) <= tol for a, b in zip(x, y))


def _finalize_cycle(p, horizon, hist, lam, mu, decode, approximate=False):
    """Key table first hit gives (lam, mu); keys exist only from n=1, so the
    true preperiod may be exactly one step earlier.  Check it on vectors."""
    n0 = lam
    j = lam - 1
    xj = p.x0 if j == 0 else decode(hist[j - 1])
    if _vectors_match(p, xj, decode(hist[j + mu - 1]), approximate):
        n0 = j
    states = tuple(
        p.x0 if t == 0 else decode(hist[t - 1]) for t in range(n0, n0 + mu)
    )
    return CycleReport("cycle", horizon, n0, mu, states, approximate)


def coefficient_limits(p: DoubletonProblem, trace):
    """Long-run selector frequencies and the deviation observed at the end.

    Returns (limit1, limit2, deviation): the selector-1 and selector-2
    frequencies converge to beta2/(beta2-beta1) and -beta1/(beta2-beta1),
    and deviation is |count_1/n - limit1| at the final trace index.
    """
    records = getattr(trace, "trace", trace)
    if len(records) < 2:
        raise PreconditionError("coefficient limits need at least one step")
    beta1, beta2 = p.beta1, p.beta2
    span = beta2 - beta1
    limit1 = beta2 / span
    limit2 = (-beta1) / span
    last = records[-1]
    n = last.n
    if last.counts is not None:
        count1 = last.counts[0]
    else:
        count1 = sum(1 for r in records[1:] if r.selector_k == 1)
    if p.backend == F64:
        observed = count1 / n
    else:
        observed = Fraction(count1, n)
    return limit1, limit2, abs(observed - limit1)
