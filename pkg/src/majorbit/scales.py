"""Spectral scales of simple functions and the majorisation orders.

The scale of a function is its right-continuous decreasing rearrangement,
represented as a step function on [0,1) by (value, length) steps with
adjacent equal values merged. All breakpoints and values are exact
rationals; every comparison below is exact.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InternalError
from .measure import ONE, ZERO, SimpleFunction, abs_function
from .rationals import format_ratstr, parse_ratstr


def merge_pairs(pairs) -> tuple[tuple[Fraction, Fraction], ...]:
    """Merge adjacent (value, length) pairs with equal values, dropping
    zero-length entries."""
    merged: list[list[Fraction]] = []
    for value, length in pairs:
        if length == 0:
            continue
        if merged and merged[-1][0] == value:
            merged[-1][1] += length
        else:
            merged.append([value, length])
    return tuple((v, l) for v, l in merged)


@dataclass(frozen=True)
class StepScale:
    """Decreasing right-continuous step function on [0,1), total length 1."""

    steps: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        if not self.steps:
            raise InternalError("a scale is never empty")
        total = ZERO
        for i, (value, length) in enumerate(self.steps):
            if length <= 0:
                raise InternalError("step lengths must be > 0")
            if i and self.steps[i - 1][0] <= value:
                raise InternalError("step values must be strictly decreasing")
            total += length
        if total != 1:
            raise InternalError(f"step lengths sum to {total}, expected 1")

    @classmethod
    def from_pairs(cls, pairs) -> "StepScale":
        ordered = sorted(pairs, key=lambda p: p[0], reverse=True)
        return cls(merge_pairs(ordered))

    @property
    def breakpoints(self) -> tuple[Fraction, ...]:
        """Cumulative right endpoints of the steps; the last one is 1."""
        out, acc = [], ZERO
        for _, length in self.steps:
            acc += length
            out.append(acc)
        return tuple(out)

    def value_at(self, t: Fraction) -> Fraction:
        t = Fraction(t)
        if not 0 <= t < 1:
            raise DomainError(f"scale evaluated outside [0,1): {t}")
        acc = ZERO
        for value, length in self.steps:
            acc += length
            if t < acc:
                return value
        raise InternalError("unreachable: lengths sum to 1")

    def last_value(self) -> Fraction:
        """The value on the final step, i.e. the left limit at 1."""
        return self.steps[-1][0]

    def serialize(self) -> dict:
        return {
            "steps": [
                {"value": format_ratstr(v), "length": format_ratstr(l)}
                for v, l in self.steps
            ]
        }


def parse_scale(document) -> StepScale:
    return StepScale(
        tuple(
            (parse_ratstr(s["value"]), parse_ratstr(s["length"]))
            for s in document["steps"]
        )
    )


@dataclass(frozen=True)
class IncreasingScale:
    """Increasing right-continuous step function on [0,1): the reversed scale."""

    steps: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        total = ZERO
        for i, (value, length) in enumerate(self.steps):
            if length <= 0:
                raise InternalError("step lengths must be > 0")
            if i and self.steps[i - 1][0] >= value:
                raise InternalError("step values must be strictly increasing")
            total += length
        if total != 1:
            raise InternalError(f"step lengths sum to {total}, expected 1")


@dataclass(frozen=True)
class MajorisationReport:
    holds: bool
    breakpoint_slacks: tuple[tuple[Fraction, Fraction], ...]
    total_gap: Fraction

    def serialize(self) -> dict:
        return {
            "holds": self.holds,
            "breakpoint_slacks": [
                {"t": format_ratstr(t), "slack": format_ratstr(s)}
                for t, s in self.breakpoint_slacks
            ],
            "total_gap": format_ratstr(self.total_gap),
        }


# ---------------------------------------------------------------------------
# scale constructions
# ---------------------------------------------------------------------------

def rearrange(f: SimpleFunction) -> StepScale:
    """The decreasing rearrangement: all (value, mass) carriers sorted by
    value descending, equal values merged. Equimeasurable with f."""
    return StepScale.from_pairs(f.weighted_values())


def distribution(f: SimpleFunction, s: Fraction) -> Fraction:
    """Mass of {f > s}; decreasing and right-continuous in s."""
    s = Fraction(s)
    return sum((m for v, m in f.weighted_values() if v > s), ZERO)


def scale_distribution(scale: StepScale, s: Fraction) -> Fraction:
    """Distribution function of a scale viewed as a function on [0,1)."""
    s = Fraction(s)
    return sum((l for v, l in scale.steps if v > s), ZERO)


def co_scale(f: SimpleFunction) -> IncreasingScale:
    """The increasing rearrangement; equals t -> -rearrange(-f)(t)."""
    return IncreasingScale(tuple(reversed(rearrange(f).steps)))


def singular_scale(f: SimpleFunction) -> StepScale:
    """Decreasing rearrangement of |f|."""
    return rearrange(abs_function(f))


def cumulative(scale, s: Fraction) -> Fraction:
    """Integral of the step function over [0, s]; piecewise linear in s."""
    s = Fraction(s)
    if not 0 <= s <= 1:
        raise DomainError(f"cumulative argument outside [0,1]: {s}")
    acc = ZERO
    total = ZERO
    for value, length in scale.steps:
        if s <= acc + length:
            return total + value * (s - acc)
        total += value * length
        acc += length
    return total


def total_integral(scale) -> Fraction:
    return sum((v * l for v, l in scale.steps), ZERO)


def add_scales(a: StepScale, b: StepScale) -> StepScale:
    """Pointwise sum of two decreasing step functions: refine the breakpoint
    sets, add values, re-merge. The sum is again decreasing."""
    out = []
    ai = bi = 0
    rem_a, rem_b = a.steps[0][1], b.steps[0][1]
    while ai < len(a.steps) and bi < len(b.steps):
        step = min(rem_a, rem_b)
        out.append((a.steps[ai][0] + b.steps[bi][0], step))
        rem_a -= step
        rem_b -= step
        if rem_a == 0:
            ai += 1
            rem_a = a.steps[ai][1] if ai < len(a.steps) else ZERO
        if rem_b == 0:
            bi += 1
            rem_b = b.steps[bi][1] if bi < len(b.steps) else ZERO
    return StepScale(merge_pairs(out))


def prefix_steps(scale: StepScale, t: Fraction) -> tuple[tuple[Fraction, Fraction], ...]:
    """The (value, length) profile of the scale restricted to [0, t)."""
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise DomainError(f"prefix boundary outside [0,1]: {t}")
    out, acc = [], ZERO
    for value, length in scale.steps:
        if acc + length <= t:
            out.append((value, length))
        elif acc < t:
            out.append((value, t - acc))
        acc += length
    return tuple(out)


def steps_on_interval(
    scale: StepScale, lo: Fraction, hi: Fraction
) -> tuple[tuple[Fraction, Fraction], ...]:
    """The (value, length) profile of the scale restricted to [lo, hi)."""
    lo, hi = Fraction(lo), Fraction(hi)
    out, acc = [], ZERO
    for value, length in scale.steps:
        start, end = acc, acc + length
        cut_lo, cut_hi = max(start, lo), min(end, hi)
        if cut_lo < cut_hi:
            out.append((value, cut_hi - cut_lo))
        acc = end
    return merge_pairs(out)


# ---------------------------------------------------------------------------
# orders
# ---------------------------------------------------------------------------

def _union_breakpoints(a: StepScale, b: StepScale) -> list[Fraction]:
    pts = set(a.breakpoints) | set(b.breakpoints)
    return sorted(pts)


def majorise_check(x: StepScale, y: StepScale) -> MajorisationReport:
    """Hardy-Littlewood-Polya order: cumulative of x never exceeds that of y,
    with equal totals. Both cumulatives are piecewise linear and the
    difference can only attain its minimum at a breakpoint of either scale,
    so checking the union of breakpoints is exact and sufficient."""
    slacks = []
    for t in _union_breakpoints(x, y):
        slacks.append((t, cumulative(y, t) - cumulative(x, t)))
    total_gap = cumulative(y, ONE) - cumulative(x, ONE)
    holds = total_gap == 0 and all(s >= 0 for _, s in slacks)
    return MajorisationReport(holds, tuple(slacks), total_gap)


def submajorise_check(x: SimpleFunction, y: SimpleFunction) -> bool:
    """Weak (sub)majorisation of the singular value scales: partial integrals
    of |x|'s rearrangement never exceed |y|'s; no total-equality requirement."""
    mx, my = singular_scale(x), singular_scale(y)
    return all(
        cumulative(mx, t) <= cumulative(my, t) for t in _union_breakpoints(mx, my)
    )
