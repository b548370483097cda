"""Acceptance suite: every criterion as a seeded, deterministic function.

Each criterion returns a CriterionResult; run_all executes all of them,
prints one pass/fail line per criterion, and reports wall time. The pytest
acceptance module drives the same functions, so the CLI `selftest` and the
test suite cannot drift apart.
"""

import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .errors import MajorbitError
from .extremality import check_extreme
from .hermitian import (
    HermitianOperator,
    birkhoff_decompose,
    check_extreme_diag,
    diag_operator,
    gershgorin_bound,
    identity_suite,
    random_doubly_stochastic,
    random_hermitian,
    random_unitary,
    schur_horn_check,
    t_transform_chain,
)
from .measure import MeasureSpace, SimpleFunction
from .orbit import enumerate_extreme, oracle_extreme, sample_orbit
from .prng import SplitMix64
from .scales import majorise_check, rearrange
from .witness import verify_witness

import numpy as np


@dataclass
class CriterionResult:
    index: int
    name: str
    trials: int
    failures: int
    seconds: float
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.note})" if self.note else ""
        return (
            f"criterion {self.index} {self.name}: {status} "
            f"[{self.trials} trials, {self.failures} failures, "
            f"{self.seconds:.2f}s]{extra}"
        )

    def serialize(self) -> dict:
        return {
            "index": self.index,
            "name": self.name,
            "trials": self.trials,
            "failures": self.failures,
            "seconds": round(self.seconds, 3),
            "passed": self.passed,
            "note": self.note,
        }


def _dyadic_weights(rng: SplitMix64, n: int) -> tuple[Fraction, ...]:
    exponent = rng.randint(3, 6)
    denom = 2**exponent
    while True:
        cuts = sorted({rng.randint(1, denom - 1) for _ in range(n - 1)})
        if len(cuts) == n - 1:
            break
    bounds = [0] + cuts + [denom]
    return tuple(Fraction(b - a, denom) for a, b in zip(bounds, bounds[1:]))


def _random_atomic_instance(rng: SplitMix64, n: int):
    weights = _dyadic_weights(rng, n)
    space = MeasureSpace(tuple((f"a{i}", weights[i]) for i in range(n)), Fraction(0))
    y = SimpleFunction(
        space, {f"a{i}": Fraction(rng.randint(-4, 8)) for i in range(n)}
    )
    return y


def _random_diffuse_instance(rng: SplitMix64):
    k = rng.randint(2, 5)
    masses = _dyadic_weights(rng, k)
    values = [Fraction(rng.randint(-4, 8)) for _ in range(k)]
    space = MeasureSpace((), Fraction(1))
    return SimpleFunction(space, {}, tuple(zip(values, masses)))


def _random_mixed_instance(rng: SplitMix64):
    n = rng.randint(1, 3)
    k = rng.randint(1, 3)
    parts = _dyadic_weights(rng, n + k)
    space = MeasureSpace(
        tuple((f"a{i}", parts[i]) for i in range(n)),
        sum(parts[n:], Fraction(0)),
    )
    values = {f"a{i}": Fraction(rng.randint(-4, 8)) for i in range(n)}
    pieces = tuple(
        (Fraction(rng.randint(-4, 8)), parts[n + j]) for j in range(k)
    )
    return SimpleFunction(space, values, pieces)


def criterion_agreement(seed: int, trials: int = 1000) -> CriterionResult:
    """1: check_extreme agrees with the polytope vertex oracle on random
    atomic instances, with x drawn both from orbit sampling and from the
    extreme-point enumerator."""
    rng = SplitMix64(seed)
    failures = 0
    start = time.perf_counter()
    for case in range(trials):
        n = rng.randint(2, 5)
        use_enumerate = case % 2 == 1 and n <= 4
        y = _random_atomic_instance(rng, n)
        if use_enumerate:
            points = enumerate_extreme(y)
            x = points[rng.randint(0, len(points) - 1)]
        else:
            x = sample_orbit(y, rng.next_u64())
        try:
            verdict = check_extreme(x, y).extreme
            ground = oracle_extreme(x, y)
        except MajorbitError:
            failures += 1
            continue
        if verdict != ground:
            failures += 1
    return CriterionResult(
        1, "criterion-oracle equivalence", trials, failures, time.perf_counter() - start
    )


_HLP_CASES = [
    (3, 1),
    (2, 2, 1),
    (5, 1, 1, 0),
    (3, 2, 2, 1),
    (4, 3, 2, 2, 1, 0),
]


def criterion_hlp(seed: int, trials: int = len(_HLP_CASES)) -> CriterionResult:
    """2: equal weights recover the classical picture: the extreme points
    are exactly the multiset permutations of y."""
    start = time.perf_counter()
    failures = 0
    cases = _HLP_CASES[: max(0, trials)] if trials < len(_HLP_CASES) else _HLP_CASES
    for values in cases:
        n = len(values)
        space = MeasureSpace(
            tuple((f"e{i}", Fraction(1, n)) for i in range(n)), Fraction(0)
        )
        y = SimpleFunction(space, {f"e{i}": Fraction(v) for i, v in enumerate(values)})
        found = {
            tuple(f.atom_values[f"e{i}"] for i in range(n))
            for f in enumerate_extreme(y)
        }
        expected = {tuple(Fraction(v) for v in p) for p in permutations(values)}
        if found != expected:
            failures += 1
    return CriterionResult(
        2, "classical HLP recovery", len(cases), failures, time.perf_counter() - start
    )


def criterion_ryff(seed: int, trials: int = 500) -> CriterionResult:
    """3: on purely diffuse spaces, extreme iff equimeasurable."""
    rng = SplitMix64(seed)
    failures = 0
    start = time.perf_counter()
    for case in range(trials):
        y = _random_diffuse_instance(rng)
        if case % 2 == 0:
            x = sample_orbit(y, rng.next_u64())
        else:
            pieces = list(y.diffuse_pieces)
            rng.shuffle(pieces)
            x = SimpleFunction(y.space, {}, tuple(pieces))
        try:
            verdict = check_extreme(x, y).extreme
        except MajorbitError:
            failures += 1
            continue
        if verdict != (rearrange(x) == rearrange(y)):
            failures += 1
    return CriterionResult(
        3, "Ryff recovery on atomless spaces", trials, failures, time.perf_counter() - start
    )


def criterion_witnesses(seed: int, trials: int = 1000) -> CriterionResult:
    """4: every NotExtreme verdict carries an exactly verified witness;
    construction never fails on a criterion-violating input."""
    rng = SplitMix64(seed)
    checked = 0
    failures = 0
    start = time.perf_counter()
    makers = [
        lambda: _random_atomic_instance(rng, rng.randint(2, 5)),
        lambda: _random_diffuse_instance(rng),
        lambda: _random_mixed_instance(rng),
    ]
    guard = 0
    while checked < trials and guard < 20 * max(trials, 1):
        guard += 1
        y = makers[guard % 3]()
        x = sample_orbit(y, rng.next_u64())
        try:
            verdict = check_extreme(x, y)
        except MajorbitError:
            failures += 1
            checked += 1
            continue
        if verdict.extreme:
            continue
        checked += 1
        w = verdict.witness
        if w is None or not verify_witness(x, y, w):
            failures += 1
    return CriterionResult(
        4, "witness soundness and completeness", checked, failures, time.perf_counter() - start
    )


def _frac(text: str) -> Fraction:
    return Fraction(text)


def criterion_golden(seed: int = 0, trials: int = 3) -> CriterionResult:
    """5: exact golden weighted examples, re-verified against the rank
    oracle and a bounded perturbation search."""
    start = time.perf_counter()
    failures = 0

    # (a) weights (1/2,1/4,1/4), y=(4,2,0), x=(3,4,0): extreme by condition 2
    space = MeasureSpace(
        (("a", Fraction(1, 2)), ("b", Fraction(1, 4)), ("c", Fraction(1, 4))),
        Fraction(0),
    )
    y = SimpleFunction(space, {"a": 4, "b": 2, "c": 0})
    x = SimpleFunction(space, {"a": 3, "b": 4, "c": 0})
    verdict = check_extreme(x, y)
    if not (
        verdict.extreme
        and verdict.conditions == (1, 2, 1)
        and oracle_extreme(x, y)
    ):
        failures += 1

    # (b) weights (2/3,1/3), y=(3,0): exactly two extreme points
    space2 = MeasureSpace((("A", Fraction(2, 3)), ("B", Fraction(1, 3))), Fraction(0))
    y2 = SimpleFunction(space2, {"A": 3, "B": 0})
    found = {
        (f.atom_values["A"], f.atom_values["B"]) for f in enumerate_extreme(y2)
    }
    if found != {(Fraction(3), Fraction(0)), (Fraction(3, 2), Fraction(3))}:
        failures += 1

    # (c) half-diffuse space: y = (4 on 1/4) + (2 on 1/4) + atom 0;
    #     x = 0 on the diffuse part, atom value twice the diffuse integral
    space3 = MeasureSpace((("e", Fraction(1, 2)),), Fraction(1, 2))
    y3 = SimpleFunction(
        space3, {"e": 0}, ((Fraction(4), Fraction(1, 4)), (Fraction(2), Fraction(1, 4)))
    )
    x3 = SimpleFunction(space3, {"e": 3}, ((Fraction(0), Fraction(1, 2)),))
    verdict3 = check_extreme(x3, y3)
    if not (verdict3.extreme and verdict3.conditions == (2, 1)):
        failures += 1
    if perturbation_search_finds_witness(x3, y3, SplitMix64(seed + 17), attempts=200):
        failures += 1

    return CriterionResult(
        5, "golden weighted examples", 3, failures, time.perf_counter() - start
    )


def perturbation_search_finds_witness(
    x: SimpleFunction, y: SimpleFunction, rng: SplitMix64, attempts: int = 100
) -> bool:
    """Bounded randomized search for x +- delta*u inside the orbit: returns
    True iff some direction and dyadic step keep both signs majorised."""
    from .measure import add_functions, scale_function

    y_scale = rearrange(y)
    carriers = x.weighted_values()
    n_atoms = len(x.space.atoms)
    for _ in range(attempts):
        coeffs = [Fraction(rng.randint(-3, 3)) for _ in carriers]
        total = sum(c * m for c, (_, m) in zip(coeffs, carriers))
        coeffs = [c - total for c in coeffs]  # total mass is 1, so integral is 0
        if all(c == 0 for c in coeffs):
            continue
        values = {
            aid: coeffs[i] for i, aid in enumerate(x.space.atom_ids)
        }
        pieces = tuple(
            (coeffs[n_atoms + j], m) for j, (_, m) in enumerate(x.diffuse_pieces)
        )
        u = SimpleFunction(x.space, values, pieces)
        delta = Fraction(1)
        for _ in range(12):
            plus = add_functions(x, scale_function(u, delta))
            minus = add_functions(x, scale_function(u, -delta))
            if (
                majorise_check(rearrange(plus), y_scale).holds
                and majorise_check(rearrange(minus), y_scale).holds
            ):
                return True
            delta /= 2
    return False


def _dyadic_sqrt_inverse_pieces() -> tuple[tuple[Fraction, Fraction], ...]:
    """8 pieces on (0,1/2) with dyadic boundaries 2^-9..2^-1, values rational
    approximations of 1/sqrt(t) at the right endpoints (strictly decreasing)."""
    import math

    boundaries = [Fraction(0)] + [Fraction(1, 2**k) for k in range(8, 0, -1)]
    pieces = []
    for left, right in zip(boundaries, boundaries[1:]):
        approx = Fraction(1.0 / math.sqrt(float(right))).limit_denominator(2**12)
        pieces.append((approx, right - left))
    values = [v for v, _ in pieces]
    assert all(a > b for a, b in zip(values, values[1:]))
    return tuple(pieces)


def criterion_truncation_family(seed: int = 0, trials: int = 9) -> CriterionResult:
    """6: truncating the decreasing step density at any piece boundary and
    giving the atom twice the cut tail is always extreme."""
    start = time.perf_counter()
    failures = 0
    pieces = _dyadic_sqrt_inverse_pieces()
    space = MeasureSpace((("e", Fraction(1, 2)),), Fraction(1, 2))
    y = SimpleFunction(space, {"e": 0}, pieces)
    boundaries = range(len(pieces) + 1)
    count = 0
    for keep in boundaries:
        count += 1
        tail = sum((v * m for v, m in pieces[keep:]), Fraction(0))
        new_pieces = tuple(
            (v if i < keep else Fraction(0), m) for i, (v, m) in enumerate(pieces)
        )
        x = SimpleFunction(space, {"e": 2 * tail}, new_pieces)
        try:
            if not check_extreme(x, y).extreme:
                failures += 1
        except MajorbitError:
            failures += 1
    return CriterionResult(
        6, "truncation family extremality", count, failures, time.perf_counter() - start
    )


def criterion_matrix(seed: int, trials: int = 200) -> CriterionResult:
    """7: Schur inclusion for random unitaries; diagonal extremality matches
    the atomic model; Birkhoff and T-transform contracts."""
    rng = SplitMix64(seed)
    failures = 0
    start = time.perf_counter()
    ran = 0

    for _ in range(trials):
        ran += 1
        n = rng.randint(1, 8)
        y = random_hermitian(rng, n)
        u = random_unitary(rng, n)
        tol = 1e-8 * (1.0 + gershgorin_bound(y.entries))
        if not schur_horn_check(y, u, tol=tol).holds:
            failures += 1

    for _ in range(trials):
        ran += 1
        n = rng.randint(1, 8)
        spectrum = [Fraction(rng.randint(-4, 8)) for _ in range(n)]
        u = random_unitary(rng, n)
        y_op = HermitianOperator(
            u @ np.diag([float(v) for v in spectrum]) @ u.conj().T
        )
        model_space = MeasureSpace(
            tuple((f"e{i}", Fraction(1, n)) for i in range(n)), Fraction(0)
        )
        y_model = SimpleFunction(
            model_space, {f"e{i}": spectrum[i] for i in range(n)}
        )
        if rng.next_u64() & 1:
            ordering = list(range(n))
            rng.shuffle(ordering)
            x_values = [spectrum[j] for j in ordering]
        else:
            x_model = sample_orbit(y_model, rng.next_u64())
            x_values = [x_model.atom_values[f"e{i}"] for i in range(n)]
        x_model = SimpleFunction(
            model_space, {f"e{i}": x_values[i] for i in range(n)}
        )
        expected = check_extreme(x_model, y_model).extreme
        try:
            got = check_extreme_diag(diag_operator(x_values), y_op)
        except MajorbitError:
            failures += 1
            continue
        if got != expected:
            failures += 1

    for _ in range(trials):
        ran += 1
        n = rng.randint(2, 8)
        ds = random_doubly_stochastic(rng, n)
        decomposition = birkhoff_decompose(ds)
        residual = np.max(np.abs(decomposition.matrix(n) - ds.entries))
        if (
            residual > 1e-10
            or len(decomposition.terms) > (n - 1) ** 2 + 1
            or abs(sum(c for c, _ in decomposition.terms) - 1.0) > 1e-12
        ):
            failures += 1

    for _ in range(trials):
        ran += 1
        n = rng.randint(1, 8)
        y_vec = np.array([rng.randint(-4, 8) for _ in range(n)], dtype=float)
        mix = random_doubly_stochastic(rng, n) if n > 1 else None
        x_vec = mix.entries @ y_vec if mix is not None else y_vec.copy()
        try:
            s = t_transform_chain(x_vec, y_vec)
        except MajorbitError:
            failures += 1
            continue
        if np.max(np.abs(s.entries @ y_vec - x_vec)) > 1e-10:
            failures += 1

    return CriterionResult(
        7, "matrix suite", ran, failures, time.perf_counter() - start
    )


def criterion_identities(seed: int, trials: int = 200) -> CriterionResult:
    """8: trace inequality chain, projection supremum with spectral
    equality, projection sandwich, midpoint rigidity."""
    start = time.perf_counter()
    report = identity_suite(seed, n=6, trials=trials, tol=1e-8)
    failures = sum(report.violations.values())
    return CriterionResult(
        8,
        "matrix identity suite",
        sum(report.trials.values()),
        failures,
        time.perf_counter() - start,
        note=", ".join(f"{k}={v}" for k, v in report.violations.items() if v),
    )


CRITERIA = [
    ("agreement", criterion_agreement, 1000),
    ("hlp", criterion_hlp, len(_HLP_CASES)),
    ("ryff", criterion_ryff, 500),
    ("witnesses", criterion_witnesses, 1000),
    ("golden", criterion_golden, 3),
    ("truncation", criterion_truncation_family, 9),
    ("matrix", criterion_matrix, 200),
    ("identities", criterion_identities, 200),
]


def run_all(seed: int = 1, trials: int | None = None, stream=None):
    """Run every criterion; scale instance counts by trials/1000 when a
    trial budget is given. Returns (results, all_passed)."""
    import sys

    if stream is None:
        stream = sys.stderr
    results = []
    overall_start = time.perf_counter()
    for index, (name, fn, default) in enumerate(CRITERIA, start=1):
        count = default if trials is None else round(default * trials / 1000)
        if trials is not None and count == 0:
            result = CriterionResult(
                index, name, 0, 0, 0.0, note="0 trials: vacuous pass"
            )
        else:
            result = fn(seed, count)
        results.append(result)
        print(result.line(), file=stream)
    total = time.perf_counter() - overall_start
    ok = all(r.passed for r in results)
    print(
        f"selftest {'PASS' if ok else 'FAIL'} in {total:.2f}s (seed={seed})",
        file=stream,
    )
    return results, ok
