"""Hermitian matrices under the normalized trace: the n x n model of the
orbit machinery, plus the classical doubly stochastic toolkit around it.

Eigenvalue scales reuse the exact StepScale type: a float is a binary
rational, so Fraction(float) loses nothing; comparisons against another
matrix scale are then relaxed by the operator tolerance. Everything
random is driven by the splitmix64 stream.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .eigsolver import eigh_hermitian, unitary_from
from .errors import (
    DimensionMismatch,
    InternalError,
    NotDiagonal,
    NotDoublyStochastic,
    NotHermitian,
    NotInOrbit,
    NotMajorised,
    NotUnitary,
    SchemaError,
)
from .extremality import check_extreme
from .measure import MeasureSpace, SimpleFunction
from .prng import SplitMix64
from .scales import MajorisationReport, StepScale, majorise_check

TOL_COEFFICIENT = 1e-9


def _maxabs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def gershgorin_bound(a: np.ndarray) -> float:
    """Row-sum bound on the spectral radius."""
    return float(np.max(np.sum(np.abs(a), axis=1))) if a.size else 0.0


class HermitianOperator:
    """n x n Hermitian matrix with a declared comparison tolerance.

    Default tolerance scales with the size of the spectrum:
    1e-9 * (1 + spectral radius estimate).
    """

    def __init__(self, entries, tol: float | None = None):
        a = np.asarray(entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
        if tol is None:
            tol = TOL_COEFFICIENT * (1.0 + gershgorin_bound(a))
        if tol < 0:
            raise SchemaError("tolerance must be nonnegative")
        if _maxabs(a - a.conj().T) > tol:
            raise NotHermitian("matrix differs from its adjoint beyond tolerance")
        self.entries = a
        self.tol = float(tol)
        self._eig: tuple[np.ndarray, np.ndarray] | None = None

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def tau(self) -> float:
        """Normalized trace."""
        return float(np.trace(self.entries).real) / self.n

    def is_diagonal(self) -> bool:
        off = self.entries - np.diag(np.diag(self.entries))
        return _maxabs(off) <= self.tol

    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvalues descending and matching orthonormal eigenvectors."""
        if self._eig is None:
            w, v = eigh_hermitian((self.entries + self.entries.conj().T) / 2.0)
            self._eig = (w[::-1].copy(), v[:, ::-1].copy())
        return self._eig

    @classmethod
    def from_document(cls, doc, tol: float | None = None) -> "HermitianOperator":
        if not isinstance(doc, dict) or "re" not in doc:
            raise SchemaError("matrix document needs at least 're'")
        re = np.asarray(doc["re"], dtype=float)
        im = np.asarray(doc.get("im", np.zeros_like(re)), dtype=float)
        if re.shape != im.shape:
            raise SchemaError("'re' and 'im' have different shapes")
        if "n" in doc and re.shape != (doc["n"], doc["n"]):
            raise SchemaError("'n' does not match the entries")
        return cls(re + 1j * im, tol)

    def serialize(self) -> dict:
        return {
            "n": self.n,
            "re": self.entries.real.tolist(),
            "im": self.entries.imag.tolist(),
        }


def eig_scale(a: HermitianOperator, snap_denominator: int | None = None) -> StepScale:
    """Spectral scale: eigenvalues descending, each a step of length 1/n,
    merged when closer than the operator tolerance (merged step carries
    the cluster mean). ``snap_denominator`` optionally rounds values to
    rationals with bounded denominator, for exact inputs."""
    w, _ = a.eigensystem()
    n = a.n
    clusters: list[list[float]] = []
    for value in w:
        if clusters and abs(clusters[-1][-1] - value) <= a.tol:
            clusters[-1].append(float(value))
        else:
            clusters.append([float(value)])
    pairs = []
    for cluster in clusters:
        mean = sum(cluster) / len(cluster)
        value = Fraction(mean)
        if snap_denominator is not None:
            value = value.limit_denominator(snap_denominator)
        pairs.append((value, Fraction(len(cluster), n)))
    return StepScale.from_pairs(pairs)


def scales_equal_within(a: StepScale, b: StepScale, tol: float) -> bool:
    """Sup-distance of two step scales at most tol (lengths are exact, so
    walking the merged segments is enough)."""
    ai = bi = 0
    rem_a, rem_b = a.steps[0][1], b.steps[0][1]
    while ai < len(a.steps) and bi < len(b.steps):
        if abs(float(a.steps[ai][0] - b.steps[bi][0])) > tol:
            return False
        step = min(rem_a, rem_b)
        rem_a -= step
        rem_b -= step
        if rem_a == 0:
            ai += 1
            rem_a = a.steps[ai][1] if ai < len(a.steps) else 0
        if rem_b == 0:
            bi += 1
            rem_b = b.steps[bi][1] if bi < len(b.steps) else 0
    return True


def matrix_majorise(
    x: HermitianOperator, y: HermitianOperator, tol: float | None = None
) -> MajorisationReport:
    """majorise_check on the eigenvalue scales with tolerance-aware verdict:
    slacks may dip to -tol and the total gap may be as large as tol."""
    if x.n != y.n:
        raise DimensionMismatch(f"{x.n} vs {y.n}")
    if tol is None:
        tol = max(x.tol, y.tol)
    exact = majorise_check(eig_scale(x), eig_scale(y))
    holds = abs(float(exact.total_gap)) <= tol and all(
        float(s) >= -tol for _, s in exact.breakpoint_slacks
    )
    return MajorisationReport(holds, exact.breakpoint_slacks, exact.total_gap)


def diag_expectation(a: HermitianOperator) -> HermitianOperator:
    """Compression onto the diagonal subalgebra; preserves the trace."""
    return HermitianOperator(np.diag(np.diag(a.entries).real), tol=a.tol)


def schur_horn_check(
    y: HermitianOperator, unitary: np.ndarray, tol: float | None = None
) -> MajorisationReport:
    """Check diag(U y U*) majorised by the spectrum of y; holds for every
    unitary U."""
    u = np.asarray(unitary, dtype=complex)
    if u.shape != y.entries.shape:
        raise DimensionMismatch(f"unitary shape {u.shape} vs operator {y.entries.shape}")
    utol = tol if tol is not None else TOL_COEFFICIENT * (1.0 + y.n)
    if _maxabs(u @ u.conj().T - np.eye(y.n)) > utol:
        raise NotUnitary("U U* differs from the identity beyond tolerance")
    conjugated = HermitianOperator(u @ y.entries @ u.conj().T, tol=y.tol)
    return matrix_majorise(diag_expectation(conjugated), y, tol)


def _equal_weight_model(values: list[Fraction]) -> SimpleFunction:
    n = len(values)
    space = MeasureSpace(
        tuple((f"e{i}", Fraction(1, n)) for i in range(n)), Fraction(0)
    )
    return SimpleFunction(space, {f"e{i}": values[i] for i in range(n)})


def _faithful_snap(values: np.ndarray, tol: float, denominator: int = 10**6):
    """Rationals with small denominators reproducing the floats within tol,
    or None when the data is not that clean."""
    snapped = []
    for value in values:
        q = Fraction(float(value)).limit_denominator(denominator)
        if abs(float(q) - float(value)) > tol:
            return None
        snapped.append(q)
    return snapped


def check_extreme_diag(
    x: HermitianOperator, y: HermitianOperator, model_check: bool = True
) -> bool:
    """Diagonal x is extreme among diagonal orbit elements iff its scale
    equals y's within tolerance (every atom of the matrix algebra has the
    same trace 1/n, which collapses the single-atom condition into scale
    equality).

    When both spectra snap faithfully to small rationals, the verdict is
    cross-checked against the commutative criterion on the equal-weight
    atomic model; a disagreement raises InternalError.
    """
    if not x.is_diagonal():
        raise NotDiagonal("x must be diagonal")
    tol = max(x.tol, y.tol)
    if not matrix_majorise(x, y, tol).holds:
        raise NotInOrbit("x is not majorised by y")
    verdict = scales_equal_within(eig_scale(x), eig_scale(y), tol)
    if model_check:
        model = _diag_model_verdict(x, y, tol)
        if model is not None and model != verdict:
            raise InternalError(
                "matrix-side verdict disagrees with the atomic-model criterion"
            )
    return verdict


def _diag_model_verdict(
    x: HermitianOperator, y: HermitianOperator, tol: float
) -> bool | None:
    snap_tol = min(tol, 1e-9)
    x_vals = _faithful_snap(np.diag(x.entries).real, snap_tol)
    y_vals = _faithful_snap(y.eigensystem()[0], snap_tol)
    if x_vals is None or y_vals is None:
        return None
    xf = _equal_weight_model(x_vals)
    yf = _equal_weight_model(y_vals)
    try:
        return check_extreme(xf, yf).extreme
    except NotInOrbit:
        return None


# ---------------------------------------------------------------------------
# doubly stochastic toolkit
# ---------------------------------------------------------------------------

class DoublyStochastic:
    def __init__(self, entries, tol: float = 1e-9):
        a = np.asarray(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
        if float(np.min(a)) < -tol:
            raise NotDoublyStochastic("negative entry")
        ones = np.ones(a.shape[0])
        if (
            _maxabs(a.sum(axis=0) - ones) > tol
            or _maxabs(a.sum(axis=1) - ones) > tol
        ):
            raise NotDoublyStochastic("row or column sums differ from 1")
        self.entries = a
        self.tol = float(tol)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_document(cls, doc, tol: float = 1e-9) -> "DoublyStochastic":
        if not isinstance(doc, dict) or "re" not in doc:
            raise SchemaError("matrix document needs 're'")
        return cls(np.asarray(doc["re"], dtype=float), tol)


@dataclass(frozen=True)
class BirkhoffDecomposition:
    terms: tuple[tuple[float, tuple[int, ...]], ...]

    def matrix(self, n: int) -> np.ndarray:
        out = np.zeros((n, n))
        for coeff, perm in self.terms:
            out[range(n), perm] += coeff
        return out

    def serialize(self) -> dict:
        return {
            "terms": [
                {"coefficient": coeff, "permutation": list(perm)}
                for coeff, perm in self.terms
            ]
        }


def _perfect_matching(matrix: np.ndarray, threshold: float) -> list[int] | None:
    """Row -> column perfect matching on entries above threshold
    (Kuhn's augmenting-path algorithm)."""
    n = matrix.shape[0]
    owner = [-1] * n  # column -> row

    def augment(row: int, seen: set) -> bool:
        for col in range(n):
            if matrix[row, col] > threshold and col not in seen:
                seen.add(col)
                if owner[col] == -1 or augment(owner[col], seen):
                    owner[col] = row
                    return True
        return False

    for row in range(n):
        if not augment(row, set()):
            return None
    perm = [0] * n
    for col, row in enumerate(owner):
        perm[row] = col
    return perm


def _gaussian_nullvector(matrix: np.ndarray) -> np.ndarray | None:
    """A nonzero vector in the null space of ``matrix`` (rows x cols,
    cols > rank), by elimination with partial pivoting."""
    a = np.array(matrix, dtype=float, copy=True)
    rows, cols = a.shape
    pivot_cols: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        pivot = int(np.argmax(np.abs(a[r:, c]))) + r
        if abs(a[pivot, c]) < 1e-12:
            continue
        a[[r, pivot]] = a[[pivot, r]]
        a[r] /= a[r, c]
        for rr in range(rows):
            if rr != r and a[rr, c] != 0.0:
                a[rr] -= a[rr, c] * a[r]
        pivot_cols.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivot_cols]
    if not free:
        return None
    target = free[0]
    vec = np.zeros(cols)
    vec[target] = 1.0
    for row_index, c in enumerate(pivot_cols):
        vec[c] = -a[row_index, target]
    return vec


def _caratheodory_prune(
    coeffs: list[float], perms: list[tuple[int, ...]], n: int, bound: int
) -> tuple[list[float], list[tuple[int, ...]]]:
    """Remove affinely dependent terms until at most ``bound`` remain.
    Doubly stochastic matrices span an affine space of dimension (n-1)^2,
    so more than (n-1)^2 + 1 terms are always dependent."""
    while len(coeffs) > bound:
        columns = []
        for perm in perms:
            flat = np.zeros(n * n + 1)
            for row, col in enumerate(perm):
                flat[row * n + col] = 1.0
            flat[-1] = 1.0
            columns.append(flat)
        alpha = _gaussian_nullvector(np.array(columns).T)
        if alpha is None:
            raise InternalError("expected an affine dependence among terms")
        positive = [(coeffs[i] / alpha[i], i) for i in range(len(coeffs)) if alpha[i] > 1e-12]
        if not positive:
            alpha = -alpha
            positive = [
                (coeffs[i] / alpha[i], i) for i in range(len(coeffs)) if alpha[i] > 1e-12
            ]
        theta, drop = min(positive)
        coeffs = [c - theta * a for c, a in zip(coeffs, alpha)]
        coeffs[drop] = 0.0
        keep = [i for i, c in enumerate(coeffs) if c > 1e-15]
        coeffs = [coeffs[i] for i in keep]
        perms = [perms[i] for i in keep]
    return coeffs, perms


def birkhoff_decompose(s: DoublyStochastic) -> BirkhoffDecomposition:
    """Greedy Birkhoff-von Neumann decomposition, pruned to at most
    (n-1)^2 + 1 terms; reconstruction residual stays within 10 * tol."""
    n = s.n
    work = s.entries.copy()
    # extraction threshold is float-noise level, not the validation tol:
    # leftovers below it keep the residual well under the 1e-10 contract
    threshold = 1e-14 * (1.0 + _maxabs(work))
    coeffs: list[float] = []
    perms: list[tuple[int, ...]] = []
    for _ in range(n * n + 1):
        if _maxabs(work) <= threshold:
            break
        perm = _perfect_matching(work, threshold)
        if perm is None:
            raise NotDoublyStochastic(
                "no perfect matching on the positive support; input too far "
                "from doubly stochastic"
            )
        coeff = float(min(work[row, perm[row]] for row in range(n)))
        coeffs.append(coeff)
        perms.append(tuple(perm))
        for row in range(n):
            work[row, perm[row]] -= coeff
        work[work < 0] = 0.0
    total = sum(coeffs)
    if total <= 0:
        raise NotDoublyStochastic("matrix has no doubly stochastic part")
    coeffs = [c / total for c in coeffs]
    bound = (n - 1) ** 2 + 1
    coeffs, perms = _caratheodory_prune(coeffs, perms, n, bound)
    total = sum(coeffs)
    coeffs = [c / total for c in coeffs]
    decomposition = BirkhoffDecomposition(tuple(zip(coeffs, perms)))
    residual = _maxabs(decomposition.matrix(n) - s.entries)
    if residual > 10 * s.tol:
        raise InternalError(f"reconstruction residual {residual} out of contract")
    return decomposition


def t_transform_chain(x, y, tol: float = 1e-12) -> DoublyStochastic:
    """Doubly stochastic S with S y = x, built from at most n-1 two-index
    averaging (T-transform) steps on the sorted vectors, conjugated by the
    sorting permutations."""
    x = np.asarray([float(Fraction(v)) if isinstance(v, str) else float(v) for v in x])
    y = np.asarray([float(Fraction(v)) if isinstance(v, str) else float(v) for v in y])
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatch("vectors of equal length expected")
    n = x.size
    scale = 1.0 + max(_maxabs(x), _maxabs(y))
    close = tol * scale
    order_x = np.argsort(-x, kind="stable")
    order_y = np.argsort(-y, kind="stable")
    xs, ys = x[order_x], y[order_y]
    if float(np.max(np.cumsum(xs) - np.cumsum(ys))) > close or abs(
        float(np.sum(xs) - np.sum(ys))
    ) > close:
        raise NotMajorised("x is not majorised by y")
    s_sorted = np.eye(n)
    work = ys.copy()
    for _ in range(n - 1):
        below = [j for j in range(n) if xs[j] < work[j] - close]
        if not below:
            break
        j = max(below)
        k = next((i for i in range(j + 1, n) if xs[i] > work[i] + close), None)
        if k is None:
            raise InternalError("no balancing index; totals drifted apart")
        delta = min(work[j] - xs[j], xs[k] - work[k])
        lam = 1.0 - delta / (work[j] - work[k])
        t = np.eye(n)
        t[j, j] = t[k, k] = lam
        t[j, k] = t[k, j] = 1.0 - lam
        work = t @ work
        s_sorted = t @ s_sorted
    if _maxabs(work - xs) > 1e-10 * scale:
        raise InternalError("T-transform chain failed to reach the target")
    p_x = np.zeros((n, n))
    p_x[range(n), order_x] = 1.0
    p_y = np.zeros((n, n))
    p_y[range(n), order_y] = 1.0
    full = p_x.T @ s_sorted @ p_y
    return DoublyStochastic(full, tol=1e-9)


# ---------------------------------------------------------------------------
# seeded random families
# ---------------------------------------------------------------------------

def random_hermitian(rng: SplitMix64, n: int, scale: float = 1.0) -> HermitianOperator:
    g = np.array(
        [[complex(rng.gauss(), rng.gauss()) for _ in range(n)] for _ in range(n)]
    )
    return HermitianOperator(scale * (g + g.conj().T) / 2.0)


def random_unitary(rng: SplitMix64, n: int) -> np.ndarray:
    g = np.array(
        [[complex(rng.gauss(), rng.gauss()) for _ in range(n)] for _ in range(n)]
    )
    return unitary_from(g)


def random_projection(rng: SplitMix64, n: int, rank: int) -> np.ndarray:
    u = random_unitary(rng, n)
    cols = u[:, :rank]
    return cols @ cols.conj().T


def random_doubly_stochastic(rng: SplitMix64, n: int, terms: int | None = None) -> DoublyStochastic:
    """Convex combination of random permutation matrices."""
    if terms is None:
        terms = rng.randint(2, max(2, n))
    weights = [rng.random() + 1e-3 for _ in range(terms)]
    total = sum(weights)
    out = np.zeros((n, n))
    for w in weights:
        perm = list(range(n))
        rng.shuffle(perm)
        out[range(n), perm] += w / total
    return DoublyStochastic(out)


# ---------------------------------------------------------------------------
# randomized identity suite
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SuiteReport:
    trials: dict
    violations: dict

    @property
    def passed(self) -> bool:
        return all(v == 0 for v in self.violations.values())

    def serialize(self) -> dict:
        return {
            "trials": dict(self.trials),
            "violations": dict(self.violations),
            "passed": self.passed,
        }


def _top_k_projection(vectors: np.ndarray, k: int) -> np.ndarray:
    cols = vectors[:, :k]
    return cols @ cols.conj().T


def identity_suite(seed: int, n: int, trials: int, tol: float = 1e-8) -> SuiteReport:
    """Seeded randomized checks of the classical trace identities:

    (a) pairing bound: sum of sorted-descending times sorted-ascending
        spectra <= n*tau(xy) <= sorted times sorted;
    (b) projection supremum: tau(xP) <= cumulative_x(k/n) for rank-k P,
        with equality for the top-k spectral projection;
    (c) equality-achieving projections are sandwiched between the open and
        closed spectral projections at the cut;
    (d) midpoint rigidity: if x1 != x2 share a spectrum, the midpoint's
        scale differs from it.
    """
    rng = SplitMix64(seed)
    names = ("pairing_bound", "projection_supremum", "projection_sandwich", "midpoint_rigidity")
    counts = {name: 0 for name in names}
    bad = {name: 0 for name in names}

    for _ in range(trials):
        m = rng.randint(1, n)
        x = random_hermitian(rng, m)
        y = random_hermitian(rng, m)
        wx, vx = x.eigensystem()
        wy, _ = y.eigensystem()
        scale = 1.0 + _maxabs(wx) + _maxabs(wy)
        slack = tol * scale

        counts["pairing_bound"] += 1
        lower = float(np.dot(wx, wy[::-1])) / m
        upper = float(np.dot(wx, wy)) / m
        middle = float(np.trace(x.entries @ y.entries).real) / m
        if not (lower - slack <= middle <= upper + slack):
            bad["pairing_bound"] += 1

        k = rng.randint(1, m)
        phi_k = float(np.sum(wx[:k])) / m
        counts["projection_supremum"] += 1
        random_proj = random_projection(rng, m, k)
        value_random = float(np.trace(x.entries @ random_proj).real) / m
        top = _top_k_projection(vx, k)
        value_top = float(np.trace(x.entries @ top).real) / m
        if value_random > phi_k + slack or abs(value_top - phi_k) > slack:
            bad["projection_supremum"] += 1

        counts["projection_sandwich"] += 1
        degenerate, deg_proj, deg_k = _degenerate_equality_case(rng, x, k)
        cases = [(x, top, k), (degenerate, deg_proj, deg_k)]
        if value_random >= phi_k - slack:
            cases.append((x, random_proj, k))
        for op, proj, cut in cases:
            if not _sandwich_holds(op, proj, cut, slack):
                bad["projection_sandwich"] += 1
                break

        counts["midpoint_rigidity"] += 1
        u = random_unitary(rng, m)
        x2 = HermitianOperator(u @ x.entries @ u.conj().T, tol=x.tol)
        if _maxabs(x2.entries - x.entries) > 10 * slack:
            midpoint = HermitianOperator((x.entries + x2.entries) / 2.0, tol=x.tol)
            if scales_equal_within(eig_scale(midpoint), eig_scale(x), slack):
                bad["midpoint_rigidity"] += 1

    return SuiteReport(counts, bad)


def _degenerate_equality_case(rng: SplitMix64, x: HermitianOperator, k: int):
    """Force a flat spot across the cut at k, then mix the two eigenvectors
    spanning it into a projection that still attains the supremum."""
    w, v = x.eigensystem()
    m = x.n
    if m == 1 or k >= m:
        return x, _top_k_projection(v, k), k
    w2 = w.copy()
    mean = (w2[k - 1] + w2[k]) / 2.0
    w2[k - 1] = w2[k] = mean
    flat = HermitianOperator(
        v @ np.diag(w2) @ v.conj().T, tol=x.tol + 1e-12 * (1.0 + _maxabs(w2))
    )
    theta = rng.random() * 2.0 * math.pi
    mix = math.cos(theta) * v[:, k - 1] + math.sin(theta) * v[:, k]
    proj = _top_k_projection(v, k - 1) + np.outer(mix, mix.conj())
    return flat, proj, k


def _sandwich_holds(op: HermitianOperator, proj: np.ndarray, k: int, slack: float) -> bool:
    """E(value(k), infinity) <= proj <= E[value(k), infinity) within slack,
    where value(k) is the scale value just right of the cut k/n."""
    w, v = op.eigensystem()
    m = op.n
    if k >= m:
        # rank-n equality projection is the identity; trivially sandwiched
        return _maxabs(proj - np.eye(m)) <= slack
    cut_value = w[k]
    gap = max(op.tol, 1e-10 * (1.0 + _maxabs(w)))
    strictly_above = int(np.sum(w > cut_value + gap))
    at_least = int(np.sum(w >= cut_value - gap))
    e_open = _top_k_projection(v, strictly_above)
    e_closed = _top_k_projection(v, at_least)
    identity = np.eye(m)
    below = e_open @ (identity - proj) @ e_open
    above = (identity - e_closed) @ proj @ (identity - e_closed)
    return _maxabs(below) <= slack and _maxabs(above) <= slack


def diag_operator(values, tol: float | None = None) -> HermitianOperator:
    vals = [float(Fraction(v)) if isinstance(v, str) else float(v) for v in values]
    return HermitianOperator(np.diag(np.asarray(vals, dtype=float)), tol=tol)
