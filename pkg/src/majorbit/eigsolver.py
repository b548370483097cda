"""Self-contained dense Hermitian eigensolver.

Real symmetric matrices go through Householder tridiagonalization followed
by the implicit QL algorithm with Wilkinson-style shifts, accumulating the
transformations so eigenvectors come out too. A complex Hermitian matrix
A = X + iY is solved through its real symmetric embedding
[[X, -Y], [Y, X]], whose spectrum is that of A doubled; one real
eigenvector (u; v) per pair maps back to the complex eigenvector u + iv.

Loops are plain Python over numpy rows: the library targets n <= 12
(<= 24 after embedding), where this is both fast enough and accurate to
around 1e-14 relative.
"""

import math

import numpy as np

from .errors import InternalError

_EPS = float(np.finfo(float).eps)


def _tred2(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Householder reduction of a real symmetric matrix to tridiagonal form.

    ``a`` is overwritten with the accumulated orthogonal transformation Q
    (columns), so that Q^T A Q is tridiagonal with diagonal d and
    subdiagonal e (e[0] unused).
    """
    n = a.shape[0]
    d = np.zeros(n)
    e = np.zeros(n)
    for i in range(n - 1, 0, -1):
        l = i - 1
        h = 0.0
        if l > 0:
            scale = float(np.sum(np.abs(a[i, :i])))
            if scale == 0.0:
                e[i] = a[i, l]
            else:
                a[i, :i] /= scale
                h = float(np.sum(a[i, :i] ** 2))
                f = a[i, l]
                g = -math.copysign(math.sqrt(h), f)
                e[i] = scale * g
                h -= f * g
                a[i, l] = f - g
                f = 0.0
                for j in range(i):
                    a[j, i] = a[i, j] / h
                    g = float(
                        np.dot(a[j, : j + 1], a[i, : j + 1])
                        + np.dot(a[j + 1 : i, j], a[i, j + 1 : i])
                    )
                    e[j] = g / h
                    f += e[j] * a[i, j]
                hh = f / (h + h)
                for j in range(i):
                    f = a[i, j]
                    g = e[j] - hh * f
                    e[j] = g
                    a[j, : j + 1] -= f * e[: j + 1] + g * a[i, : j + 1]
        else:
            e[i] = a[i, l]
        d[i] = h
    d[0] = 0.0
    e[0] = 0.0
    for i in range(n):
        if d[i] != 0.0:
            for j in range(i):
                g = float(np.dot(a[i, :i], a[:i, j]))
                a[:i, j] -= g * a[:i, i]
        d[i] = a[i, i]
        a[i, i] = 1.0
        if i > 0:
            a[i, :i] = 0.0
            a[:i, i] = 0.0
    return d, e


def _tqli(d: np.ndarray, e: np.ndarray, z: np.ndarray, max_sweeps: int = 60) -> None:
    """Implicit QL with shifts on a tridiagonal (d, e); rotations are
    accumulated into the columns of z. d ends up holding eigenvalues."""
    n = d.size
    e[:-1] = e[1:]
    e[-1] = 0.0
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise InternalError("QL iteration failed to converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                col = z[:, i + 1].copy()
                z[:, i + 1] = s * z[:, i] + c * col
                z[:, i] = c * z[:, i] - s * col
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0


def eigh_real_symmetric(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a
    real symmetric matrix."""
    work = np.array(a, dtype=float, copy=True)
    if work.ndim != 2 or work.shape[0] != work.shape[1]:
        raise InternalError("square matrix expected")
    n = work.shape[0]
    if n == 1:
        return work[0, :1].copy(), np.ones((1, 1))
    d, e = _tred2(work)
    _tqli(d, e, work)
    order = np.argsort(d, kind="stable")
    return d[order], work[:, order]


def _pick_complex_vectors(
    w_paired: np.ndarray, v_real: np.ndarray, n: int, scale: float
) -> np.ndarray:
    """From the real eigenvectors of the embedding (columns of v_real,
    sorted to match the paired eigenvalues), select one complex
    eigenvector per eigenvalue by Gram-Schmidt within each cluster."""
    vectors = np.zeros((n, n), dtype=complex)
    cluster_tol = 1e-10 * (scale + 1.0)
    i = 0
    while i < n:
        j = i
        while j + 1 < n and abs(w_paired[j + 1] - w_paired[i]) <= cluster_tol:
            j += 1
        need = j - i + 1
        chosen: list[np.ndarray] = []
        for k in range(2 * i, 2 * (j + 1)):
            z = v_real[:n, k] + 1j * v_real[n:, k]
            for prior in chosen:
                z = z - prior * np.vdot(prior, z)
            norm = math.sqrt(float(np.real(np.vdot(z, z))))
            if norm > 1e-6:
                chosen.append(z / norm)
            if len(chosen) == need:
                break
        if len(chosen) != need:
            raise InternalError("could not extract a complex eigenbasis")
        for z in chosen:
            vectors[:, i] = z
            i += 1
    return vectors


def eigh_hermitian(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a
    Hermitian matrix; complex input goes through the real embedding."""
    a = np.asarray(a)
    if not np.iscomplexobj(a) or float(np.max(np.abs(a.imag))) == 0.0:
        w, v = eigh_real_symmetric(np.real(a))
        return w, v.astype(complex)
    n = a.shape[0]
    x, y = a.real, a.imag
    embedded = np.block([[x, -y], [y, x]])
    w2, v2 = eigh_real_symmetric(embedded)
    w = 0.5 * (w2[0::2] + w2[1::2])
    scale = float(np.max(np.abs(w2))) if w2.size else 0.0
    return w, _pick_complex_vectors(w, v2, n, scale)


def eigvals_hermitian(a: np.ndarray) -> np.ndarray:
    return eigh_hermitian(a)[0]


def unitary_from(matrix: np.ndarray) -> np.ndarray:
    """Orthonormalize the columns (modified Gram-Schmidt) with the phase
    normalization that makes each diagonal projection coefficient a
    positive real, so the result is a deterministic function of the input."""
    q = np.array(matrix, dtype=complex, copy=True)
    n = q.shape[1]
    for k in range(n):
        for j in range(k):
            q[:, k] -= q[:, j] * np.vdot(q[:, j], q[:, k])
        norm = math.sqrt(float(np.real(np.vdot(q[:, k], q[:, k]))))
        if norm < 1e-12:
            raise InternalError("degenerate sample for unitary construction")
        q[:, k] /= norm
    return q
