"""Self-contained numerical kernels.

Symmetric eigendecomposition by cyclic Jacobi rotations, the PSD matrix
square root built on it, and the explicit 2x2 quadratic form used by the
edge-count statistic. Sizes of interest are small (covariances of a few
hundred dimensions at most), where Jacobi is simple and very accurate.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NonFiniteInput, NonSquareError, AsymmetryError, NoConvergence, NotPSD, SingularCovariance

#: Convergence target: off-diagonal Frobenius norm relative to the input norm.
EIG_TOL = 1e-12
#: Cyclic Jacobi converges quadratically; sweeps above this signal a bug.
EIG_MAX_SWEEPS = 100
#: Eigenvalues of a nominally PSD matrix may round slightly negative; anything
#: below -PSD_SLACK * lambda_max is treated as materially negative.
PSD_SLACK = 1e-9
#: A 2x2 covariance with |det| at or below this (relative) threshold is
#: considered singular.
SINGULAR_DET_RTOL = 1e-12


def _as_symmetric(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquareError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteInput("matrix entries must be finite")
    if not np.array_equal(a, a.T):
        raise AsymmetryError("matrix must be exactly symmetric")
    return a


def _offdiag_norm(a: np.ndarray) -> float:
    d = a.shape[0]
    total = 0.0
    for p in range(d - 1):
        row = a[p, p + 1:]
        total += float(row @ row)
    return math.sqrt(2.0 * total)


def sym_eig(m, tol: float = EIG_TOL, max_sweeps: int = EIG_MAX_SWEEPS):
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    eigenvectors as the matching columns of an orthogonal matrix, so that
    ``V @ diag(w) @ V.T`` reconstructs the input. Convergence is declared
    when the off-diagonal Frobenius norm drops to ``tol`` times the
    Frobenius norm of the input.

    Raises NoConvergence if `max_sweeps` full sweeps do not reach `tol`.
    """
    a = _as_symmetric(m).copy()
    d = a.shape[0]
    v = np.eye(d)
    if d == 1:
        return a.diagonal().copy(), v

    target = tol * float(np.linalg.norm(a))
    for _ in range(max_sweeps):
        if _offdiag_norm(a) <= target:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                # smaller-magnitude root of t^2 + 2t*theta - 1 = 0; keeps
                # rotation angles <= 45 degrees for stability
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                # exact update of the rotated 2x2 block
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    else:
        if _offdiag_norm(a) > target:
            raise NoConvergence(
                f"Jacobi sweep limit {max_sweeps} reached; off-diagonal norm "
                f"{_offdiag_norm(a):g} above target {target:g}"
            )

    w = a.diagonal().copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def psd_sqrt(m) -> np.ndarray:
    """Symmetric square root of a numerically PSD matrix.

    Eigenvalues within ``PSD_SLACK * lambda_max`` below zero are clamped
    to zero; anything lower raises NotPSD.
    """
    w, v = sym_eig(m)
    lam_max = float(max(w[-1], 0.0))
    floor = -PSD_SLACK * lam_max
    if w[0] < floor:
        raise NotPSD(f"eigenvalue {w[0]:g} below PSD slack {floor:g}")
    roots = np.sqrt(np.clip(w, 0.0, None))
    # fixed-order contraction keeps the result byte-stable under any
    # surrounding thread pool
    scaled = v * roots
    out = np.einsum("ik,jk->ij", scaled, v)
    return (out + out.T) / 2.0


def quadratic_form_2x2(vec, sigma) -> float:
    """Evaluate ``v^T Sigma^{-1} v`` for a symmetric 2x2 matrix.

    Inverts through the explicit adjugate; raises SingularCovariance when
    |det| falls at or below ``SINGULAR_DET_RTOL * max(s11*s22, 1)``.
    """
    v = np.asarray(vec, dtype=np.float64)
    s = np.asarray(sigma, dtype=np.float64)
    if v.shape != (2,) or s.shape != (2, 2):
        raise NonSquareError(f"expected a 2-vector and 2x2 matrix, got {v.shape} and {s.shape}")
    s11, s12 = float(s[0, 0]), float(s[0, 1])
    s21, s22 = float(s[1, 0]), float(s[1, 1])
    det = s11 * s22 - s12 * s21
    if abs(det) <= SINGULAR_DET_RTOL * max(s11 * s22, 1.0):
        raise SingularCovariance(f"covariance determinant {det:g} is numerically singular", determinant=det)
    x = (s22 * v[0] - s12 * v[1]) / det
    y = (s11 * v[1] - s21 * v[0]) / det
    return float(v[0] * x + v[1] * y)
