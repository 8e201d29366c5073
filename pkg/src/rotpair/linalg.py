"""Small dense linear-algebra helpers used by every other module.

Everything operates on plain numpy arrays.  The matrices involved are
tiny (ambient dimension rarely above 12), so all routines favor clarity
and robustness over speed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotSymmetric


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds used throughout the package.

    ``residual_tol`` bounds equation residuals, ``angle_tol`` compares
    angles in radians, ``rank_tol`` drives rank decisions relative to
    the largest singular value.
    """

    residual_tol: float = 1e-9
    angle_tol: float = 1e-7
    rank_tol: float = 1e-9

    def __post_init__(self):
        if min(self.residual_tol, self.angle_tol, self.rank_tol) <= 0:
            raise ValueError("tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


def max_abs(a) -> float:
    """Entrywise max-magnitude norm; 0.0 for empty arrays."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a)))


def _to_columns(vectors):
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        return vectors
    cols = [np.asarray(v).reshape(-1) for v in vectors]
    if not cols:
        raise DimensionMismatch("need at least one vector")
    dims = {c.shape[0] for c in cols}
    if len(dims) != 1:
        raise DimensionMismatch(f"vectors have mixed dimensions {sorted(dims)}")
    return np.column_stack(cols)


def orthonormalize(vectors, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) for the span of the given vectors.

    Accepts a sequence of 1-d vectors or a 2-d array of columns, real or
    complex.  Linearly dependent directions are dropped.  An all-zero
    input yields a matrix with zero columns.
    """
    X = _to_columns(vectors)
    if X.shape[1] == 0:
        return X
    u, s, _ = np.linalg.svd(X, full_matrices=False)
    # Absolute floor on top of the relative cut: inputs here are always
    # unit-scale, and a stack of pure roundoff noise must collapse to
    # rank 0 rather than keep every column.
    if s.size == 0 or s[0] <= tol.rank_tol:
        return X[:, :0]
    r = int(np.sum(s > tol.rank_tol * s[0]))
    return u[:, :r]


def symmetric_eigen(S, tol: Tolerance = DEFAULT_TOL):
    """Eigendecomposition of a real symmetric matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues sorted in
    descending order and eigenvectors as matching orthonormal columns.

    Raises
    ------
    NotSymmetric
        If ``S`` deviates from its transpose beyond ``residual_tol``.
    """
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {S.shape}")
    asym = max_abs(S - S.T)
    if asym > tol.residual_tol:
        raise NotSymmetric(f"asymmetry {asym:.3e} exceeds {tol.residual_tol:.3e}")
    w, V = np.linalg.eigh((S + S.T) / 2.0)
    return w[::-1].copy(), np.ascontiguousarray(V[:, ::-1])


def subspace_meet(basis_u, basis_w, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the intersection of two subspaces.

    Both arguments must be orthonormal column bases over the same
    ambient space (real or complex).  The intersection is read off the
    nullspace of the stacked matrix ``[U | -W]``: a nullspace vector
    ``(x, y)`` has ``U x = W y``, which lies in both spans.  Returns a
    matrix with zero columns when the intersection is trivial.
    """
    U = np.asarray(basis_u)
    W = np.asarray(basis_w)
    if U.ndim != 2 or W.ndim != 2 or U.shape[0] != W.shape[0]:
        raise DimensionMismatch(
            f"ambient dimensions differ: {U.shape} vs {W.shape}"
        )
    if U.shape[1] == 0 or W.shape[1] == 0:
        return U[:, :0]
    stacked = np.hstack([U, -W])
    _, s, vh = np.linalg.svd(stacked, full_matrices=True)
    cols = stacked.shape[1]
    cutoff = tol.rank_tol * (s[0] if s.size else 1.0)
    null_vecs = []
    for i in range(cols):
        sv = s[i] if i < s.size else 0.0
        if sv <= cutoff:
            null_vecs.append(vh[i].conj())
    if not null_vecs:
        return U[:, :0]
    xs = np.column_stack([v[: U.shape[1]] for v in null_vecs])
    return orthonormalize(U @ xs, tol)


def orthonormal_complement(basis, dim: int | None = None,
                           tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of ``span(basis)``.

    ``dim`` fixes the ambient dimension when ``basis`` has zero columns;
    otherwise it is read off the basis itself.
    """
    B = np.asarray(basis)
    if B.ndim != 2:
        raise DimensionMismatch("expected a 2-d array of columns")
    n = B.shape[0] if B.shape[0] else (dim or 0)
    if B.shape[1] == 0:
        return np.eye(n, dtype=B.dtype)
    u, s, _ = np.linalg.svd(B, full_matrices=True)
    if s.size == 0 or s[0] <= tol.rank_tol:
        r = 0
    else:
        r = int(np.sum(s > tol.rank_tol * s[0]))
    return u[:, r:]
