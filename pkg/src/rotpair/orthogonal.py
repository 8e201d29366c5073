"""Structure of a single orthogonal operator.

An orthogonal matrix is orthogonally similar to a direct sum of 2x2
rotation blocks, an identity block and a negated identity block.  This
module computes that block form, certifies matrices that rotate every
vector by one fixed angle, and converts between such a rotation and its
quarter-turn part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    BadAngle,
    BadDimension,
    NotARotation,
    NotOrthogonal,
    NotProper,
    NumericalFailure,
)
from .linalg import DEFAULT_TOL, Tolerance, max_abs, orthonormalize, symmetric_eigen


def rot2(alpha: float) -> np.ndarray:
    """The 2x2 rotation matrix by ``alpha`` radians (counterclockwise)."""
    c, s = math.cos(alpha), math.sin(alpha)
    return np.array([[c, -s], [s, c]])


class RotationKind(Enum):
    IDENTITY = "identity"
    NEG_IDENTITY = "neg_identity"
    PROPER = "proper"


@dataclass(frozen=True)
class NormalForm:
    """Block form of an orthogonal matrix.

    ``angles`` holds one value per 2x2 rotation block, sorted ascending,
    each strictly inside (0, pi).  ``fix_dim`` and ``neg_dim`` count the
    +1 and -1 one-dimensional blocks.  ``basis`` has orthonormal columns
    ordered to match: rotation-block pairs first, then fixed vectors,
    then negated vectors, so that ``basis.T @ M @ basis`` equals
    ``block_matrix()``.
    """

    angles: tuple
    fix_dim: int
    neg_dim: int
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def block_matrix(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim))
        pos = 0
        for a in self.angles:
            out[pos:pos + 2, pos:pos + 2] = rot2(a)
            pos += 2
        for _ in range(self.fix_dim):
            out[pos, pos] = 1.0
            pos += 1
        for _ in range(self.neg_dim):
            out[pos, pos] = -1.0
            pos += 1
        return out


@dataclass(frozen=True)
class Rotation:
    """An orthogonal matrix that turns every vector by one fixed angle.

    ``angle`` is in [0, pi]; 0 and pi mean the identity and its
    negative.  Instances are normally produced by :func:`as_rotation`,
    which verifies the defining property; building one directly skips
    that verification.
    """

    matrix: np.ndarray
    angle: float

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def kind(self) -> RotationKind:
        if self.angle == 0.0:
            return RotationKind.IDENTITY
        if self.angle == math.pi:
            return RotationKind.NEG_IDENTITY
        return RotationKind.PROPER


def _check_orthogonal(M: np.ndarray, tol: Tolerance) -> None:
    resid = max_abs(M.T @ M - np.eye(M.shape[0]))
    if resid > tol.residual_tol:
        raise NotOrthogonal(
            f"orthogonality residual {resid:.3e} exceeds {tol.residual_tol:.3e}"
        )


def _cluster_angles(angles: np.ndarray, gap: float):
    """Single-linkage clustering of sorted angle values at threshold ``gap``.

    Returns a list of index arrays into the (ascending) sort order.
    """
    order = np.argsort(angles, kind="stable")
    clusters = [[order[0]]]
    for idx in order[1:]:
        if angles[idx] - angles[clusters[-1][-1]] <= gap:
            clusters[-1].append(idx)
        else:
            clusters.append([idx])
    return [np.array(c) for c in clusters]


def orthogonal_normal_form(M, tol: Tolerance = DEFAULT_TOL) -> NormalForm:
    """Block form of an orthogonal matrix.

    The symmetric part ``(M + M.T)/2`` commutes with ``M``, and on each
    of its eigenspaces ``M`` acts as a rotation with cosine equal to the
    eigenvalue.  Eigenvalues are clustered in angle space at
    ``angle_tol``.  Clusters next to 0 or pi are tried as fixed or
    negated space first, certified by a direct residual check; a failed
    certificate falls back to rotation-block extraction, so near-boundary
    angles still come out as blocks.  Every other cluster is carved into
    2x2 rotation blocks directly.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise BadDimension(f"expected a square matrix, got shape {M.shape}")
    n = M.shape[0]
    if n == 0:
        raise BadDimension("zero-dimensional space")
    _check_orthogonal(M, tol)

    evals, evecs = symmetric_eigen((M + M.T) / 2.0, tol)
    thetas = np.arccos(np.clip(evals, -1.0, 1.0))

    # arccos amplifies eigenvalue noise of order n*eps into angle noise
    # of order sqrt(n*eps) next to the endpoints, so the snap-to-scalar
    # window must widen to that floor; snaps are certified below and a
    # failed certificate falls back to block extraction.
    snap = max(tol.angle_tol, math.sqrt(1024.0 * n * np.finfo(float).eps))

    blocks = []   # (angle, u, w)
    fixed = []
    negated = []
    for cluster in _cluster_angles(thetas, tol.angle_tol):
        mean_angle = float(np.mean(thetas[cluster]))
        E = evecs[:, cluster]
        if mean_angle < snap:
            resid = max_abs(M @ E - E)
            if resid <= 10 * tol.residual_tol:
                fixed.extend(E.T)
                continue
            if mean_angle < tol.angle_tol:
                raise NumericalFailure(
                    f"fixed-space residual {resid:.3e}; matrix does not act "
                    "as the identity on its cosine-1 eigenspace"
                )
        elif mean_angle > math.pi - snap:
            resid = max_abs(M @ E + E)
            if resid <= 10 * tol.residual_tol:
                negated.extend(E.T)
                continue
            if mean_angle > math.pi - tol.angle_tol:
                raise NumericalFailure(
                    f"negated-space residual {resid:.3e}; matrix does not act "
                    "as -identity on its cosine -1 eigenspace"
                )
        if E.shape[1] % 2:
            raise NumericalFailure(
                f"odd-dimensional eigenspace ({E.shape[1]}) at angle "
                f"{mean_angle:.6f}"
            )
        rem = E
        while rem.shape[1] > 0:
            u = rem[:, 0]
            Mu = M @ u
            c = float(u @ Mu)
            w_raw = Mu - c * u
            s = float(np.linalg.norm(w_raw))
            if s <= 1e-9:
                raise NumericalFailure(
                    f"block angle too close to 0 or pi to extract (sine {s:.3e})"
                )
            w = w_raw / s
            blocks.append((math.atan2(s, c), u, w))
            proj = rem - np.outer(u, u @ rem) - np.outer(w, w @ rem)
            rem = orthonormalize(proj, tol)
            if rem.shape[1] not in (0, proj.shape[1] - 2):
                raise NumericalFailure(
                    "eigenspace did not shrink by 2 when removing a "
                    "rotation block"
                )

    blocks.sort(key=lambda t: t[0])
    cols = []
    for _, u, w in blocks:
        cols.extend([u, w])
    cols.extend(fixed)
    cols.extend(negated)
    basis = np.column_stack(cols)
    nf = NormalForm(
        angles=tuple(a for a, _, _ in blocks),
        fix_dim=len(fixed),
        neg_dim=len(negated),
        basis=basis,
    )
    resid = max_abs(basis.T @ M @ basis - nf.block_matrix())
    if resid > 10 * tol.residual_tol:
        raise NumericalFailure(f"normal-form residual {resid:.3e}")
    return nf


def as_rotation(M, tol: Tolerance = DEFAULT_TOL) -> Rotation:
    """Certify that ``M`` turns every vector by one fixed angle.

    Succeeds when the block form is all rotation blocks at one common
    angle, or purely the identity, or purely its negative.  The returned
    angle is 0 for the identity, pi for the negative, and otherwise the
    mean of the per-block angles (which agree within ``angle_tol``).
    """
    M = np.asarray(M, dtype=float)
    nf = orthogonal_normal_form(M, tol)
    if not nf.angles:
        if nf.fix_dim and nf.neg_dim:
            raise NotARotation(
                f"mixed +1 and -1 blocks (fix={nf.fix_dim}, neg={nf.neg_dim})"
            )
        return Rotation(matrix=M, angle=0.0 if nf.fix_dim else math.pi)
    if nf.fix_dim or nf.neg_dim:
        raise NotARotation(
            "rotation blocks mixed with +-1 blocks "
            f"(fix={nf.fix_dim}, neg={nf.neg_dim})"
        )
    spread = nf.angles[-1] - nf.angles[0]
    if spread > tol.angle_tol:
        raise NotARotation(
            f"distinct block angles, spread {spread:.3e} exceeds "
            f"{tol.angle_tol:.3e}"
        )
    return Rotation(matrix=M, angle=float(np.mean(nf.angles)))


def rho(d: Rotation, tol: Tolerance = DEFAULT_TOL) -> Rotation:
    """Quarter-turn part of a proper rotation.

    For a rotation with matrix M and angle a in (0, pi), the matrix
    ``(M - cos(a) I) / sin(a)`` is again a rotation, with angle pi/2.
    """
    if d.kind is not RotationKind.PROPER:
        raise NotProper(f"angle {d.angle} is not strictly inside (0, pi)")
    S = (d.matrix - math.cos(d.angle) * np.eye(d.dim)) / math.sin(d.angle)
    out = as_rotation(S, tol)
    if abs(out.angle - math.pi / 2) > tol.angle_tol:
        raise NumericalFailure(
            f"quarter-turn angle came out as {out.angle!r}, not pi/2"
        )
    return out


def unrho(s: Rotation, alpha: float, tol: Tolerance = DEFAULT_TOL) -> Rotation:
    """Proper rotation with angle ``alpha`` whose quarter-turn part is ``s``.

    Inverse of :func:`rho`: returns ``cos(alpha) I + sin(alpha) S``.
    ``alpha`` must lie strictly inside (0, pi) and ``s`` must have angle
    pi/2 within ``angle_tol``.
    """
    if abs(s.angle - math.pi / 2) > tol.angle_tol:
        raise BadAngle(f"input angle {s.angle!r} is not pi/2")
    if not (0.0 < alpha < math.pi):
        raise BadAngle(f"alpha {alpha!r} outside (0, pi)")
    M = math.cos(alpha) * np.eye(s.dim) + math.sin(alpha) * s.matrix
    return as_rotation(M, tol)
