"""Complexified eigenplanes of a rotation pair and the antilinear operator.

A proper rotation, complexified, splits C^n into two conjugate
eigenplanes.  For a pair (d, e) this gives planes A, B from d and C, D
from e.  When A meets neither C nor D, projecting C into A and B and
conjugating back defines a bijective antilinear operator on A whose
square is an ordinary linear map; its spectrum decides whether the pair
admits a small invariant subspace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    IntersectionNonTrivial,
    NotProper,
    NumericalFailure,
    SingularProjection,
)
from .linalg import DEFAULT_TOL, Tolerance, max_abs, subspace_meet
from .orthogonal import Rotation, RotationKind, orthogonal_normal_form


@dataclass(frozen=True)
class EigenplaneBases:
    """Orthonormal column bases of the four eigenplanes in C^n.

    A and B are the conjugate eigenplanes of the first rotation, C and D
    those of the second; ``B = conj(A)`` and ``D = conj(C)`` entrywise.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray


@dataclass(frozen=True)
class AntilinearOp:
    """Conjugate-linear operator on an eigenplane, in coordinates.

    Acts on A-coordinate vectors by ``x -> M @ conj(x)``.  ``basis_a``
    maps coordinates back to the ambient space.
    """

    M: np.ndarray
    basis_a: np.ndarray

    @property
    def k(self) -> int:
        return self.M.shape[0]

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.M @ np.conj(x)


def _plane_of(rotation: Rotation, tol: Tolerance) -> np.ndarray:
    """Eigenplane basis for eigenvalue exp(i*angle) of a proper rotation.

    Each 2x2 block (u, w) of the block form contributes the column
    (u - i w)/sqrt(2); the sign is fixed by the block action
    M u = cos(a) u + sin(a) w, which makes u - i w an exp(i a)
    eigenvector of the complexified matrix.
    """
    nf = orthogonal_normal_form(rotation.matrix, tol)
    cols = []
    for j in range(len(nf.angles)):
        u = nf.basis[:, 2 * j]
        w = nf.basis[:, 2 * j + 1]
        cols.append((u - 1j * w) / math.sqrt(2.0))
    return np.column_stack(cols)


def eigenplanes(d: Rotation, e: Rotation,
                tol: Tolerance = DEFAULT_TOL) -> EigenplaneBases:
    """Eigenplane bases A, B (from ``d``) and C, D (from ``e``).

    Both rotations must be proper and act on the same even-dimensional
    space.  The returned bases are orthonormal, with ``B = conj(A)`` and
    ``D = conj(C)``.
    """
    for r in (d, e):
        if r.kind is not RotationKind.PROPER:
            raise NotProper(f"angle {r.angle} is not strictly inside (0, pi)")
    if d.dim != e.dim:
        raise DimensionMismatch(f"ambient dimensions differ: {d.dim} vs {e.dim}")
    A = _plane_of(d, tol)
    C = _plane_of(e, tol)
    for plane, rot in ((A, d), (C, e)):
        resid = max_abs(rot.matrix @ plane - np.exp(1j * rot.angle) * plane)
        if resid > 10 * tol.residual_tol:
            raise NumericalFailure(f"eigenplane residual {resid:.3e}")
    return EigenplaneBases(A=A, B=np.conj(A), C=C, D=np.conj(C))


def build_T(planes: EigenplaneBases, tol: Tolerance = DEFAULT_TOL) -> AntilinearOp:
    """Antilinear operator on A obtained by factoring C through A and B.

    In coordinates the operator is ``x -> M conj(x)`` with
    ``M = conj(G_BC @ inv(G_AC))`` where ``G_AC = A^H C`` and
    ``G_BC = B^H C`` are the Gram matrices of the restricted
    projections.

    Raises
    ------
    IntersectionNonTrivial
        If A meets C or D, including the near-singular case where a
        restricted projection has a relative singular value below
        ``rank_tol``; the exception carries a witness vector.
    SingularProjection
        If the resulting M is numerically singular even though the
        intersections look trivial.
    """
    A, B, C, D = planes.A, planes.B, planes.C, planes.D
    meet_ac = subspace_meet(A, C, tol)
    if meet_ac.shape[1]:
        raise IntersectionNonTrivial(
            "A meets C nontrivially", witness=meet_ac[:, 0], which="AC"
        )
    meet_ad = subspace_meet(A, D, tol)
    if meet_ad.shape[1]:
        raise IntersectionNonTrivial(
            "A meets D nontrivially", witness=meet_ad[:, 0], which="AD"
        )

    G_AC = A.conj().T @ C
    G_BC = B.conj().T @ C
    # A direction of C orthogonal to A lies in B (A and B fill C^n), so a
    # vanishing singular value of G_AC means C nearly meets B, i.e. D
    # nearly meets A after conjugating; likewise G_BC signals C meeting A.
    for G, which in ((G_AC, "AD"), (G_BC, "AC")):
        u, s, vh = np.linalg.svd(G)
        if s[0] <= tol.rank_tol or s[-1] <= tol.rank_tol * s[0]:
            wit = C @ vh[-1].conj()
            if which == "AD":
                wit = np.conj(wit)
            raise IntersectionNonTrivial(
                f"restricted projection nearly singular (sigma_min/sigma_max "
                f"= {s[-1] / s[0]:.3e})",
                witness=wit / np.linalg.norm(wit),
                which=which,
            )
    M = np.conj(G_BC @ np.linalg.inv(G_AC))
    sing = np.linalg.svd(M, compute_uv=False)
    if sing[-1] <= tol.rank_tol * sing[0]:
        raise SingularProjection(
            f"operator matrix singular, condition {sing[0] / sing[-1]:.3e}"
        )
    return AntilinearOp(M=M, basis_a=A)


def t_squared(T: AntilinearOp) -> np.ndarray:
    """Coordinate matrix of the (linear) square of the antilinear operator."""
    return T.M @ np.conj(T.M)


def antilinear_invariant_line(T: AntilinearOp,
                              tol: Tolerance = DEFAULT_TOL):
    """A unit vector spanning an invariant line of ``T``, if one exists.

    The square N of the operator is linear; an invariant line exists
    exactly when N has a real eigenvalue lambda >= 0.  Eigenvalues count
    as real when ``|Im| <= rank_tol * |lambda|`` and as nonnegative when
    ``Re >= -rank_tol * ||N||``.  Given N u = lambda u, either T u is
    already parallel to u, or ``T u + sqrt(lambda) u`` is fixed up to
    the factor sqrt(lambda).  Returns None when no such eigenvalue
    exists.
    """
    N = t_squared(T)
    evals, evecs = np.linalg.eig(N)
    norm_n = float(np.linalg.norm(N, 2))
    best = None
    for i, lam in enumerate(evals):
        if abs(lam.imag) > tol.rank_tol * abs(lam):
            continue
        if lam.real < -tol.rank_tol * norm_n:
            continue
        if best is None or lam.real > evals[best].real:
            best = i
    if best is None:
        return None
    lam = max(float(evals[best].real), 0.0)
    if lam == 0.0:
        # T is bijective, so its square cannot vanish on a line.
        raise NumericalFailure("zero eigenvalue for a bijective operator")
    u = evecs[:, best]
    u = u / np.linalg.norm(u)
    Tu = T.apply(u)
    s = np.linalg.svd(np.column_stack([u, Tu]), compute_uv=False)
    if s.size < 2 or s[1] <= tol.rank_tol * s[0]:
        v = u
    else:
        v = Tu + math.sqrt(lam) * u
        v = v / np.linalg.norm(v)
    mu = complex(np.vdot(v, T.apply(v)))
    resid = float(np.linalg.norm(T.apply(v) - mu * v))
    if resid > 10 * tol.residual_tol:
        raise NumericalFailure(f"invariant-line residual {resid:.3e}")
    return v
