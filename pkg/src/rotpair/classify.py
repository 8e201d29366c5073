"""Canonical forms of irreducible blocks and the isomorphism test.

Every irreducible block of a rotation pair falls into one of five
families, determined by its dimension, the two angles, and either a
relative orientation sign or a twist angle theta:

  Dim1(r, s)                  pair (r, s) of signs on a line
  Dim2LeftScalar(r, beta)     (r I, R_beta) on a plane
  Dim2RightScalar(alpha, s)   (R_alpha, s I) on a plane
  Dim2Proper(alpha, beta, r)  (R_alpha, R_{r beta}) on a plane
  Dim4(alpha, beta, theta)    (R_alpha + R_alpha, twisted R_beta pair)

Two pairs are isomorphic exactly when their multisets of canonical
forms agree, so classification doubles as the isomorphism test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from .decompose import InvariantBlock, decompose, is_irreducible
from .errors import (
    BadAngle,
    BadParameter,
    NotARotation,
    NotConstant,
    NotIntertwiner,
    NotIrreducible,
    NotProper,
    NumericalFailure,
    ScaleNotConstant,
)
from .linalg import DEFAULT_TOL, Tolerance, max_abs
from .orthogonal import Rotation, RotationKind, as_rotation, rho, rot2


@dataclass(frozen=True)
class Dim1:
    r: int
    s: int
    dim = 1


@dataclass(frozen=True)
class Dim2LeftScalar:
    r: int
    beta: float
    dim = 2


@dataclass(frozen=True)
class Dim2RightScalar:
    alpha: float
    s: int
    dim = 2


@dataclass(frozen=True)
class Dim2Proper:
    alpha: float
    beta: float
    r: int
    dim = 2


@dataclass(frozen=True)
class Dim4:
    alpha: float
    beta: float
    theta: float
    dim = 4


_FAMILY_ORDER = (Dim1, Dim2LeftScalar, Dim2RightScalar, Dim2Proper, Dim4)


def _sort_key(form):
    vals = {"r": 0.0, "s": 0.0, "alpha": 0.0, "beta": 0.0, "theta": 0.0}
    for name in vals:
        if hasattr(form, name):
            vals[name] = float(getattr(form, name))
    return (
        _FAMILY_ORDER.index(type(form)),
        vals["r"], vals["s"], vals["alpha"], vals["beta"], vals["theta"],
    )


@dataclass(frozen=True)
class ClassLabel:
    """Multiset of canonical forms, stored sorted for determinism."""

    forms: tuple

    @property
    def total_dim(self) -> int:
        return sum(f.dim for f in self.forms)


def _check_sign(value, name: str) -> int:
    if value not in (-1, 1):
        raise BadParameter(f"{name} must be +1 or -1, got {value!r}")
    return int(value)


def _check_angle(value, name: str) -> float:
    value = float(value)
    if not (0.0 < value < math.pi):
        raise BadParameter(f"{name} must lie strictly inside (0, pi), got {value!r}")
    return value


def t_theta(theta: float) -> np.ndarray:
    """Orthogonal 4x4 twist: identity on the outer axes, R_theta inside."""
    out = np.eye(4)
    out[1:3, 1:3] = rot2(theta)
    return out


def orientation_sign(d, e, tol: Tolerance = DEFAULT_TOL) -> int:
    """Relative orientation of two proper rotations of the plane.

    +1 when both turn the same way, -1 otherwise; read off the signs of
    the sine entries.  Conjugating both matrices by a reflection flips
    both signs, so the product is basis-independent.
    """
    signs = []
    for M in (d, e):
        M = np.asarray(M, dtype=float)
        r = as_rotation(M, tol)
        if r.dim != 2:
            raise BadParameter(f"expected 2x2 matrices, got {M.shape}")
        if r.kind is not RotationKind.PROPER:
            raise NotProper(f"angle {r.angle} is not strictly inside (0, pi)")
        signs.append(1.0 if M[1, 0] > 0 else -1.0)
    return int(signs[0] * signs[1])


# Unit vectors probing a quadratic form on R^4: the coordinate vectors
# pin the diagonal, the pairwise averages pin the off-diagonal entries,
# so equal values on all ten certify the form is a multiple of the
# identity.
def _probe_vectors(n: int) -> np.ndarray:
    eye = np.eye(n)
    cols = [eye[:, i] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            cols.append((eye[:, i] + eye[:, j]) / math.sqrt(2.0))
    return np.column_stack(cols)


def theta_invariant(s: Rotation, t: Rotation,
                    tol: Tolerance = DEFAULT_TOL) -> float:
    """Twist angle between two quarter-turns of R^4.

    The inner product of s(v) and t(v) is independent of the unit
    vector v whenever the pair has no mixed-orientation split; its
    arccos is the twist angle.  Checked on the ten probe vectors, which
    determine the underlying quadratic form completely.
    """
    for r in (s, t):
        if r.dim != 4:
            raise BadParameter(f"expected rotations of R^4, got dimension {r.dim}")
        if abs(r.angle - math.pi / 2) > tol.angle_tol:
            raise BadAngle(f"angle {r.angle!r} is not pi/2")
    probes = _probe_vectors(4)
    values = np.einsum("ij,ij->j", s.matrix @ probes, t.matrix @ probes)
    spread = float(values.max() - values.min())
    if spread > 10 * tol.residual_tol:
        raise NotConstant(
            f"inner product varies by {spread:.3e} over the probe vectors"
        )
    return math.acos(min(1.0, max(-1.0, float(values.mean()))))


def _proper_angle_of(M: np.ndarray, tol: Tolerance):
    """(angle, rotation) via certification, or (sign, None) for scalars."""
    r = as_rotation(M, tol)
    if r.kind is RotationKind.IDENTITY:
        return 1, None
    if r.kind is RotationKind.NEG_IDENTITY:
        return -1, None
    return r.angle, r


def classify_block(block: InvariantBlock, tol: Tolerance = DEFAULT_TOL):
    """Canonical form of an irreducible block."""
    try:
        if block.dim == 1:
            r = 1 if block.d_restricted[0, 0] > 0 else -1
            s = 1 if block.e_restricted[0, 0] > 0 else -1
            return Dim1(r=r, s=s)
        left, d_rot = _proper_angle_of(block.d_restricted, tol)
        right, e_rot = _proper_angle_of(block.e_restricted, tol)
        if block.dim == 2:
            if d_rot is None and e_rot is None:
                raise NotIrreducible("both restrictions are scalar on a plane")
            if d_rot is None:
                return Dim2LeftScalar(r=left, beta=right)
            if e_rot is None:
                return Dim2RightScalar(alpha=left, s=right)
            r = orientation_sign(block.d_restricted, block.e_restricted, tol)
            return Dim2Proper(alpha=left, beta=right, r=r)
        if block.dim != 4:
            raise NotIrreducible(f"blocks of dimension {block.dim} do not occur")
        if d_rot is None or e_rot is None:
            raise NotIrreducible("scalar restriction on a 4-dimensional block")
        theta = theta_invariant(rho(d_rot, tol), rho(e_rot, tol), tol)
        if theta < tol.angle_tol or theta > math.pi - tol.angle_tol:
            raise NotIrreducible(
                f"twist angle {theta!r} at the boundary; the block splits"
            )
        return Dim4(alpha=left, beta=right, theta=theta)
    except (NotARotation, NotProper, NotConstant) as exc:
        raise NotIrreducible(str(exc)) from exc


def realize(form) -> tuple:
    """Matrix pair realizing a canonical form, in its standard basis."""
    if isinstance(form, Dim1):
        r = _check_sign(form.r, "r")
        s = _check_sign(form.s, "s")
        return np.array([[float(r)]]), np.array([[float(s)]])
    if isinstance(form, Dim2LeftScalar):
        r = _check_sign(form.r, "r")
        beta = _check_angle(form.beta, "beta")
        return r * np.eye(2), rot2(beta)
    if isinstance(form, Dim2RightScalar):
        alpha = _check_angle(form.alpha, "alpha")
        s = _check_sign(form.s, "s")
        return rot2(alpha), s * np.eye(2)
    if isinstance(form, Dim2Proper):
        alpha = _check_angle(form.alpha, "alpha")
        beta = _check_angle(form.beta, "beta")
        r = _check_sign(form.r, "r")
        return rot2(alpha), rot2(r * beta)
    if isinstance(form, Dim4):
        alpha = _check_angle(form.alpha, "alpha")
        beta = _check_angle(form.beta, "beta")
        theta = _check_angle(form.theta, "theta")
        left = block_diag(rot2(alpha), rot2(alpha))
        twist = t_theta(theta)
        right = twist @ block_diag(rot2(beta), rot2(beta)) @ twist.T
        return left, right
    raise BadParameter(f"unknown canonical form {form!r}")


def classify(d: Rotation, e: Rotation, tol: Tolerance = DEFAULT_TOL) -> ClassLabel:
    """Canonical label of a rotation pair: forms of its irreducible blocks."""
    dec = decompose(d, e, tol)
    forms = [classify_block(b, tol) for b in dec.blocks]
    return ClassLabel(forms=tuple(sorted(forms, key=_sort_key)))


def _forms_equal(f1, f2, angle_tol: float) -> bool:
    if type(f1) is not type(f2):
        return False
    for name in ("r", "s"):
        if hasattr(f1, name) and getattr(f1, name) != getattr(f2, name):
            return False
    for name in ("alpha", "beta", "theta"):
        if hasattr(f1, name):
            if abs(getattr(f1, name) - getattr(f2, name)) > angle_tol:
                return False
    return True


def _match_multisets(forms1, forms2, angle_tol: float) -> bool:
    """Backtracking multiset match, tolerant in the angle parameters.

    Angle comparison at a tolerance is not transitive, so near-ties can
    defeat a single sorted pass; sizes here are tiny, so backtracking
    is free.
    """
    if len(forms1) != len(forms2):
        return False
    if not forms1:
        return True
    head, rest = forms1[0], forms1[1:]
    for i, cand in enumerate(forms2):
        if _forms_equal(head, cand, angle_tol):
            if _match_multisets(rest, forms2[:i] + forms2[i + 1:], angle_tol):
                return True
    return False


def labels_match(label1: ClassLabel, label2: ClassLabel,
                 tol: Tolerance = DEFAULT_TOL) -> bool:
    """Multiset equality of labels, angles compared within ``angle_tol``."""
    return _match_multisets(list(label1.forms), list(label2.forms), tol.angle_tol)


def isomorphic(pair1, pair2, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether two rotation pairs have the same canonical label.

    Each argument is a (Rotation, Rotation) tuple.  The spaces need not
    have equal dimension; unequal dimensions simply compare unequal.
    """
    label1 = classify(pair1[0], pair1[1], tol)
    label2 = classify(pair2[0], pair2[1], tol)
    return labels_match(label1, label2, tol)


def orthogonalize_intertwiner(phi, pair1, pair2,
                              tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Strip the scale from an invertible intertwiner of irreducible pairs.

    An invertible phi with ``phi d = d' phi`` and ``phi e = e' phi``
    between irreducible pairs scales every vector by one factor; the
    returned ``phi / mu`` is orthogonal and intertwines the same way.
    """
    phi = np.asarray(phi, dtype=float)
    d, e = pair1
    d2, e2 = pair2
    n = d.dim
    if phi.shape != (n, n) or d2.dim != n:
        raise NotIntertwiner(f"shape mismatch: phi {phi.shape} on R^{n}")
    for p in (pair1, pair2):
        trivial = InvariantBlock(
            basis=np.eye(n),
            d_restricted=p[0].matrix,
            e_restricted=p[1].matrix,
        )
        if n not in (1, 2, 4) or not is_irreducible(trivial, tol):
            raise NotIrreducible("pair is reducible")
    r1 = max_abs(phi @ d.matrix - d2.matrix @ phi)
    r2 = max_abs(phi @ e.matrix - e2.matrix @ phi)
    if max(r1, r2) > tol.residual_tol * max(1.0, max_abs(phi)):
        raise NotIntertwiner(
            f"intertwining residuals ({r1:.3e}, {r2:.3e}) too large"
        )
    sing = np.linalg.svd(phi, compute_uv=False)
    if sing[-1] <= tol.rank_tol * sing[0]:
        raise NotIntertwiner("map is singular")
    probes = _probe_vectors(n)
    norms = np.linalg.norm(phi @ probes, axis=0)
    spread = float(norms.max() - norms.min())
    if spread > 10 * tol.residual_tol:
        raise ScaleNotConstant(
            f"stretch varies by {spread:.3e} over the probe vectors"
        )
    out = phi / float(norms.mean())
    resid = max_abs(out.T @ out - np.eye(n))
    if resid > 10 * tol.residual_tol:
        raise NumericalFailure(f"result orthogonality residual {resid:.3e}")
    return out
