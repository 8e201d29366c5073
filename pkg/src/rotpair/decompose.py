"""Decomposition of a rotation pair into invariant blocks.

Every pair of rotations on a Euclidean space splits into an orthogonal
direct sum of jointly invariant subspaces of dimension 1, 2 or 4.  The
search works through the complexified eigenplanes: an overlap between
the planes of the two rotations yields an invariant 2-plane directly,
and otherwise the antilinear operator on the first plane either has an
invariant line (again a 2-plane) or hands us a 4-dimensional block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .antilinear import (
    AntilinearOp,
    antilinear_invariant_line,
    build_T,
    eigenplanes,
    t_squared,
)
from .errors import (
    DegenerateLine,
    IntersectionNonTrivial,
    NotOrthogonalPair,
    NotProper,
    NumericalFailure,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    max_abs,
    orthonormal_complement,
    orthonormalize,
    subspace_meet,
)
from .orthogonal import Rotation, RotationKind, as_rotation, orthogonal_normal_form


@dataclass(frozen=True)
class InvariantBlock:
    """A jointly invariant subspace with the two restricted operators.

    ``basis`` has orthonormal columns (1, 2 or 4 of them) in ambient
    coordinates; ``d_restricted`` and ``e_restricted`` are the operators
    expressed in that basis.
    """

    basis: np.ndarray
    d_restricted: np.ndarray
    e_restricted: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True)
class InvariantDecomposition:
    blocks: tuple
    ambient_dim: int

    @property
    def dims(self) -> tuple:
        return tuple(b.dim for b in self.blocks)


def invariance_residual(basis: np.ndarray, d: Rotation, e: Rotation) -> float:
    """Worst residual of ``span(basis)`` being invariant under both."""
    out = 0.0
    for M in (d.matrix, e.matrix):
        image = M @ basis
        out = max(out, max_abs(image - basis @ (basis.T @ image)))
    return out


def real_plane_from_complex_line(v, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Real 2-plane cut out by a complex line and its conjugate.

    For v with v and conj(v) independent, the real points of
    ``span{v, conj(v)}`` form a 2-plane spanned by the real and
    imaginary parts of v; returns an orthonormal basis of it.
    """
    v = np.asarray(v, dtype=complex).reshape(-1)
    s = np.linalg.svd(np.column_stack([v, np.conj(v)]), compute_uv=False)
    if s[1] <= tol.rank_tol * s[0]:
        raise DegenerateLine(
            "vector is a phase times a real vector; no plane is determined"
        )
    plane = orthonormalize(np.column_stack([v.real, v.imag]), tol)
    if plane.shape[1] != 2:
        raise NumericalFailure("real and imaginary parts did not span a plane")
    return plane


def _restrict(basis: np.ndarray, d: Rotation, e: Rotation) -> InvariantBlock:
    return InvariantBlock(
        basis=basis,
        d_restricted=basis.T @ d.matrix @ basis,
        e_restricted=basis.T @ e.matrix @ basis,
    )


def _plane_or_operator(d: Rotation, e: Rotation, tol: Tolerance):
    """Either an invariant 2-plane of a proper pair, or the antilinear op.

    Returns ``("plane", basis)`` or ``("operator", T)``.  Tries the
    eigenplane intersections first; only when both are trivial does the
    antilinear operator exist, and an invariant line of it still yields
    a plane.
    """
    planes = eigenplanes(d, e, tol)
    for meet_with in (planes.C, planes.D):
        meet = subspace_meet(planes.A, meet_with, tol)
        if meet.shape[1]:
            return "plane", real_plane_from_complex_line(meet[:, 0], tol)
    try:
        T = build_T(planes, tol)
    except IntersectionNonTrivial as exc:
        # Borderline geometry: the meets tested trivial but a projection
        # is close enough to singular that a near-overlap witness exists.
        return "plane", real_plane_from_complex_line(exc.witness, tol)
    line = antilinear_invariant_line(T, tol)
    if line is not None:
        ambient = planes.A @ line
        return "plane", real_plane_from_complex_line(ambient, tol)
    return "operator", T


def two_plane_exists(d: Rotation, e: Rotation, tol: Tolerance = DEFAULT_TOL):
    """Whether the proper pair (d, e) leaves some 2-plane invariant.

    Returns ``(True, basis)`` with an orthonormal witness basis, or
    ``(False, None)``.  The witness is verified invariant under both
    rotations before being returned.
    """
    for r in (d, e):
        if r.kind is not RotationKind.PROPER:
            raise NotProper(f"angle {r.angle} is not strictly inside (0, pi)")
    kind, payload = _plane_or_operator(d, e, tol)
    if kind != "plane":
        return False, None
    resid = invariance_residual(payload, d, e)
    if resid > 10 * tol.residual_tol:
        raise NumericalFailure(f"witness plane residual {resid:.3e}")
    return True, payload


def _block_from_operator(T: AntilinearOp, d: Rotation, e: Rotation,
                         tol: Tolerance) -> InvariantBlock:
    """4-dimensional block from an eigenvector of the operator's square."""
    N = t_squared(T)
    evals, evecs = np.linalg.eig(N)
    order = sorted(
        range(len(evals)),
        key=lambda i: (-abs(evals[i]), evals[i].real, evals[i].imag),
    )
    u = evecs[:, order[0]]
    u = u / np.linalg.norm(u)
    v = T.apply(u)
    s = np.linalg.svd(np.column_stack([u, v]), compute_uv=False)
    if s[1] <= tol.rank_tol * s[0]:
        raise NumericalFailure(
            "operator eigenvector is parallel to its image; an invariant "
            "line should have been found instead"
        )
    u_amb = T.basis_a @ u
    v_amb = T.basis_a @ v
    basis = orthonormalize(
        np.column_stack([u_amb.real, u_amb.imag, v_amb.real, v_amb.imag]), tol
    )
    if basis.shape[1] != 4:
        raise NumericalFailure(
            f"candidate block spans {basis.shape[1]} dimensions, expected 4"
        )
    return _restrict(basis, d, e)


def find_block(d: Rotation, e: Rotation, tol: Tolerance = DEFAULT_TOL) -> InvariantBlock:
    """One jointly invariant block of dimension 1, 2 or 4.

    If either operator is the identity or its negative, the block comes
    from the other operator's block form.  Otherwise the pair is proper
    and the eigenplane machinery produces a 2-plane or a 4-block.
    """
    if d.dim != e.dim:
        raise NotOrthogonalPair(f"ambient dimensions differ: {d.dim} vs {e.dim}")
    n = d.dim
    d_proper = d.kind is RotationKind.PROPER
    e_proper = e.kind is RotationKind.PROPER
    if not (d_proper and e_proper):
        if not d_proper and not e_proper:
            basis = np.eye(n)[:, :1]
        else:
            other = d if d_proper else e
            nf = orthogonal_normal_form(other.matrix, tol)
            basis = nf.basis[:, :2]
        block = _restrict(basis, d, e)
    else:
        kind, payload = _plane_or_operator(d, e, tol)
        if kind == "plane":
            block = _restrict(payload, d, e)
        else:
            block = _block_from_operator(payload, d, e, tol)
    resid = invariance_residual(block.basis, d, e)
    if resid > 10 * tol.residual_tol:
        raise NumericalFailure(f"block invariance residual {resid:.3e}")
    return block


def _scalar_sign(M: np.ndarray, tol: Tolerance):
    """+1 or -1 when M is that multiple of the identity, else None."""
    n = M.shape[0]
    for sign in (1.0, -1.0):
        if max_abs(M - sign * np.eye(n)) <= 10 * tol.residual_tol:
            return sign
    return None


def is_irreducible(block: InvariantBlock, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether the block has no proper nonzero jointly invariant subspace.

    Dimension 1 blocks always are.  A 2-block is irreducible unless both
    restrictions are scalar.  A 4-block is irreducible when both
    restrictions are proper and no invariant 2-plane exists.
    """
    if block.dim == 1:
        return True
    sd = _scalar_sign(block.d_restricted, tol)
    se = _scalar_sign(block.e_restricted, tol)
    if block.dim == 2:
        return sd is None or se is None
    if sd is not None or se is not None:
        return False
    d_r = as_rotation(block.d_restricted, tol)
    e_r = as_rotation(block.e_restricted, tol)
    exists, _ = two_plane_exists(d_r, e_r, tol)
    return not exists


def _split_block(block: InvariantBlock, tol: Tolerance):
    """Split a reducible block into invariant halves.

    A reducible 2-block (both restrictions scalar) splits into its two
    basis lines.  A reducible 4-block splits along its witness plane and
    the orthogonal complement inside the block.
    """
    if block.dim == 2:
        return [block.basis[:, :1], block.basis[:, 1:]]
    sd = _scalar_sign(block.d_restricted, tol)
    se = _scalar_sign(block.e_restricted, tol)
    if sd is not None and se is not None:
        return [block.basis[:, i:i + 1] for i in range(4)]
    if sd is not None or se is not None:
        other = block.e_restricted if sd is not None else block.d_restricted
        nf = orthogonal_normal_form(other, tol)
        return [block.basis @ nf.basis[:, :2], block.basis @ nf.basis[:, 2:]]
    d_r = as_rotation(block.d_restricted, tol)
    e_r = as_rotation(block.e_restricted, tol)
    exists, plane = two_plane_exists(d_r, e_r, tol)
    if not exists:
        raise NumericalFailure("block reported reducible but no plane found")
    rest = orthonormal_complement(plane, tol=tol)
    return [block.basis @ plane, block.basis @ rest]


def _order_key(block: InvariantBlock):
    """Deterministic sort key: dimension, both angles, then orientation data."""
    k = block.dim
    d_r, e_r = block.d_restricted, block.e_restricted
    ang_d = math.acos(min(1.0, max(-1.0, float(np.trace(d_r)) / k)))
    ang_e = math.acos(min(1.0, max(-1.0, float(np.trace(e_r)) / k)))
    tail = 0.0
    if k == 2:
        prod = d_r[1, 0] * e_r[1, 0]
        if abs(prod) > 1e-12:
            tail = math.copysign(1.0, prod)
    elif k == 4:
        sin_d, sin_e = math.sin(ang_d), math.sin(ang_e)
        if min(sin_d, sin_e) > 1e-12:
            sigma = (d_r - math.cos(ang_d) * np.eye(4)) / sin_d
            tau = (e_r - math.cos(ang_e) * np.eye(4)) / sin_e
            g = sigma.T @ tau
            tail = math.acos(min(1.0, max(-1.0, float(np.trace(g)) / 4)))
    return (k, ang_d, ang_e, tail)


def decompose(d: Rotation, e: Rotation,
              tol: Tolerance = DEFAULT_TOL) -> InvariantDecomposition:
    """Full decomposition into irreducible invariant blocks.

    Blocks are peeled off one at a time; both operators restrict to the
    orthogonal complement of each extracted block, and the restriction
    of a single-angle rotation to an invariant subspace keeps its angle,
    so no re-certification is needed along the way.  The result is
    sorted by (dimension, angles, orientation data) for determinism.
    """
    if d.dim != e.dim:
        raise NotOrthogonalPair(f"ambient dimensions differ: {d.dim} vs {e.dim}")
    n = d.dim
    for name, r in (("first", d), ("second", e)):
        resid = max_abs(r.matrix.T @ r.matrix - np.eye(n))
        if resid > tol.residual_tol:
            raise NotOrthogonalPair(
                f"{name} operator orthogonality residual {resid:.3e}"
            )

    blocks = []
    carrier = np.eye(n)
    cur_d, cur_e = d, e
    while carrier.shape[1] > 0:
        found = find_block(cur_d, cur_e, tol)
        pieces = [found] if is_irreducible(found, tol) else [
            _restrict(b, cur_d, cur_e) for b in _split_block(found, tol)
        ]
        used = []
        for piece in pieces:
            blocks.append(
                InvariantBlock(
                    basis=carrier @ piece.basis,
                    d_restricted=piece.d_restricted,
                    e_restricted=piece.e_restricted,
                )
            )
            used.append(piece.basis)
        comp = orthonormal_complement(np.column_stack(used), tol=tol)
        carrier = carrier @ comp
        if comp.shape[1] == 0:
            break
        cur_d = Rotation(matrix=comp.T @ cur_d.matrix @ comp, angle=cur_d.angle)
        cur_e = Rotation(matrix=comp.T @ cur_e.matrix @ comp, angle=cur_e.angle)

    blocks.sort(key=_order_key)
    total = sum(b.dim for b in blocks)
    if total != n:
        raise NumericalFailure(f"block dimensions sum to {total}, expected {n}")
    return InvariantDecomposition(blocks=tuple(blocks), ambient_dim=n)
