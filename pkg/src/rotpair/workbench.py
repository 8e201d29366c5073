"""Instance generation, JSON documents, and the sampling oracle.

File format: a pair document is a JSON object with a dimension ``n``
and two row-major ``n`` x ``n`` orthogonal matrices ``delta`` and
``epsilon``, plus free-form ``metadata``.  Reports bundle the block
form of both operators, the invariant-block decomposition with
recomputed residuals, and the canonical label.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import block_diag

from .classify import (
    ClassLabel,
    Dim1,
    Dim2LeftScalar,
    Dim2Proper,
    Dim2RightScalar,
    Dim4,
    _sort_key,
    classify_block,
    realize,
)
from .decompose import decompose, invariance_residual
from .errors import (
    BadAngle,
    BadDimension,
    BadParameter,
    NotARotation,
    NotOrthogonal,
    NotProper,
)
from .linalg import DEFAULT_TOL, Tolerance, max_abs
from .orthogonal import (
    NormalForm,
    Rotation,
    RotationKind,
    as_rotation,
    orthogonal_normal_form,
    rot2,
)


def _sig12(x: float) -> float:
    """Round to 12 significant digits; stable across JSON round trips."""
    return float(f"{float(x):.12g}")


_FAMILY_NAMES = {
    Dim1: "dim1",
    Dim2LeftScalar: "dim2_left_scalar",
    Dim2RightScalar: "dim2_right_scalar",
    Dim2Proper: "dim2_proper",
    Dim4: "dim4",
}


def form_to_dict(form) -> dict:
    """JSON-ready dict for a canonical form; angles at 12 significant digits."""
    if type(form) not in _FAMILY_NAMES:
        raise BadParameter(f"unknown canonical form {form!r}")
    out = {"family": _FAMILY_NAMES[type(form)]}
    for name in ("r", "s"):
        if hasattr(form, name):
            out[name] = int(getattr(form, name))
    for name in ("alpha", "beta", "theta"):
        if hasattr(form, name):
            out[name] = _sig12(getattr(form, name))
    return out


def form_from_dict(obj: dict):
    """Inverse of :func:`form_to_dict`."""
    if not isinstance(obj, dict) or "family" not in obj:
        raise BadParameter(f"canonical form must be an object with a family: {obj!r}")
    by_name = {v: k for k, v in _FAMILY_NAMES.items()}
    cls = by_name.get(obj["family"])
    if cls is None:
        raise BadParameter(f"unknown family {obj['family']!r}")
    kwargs = {}
    for f in cls.__dataclass_fields__:
        if f not in obj:
            raise BadParameter(f"family {obj['family']!r} needs field {f!r}")
        kwargs[f] = int(obj[f]) if f in ("r", "s") else float(obj[f])
    extra = set(obj) - set(cls.__dataclass_fields__) - {"family"}
    if extra:
        raise BadParameter(f"unexpected fields {sorted(extra)} for {obj['family']!r}")
    return cls(**kwargs)


def label_to_list(label: ClassLabel) -> list:
    return [form_to_dict(f) for f in label.forms]


@dataclass(frozen=True)
class PairDocument:
    """A rotation pair as stored on disk."""

    n: int
    delta: np.ndarray
    epsilon: np.ndarray
    metadata: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "delta": [[float(x) for x in row] for row in self.delta],
            "epsilon": [[float(x) for x in row] for row in self.epsilon],
            "metadata": self.metadata,
        }

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _matrix_from_json(obj, name: str, n: int) -> np.ndarray:
    try:
        M = np.array(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise BadParameter(f"{name} is not a numeric matrix") from exc
    if M.shape != (n, n):
        raise BadDimension(f"{name} has shape {M.shape}, expected ({n}, {n})")
    if not np.all(np.isfinite(M)):
        raise BadParameter(f"{name} contains non-finite entries")
    return M


def pair_from_json_dict(obj: dict, tol: Tolerance = DEFAULT_TOL,
                        strict: bool = True) -> PairDocument:
    """Validate and build a :class:`PairDocument` from parsed JSON.

    Orthogonality of both matrices is checked at load time; ``strict``
    picks between rejecting and warning.
    """
    if not isinstance(obj, dict):
        raise BadParameter("document root must be a JSON object")
    for key in ("n", "delta", "epsilon"):
        if key not in obj:
            raise BadParameter(f"document is missing {key!r}")
    n = obj["n"]
    if not isinstance(n, int) or n < 1:
        raise BadDimension(f"n must be a positive integer, got {n!r}")
    delta = _matrix_from_json(obj["delta"], "delta", n)
    epsilon = _matrix_from_json(obj["epsilon"], "epsilon", n)
    for name, M in (("delta", delta), ("epsilon", epsilon)):
        resid = max_abs(M.T @ M - np.eye(n))
        if resid > tol.residual_tol:
            message = (
                f"{name}: orthogonality residual {resid:.3e} exceeds "
                f"{tol.residual_tol:.3e}"
            )
            if strict:
                raise NotOrthogonal(message)
            warnings.warn(message)
    metadata = obj.get("metadata", {})
    if not isinstance(metadata, dict):
        raise BadParameter("metadata must be an object")
    return PairDocument(n=n, delta=delta, epsilon=epsilon, metadata=metadata)


def load_pair(path, tol: Tolerance = DEFAULT_TOL, strict: bool = True) -> PairDocument:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise BadParameter(f"{path}: not valid JSON ({exc})") from exc
    return pair_from_json_dict(obj, tol, strict)


def _normal_form_dict(nf: NormalForm) -> dict:
    return {
        "angles": [_sig12(a) for a in nf.angles],
        "fix_dim": nf.fix_dim,
        "neg_dim": nf.neg_dim,
        "basis": [[float(x) for x in row] for row in nf.basis],
    }


@dataclass(frozen=True)
class ReportDocument:
    """Full analysis of one pair, ready for serialization."""

    n: int
    tolerances: dict
    delta_normal_form: dict
    epsilon_normal_form: dict
    blocks: tuple
    label: tuple

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "tolerances": dict(self.tolerances),
            "delta_normal_form": self.delta_normal_form,
            "epsilon_normal_form": self.epsilon_normal_form,
            "blocks": [dict(b) for b in self.blocks],
            "label": [dict(f) for f in self.label],
        }


def build_report(d: Rotation, e: Rotation,
                 tol: Tolerance = DEFAULT_TOL) -> ReportDocument:
    """Decompose, classify, and package the results.

    Residuals in the report are recomputed from the returned bases, not
    read back from intermediate state.
    """
    dec = decompose(d, e, tol)
    blocks = []
    forms = []
    for b in dec.blocks:
        form = classify_block(b, tol)
        forms.append(form)
        blocks.append({
            "dim": b.dim,
            "basis": [[float(x) for x in row] for row in b.basis],
            "d_restricted": [[float(x) for x in row] for row in b.d_restricted],
            "e_restricted": [[float(x) for x in row] for row in b.e_restricted],
            "invariance_residual": float(invariance_residual(b.basis, d, e)),
            "form": form_to_dict(form),
        })
    label = ClassLabel(forms=tuple(sorted(forms, key=_sort_key)))
    return ReportDocument(
        n=d.dim,
        tolerances={
            "residual_tol": tol.residual_tol,
            "angle_tol": tol.angle_tol,
            "rank_tol": tol.rank_tol,
        },
        delta_normal_form=_normal_form_dict(orthogonal_normal_form(d.matrix, tol)),
        epsilon_normal_form=_normal_form_dict(orthogonal_normal_form(e.matrix, tol)),
        blocks=tuple(blocks),
        label=tuple(label_to_list(label)),
    )


def haar_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random orthogonal matrix: QR of a Gaussian with sign-fixed diagonal."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    signs = np.where(np.diag(r) >= 0, 1.0, -1.0)
    return q * signs


def generate_rotation(n: int, alpha: float, seed: int,
                      tol: Tolerance = DEFAULT_TOL) -> Rotation:
    """Seeded random rotation of R^n with the given angle.

    Angle 0 and pi give the identity and its negative in any dimension;
    anything in between needs ``n`` even and conjugates a direct sum of
    equal 2x2 blocks by a random orthogonal matrix.
    """
    if n < 1:
        raise BadDimension(f"n must be positive, got {n}")
    if not (0.0 <= alpha <= math.pi):
        raise BadAngle(f"alpha {alpha!r} outside [0, pi]")
    if alpha == 0.0:
        return Rotation(matrix=np.eye(n), angle=0.0)
    if alpha == math.pi:
        return Rotation(matrix=-np.eye(n), angle=math.pi)
    if n % 2:
        raise BadDimension(f"a proper rotation needs even dimension, got {n}")
    rng = np.random.default_rng(seed)
    Q = haar_orthogonal(n, rng)
    B = block_diag(*[rot2(alpha)] * (n // 2))
    return as_rotation(Q @ B @ Q.T, tol)


def generate_pair(spec, seed: int, tol: Tolerance = DEFAULT_TOL) -> PairDocument:
    """Random pair realizing the given multiset of canonical forms.

    The realized blocks are direct-summed in a seed-shuffled order and
    conjugated by one random orthogonal matrix.  The ground-truth label
    goes into the metadata.  Raises ``BadParameter`` when the forms are
    not jointly realizable (the direct sums must themselves rotate by a
    single angle on each side).
    """
    spec = list(spec)
    if not spec:
        raise BadParameter("spec must contain at least one canonical form")
    pieces = [realize(f) for f in spec]
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(pieces))
    delta = block_diag(*[pieces[i][0] for i in order])
    epsilon = block_diag(*[pieces[i][1] for i in order])
    n = delta.shape[0]
    Q = haar_orthogonal(n, rng)
    delta = Q @ delta @ Q.T
    epsilon = Q @ epsilon @ Q.T
    try:
        as_rotation(delta, tol)
        as_rotation(epsilon, tol)
    except NotARotation as exc:
        raise BadParameter(
            f"forms are not jointly realizable as a rotation pair: {exc}"
        ) from exc
    label = ClassLabel(forms=tuple(sorted(spec, key=_sort_key)))
    return PairDocument(
        n=n,
        delta=delta,
        epsilon=epsilon,
        metadata={"seed": int(seed), "label": label_to_list(label)},
    )


def _probe_candidates(n: int) -> np.ndarray:
    """Structured unit vectors tried before random sampling.

    Coordinate vectors and their normalized sums and differences; these
    hit the invariant planes of block-aligned pairs exactly.
    """
    eye = np.eye(n)
    cols = [eye[:, i] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            cols.append((eye[:, i] + eye[:, j]) / math.sqrt(2.0))
            cols.append((eye[:, i] - eye[:, j]) / math.sqrt(2.0))
    return np.column_stack(cols)


def oracle_two_plane_search(d: Rotation, e: Rotation, samples: int = 10000,
                            seed: int = 0, tol: Tolerance = DEFAULT_TOL):
    """Search for a unit vector spanning an invariant 2-plane with its image.

    A vector v qualifies when the stack [v, d v, e v, e d v] has rank at
    most 2; the plane spanned by v and d v is then verified invariant
    under both rotations.  Structured probe vectors are tried first,
    then ``samples`` seeded random draws.  Returns the first verified
    witness, or None.

    Absence of a witness is NOT a proof that no invariant 2-plane
    exists: for most reducible pairs the witnesses form a measure-zero
    set that random sampling misses.
    """
    for r in (d, e):
        if r.kind is not RotationKind.PROPER:
            raise NotProper(f"angle {r.angle} is not strictly inside (0, pi)")
    n = d.dim
    dm, em = d.matrix, e.matrix

    def scan(vectors: np.ndarray):
        cols = vectors.shape[1]
        stacks = np.empty((cols, n, 4))
        stacks[:, :, 0] = vectors.T
        stacks[:, :, 1] = (dm @ vectors).T
        stacks[:, :, 2] = (em @ vectors).T
        stacks[:, :, 3] = (em @ (dm @ vectors)).T
        sing = np.linalg.svd(stacks, compute_uv=False)
        padded = np.zeros((cols, 4))
        padded[:, : sing.shape[1]] = sing
        ok = (padded[:, 2] <= tol.rank_tol * padded[:, 0]) & (
            padded[:, 3] <= tol.rank_tol * padded[:, 0]
        )
        for i in np.nonzero(ok)[0]:
            v = vectors[:, i]
            plane = np.column_stack([v, dm @ v])
            q, _ = np.linalg.qr(plane)
            if invariance_residual(q, d, e) <= 10 * tol.residual_tol:
                return v
        return None

    hit = scan(_probe_candidates(n))
    if hit is not None:
        return hit
    rng = np.random.default_rng(seed)
    remaining = int(samples)
    while remaining > 0:
        chunk = min(remaining, 2048)
        raw = rng.standard_normal((n, chunk))
        raw /= np.linalg.norm(raw, axis=0)
        hit = scan(raw)
        if hit is not None:
            return hit
        remaining -= chunk
    return None
