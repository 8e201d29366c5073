"""Command-line interface.

Subcommands: check, normal-form, decompose, classify, isomorphic,
generate, oracle.  Exit codes: 0 success, 1 validation error, 2
numerical failure, 3 "not isomorphic".  JSON output is deterministic:
same inputs, flags and seeds give byte-identical bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .classify import classify, labels_match
from .errors import NumericalError, RotPairError, ValidationError
from .linalg import Tolerance
from .orthogonal import as_rotation, orthogonal_normal_form
from .workbench import (
    _normal_form_dict,
    _sig12,
    build_report,
    form_from_dict,
    generate_pair,
    load_pair,
    oracle_two_plane_search,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_NOT_ISOMORPHIC = 3


def _color_enabled() -> bool:
    if os.environ.get("NO_COLOR"):
        return False
    return sys.stdout.isatty()


def _mark(ok: bool) -> str:
    text = "ok" if ok else "FAIL"
    if not _color_enabled():
        return text
    code = "32" if ok else "31"
    return f"\x1b[{code}m{text}\x1b[0m"


class _Output:
    def __init__(self, fmt: str, quiet: bool):
        self.fmt = fmt
        self.quiet = quiet

    def emit_json(self, obj) -> None:
        # JSON is the product of the run, so --quiet does not drop it.
        print(json.dumps(obj, indent=2, sort_keys=True))

    def emit_text(self, *lines: str) -> None:
        if not self.quiet:
            for line in lines:
                print(line)


def _tolerance(args) -> Tolerance:
    return Tolerance(residual_tol=args.tol, angle_tol=args.angle_tol)


def _load_rotations(path, tol: Tolerance):
    doc = load_pair(path, tol)
    return doc, as_rotation(doc.delta, tol), as_rotation(doc.epsilon, tol)


def _cmd_check(args, out: _Output) -> int:
    tol = _tolerance(args)
    doc, d, e = _load_rotations(args.file, tol)
    payload = {
        "n": doc.n,
        "delta": {"angle": _sig12(d.angle), "kind": d.kind.value},
        "epsilon": {"angle": _sig12(e.angle), "kind": e.kind.value},
    }
    if out.fmt == "json":
        out.emit_json(payload)
    else:
        out.emit_text(
            f"{_mark(True)} delta: {d.kind.value}, angle {d.angle:.12g}",
            f"{_mark(True)} epsilon: {e.kind.value}, angle {e.angle:.12g}",
        )
    return EXIT_OK


def _cmd_normal_form(args, out: _Output) -> int:
    tol = _tolerance(args)
    doc = load_pair(args.file, tol)
    forms = {
        "delta": _normal_form_dict(orthogonal_normal_form(doc.delta, tol)),
        "epsilon": _normal_form_dict(orthogonal_normal_form(doc.epsilon, tol)),
    }
    if out.fmt == "json":
        out.emit_json({"n": doc.n, **forms})
    else:
        for name in ("delta", "epsilon"):
            nf = forms[name]
            angles = ", ".join(f"{a:.12g}" for a in nf["angles"]) or "none"
            out.emit_text(
                f"{name}: angles [{angles}], fixed {nf['fix_dim']}, "
                f"negated {nf['neg_dim']}"
            )
    return EXIT_OK


def _cmd_decompose(args, out: _Output) -> int:
    tol = _tolerance(args)
    _, d, e = _load_rotations(args.file, tol)
    report = build_report(d, e, tol)
    if out.fmt == "json":
        payload = report.to_json_dict()
        del payload["label"]
        out.emit_json(payload)
    else:
        for i, b in enumerate(report.blocks):
            out.emit_text(
                f"block {i + 1}: dim {b['dim']}, residual "
                f"{b['invariance_residual']:.3e}"
            )
    return EXIT_OK


def _cmd_classify(args, out: _Output) -> int:
    tol = _tolerance(args)
    _, d, e = _load_rotations(args.file, tol)
    report = build_report(d, e, tol)
    if out.fmt == "json":
        out.emit_json(report.to_json_dict())
    else:
        for f in report.label:
            parts = [f["family"]]
            for key in ("r", "s", "alpha", "beta", "theta"):
                if key in f:
                    parts.append(f"{key}={f[key]:.12g}")
            out.emit_text("  ".join(parts))
    return EXIT_OK


def _cmd_isomorphic(args, out: _Output) -> int:
    tol = _tolerance(args)
    _, d1, e1 = _load_rotations(args.file_a, tol)
    _, d2, e2 = _load_rotations(args.file_b, tol)
    same = labels_match(classify(d1, e1, tol), classify(d2, e2, tol), tol)
    if out.fmt == "json":
        out.emit_json({"isomorphic": same})
    else:
        out.emit_text("isomorphic" if same else "not isomorphic")
    return EXIT_OK if same else EXIT_NOT_ISOMORPHIC


def _cmd_generate(args, out: _Output) -> int:
    tol = _tolerance(args)
    raw = args.spec
    if not raw.lstrip().startswith("["):
        with open(raw) as fh:
            raw = fh.read()
    try:
        spec_list = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"--spec is not valid JSON: {exc}") from exc
    if not isinstance(spec_list, list):
        raise ValidationError("--spec must be a JSON array of canonical forms")
    forms = [form_from_dict(obj) for obj in spec_list]
    doc = generate_pair(forms, args.seed, tol)
    doc.save(args.output)
    out.emit_text(f"wrote {args.output} (n={doc.n})")
    return EXIT_OK


def _cmd_oracle(args, out: _Output) -> int:
    tol = _tolerance(args)
    _, d, e = _load_rotations(args.file, tol)
    witness = oracle_two_plane_search(d, e, samples=args.samples,
                                      seed=args.seed, tol=tol)
    if out.fmt == "json":
        out.emit_json({
            "samples": args.samples,
            "witness": None if witness is None else [float(x) for x in witness],
        })
    else:
        if witness is None:
            out.emit_text(
                "no witness found (not a proof that no invariant plane exists)"
            )
        else:
            out.emit_text("witness: " + " ".join(f"{x:.12g}" for x in witness))
    return EXIT_OK


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--tol", type=float, default=1e-9, metavar="RESIDUAL",
                     help="residual tolerance (default 1e-9)")
    sub.add_argument("--angle-tol", type=float, default=1e-7, metavar="RADIANS",
                     help="angle comparison tolerance (default 1e-7)")
    sub.add_argument("--format", choices=("json", "text"), default="text",
                     help="output format (default text)")
    sub.add_argument("--quiet", action="store_true",
                     help="suppress informational text output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotpair",
        description="Decompose pairs of rotations into invariant blocks, "
                    "classify the blocks, and decide isomorphism.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("check", help="verify both matrices rotate by a "
                        "single angle and report the angles")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(func=_cmd_check)

    p = subs.add_parser("normal-form", help="block form of each matrix")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(func=_cmd_normal_form)

    p = subs.add_parser("decompose", help="invariant-block decomposition")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(func=_cmd_decompose)

    p = subs.add_parser("classify", help="canonical label of the pair")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(func=_cmd_classify)

    p = subs.add_parser("isomorphic", help="compare two pairs "
                        "(exit 0 yes, exit 3 no)")
    p.add_argument("file_a")
    p.add_argument("file_b")
    _add_common(p)
    p.set_defaults(func=_cmd_isomorphic)

    p = subs.add_parser("generate", help="generate a pair from a JSON list "
                        "of canonical forms")
    p.add_argument("--spec", required=True,
                   help="JSON array of canonical forms, inline or a file path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_generate)

    p = subs.add_parser(
        "oracle",
        help="sample unit vectors for an invariant 2-plane witness",
        description="Samples unit vectors looking for one that spans an "
                    "invariant 2-plane with its image.  One-sided: finding "
                    "a witness proves reducibility, finding none proves "
                    "nothing.",
    )
    p.add_argument("file")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=_cmd_oracle)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = _Output(fmt=args.format, quiet=args.quiet)
    try:
        return args.func(args, out)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except RotPairError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
