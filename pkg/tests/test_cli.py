import json
import subprocess
import sys

import numpy as np
import pytest

from rotpair import Dim2Proper, Dim4, generate_pair, load_pair
from rotpair.cli import (
    EXIT_NOT_ISOMORPHIC,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_VALIDATION,
    main,
)


@pytest.fixture(autouse=True)
def no_color(monkeypatch):
    monkeypatch.setenv("NO_COLOR", "1")


@pytest.fixture
def pair_file(tmp_path):
    doc = generate_pair(
        [Dim2Proper(alpha=0.5, beta=1.2, r=1),
         Dim4(alpha=0.5, beta=1.2, theta=0.8)],
        seed=1,
    )
    path = tmp_path / "pair.json"
    doc.save(path)
    return str(path)


@pytest.fixture
def twisted_file(tmp_path):
    doc = generate_pair([Dim4(alpha=0.5, beta=1.2, theta=0.8)], seed=2)
    path = tmp_path / "twisted.json"
    doc.save(path)
    return str(path)


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


class TestCheck:
    def test_text_output(self, capsys, pair_file):
        rc, out, _ = run(capsys, "check", pair_file)
        assert rc == EXIT_OK
        assert "delta" in out and "epsilon" in out
        assert "proper" in out

    def test_json_output(self, capsys, pair_file):
        rc, out, _ = run(capsys, "check", pair_file, "--format", "json")
        assert rc == EXIT_OK
        payload = json.loads(out)
        assert payload["n"] == 6
        assert payload["delta"]["kind"] == "proper"
        assert abs(payload["delta"]["angle"] - 0.5) <= 1e-9

    def test_missing_file(self, capsys, tmp_path):
        rc, _, err = run(capsys, "check", str(tmp_path / "nope.json"))
        assert rc == EXIT_VALIDATION
        assert "error" in err

    def test_invalid_document(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(
            {"n": 2, "delta": [[2.0, 0.0], [0.0, 1.0]],
             "epsilon": [[1.0, 0.0], [0.0, 1.0]]}
        ))
        rc, _, err = run(capsys, "check", str(path))
        assert rc == EXIT_VALIDATION
        assert "error" in err


class TestNormalForm:
    def test_json_angles(self, capsys, pair_file):
        rc, out, _ = run(capsys, "normal-form", pair_file, "--format", "json")
        assert rc == EXIT_OK
        payload = json.loads(out)
        assert payload["delta"]["angles"] == [0.5, 0.5, 0.5]
        assert payload["delta"]["fix_dim"] == 0


class TestDecompose:
    def test_json_blocks(self, capsys, pair_file):
        rc, out, _ = run(capsys, "decompose", pair_file, "--format", "json")
        assert rc == EXIT_OK
        payload = json.loads(out)
        assert sorted(b["dim"] for b in payload["blocks"]) == [2, 4]
        assert "label" not in payload

    def test_text_blocks(self, capsys, pair_file):
        rc, out, _ = run(capsys, "decompose", pair_file)
        assert rc == EXIT_OK
        assert "block 1" in out


class TestClassify:
    def test_json_label(self, capsys, pair_file):
        rc, out, _ = run(capsys, "classify", pair_file, "--format", "json")
        assert rc == EXIT_OK
        payload = json.loads(out)
        families = sorted(f["family"] for f in payload["label"])
        assert families == ["dim2_proper", "dim4"]

    def test_text_mentions_families(self, capsys, pair_file):
        rc, out, _ = run(capsys, "classify", pair_file)
        assert rc == EXIT_OK
        assert "dim2_proper" in out and "dim4" in out

    def test_deterministic_json(self, capsys, pair_file):
        _, out1, _ = run(capsys, "classify", pair_file, "--format", "json")
        _, out2, _ = run(capsys, "classify", pair_file, "--format", "json")
        assert out1 == out2

    def test_numerical_exit_at_extreme_tolerance(self, capsys, tmp_path):
        q = [[0.0, -1.0], [1.0, 0.0]]
        path = tmp_path / "quarter.json"
        path.write_text(json.dumps({"n": 2, "delta": q, "epsilon": q}))
        rc, _, err = run(capsys, "classify", str(path), "--tol", "1e-30")
        assert rc == EXIT_NUMERICAL
        assert "numerical" in err


class TestIsomorphic:
    def test_same_label(self, capsys, tmp_path, pair_file):
        other = generate_pair(
            [Dim4(alpha=0.5, beta=1.2, theta=0.8),
             Dim2Proper(alpha=0.5, beta=1.2, r=1)],
            seed=99,
        )
        path = tmp_path / "other.json"
        other.save(path)
        rc, out, _ = run(capsys, "isomorphic", pair_file, str(path))
        assert rc == EXIT_OK
        assert "isomorphic" in out

    def test_different_label(self, capsys, pair_file, twisted_file):
        rc, out, _ = run(capsys, "isomorphic", pair_file, twisted_file)
        assert rc == EXIT_NOT_ISOMORPHIC
        assert "not isomorphic" in out

    def test_quiet_keeps_exit_code(self, capsys, pair_file, twisted_file):
        rc, out, _ = run(capsys, "isomorphic", pair_file, twisted_file, "--quiet")
        assert rc == EXIT_NOT_ISOMORPHIC
        assert out == ""

    def test_quiet_json_still_prints(self, capsys, pair_file, twisted_file):
        rc, out, _ = run(capsys, "isomorphic", pair_file, twisted_file,
                         "--quiet", "--format", "json")
        assert rc == EXIT_NOT_ISOMORPHIC
        assert json.loads(out) == {"isomorphic": False}


class TestGenerate:
    SPEC = '[{"family": "dim2_proper", "alpha": 0.5, "beta": 1.2, "r": 1}]'

    def test_inline_spec(self, capsys, tmp_path):
        out_path = tmp_path / "gen.json"
        rc, out, _ = run(capsys, "generate", "--spec", self.SPEC,
                         "--seed", "5", "-o", str(out_path))
        assert rc == EXIT_OK
        assert out_path.exists()
        doc = load_pair(out_path)
        assert doc.n == 2
        assert doc.metadata["seed"] == 5

    def test_spec_from_file(self, capsys, tmp_path):
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(self.SPEC)
        out_path = tmp_path / "gen.json"
        rc, _, _ = run(capsys, "generate", "--spec", str(spec_path),
                       "-o", str(out_path))
        assert rc == EXIT_OK
        assert load_pair(out_path).n == 2

    def test_deterministic_output(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "generate", "--spec", self.SPEC, "--seed", "7", "-o", str(a))
        run(capsys, "generate", "--spec", self.SPEC, "--seed", "7", "-o", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_bad_spec(self, capsys, tmp_path):
        rc, _, err = run(capsys, "generate", "--spec", "[{]",
                         "-o", str(tmp_path / "x.json"))
        assert rc == EXIT_VALIDATION
        assert "error" in err


class TestOracle:
    def test_witness_on_block_aligned_pair(self, capsys, tmp_path):
        # the witness set of a conjugated reducible pair has measure
        # zero, so feed the oracle an axis-aligned document instead
        from scipy.linalg import block_diag

        from rotpair import PairDocument, realize, rot2

        d2, e2 = realize(Dim2Proper(alpha=0.5, beta=1.2, r=1))
        d4, e4 = realize(Dim4(alpha=0.5, beta=1.2, theta=0.8))
        doc = PairDocument(
            n=6,
            delta=block_diag(d2, d4),
            epsilon=block_diag(e2, e4),
        )
        path = tmp_path / "aligned.json"
        doc.save(path)
        rc, out, _ = run(capsys, "oracle", str(path), "--format", "json",
                         "--samples", "64")
        assert rc == EXIT_OK
        payload = json.loads(out)
        assert payload["witness"] is not None
        assert len(payload["witness"]) == 6

    def test_no_witness_on_twisted_pair(self, capsys, twisted_file):
        rc, out, _ = run(capsys, "oracle", twisted_file, "--format", "json",
                         "--samples", "512")
        assert rc == EXIT_OK
        assert json.loads(out)["witness"] is None

    def test_text_disclaimer(self, capsys, twisted_file):
        rc, out, _ = run(capsys, "oracle", twisted_file, "--samples", "128")
        assert rc == EXIT_OK
        assert "not a proof" in out


def test_module_entry_point(tmp_path):
    doc = generate_pair([Dim2Proper(alpha=0.5, beta=1.2, r=1)], seed=1)
    path = tmp_path / "pair.json"
    doc.save(path)
    proc = subprocess.run(
        [sys.executable, "-m", "rotpair.cli", "check", str(path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "delta" in proc.stdout


def test_help_lists_subcommands():
    proc = subprocess.run(
        [sys.executable, "-m", "rotpair.cli", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    for name in ("check", "normal-form", "decompose", "classify",
                 "isomorphic", "generate", "oracle"):
        assert name in proc.stdout
