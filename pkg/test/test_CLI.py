import json

import pytest
import numpy as np

from pydiii.cli import main
from pydiii.core.symmetry import (
    conjugate_field,
    hamiltonian_from_sewing,
    standard_triple,
)
from pydiii.models import build_model

from test.utils import random_unitary, write_field


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def sample_dir(tmp_path, q_plus, q_minus_1):
    write_field(tmp_path, "q_plus", q_plus)
    write_field(tmp_path, "q_minus", q_minus_1)
    write_field(tmp_path, "q_w2", build_model("q_w2", 32))
    write_field(tmp_path, "q_0", build_model("q_0", 32))
    return tmp_path


class TestModels:
    def test_lists_every_model(self, capsys):
        code, out, _ = run_cli(capsys, "models")
        lines = out.strip().splitlines()
        assert code == 0
        assert lines[0] == "name space rank expected"
        assert len(lines) == 8
        assert "q_s torus 2 triple=(+1,+1,-1)" in lines
        assert "q1_rot circle 2 nu=-1" in lines


class TestEmitCheck:
    @pytest.mark.parametrize(
        "extra",
        [
            [],
            ["--kind", "hamiltonian"],
            ["--kind", "hamiltonian", "--nonflat", "0.3"],
        ],
    )
    def test_emitted_files_pass(self, capsys, tmp_path, extra):
        path = tmp_path / "q.json"
        code, _, _ = run_cli(
            capsys, "emit", "q_minus", "--grid", 64, "--out", path, *extra
        )
        assert code == 0

        code, out, _ = run_cli(capsys, "check", path)
        assert code == 0
        assert out.strip().splitlines()[-1] == "PASS"

    def test_emit_to_stdout(self, capsys):
        code, out, _ = run_cli(capsys, "emit", "q_w1", "--grid", 8, 4)
        payload = json.loads(out)
        assert code == 0
        assert (payload["space"], payload["grid"]) == ("torus", [8, 4])

    def test_emit_unknown_model(self, capsys):
        code, _, err = run_cli(capsys, "emit", "q_nonsense")
        assert code == 2
        assert err.startswith("error:")

    def test_emit_odd_grid(self, capsys):
        code, _, _ = run_cli(capsys, "emit", "q_plus", "--grid", 7)
        assert code == 2

    def test_corrupted_file_fails(self, capsys, tmp_path, q_minus_1):
        samples = q_minus_1.samples.copy()
        samples[10] = samples[10] @ np.diag([1.0, np.exp(0.2j)])
        path = write_field(
            tmp_path, "bad", q_minus_1.with_samples(q_minus_1.grid, samples)
        )
        code, out, _ = run_cli(capsys, "check", path)
        assert code == 1
        assert out.strip().splitlines()[-1] == "FAIL"
        assert "at index" in out


class TestInvariant:
    def test_json_is_byte_identical(self, capsys, sample_dir):
        path = sample_dir / "q_minus.json"
        _, first, _ = run_cli(capsys, "invariant", path, "--format", "json")
        _, second, _ = run_cli(capsys, "invariant", path, "--format", "json")
        assert first == second
        assert json.loads(first)["invariants"] == {"nu_1d": -1}

    def test_toeplitz_agrees(self, capsys, sample_dir):
        code, out, _ = run_cli(
            capsys, "invariant", sample_dir / "q_minus.json", "--toeplitz",
            "--format", "json",
        )
        report = json.loads(out)
        assert code == 0
        assert report["toeplitz"]["agree"]
        assert report["toeplitz"]["ind"] == -1

    def test_torus_text(self, capsys, sample_dir):
        code, out, _ = run_cli(capsys, "invariant", sample_dir / "q_w2.json")
        assert code == 0
        assert "triple: (+1, -1, +1)" in out

    def test_several_files(self, capsys, sample_dir):
        paths = [sample_dir / "q_plus.json", sample_dir / "q_minus.json"]
        code, out, _ = run_cli(
            capsys, "invariant", *paths, "--workers", 1, "--quiet", "--format", "json"
        )
        reports = json.loads(out)
        assert code == 0
        assert [r["invariants"]["nu_1d"] for r in reports] == [1, -1]

    def test_several_files_in_pool(self, capfd, monkeypatch, sample_dir):
        monkeypatch.setenv("DIII_THREADS", "2")
        paths = [sample_dir / f"{name}.json" for name in ["q_plus", "q_minus", "q_w2"]]
        code, out, _ = run_cli(
            capfd, "invariant", *paths, "--workers", 2, "--quiet", "--format", "json"
        )
        reports = json.loads(out)
        assert code == 0
        assert [r["invariants"].get("nu_1d") for r in reports] == [1, -1, None]
        assert reports[2]["invariants"]["triple"] == [1, -1, 1]

    def test_non_finite_sample(self, capsys, tmp_path, q_minus_1):
        path = write_field(tmp_path, "q_nan", q_minus_1)
        payload = json.loads(path.read_text())
        payload["data"][5] = [float("nan"), 0.0]
        path.write_text(json.dumps(payload))
        code, _, err = run_cli(capsys, "invariant", path)
        assert code == 3
        assert "q_nan.json" in err

    def test_out_and_series(self, capsys, sample_dir, tmp_path):
        out_path = tmp_path / "report.txt"
        series_dir = tmp_path / "series"
        series_dir.mkdir()
        code, out, _ = run_cli(
            capsys, "invariant", sample_dir / "q_plus.json", "--out", out_path,
            "--series-dir", series_dir, "--series-format", "csv",
        )
        assert code == 0
        assert out == ""
        assert "nu_1d: +1" in out_path.read_text()
        assert (series_dir / "q_plus_Pfaffian.csv").exists()

    def test_parse_error(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        code, _, err = run_cli(capsys, "invariant", path)
        assert code == 3
        assert "broken.json" in err


class TestClassify:
    def test_circle(self, capsys, sample_dir):
        code, out, _ = run_cli(
            capsys, "classify", sample_dir / "q_plus.json", sample_dir / "q_minus.json"
        )
        assert code == 0
        assert out.splitlines() == [
            "NotHomotopic",
            "nu_A: +1",
            "nu_B: -1",
            "relative: -1",
        ]

    def test_torus(self, capsys, sample_dir):
        code, out, _ = run_cli(
            capsys, "classify", sample_dir / "q_0.json", sample_dir / "q_w2.json"
        )
        assert code == 0
        assert "relative: (+1, -1)" in out.splitlines()

    def test_space_mismatch(self, capsys, sample_dir):
        code, _, _ = run_cli(
            capsys, "classify", sample_dir / "q_plus.json", sample_dir / "q_w2.json"
        )
        assert code == 2

    @pytest.fixture
    def hamiltonian_dir(self, sample_dir, q_plus, q_minus_1):
        W = random_unitary(np.random.default_rng(17), 4)
        sym = standard_triple(2).change_basis(W)
        for name, q in [("h_plus", q_plus), ("h_minus", q_minus_1)]:
            H = conjugate_field(hamiltonian_from_sewing(q), W.conj().T)
            write_field(sample_dir, name, H, sym)
        return sample_dir

    def test_hamiltonians_with_shared_symmetry(self, capsys, hamiltonian_dir):
        code, out, _ = run_cli(
            capsys, "classify", hamiltonian_dir / "h_plus.json",
            hamiltonian_dir / "h_minus.json",
        )
        assert code == 0
        assert out.splitlines() == [
            "NotHomotopic",
            "nu_A: +1",
            "nu_B: -1",
            "relative: -1",
        ]

    def test_sewing_against_hamiltonian(self, capsys, hamiltonian_dir):
        code, out, _ = run_cli(
            capsys, "classify", hamiltonian_dir / "q_minus.json",
            hamiltonian_dir / "h_minus.json",
        )
        assert code == 0
        assert out.splitlines() == [
            "Homotopic",
            "nu_A: -1",
            "nu_B: -1",
            "relative: +1",
        ]
