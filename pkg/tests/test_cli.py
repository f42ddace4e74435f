import json

import numpy as np
import pytest

from tblim.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestBuild:
    def test_round_trip_identical(self, tmp_path):
        out1 = tmp_path / "a.json"
        out2 = tmp_path / "b.json"
        assert main(["build", "--n", "6", "--K", "2", "--L", "3", "--parity", "minus",
                     "--out", str(out1)]) == 0
        assert main(["build", "--n", "6", "--K", "2", "--L", "3", "--parity", "minus",
                     "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_dimensions_and_reload(self, tmp_path):
        out = tmp_path / "ops.json"
        main(["build", "--n", "6", "--K", "2", "--L", "3", "--parity", "minus", "--out", str(out)])
        doc = json.loads(out.read_text())
        ops = doc["operators"]
        assert set(ops) == {"A", "A_star", "pi1", "pi2", "Q", "T_position", "T_momentum"}
        for name, payload in ops.items():
            assert payload["dim"] == 5
        from tblim.serialize import unpack_operator
        from tblim.operators import tb_operator
        from tblim.core_model import ModelParams, Parity

        q = unpack_operator(ops["Q"])
        want = tb_operator(ModelParams(6, 2, 3, Parity.MINUS))
        assert np.max(np.abs(q.entries - want.entries)) == 0.0


class TestSpectrum:
    def test_csv_shape_and_order(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--n", "6", "--K", "2", "--L", "3",
                           "--parity", "plus", "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "ell,t,q,residual"
        rows = [ln.split(",") for ln in lines[1:]]
        assert len(rows) == 4  # window rank L+1
        qs = [float(r[2]) for r in rows]
        assert qs == sorted(qs, reverse=True)

    def test_minus_row_count(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--n", "6", "--K", "2", "--L", "3",
                           "--parity", "minus", "--format", "csv")
        assert len(out.strip().splitlines()) == 1 + 3  # header + L rows

    def test_trace_identity(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--n", "8", "--K", "3", "--L", "4",
                           "--parity", "plus")
        doc = json.loads(out)
        total = sum(m["q"] for m in doc["modes"])
        from tblim.core_model import ModelParams, Parity
        from tblim.operators import tb_operator

        want = float(np.trace(tb_operator(ModelParams(8, 3, 4, Parity.PLUS)).entries).real)
        assert abs(total - want) < 1e-9

    def test_sweep_ordered(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--n", "6", "--K", "2", "--L", "3",
                           "--parity", "minus", "--sweep", "K=0..4")
        assert code == 0
        doc = json.loads(out)
        assert [r["value"] for r in doc["results"]] == [0, 1, 2, 3, 4]

    def test_invalid_params_exit_two(self, capsys):
        code, _, err = run(capsys, "spectrum", "--n", "4", "--K", "9", "--L", "2",
                           "--parity", "plus")
        assert code == 2


class TestVerify:
    def test_all_pass(self, capsys):
        code, out, _ = run(capsys, "verify", "--n", "6", "--K", "2", "--L", "3",
                           "--parity", "minus")
        assert code == 0
        assert "FAIL" not in out
        assert "PASS" in out

    def test_plus_instance(self, capsys):
        code, out, _ = run(capsys, "verify", "--n", "8", "--K", "3", "--L", "4",
                           "--parity", "plus")
        assert code == 0

    def test_corrupted_operator_file(self, capsys, tmp_path):
        ops = tmp_path / "ops.json"
        main(["build", "--n", "6", "--K", "2", "--L", "3", "--parity", "minus",
              "--out", str(ops)])
        text = ops.read_text().replace("[[0,0]", "[[0.5,0]", 1)
        bad = tmp_path / "bad.json"
        bad.write_text(text)
        code, out, _ = run(capsys, "verify", "--n", "6", "--K", "2", "--L", "3",
                           "--parity", "minus", "--operators", str(bad))
        assert code == 1
        assert "FAIL" in out

    def test_unreadable_operator_file(self, capsys, tmp_path):
        bad = tmp_path / "nope.json"
        bad.write_text("{not json")
        code, _, _ = run(capsys, "verify", "--n", "6", "--K", "2", "--L", "3",
                         "--parity", "minus", "--operators", str(bad))
        assert code == 2


class TestBethe:
    def test_first_ansatz_rows(self, capsys):
        code, out, _ = run(capsys, "bethe", "--n", "6", "--K", "2", "--L", "3",
                           "--ansatz", "first")
        assert code == 0
        doc = json.loads(out)
        assert doc["missing_levels"] == []
        assert len(doc["levels"]) == 3
        for level in doc["levels"]:
            assert level["abs_dt"] < 1e-6
            assert level["residual"] < 1e-9

    def test_second_matches_first(self, capsys):
        _, out1, _ = run(capsys, "bethe", "--n", "6", "--K", "2", "--L", "3",
                         "--ansatz", "first")
        _, out2, _ = run(capsys, "bethe", "--n", "6", "--K", "2", "--L", "3",
                         "--ansatz", "second")
        t1 = sorted(l["t_spectral"] for l in json.loads(out1)["levels"])
        t2 = sorted(l["t_spectral"] for l in json.loads(out2)["levels"])
        assert np.allclose(t1, t2, atol=1e-6)

    def test_plus_ansatz_rows(self, capsys):
        code, out, _ = run(capsys, "bethe", "--n", "6", "--K", "2", "--L", "2",
                           "--ansatz", "plus")
        assert code == 0
        assert len(json.loads(out)["levels"]) == 3

    def test_missing_ansatz_flag(self, capsys):
        code, _, err = run(capsys, "bethe", "--n", "6", "--K", "2", "--L", "3")
        assert code == 2

    def test_deterministic_output(self, capsys):
        _, out1, _ = run(capsys, "bethe", "--n", "6", "--K", "2", "--L", "3",
                         "--ansatz", "second", "--seed", "7")
        _, out2, _ = run(capsys, "bethe", "--n", "6", "--K", "2", "--L", "3",
                         "--ansatz", "second", "--seed", "7")
        assert out1 == out2


class TestReconstruct:
    @staticmethod
    def write_signal(path, n, L, seed=0):
        rng = np.random.default_rng(seed)
        f = np.zeros(2 * n, dtype=complex)
        for x in list(range(0, L + 1)) + list(range(2 * n - L, 2 * n)):
            f[x] = rng.normal() + 1j * rng.normal()
        lines = ["index,re,im"] + [
            f"{i},{float(f[i].real)!r},{float(f[i].imag)!r}" for i in range(2 * n)
        ]
        path.write_text("\n".join(lines) + "\n")
        return f

    def test_full_band_round_trip(self, capsys, tmp_path):
        sig = tmp_path / "sig.csv"
        self.write_signal(sig, 8, 4)
        code, out, _ = run(capsys, "reconstruct", "--n", "8", "--K", "8", "--L", "4",
                           "--signal", str(sig))
        assert code == 0
        doc = json.loads(out)
        assert doc["plus"]["verdict"] == "exact"
        assert doc["relative_error"] < 1e-10

    def test_unrecoverable_verdict(self, capsys, tmp_path):
        sig = tmp_path / "sig.csv"
        self.write_signal(sig, 8, 6)
        code, out, _ = run(capsys, "reconstruct", "--n", "8", "--K", "1", "--L", "6",
                           "--signal", str(sig))
        assert code == 0
        doc = json.loads(out)
        assert doc["plus"]["verdict"] == "unrecoverable"

    def test_malformed_csv_exit_two(self, capsys, tmp_path):
        sig = tmp_path / "bad.csv"
        sig.write_text("garbage,npe\n")
        code, _, _ = run(capsys, "reconstruct", "--n", "8", "--K", "6", "--L", "4",
                         "--signal", str(sig))
        assert code == 2

    def test_support_violation_exit_two(self, capsys, tmp_path):
        sig = tmp_path / "sig.csv"
        self.write_signal(sig, 8, 7)  # support exceeds L = 2
        code, _, _ = run(capsys, "reconstruct", "--n", "8", "--K", "6", "--L", "2",
                         "--signal", str(sig))
        assert code == 2
