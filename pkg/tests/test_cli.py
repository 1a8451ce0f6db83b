import json

import numpy as np
import pytest

from ftgraph import Case, CouplingST, FreeLikeForm, ft_scattering, realize_smatrix, solver
from ftgraph import io
from ftgraph.cli import format_matrix, main
from ftgraph.errors import SingularSystemError


def dump(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def coupling_file(tmp_path, c, name="c.json"):
    return dump(tmp_path, name, io.coupling_to_dict(c))


def smatrix_file(tmp_path, S, name="s.json"):
    return dump(tmp_path, name, {"n": len(S), "S": io.encode_matrix(S)})


def parse_matrix(text):
    rows = []
    for line in text.strip().splitlines():
        if line.startswith("#"):
            continue
        rows.append([complex(tok.replace("i", "j")) for tok in line.split()])
    return np.array(rows)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestScatter:
    def test_free3(self, tmp_path, capsys):
        code, out, _ = run(capsys, "scatter", coupling_file(tmp_path, CouplingST(3, 1, np.ones((1, 2)))))
        assert code == 0
        np.testing.assert_allclose(parse_matrix(out), 2 / 3 * np.ones((3, 3)) - np.eye(3), atol=1e-6)

    def test_zero_T(self, tmp_path, capsys):
        code, out, _ = run(capsys, "scatter", coupling_file(tmp_path, CouplingST(2, 1, [[0.0]])))
        assert code == 0
        np.testing.assert_allclose(parse_matrix(out), np.diag([1, -1]), atol=1e-6)
        assert "-0.000000" not in out

    def test_general_ab_matches(self, tmp_path, capsys):
        path = coupling_file(tmp_path, CouplingST(3, 1, [[2.0, 1j]]))
        _, plain, _ = run(capsys, "scatter", path)
        code, ab, _ = run(capsys, "scatter", path, "--k", "1", "--general-ab")
        assert code == 0
        assert parse_matrix(ab).shape == (3, 3)
        assert np.abs(parse_matrix(ab) - parse_matrix(plain)).max() <= 1e-6

    def test_out_roundtrip(self, tmp_path, capsys):
        c = CouplingST(4, 2, np.array([[0.3 + 0.1j, -2.0], [1j, 0.7]]))
        out = tmp_path / "s.json"
        assert run(capsys, "scatter", coupling_file(tmp_path, c), "--out", str(out))[0] == 0
        S = io.smatrix_from_dict(io.read_json(out)).S
        np.testing.assert_array_equal(S, ft_scattering(c).S)

    def test_bad_shape(self, tmp_path, capsys):
        path = dump(tmp_path, "bad.json", {"n": 3, "m": 1, "T": [[[1, 0]]]})
        code, _, err = run(capsys, "scatter", path)
        assert code == 2
        assert "shape" in err

    def test_missing_file(self, tmp_path, capsys):
        assert run(capsys, "scatter", str(tmp_path / "nope.json"))[0] == 2

    def test_bad_json(self, tmp_path, capsys):
        p = tmp_path / "x.json"
        p.write_text("{not json")
        assert run(capsys, "scatter", str(p))[0] == 2


class TestClassify:
    def test_plus_j(self, tmp_path, capsys):
        S = np.eye(4) - 0.5 * np.ones((4, 4))
        code, out, _ = run(capsys, "classify", smatrix_file(tmp_path, S))
        assert code == 0
        assert out.startswith("PlusJ, p=4, phases [0.000000, 0.000000, 0.000000]")

    def test_dirichlet(self, tmp_path, capsys):
        code, out, _ = run(capsys, "classify", smatrix_file(tmp_path, -np.eye(3)))
        assert code == 1
        assert "not free-like" in out

    def test_balanced(self, tmp_path, capsys, rng):
        form = FreeLikeForm(4, Case.BALANCED, rng.uniform(0, 2 * np.pi, 3), permutation=(2, 0, 3, 1))
        S = realize_smatrix(form).S
        code, out, _ = run(capsys, "classify", smatrix_file(tmp_path, S))
        assert code == 0
        assert out.startswith("Balanced, p=2")
        err = float(out.split("reconstruction error:")[1])
        assert err < 1e-9

    def test_coupling_input(self, tmp_path, capsys):
        code, out, _ = run(capsys, "classify", coupling_file(tmp_path, CouplingST(3, 1, np.ones((1, 2)))))
        assert code == 0
        assert out.startswith("MinusJ, p=0")

    def test_non_unitary(self, tmp_path, capsys):
        code, _, err = run(capsys, "classify", smatrix_file(tmp_path, 2 * np.eye(2)))
        assert code == 2
        assert "unitary" in err


class TestApproximate:
    def test_free2(self, tmp_path, capsys):
        code, out, _ = run(capsys, "approximate", coupling_file(tmp_path, CouplingST(2, 1, [[1.0]])), "--d", "0.1")
        assert code == 0
        obj = json.loads(out)
        assert len(obj["connectors"]) == 1
        assert obj["alpha"] == [0.0, 0.0]
        assert obj["reconstruction_residual"] < 1e-15

    def test_imaginary_T(self, tmp_path, capsys):
        out = tmp_path / "g.json"
        code, _, _ = run(capsys, "approximate", coupling_file(tmp_path, CouplingST(2, 1, [[1j]])), "--d", "0.1", "--out", str(out))
        assert code == 0
        (conn,) = io.read_json(out)["connectors"]
        assert np.isclose(abs(conn["A"]), 10 * np.pi)

    def test_negative_d(self, tmp_path, capsys):
        code, _, err = run(capsys, "approximate", coupling_file(tmp_path, CouplingST(2, 1, [[1.0]])), "--d", "-1")
        assert code == 2
        assert "--d" in err

    def test_graph_roundtrip(self, tmp_path, capsys):
        code, out, _ = run(capsys, "approximate", coupling_file(tmp_path, CouplingST(3, 2, [[1.0], [1j]])), "--d", "0.05")
        obj = json.loads(out)
        obj.pop("reconstruction_residual")
        assert io.graph_to_dict(io.graph_from_dict(obj)) == obj


class TestConverge:
    def test_free2_order(self, tmp_path, capsys):
        csv = tmp_path / "conv.csv"
        path = coupling_file(tmp_path, CouplingST(2, 1, [[1.0]]))
        code, out, _ = run(capsys, "converge", path, "--k", "1", "--d-start", "0.2", "--d-steps", "6", "--csv", str(csv))
        assert code == 0
        order = float(out.split("fitted order:")[1].split()[0])
        assert abs(order - 1.0) <= 0.1
        lines = csv.read_text().splitlines()
        assert lines[0] == "d,error"
        assert len(lines) == 8
        assert lines[-1].startswith("# fitted_order = ")

    def test_n3m1_exit0(self, tmp_path, capsys):
        code, out, _ = run(capsys, "converge", coupling_file(tmp_path, CouplingST(3, 1, [[2.0, 1j]])))
        assert code == 0
        assert "final error" in out

    def test_missed_target(self, tmp_path, capsys):
        # d too large to be anywhere near the limit
        path = coupling_file(tmp_path, CouplingST(3, 1, [[2.0, 1j]]))
        code, _, _ = run(capsys, "converge", path, "--d-start", "20", "--d-steps", "3")
        assert code == 1

    def test_two_steps(self, tmp_path, capsys):
        code, _, err = run(capsys, "converge", coupling_file(tmp_path, CouplingST(2, 1, [[1.0]])), "--d-steps", "2")
        assert code == 2
        assert "--d-steps" in err

    def test_singular_row(self, tmp_path, capsys, monkeypatch):
        real = solver.solve_scattering

        def flaky(graph, k):
            if graph.d < 0.03:
                raise SingularSystemError("singular", 1e17)
            return real(graph, k)

        monkeypatch.setattr(solver, "solve_scattering", flaky)
        code, _, err = run(capsys, "converge", coupling_file(tmp_path, CouplingST(2, 1, [[1.0]])))
        assert code == 3
        assert "k=1.0" in err
        assert "0.025" in err


class TestEnumerate:
    @pytest.mark.parametrize("n, case, count", [(3, "minus", 4), (2, "plus", 2), (4, "balanced", 8)])
    def test_counts(self, capsys, n, case, count):
        code, out, _ = run(capsys, "enumerate-freelike", "--n", str(n), "--case", case, "--time-reversal")
        assert code == 0
        items = json.loads(out)
        assert len(items) == count
        for item in items:
            c = io.coupling_from_dict(item)
            np.testing.assert_allclose(io.decode_matrix(item["S"]), ft_scattering(c).S, atol=1e-12)

    def test_requires_flag(self, capsys):
        code, _, err = run(capsys, "enumerate-freelike", "--n", "3", "--case", "minus")
        assert code == 2
        assert "continuous family; use --time-reversal for the finite subfamily" in err

    def test_out(self, tmp_path, capsys):
        out = tmp_path / "e.json"
        code, text, _ = run(capsys, "enumerate-freelike", "--n", "3", "--case", "plus", "--time-reversal", "--out", str(out))
        assert code == 0
        assert len(io.read_json(out)) == 4
        assert "wrote 4" in text


def test_json_lossless(tmp_path, rng):
    T = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
    T[0, 0] = 0.1 + 1e-17j
    c = CouplingST(5, 2, T * np.pi, perm=(4, 0, 2, 1, 3))
    path = tmp_path / "c.json"
    io.write_json(io.coupling_to_dict(c), path)
    back = io.coupling_from_dict(io.read_json(path))
    np.testing.assert_array_equal(back.T, c.T)
    assert back.perm == c.perm


def test_format_matrix():
    assert format_matrix(np.array([[1 - 0.5j, -1e-9]])) == "+1.000000-0.500000i  +0.000000+0.000000i"


def test_module_entry():
    import subprocess
    import sys

    r = subprocess.run([sys.executable, "-m", "ftgraph", "enumerate-freelike", "--n", "2", "--case", "minus"], capture_output=True, text=True)
    assert r.returncode == 2
