import numpy as np
import pytest

from meridian4.cli import main, parse_projection
from meridian4.config import build_surface, load_config
from meridian4.surface import eval_point

CONFIGS = {
    "case-one": "profile.kind = linear-f\nprofile.a = 1\nprofile.a1 = 1\n"
                "curve.kappa0 = 1\ndomain.u = 0 1\ndomain.v = 0 3\n",
    "cylinder": "profile.kind = constant-f\nprofile.a = 1\ncurve.kappa0 = 2\n"
                "domain.u = 0 1\ndomain.v = 0 3\n",
    "plane": "profile.kind = linear-f\nprofile.a1 = 1\ncurve.kappa0 = 0\n"
             "domain.u = 0 1\ndomain.v = 0 3\n",
    "sine": "profile.kind = sine-demo\ncurve.kappa0 = 0.7\ndomain.u = 0 1\ndomain.v = 0 3\n",
    "linear-both": "profile.kind = linear-both\nprofile.a = 0.6\nprofile.a1 = 1\n"
                   "curve.kappa0 = 1\ndomain.u = 0 1\ndomain.v = 0 3\n",
}


@pytest.fixture
def cfg(tmp_path):
    def make(name):
        path = tmp_path / f"{name}.cfg"
        path.write_text(CONFIGS[name])
        return str(path)
    return make


def read_record(path):
    return dict(line.split(" = ", 1) for line in open(path).read().splitlines())


class TestClassifyCommand:
    @pytest.mark.parametrize("name,verdict,code", [
        ("case-one", "SecondKind-I", 0),
        ("cylinder", "FirstKind-II-ii", 0),
        ("plane", "Harmonic-Plane", 0),
        ("sine", "NotPointwise1Type", 2),
    ])
    def test_verdicts(self, cfg, tmp_path, name, verdict, code):
        out = tmp_path / "report.txt"
        assert main(["classify", "--config", cfg(name), "--grid", "8x8", "--out", str(out)]) == code
        assert read_record(out)["verdict"] == verdict

    def test_lambda_reported_constant(self, cfg, tmp_path):
        out = tmp_path / "r.txt"
        main(["classify", "--config", cfg("cylinder"), "--grid", "8x8", "--out", str(out)])
        rec = read_record(out)
        assert rec["lambda_constant"] == "true"
        assert {float(v.split()[2]) for k, v in rec.items() if k.startswith("lambda_samples[")} == {5.0}

    def test_tolerance_flags(self, cfg, tmp_path):
        out = tmp_path / "r.txt"
        code = main(["classify", "--config", cfg("linear-both"), "--tol-residual", "1e-30",
                     "--tol-drift", "1e-30", "--out", str(out)])
        assert code == 2

    def test_deterministic(self, cfg, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        for p in (a, b):
            main(["classify", "--config", cfg("case-one"), "--grid", "8x8", "--out", str(p)])
        assert a.read_text() == b.read_text()

    def test_config_error(self, tmp_path, caplog):
        bad = tmp_path / "bad.cfg"
        bad.write_text("profile.kind = linear-f\nprofile.a1 = x\ndomain.u = 0 1\n")
        assert main(["classify", "--config", str(bad)]) == 1
        assert "line 2, field 'profile.a1'" in caplog.text


class TestVerifyCommand:
    @pytest.mark.parametrize("name", list(CONFIGS))
    def test_both_modes_agree(self, cfg, tmp_path, name):
        out = tmp_path / "v.txt"
        assert main(["verify", "--config", cfg(name), "--mode", "both", "--grid", "8x8",
                     "--out", str(out)]) == 0
        assert float(read_record(out)["discrepancy_max"]) <= 1e-5

    def test_closed_plane_all_zero(self, cfg, tmp_path):
        out = tmp_path / "v.txt"
        main(["verify", "--config", cfg("plane"), "--mode", "closed", "--grid", "8x8",
              "--out", str(out)])
        rows = [v for k, v in read_record(out).items() if k.startswith("closed[")]
        assert len(rows) == 64 and all(float(x) == 0 for r in rows for x in r.split())

    def test_grid_too_small(self, cfg, caplog):
        assert main(["verify", "--config", cfg("sine"), "--grid", "7x8"]) == 1
        assert "GridTooSmall" in caplog.text


class TestSolveOde:
    def test_constant_solution(self, tmp_path):
        out = tmp_path / "p.csv"
        assert main(["solve-ode", "--kind", "first", "--f0", "1", "--df0", "0", "--d2f0", "0",
                     "--span", "0", "1", "--samples", "11", "--out", str(out)]) == 0
        data = np.loadtxt(out, delimiter=",", skiprows=1)
        assert data.shape == (11, 4)
        np.testing.assert_array_equal(data[:, 1:], [[1, 0, 0]] * 11)

    def test_second_kind_linear_start(self, tmp_path, caplog):
        assert main(["solve-ode", "--kind", "second", "--f0", "1", "--df0", "0.6", "--d2f0", "0",
                     "--span", "0", "1", "--out", str(tmp_path / "x.csv")]) == 1
        assert "SingularDenominator" in caplog.text

    def test_near_unit_slope(self, tmp_path, caplog):
        assert main(["solve-ode", "--kind", "first", "--f0", "1", "--df0", "0.999999999",
                     "--d2f0", "0", "--span", "0", "1", "--out", str(tmp_path / "x.csv")]) == 1
        assert "InvalidInitialState" in caplog.text

    def test_csv_feeds_config(self, tmp_path):
        csv_path = tmp_path / "p.csv"
        main(["solve-ode", "--kind", "second", "--f0", "1", "--df0", "0.2", "--d2f0", "0.3",
              "--span", "0", "1", "--out", str(csv_path)])
        cfg_path = tmp_path / "s.cfg"
        cfg_path.write_text("profile.kind = from-ode-csv\nprofile.csv = p.csv\n"
                            "curve.kappa0 = 0\ndomain.v = 0 3\n")
        out = tmp_path / "r.txt"
        assert main(["classify", "--config", str(cfg_path), "--out", str(out)]) == 0
        assert read_record(out)["verdict"] == "SecondKind-II-ii"


class TestExportMesh:
    def parse(self, path):
        verts, faces = [], []
        for line in open(path):
            tag, *rest = line.split()
            (verts if tag == "v" else faces).append(rest)
        return np.array(verts, dtype=float), np.array(faces, dtype=int)

    def test_counts(self, cfg, tmp_path):
        out = tmp_path / "m.obj"
        assert main(["export-mesh", "--config", cfg("sine"), "--grid", "8x8", "--out", str(out)]) == 0
        verts, faces = self.parse(out)
        assert verts.shape == (64, 3) and faces.shape == (98, 3)
        assert faces.min() == 1 and faces.max() == 64

    def test_line_grammar(self, cfg, tmp_path):
        out = tmp_path / "m.obj"
        main(["export-mesh", "--config", cfg("sine"), "--grid", "8x8", "--out", str(out)])
        import re
        num = r"-?\d+(\.\d+)?(e[-+]\d+)?"
        for line in open(out).read().splitlines():
            assert re.fullmatch(rf"v {num} {num} {num}", line) or re.fullmatch(r"f \d+ \d+ \d+", line)

    def test_plane_coplanar(self, cfg, tmp_path):
        out = tmp_path / "m.obj"
        main(["export-mesh", "--config", cfg("plane"), "--projection", "drop:4", "--grid", "8x8",
              "--out", str(out)])
        verts, _ = self.parse(out)
        centred = verts - verts.mean(axis=0)
        assert np.linalg.svd(centred, compute_uv=False)[-1] <= 1e-9

    def test_vertices_match_surface(self, cfg, tmp_path):
        out = tmp_path / "m.obj"
        path = cfg("case-one")
        main(["export-mesh", "--config", path, "--projection", "drop:3", "--grid", "8x8",
              "--out", str(out)])
        verts, _ = self.parse(out)
        S = build_surface(load_config(path))
        us, vs = np.linspace(0, 1, 8), np.linspace(0, 3, 8)
        ref = np.array([np.delete(eval_point(S, u, v), 2) for u in us for v in vs])
        np.testing.assert_allclose(verts, ref, atol=1e-12)

    def test_degenerate_projection_warns(self, cfg, tmp_path, caplog):
        out = tmp_path / "m.obj"
        code = main(["export-mesh", "--config", cfg("sine"), "--grid", "8x8", "--out", str(out),
                     "--projection", "matrix:1,0,0,0,1,0,0,0,0,0,0,0"])
        assert code == 0 and "rank" in caplog.text

    def test_projection_parsing(self):
        np.testing.assert_array_equal(parse_projection("drop:1"), np.eye(4)[1:])
        with pytest.raises(ValueError):
            parse_projection("drop:5")
        with pytest.raises(ValueError):
            parse_projection("matrix:1,2,3")
        with pytest.raises(ValueError):
            parse_projection("oblique")
