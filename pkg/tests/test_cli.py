import json
import math

import pytest

from wavekit import ConvexCell, DilationSpec, Region, Vec, region_to_dict
from wavekit.cli import main
from wavekit.construct import dilation_to_dict


def run(*argv):
    return main(list(argv))


@pytest.fixture()
def region_file(tmp_path):
    path = tmp_path / "region.json"
    code = run(
        "construct", "--type", "scalar", "--dim", "2", "--d", "2", "--k", "1",
        "-o", str(path),
    )
    assert code == 0
    return path


class TestConstruct:
    def test_writes_region_json(self, region_file):
        data = json.loads(region_file.read_text())
        assert data["dim"] == 2 and len(data["cells"]) == 5
        assert data["metadata"]["construction"]["t"] == ["-2/3", "-2/3"]

    def test_matrix_construction(self, tmp_path):
        out = tmp_path / "m.json"
        code = run(
            "construct", "--type", "matrix",
            "--matrix", "3,0,0;0,3,0;1,0,-3", "--transpose-given",
            "-o", str(out),
        )
        assert code == 0
        meta = json.loads(out.read_text())["metadata"]["construction"]
        assert meta["q"] == 1 and meta["k"] == ["1", "1", "-1"]

    def test_neg_scalar_cell_count(self, tmp_path, capsys):
        out = tmp_path / "neg.json"
        assert run("construct", "--type", "neg-scalar", "--dim", "3", "--d", "2",
                   "-o", str(out)) == 0
        assert len(json.loads(out.read_text())["cells"]) == 3
        assert "cells=3" in capsys.readouterr().out

    def test_missing_parameters_exit_1(self):
        assert run("construct", "--type", "scalar", "--dim", "2") == 1

    def test_rejects_unknown_flags(self):
        assert run("construct", "--type", "scalar", "--dim", "2", "--d", "2",
                   "--wibble") == 1

    def test_env_qmax(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("WAVEKIT_QMAX", "1")
        code = run(
            "construct", "--type", "matrix",
            "--matrix", "2,0,1;0,-2,0;0,0,-2", "--transpose-given",
            "-o", str(tmp_path / "x.json"),
        )
        assert code == 1
        assert "q=1" in capsys.readouterr().err


class TestVerify:
    def test_wavelet_set_exits_zero(self, region_file, tmp_path, capsys):
        report = tmp_path / "report.json"
        code = run("verify", str(region_file), "--mode", "exact", "-o", str(report))
        assert code == 0
        out = capsys.readouterr().out
        assert "translation: pass" in out and "wavelet set: YES" in out
        data = json.loads(report.read_text())
        assert data["exit_code"] == 0

    def test_non_wavelet_set_exits_two(self, tmp_path):
        cube = Region(
            [ConvexCell.from_box(Vec.zero(2), Vec.ones(2))],
            metadata={"dilation": dilation_to_dict(DilationSpec.for_scalar(2, 2))},
        )
        path = tmp_path / "cube.json"
        path.write_text(json.dumps(region_to_dict(cube)))
        assert run("verify", str(path), "--mode", "exact") == 2

    def test_bad_json_exits_one(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{ nope")
        assert run("verify", str(path)) == 1

    def test_missing_file_exits_one(self):
        assert run("verify", "/nonexistent/region.json") == 1

    def test_float_dilation_marginal_exits_three(self, tmp_path):
        cube = Region(
            [ConvexCell.from_box(Vec.zero(2), Vec.ones(2))],
            metadata={
                "dilation": {
                    "kind": "positive-scalar",
                    "matrix": [[math.sqrt(2), 0.0], [0.0, math.sqrt(2)]],
                }
            },
        )
        path = tmp_path / "floaty.json"
        path.write_text(json.dumps(region_to_dict(cube)))
        # a coarse tolerance forces boundary-marginal samples: indeterminate
        code = run("verify", str(path), "--mode", "mc", "--samples", "2000",
                   "--tol", "0.4")
        assert code == 3

    def test_mc_mode(self, region_file):
        assert run("verify", str(region_file), "--mode", "mc",
                   "--samples", "5000") == 0


class TestInfo:
    def test_text_output(self, capsys):
        code = run("info", "--matrix", "2,0,1;0,-2,0;0,0,-2", "--transpose-given")
        assert code == 0
        out = capsys.readouterr().out
        assert "A^2 = 4*I" in out
        assert "does NOT exceed" in out or "False" in out

    def test_json_output(self, capsys):
        code = run("info", "--matrix", "2,0;0,2", "--json")
        assert code == 0
        data = json.loads(capsys.readouterr().out)
        assert data["power"] == 1 and data["scalar"] == "2"

    def test_unparseable_matrix(self):
        assert run("info", "--matrix", "1,2;3") == 1


class TestExport:
    def test_off_and_svg_and_csv(self, region_file, tmp_path):
        for fmt in ("off", "svg", "csv"):
            out = tmp_path / f"region.{fmt}"
            assert run("export", str(region_file), "--format", fmt,
                       "-o", str(out), "--samples", "300") == 0
            assert out.exists() and out.stat().st_size > 0

    def test_slice_export(self, tmp_path):
        region = tmp_path / "neg3.json"
        assert run("construct", "--type", "neg-scalar", "--dim", "3", "--d", "2",
                   "-o", str(region)) == 0
        out = tmp_path / "slice.svg"
        assert run("export", str(region), "--format", "svg",
                   "--slice", "x3=0", "-o", str(out)) == 0
        assert "<polygon" in out.read_text()

    def test_empty_slice_warns(self, tmp_path, capsys):
        region = tmp_path / "neg3.json"
        run("construct", "--type", "neg-scalar", "--dim", "3", "--d", "2",
            "-o", str(region))
        out = tmp_path / "empty.svg"
        assert run("export", str(region), "--format", "svg",
                   "--slice", "x1=99", "-o", str(out)) == 0
        assert "misses the region" in capsys.readouterr().err


class TestUsage:
    def test_unknown_command(self):
        assert run("frobnicate") == 1

    def test_no_command(self):
        assert run() == 1
