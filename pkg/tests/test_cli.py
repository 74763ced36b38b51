import json
import subprocess
import sys

import numpy as np
import pytest

from fixdyn import Polynomial, RationalMap, analyze
from fixdyn.cli import parse_complex, run
from fixdyn.documents import dumps, map_to_dict, parse_map, report_from_dict, report_to_dict
from fixdyn.errors import InvariantViolation, ParseError
from fixdyn.julia import figure_fixed_points, read_ppm


def write_doc(tmp_path, doc, name="map.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def invoke(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


SQUARE_DOC = {"kind": "polynomial", "coeffs": [[0, 0], [0, 0], [1, 0]]}
INV_CUBE_DOC = {"kind": "rational", "numerator": [[1, 0]], "denominator": [[0, 0], [0, 0], [0, 0], [1, 0]]}


class TestParseMap:
    def test_quadratic(self, tmp_path):
        P = parse_map(write_doc(tmp_path, {"kind": "polynomial", "coeffs": [[0.25, 0], [0, 0], [1, 0]]}))
        assert P == Polynomial([0.25, 0, 1])

    def test_rational(self, tmp_path):
        doc = {"kind": "rational", "numerator": [[0, 0], [2, 0]], "denominator": [[1, 0], [1, 0], [1, 0]]}
        R = parse_map(write_doc(tmp_path, doc))
        assert isinstance(R, RationalMap)
        assert abs(R(1) - 2 / 3) < 1e-15

    def test_common_factor(self, tmp_path):
        # (z-1) z / ((z-1)(z+2))
        doc = {"kind": "rational", "numerator": [[0, 0], [-1, 0], [1, 0]], "denominator": [[-2, 0], [1, 0], [1, 0]]}
        with pytest.raises(InvariantViolation):
            parse_map(write_doc(tmp_path, doc))

    def test_zero_denominator(self, tmp_path):
        doc = {"kind": "rational", "numerator": [[1, 0]], "denominator": [[0, 0]]}
        with pytest.raises(InvariantViolation):
            parse_map(write_doc(tmp_path, doc))

    @pytest.mark.parametrize(
        "text",
        ["{not json", '{"kind": "cubic", "coeffs": []}', '{"kind": "polynomial", "coeffs": [[1]]}', "[1, 2]"],
    )
    def test_malformed(self, tmp_path, text):
        path = tmp_path / "bad.json"
        path.write_text(text)
        with pytest.raises(ParseError):
            parse_map(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            parse_map(tmp_path / "nope.json")


def test_parse_complex():
    assert parse_complex("1,2") == 1 + 2j
    assert parse_complex("-0.5") == -0.5
    assert parse_complex("3j") == 3j
    assert parse_complex("1+2i") == 1 + 2j


class TestAnalyze:
    def test_square(self, tmp_path, capsys):
        code, out, _ = invoke(capsys, "analyze", write_doc(tmp_path, SQUARE_DOC))
        assert code == 0
        doc = json.loads(out)
        assert doc["rfpt_sum"] == [1, 0]
        assert doc["finite_sum"] == [0, 0]
        assert doc["rnfp_witness"] == [1, 0]
        assert [f["location"] for f in doc["fixed_points"]] == [[0, 0], [1, 0], "inf"]
        assert doc["geometry"]["equidistant"] is True

    def test_inverse_cube_no_witness(self, tmp_path, capsys):
        code, out, _ = invoke(capsys, "analyze", write_doc(tmp_path, INV_CUBE_DOC))
        assert code == 0
        doc = json.loads(out)
        assert doc["rnfp_witness"] is None
        assert doc["geometry"] is None
        for f in doc["fixed_points"]:
            assert f["multiplier"] == [-3, 0]

    def test_out_file_and_roundtrip(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        doc = {"kind": "polynomial", "coeffs": [[0.3, -0.1], [0, 0], [1, 0], [0.5, 0.5]]}
        assert invoke(capsys, "analyze", write_doc(tmp_path, doc), "--out", out)[0] == 0
        text = out.read_text()
        data = json.loads(text)
        report, verdict = report_from_dict(data)
        m = parse_map(tmp_path / "map.json")
        assert dumps(report_to_dict(m, report, verdict)) == text

    def test_deterministic(self, tmp_path, capsys):
        path = write_doc(tmp_path, {"kind": "polynomial", "coeffs": [[1, 2], [-1, 0], [0, 0], [2, 0]]})
        first = invoke(capsys, "analyze", path)[1]
        assert invoke(capsys, "analyze", path)[1] == first

    def test_tolerance_flags(self, tmp_path, capsys):
        path = write_doc(tmp_path, SQUARE_DOC)
        assert invoke(capsys, "--tol-fix", "1e-9", "--config", "tau_mult=1e-7", "analyze", path)[0] == 0
        code, _, err = invoke(capsys, "--config", "bogus=1", "analyze", path)
        assert code == 2 and "--config" in err


class TestConstruct:
    def test_imaginary_k_cubic(self, capsys):
        code, out, _ = invoke(capsys, "construct", "remark5", "--k-imag", "1.2", "--alpha", "0.8333333333333333")
        assert code == 0
        doc = json.loads(out)
        got = np.array([complex(*c) for c in doc["coeffs"]])
        want = [0, 1 + 1j, -2.2j, 1.2j]
        assert doc["kind"] == "polynomial"
        assert np.allclose(got, want, atol=1e-15)

    @pytest.mark.parametrize(
        "argv",
        [
            ["remark5", "--k-imag", "1.2", "--alpha", "0.8333333333333333"],
            ["ngon", "--center", "1,0", "--radius", "2", "--phase", "0.6283185307179586", "--n", "4", "--M", "0,1"],
            ["fixedpoints", "--alphas", "0", "1", "2+1j", "--k", "1+1j"],
            ["realpart1", "--simple", "0", "2", "--multiple", "1:2", "--k", "1"],
        ],
    )
    def test_roundtrip_byte_identical(self, tmp_path, capsys, argv):
        out = tmp_path / "m.json"
        assert invoke(capsys, "construct", *argv, "--out", out)[0] == 0
        text = out.read_text()
        assert dumps(map_to_dict(parse_map(out))) == text

    def test_domain_error_json(self, capsys):
        code, _, err = invoke(capsys, "construct", "remark5", "--k-imag", "1", "--alpha", "1")
        assert code == 1
        assert json.loads(err)["error"] == "InvalidAlpha"
        code, _, err = invoke(capsys, "construct", "ngon", "--center", "0", "--radius", "-1", "--phase", "1", "--n", "3", "--M", "1")
        assert code == 1 and json.loads(err)["error"] == "InvariantViolation"

    def test_usage_errors(self, capsys):
        code, _, err = invoke(capsys, "construct", "remark5", "--k-imag", "x", "--alpha", "2")
        assert code == 2 and "--k-imag" in err
        assert invoke(capsys)[0] == 2
        assert invoke(capsys, "frobnicate")[0] == 2


class TestGeometry:
    def test_rectangle(self, tmp_path, capsys):
        out = tmp_path / "m.json"
        invoke(capsys, "construct", "fixedpoints", "--alphas", "0", "2", "2+1j", "1j", "--k", "1+1j", "--out", out)
        code, text, _ = invoke(capsys, "geometry", out)
        assert code == 0
        doc = json.loads(text)
        assert doc["equidistant"] and doc["shape"] == "rectangle"
        assert abs(doc["common_distance"] - 2 * 10**0.5) < 1e-9

    def test_rational_rejected(self, tmp_path, capsys):
        code, _, err = invoke(capsys, "geometry", write_doc(tmp_path, INV_CUBE_DOC))
        assert code == 1 and json.loads(err)["error"] == "PreconditionUnmet"


class TestJulia:
    @pytest.mark.parametrize("fig", ["2a", "2b"])
    def test_figure(self, tmp_path, capsys, fig):
        out = tmp_path / f"{fig}.ppm"
        code, text, _ = invoke(capsys, "julia", "--figure", fig, "--size", "64x64", "--out", out)
        assert code == 0
        w, h, px = read_ppm(out)
        assert (w, h) == (64, 64)
        assert json.loads(text)["max_iter"] == 400

    def test_map_file(self, tmp_path, capsys):
        out = tmp_path / "sq.ppm"
        code, _, _ = invoke(capsys, "julia", write_doc(tmp_path, SQUARE_DOC), "--size", "32x16", "--max-iter", "50", "--out", out)
        assert code == 0 and read_ppm(out)[:2] == (32, 16)

    def test_usage(self, tmp_path, capsys):
        assert invoke(capsys, "julia", "--figure", "2a")[0] == 2
        assert invoke(capsys, "julia", "--figure", "3c", "--out", tmp_path / "x.ppm")[0] == 2
        assert invoke(capsys, "julia", "--out", tmp_path / "x.ppm")[0] == 2
        assert invoke(capsys, "julia", "--figure", "2a", "--size", "8x8", "--out", tmp_path / "x.ppm")[0] == 2

    def test_io_failure(self, tmp_path, capsys):
        code, _, err = invoke(capsys, "julia", "--figure", "2a", "--size", "16x16", "--out", tmp_path / "no" / "x.ppm")
        assert code == 1 and json.loads(err)["error"] == "IoFailure"


class TestPeriodic:
    def test_square_two_cycle(self, tmp_path, capsys):
        code, out, _ = invoke(capsys, "periodic", write_doc(tmp_path, SQUARE_DOC), "-p", "2")
        assert code == 0
        doc = json.loads(out)
        assert len(doc["cycles"]) == 1
        assert np.allclose(doc["cycle_multipliers"][0], [4, 0], atol=1e-9)

    def test_basilica(self, tmp_path, capsys):
        doc = {"kind": "polynomial", "coeffs": [[-1, 0], [0, 0], [1, 0]]}
        code, out, _ = invoke(capsys, "periodic", write_doc(tmp_path, doc), "-p", "2")
        data = json.loads(out)
        assert code == 0 and sorted(p[0] for p in data["cycles"][0]) == [-1, 0]


def test_module_entry_point(tmp_path):
    path = write_doc(tmp_path, SQUARE_DOC)
    proc = subprocess.run([sys.executable, "-m", "fixdyn", "analyze", path], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["rfpt_sum"] == [1, 0]
    proc = subprocess.run([sys.executable, "-m", "fixdyn", "analyze"], capture_output=True, text=True)
    assert proc.returncode == 2
