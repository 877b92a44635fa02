import io as sio
import json

import pytest

from vartoeplitz.cli import parse_sizes, run


def call(*argv):
    out, err = sio.StringIO(), sio.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_parse_sizes():
    assert parse_sizes("64,128") == [64, 128]
    assert parse_sizes("4..7") == [4, 5, 6, 7]
    assert parse_sizes("10..40:10") == [10, 20, 30, 40]
    assert parse_sizes("64..512:x2") == [64, 128, 256, 512]
    for bad in ("", "1", "a..b", "4..8:x1", "3,1"):
        with pytest.raises(Exception):
            parse_sizes(bad)


def test_symbol_stationary_extrema():
    code, out, _ = call("symbol", "--stationary", "--r", "1")
    assert code == 0
    rows = dict(line.split(",") for line in out.splitlines()[2:])
    assert abs(float(rows["min"]) - 0.10605) < 1e-4
    assert abs(float(rows["max"]) - 1.07325) < 1e-4
    assert abs(float(rows["z_e"]) - 1.3486) < 1e-3 and abs(float(rows["P_z_e"]) - 0.0843) < 1e-3


def test_symbol_measure_and_sample():
    code, out, _ = call("symbol", "measure", "--r", "2.5", "--format", "json")
    assert code == 0 and json.loads(out)["mu"] > 0
    code, out, _ = call("symbol", "sample", "--phi", "square", "--nx", "3", "--ntheta", "4")
    assert code == 0 and out.splitlines()[1] == "x,theta,value" and len(out.splitlines()) == 2 + 12
    code, out, _ = call("symbol", "sample", "--quantiles", "--nx", "3", "--ntheta", "4")
    assert out.splitlines()[1] == "k,q_k"


def test_build_emits_ratios_l_and_s():
    code, out, _ = call("build", "--map", "power2", "--n", "6")
    assert code == 0
    headers = [line for line in out.splitlines() if line.startswith("#")]
    assert headers == ["# vartoeplitz:ratios v1", "# vartoeplitz:matrix-coo v1", "# vartoeplitz:matrix-coo v1"]
    assert out.splitlines()[2] == "2,3"
    code, out, _ = call("build", "--r", "1", "--n", "4", "--format", "json", "--matrix", "L")
    doc = json.loads(out)
    assert doc["L"][1][0] == pytest.approx(-0.9672 / 2) and "S" not in doc


def test_eigs_and_svd():
    code, out, _ = call("eigs", "--n", "20")
    assert code == 0 and out.startswith("# vartoeplitz:spectrum-eigenvalues v1\nj,value\n")
    assert len(out.splitlines()) == 2 + 19
    code, out, _ = call("svd", "--grid", "random", "--n", "30", "--format", "json")
    assert code == 0 and len(json.loads(out)["values"]) == 29


def test_ratios_file_input(tmp_path):
    f = tmp_path / "r.csv"
    f.write_text("r\n1\n1\n1\n")
    code, out, _ = call("eigs", "--ratios-file", str(f))
    assert code == 0 and len(out.splitlines()) == 2 + 3


def test_psd_scan_claims():
    code, out, _ = call("psd-scan", "--map", "power2", "--n", "64..80", "--expect", "pd", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["r_2_exact"] == "3" and doc["first_indefinite"] is None
    code, out, _ = call("psd-scan", "--map", "power3", "--n", "2..10", "--expect", "indefinite", "--format", "json")
    assert code == 0 and json.loads(out)["first_indefinite"] == 3
    code, _, err = call("psd-scan", "--map", "power3", "--n", "2..10", "--expect", "pd")
    assert code == 2 and "claim" in err


def test_psd_scan_random_grid_reports_only():
    code, out, _ = call("psd-scan", "--grid", "random", "--n", "50,100", "--solver", "jacobi")
    assert code == 0 and len(out.splitlines()) == 4


def test_decompose():
    code, out, _ = call("decompose", "--r", "1", "--delta", "0.5", "--eta", "0.1", "--n", "20",
                        "--format", "json", "--expect", "feasible")
    doc = json.loads(out)
    assert code == 0 and doc["found"] and doc["verification"]["all_psd"] and doc["lambda_min_2S"] >= 0
    code, out, _ = call("decompose", "--r", "1", "--n", "16", "--expect", "infeasible")
    assert code == 0 and "feasible_possible,false" in out
    code, _, _ = call("decompose", "--r", "1", "--n", "16", "--expect", "feasible")
    assert code == 2
    code, out, _ = call("decompose", "--r", "1", "--delta", "0.5", "--eta", "0.1", "--n", "8")
    assert out.splitlines()[1] == "i,a,b,c,d"


def test_small_studies():
    code, out, _ = call("extremes", "--n", "16,32,64", "--order-tol", "0.5", "--format", "json")
    assert code == 0 and json.loads(out)["strictly_inside"]
    code, out, _ = call("count", "--r", "2.5", "--n", "32,64")
    assert code == 0 and out.splitlines()[1] == "n,count,predicted,gap,lambda_min,lambda_max"
    code, out, _ = call("momentary", "--n", "32,64,128")
    assert code == 0 and out.splitlines()[1] == "n,gap_toeplitz,gap_momentary"
    code, out, _ = call("dist-test", "--n", "40,80", "--delta", "1", "--eta", "-0.5", "--kind", "eig")
    assert code == 0 and len(out.splitlines()) == 4


def test_usage_errors():
    assert call()[0] == 1
    assert call("bogus")[0] == 1
    assert call("eigs", "--bogus")[0] == 1
    assert call("eigs", "--n", "1")[0] == 1
    assert call("eigs", "--n", "8,16")[0] == 1
    assert call("psd-scan", "--map", "spiral")[0] == 1
    assert call("symbol", "sample", "--phi", "zigzag")[0] == 1
    assert call("build", "--grid", "constant")[0] == 1
    code, out, _ = call("eigs", "--help")
    assert code == 0 and "usage" in out.lower()


def test_config_file(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("command = psd-scan\nmap = power3\nn = 2..6\nformat = json\n")
    code, out, _ = call("--config", str(cfg))
    assert code == 0 and json.loads(out)["first_indefinite"] == 3
    # command-line flags override the file
    code, out, _ = call("--config", str(cfg), "psd-scan", "--map", "power2")
    assert json.loads(out)["first_indefinite"] is None
    cfg.write_text("map = power3\ncolour = red\n")
    assert call("psd-scan", "--config", str(cfg))[0] == 1
    cfg.write_text("stationary = true\nr = 1\n")
    code, out, _ = call("symbol", "--config", str(cfg))
    assert code == 0 and "min,0.1060" in out
    cfg.write_text("command = eigs\n")
    assert call("symbol", "--config", str(cfg))[0] == 1
    assert call("eigs", "--config", str(tmp_path / "missing.cfg"))[0] == 1


def test_byte_identical_outputs(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["psd-scan", "--grid", "random", "--seed", "7", "--n", "20,40", "--solver", "jacobi"]
    assert call(*args, "--out", str(a))[0] == 0
    assert call(*args, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.csv"
    call(*args[:-2], "--seed", "8", "--out", str(c))
    assert c.read_bytes() != a.read_bytes()
