import json
import subprocess
import sys

import pytest

from qseq.cli import main


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def shell(cmd):
    return subprocess.run(cmd, shell=True, capture_output=True, text=True, check=False)


def test_gen_busy(capsys):
    code, out, _ = run(capsys, "gen", "--family", "busy", "--sigma", "1", "--count", "7")
    assert code == 0
    assert out == "1,1,2,6,22,90,394\n"


def test_gen_forms(capsys):
    _, out, _ = run(capsys, "gen", "--family", "busy", "--sigma", "1/2", "--count", "6", "--form", "moments")
    assert out == "1,1,3,18,171,2250\n"
    _, out, _ = run(capsys, "gen", "--family", "emptiness", "--sigma", "1/2", "--count", "4")
    assert out == "1,1/2,1,19/8\n"
    _, out, _ = run(capsys, "gen", "--family", "busy", "--count", "4", "--form", "poly")
    assert out.splitlines()[-1] == "1 + 3*sigma + 2*sigma^2"
    _, out, _ = run(capsys, "gen", "--family", "schroeder-little", "--count", "6")
    assert out == "1,1,3,11,45,197\n"


def test_gen_json_and_bfile(capsys):
    _, out, _ = run(capsys, "gen", "--family", "catalan", "--count", "4", "--format", "json")
    payload = json.loads(out)
    assert payload["values"] == ["1", "1", "2", "5"]
    assert payload["chain"] == ["gen:gf"]
    _, out, _ = run(capsys, "gen", "--family", "catalan", "--count", "3", "--format", "bfile", "--offset", "1")
    assert out == "1 1\n2 1\n3 2\n"


def test_bfile_rejects_fractions(capsys):
    code, out, err = run(capsys, "gen", "--family", "emptiness", "--sigma", "1/2", "--count", "3", "--format", "bfile")
    assert code == 2
    assert "integers" in err


def test_determinism(capsys):
    argv = ("gen", "--family", "busy-excess", "--sigma", "7/3", "--count", "12", "--format", "json")
    first = run(capsys, *argv)
    assert run(capsys, *argv) == first


def test_transform_ops(capsys, monkeypatch):
    cases = {
        ("--op", "excess", "--input", "1,1,4,36,528"): "1,2,12,132\n",
        ("--op", "lifetime", "--input", "1,1,4,36,528"): "1,4,36,528\n",
        ("--op", "em", "--input", "1,1,3,11,45"): "1,1,2,6,22\n",
        ("--op", "inv-em", "--input", "1,1,2,6,22,90"): "1,1,3,11,45\n",
        ("--op", "invert", "--input", "1,1,3,11,45"): "1,2,6,22,90\n",
        ("--op", "scale", "--factor", "2", "--input", "1,1,2,6"): "1,2,8,48\n",
        ("--op", "convolve", "--with", "1,1,4,36", "--input", "1,1,4,36"): "1,2,10,96\n",
    }
    for args, expected in cases.items():
        code, out, _ = run(capsys, "transform", *args)
        assert (code, out) == (0, expected), args
    code, out, _ = run(capsys, "transform", "--op", "em", stdin="1 1 2 5 14\n", monkeypatch=monkeypatch)
    assert out == "1,1,2,5,14\n"


def test_transform_usage_errors(capsys):
    assert run(capsys, "transform", "--op", "scale", "--input", "1,1")[0] == 2
    assert run(capsys, "transform", "--op", "convolve", "--input", "1,1")[0] == 2
    assert run(capsys, "transform", "--op", "excess", "--input", "1,0,1")[0] == 2
    assert run(capsys, "transform", "--op", "em", "--input", "1,0.5")[0] == 2


def test_cf_and_hankel(capsys):
    _, out, _ = run(capsys, "cf", "--input", "1,1,3,15,93,645,4791", "--terms", "6")
    assert out == "1,2,3,2,3,2\n"
    _, out, _ = run(capsys, "hankel", "--input", "1,1,3,15,93", "--terms", "2")
    assert out == "1,2,24\n"
    _, oracle, _ = run(capsys, "hankel", "--input", "1,1,3,15,93", "--terms", "2", "--oracle")
    assert oracle == out


def test_cf_terminating_reports(capsys):
    code, out, err = run(capsys, "cf", "--input", "1,1,1,1,1")
    assert code == 0
    assert out == "1\n"
    assert "TerminatingCF" in err


def test_oeis_verify_and_search(capsys):
    code, out, _ = run(capsys, "oeis", "verify", "--family", "busy", "--sigma", "1", "--count", "10",
                       "--anumber", "A155069")
    assert code == 0 and "match at shift 0" in out
    code, out, _ = run(capsys, "oeis", "verify", "--family", "busy", "--sigma", "1", "--count", "10",
                       "--anumber", "A006318", "--format", "json")
    payload = json.loads(out)
    assert code == 0 and payload["status"] == "match" and payload["shift"] == 1
    code, out, _ = run(capsys, "oeis", "search", "--input", "1,1,3,15,93,645")
    assert code == 0 and "A103210 shift 0" in out


def test_oeis_negative_control_exit_code(capsys):
    code, out, _ = run(capsys, "oeis", "verify", "--input", "1,2,9,42,199,1001", "--anumber", "A001003")
    assert code == 1
    assert "no match" in out
    code, out, _ = run(capsys, "oeis", "search", "--input", "1,2,9,42,199")
    assert code == 1


def test_oeis_fetch_offline_by_default(capsys):
    code, _, err = run(capsys, "oeis", "fetch", "--anumber", "A000108")
    assert code == 2
    assert "offline" in err


def test_oeis_dump_errors(capsys, tmp_path):
    code, _, err = run(capsys, "oeis", "search", "--input", "1,1,2,5,14", "--dump", str(tmp_path / "none.txt"))
    assert code == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("A000108 1,2\n")
    assert run(capsys, "oeis", "search", "--input", "1,1,2,5,14", "--dump", str(bad))[0] == 2


def test_oeis_dump_env(capsys, tmp_path, monkeypatch):
    dump = tmp_path / "mini.txt"
    dump.write_text("A999999 ,1,2,9,42,199,1001,\n")
    monkeypatch.setenv("QSEQ_OEIS_DUMP", str(dump))
    code, out, _ = run(capsys, "oeis", "search", "--input", "1,2,9,42,199")
    assert code == 0 and "A999999" in out


@pytest.mark.parametrize("route", ["takacs", "rep2", "rep3", "pk"])
def test_wait_routes(capsys, route):
    _, moments, _ = run(capsys, "wait", "--route", route, "--count", "5")
    _, mixing, _ = run(capsys, "wait", "--route", route, "--count", "5", "--form", "gf")
    assert moments == "1,2,18,252,4776\n"
    assert mixing == "1,2,9,42,199\n"


def test_wait_custom_service(capsys):
    _, out, _ = run(capsys, "wait", "--service", "custom", "--service-moments", "1,1,1,1", "--count", "3")
    assert out == "1,1/2,5/6\n"
    code, _, err = run(capsys, "wait", "--service", "custom", "--service-moments", "1,1,1", "--count", "3")
    assert code == 2


def test_bd(capsys, tmp_path):
    _, out, _ = run(capsys, "bd", "--rates", "mm1:1", "--count", "6")
    assert out == "1,-1,3,-11,45,-197\n"
    _, out, _ = run(capsys, "bd", "--rates", "mm1:2", "--count", "4", "--mode", "cf")
    assert out == "2,3,2,3\n"
    rates = tmp_path / "r.txt"
    rates.write_text("0 1 0\n1 1 1\n2 1 2\n")  # infinite-server rates
    _, out, _ = run(capsys, "bd", "--rates", f"file:{rates}", "--count", "4")
    assert out == "1,-1,2,-5\n"
    assert run(capsys, "bd", "--rates", "bogus")[0] == 2


@pytest.mark.parametrize("check", ["busy-pdf", "mixing-h1", "mixing-be", "bd-consistency"])
def test_validate_passes(capsys, check):
    code, out, _ = run(capsys, "validate", "--check", check, "--format", "json")
    rows = json.loads(out)
    assert code == 0
    assert rows and all(r["pass"] for r in rows)


def test_validate_catalan_egf_small_x(capsys):
    code, out, _ = run(capsys, "validate", "--check", "catalan-egf", "--x", "1/2", "--tol", "1e-10")
    assert code == 0
    assert "PASS" in out


def test_config_defaults(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "qseq.json"
    cfg.write_text(json.dumps({"format": "json", "gen": {"family": "busy", "sigma": "2", "count": 4}}))
    monkeypatch.setenv("QSEQ_CONFIG", str(cfg))
    code, out, _ = run(capsys, "gen")
    assert code == 0
    assert json.loads(out)["values"] == ["1", "1", "3", "15"]
    # explicit flags still win
    _, out, _ = run(capsys, "gen", "--sigma", "3", "--format", "plain")
    assert out == "1,1,4,28\n"


def test_bad_config(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "broken.json"
    cfg.write_text("{")
    monkeypatch.setenv("QSEQ_CONFIG", str(cfg))
    assert run(capsys, "gen", "--family", "busy")[0] == 2


@pytest.mark.parametrize("sigma", ["1", "2", "3"])
def test_pipe_em_of_emptiness_is_busy(sigma):
    exe = f"{sys.executable} -m qseq"
    piped = shell(f"{exe} gen --family emptiness --sigma {sigma} --count 9 | {exe} transform --op em")
    direct = shell(f"{exe} gen --family busy --sigma {sigma} --count 9")
    assert piped.returncode == 0 and direct.returncode == 0
    assert piped.stdout == direct.stdout


def test_pipe_into_oeis_search():
    exe = f"{sys.executable} -m qseq"
    res = shell(f"{exe} gen --family emptiness --sigma 3 --count 8 | {exe} oeis search")
    assert res.returncode == 0
    assert "A131763 shift 0" in res.stdout


def test_console_script_help():
    res = shell("qseq --help")
    assert res.returncode == 0
    assert "gen" in res.stdout
