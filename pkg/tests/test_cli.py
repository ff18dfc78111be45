"""Command-line interface: flags, config files, outputs, exit codes."""
import json

import pytest

from triline.cli import RunConfig, build_config, load_config_file, main, make_parser
from triline.errors import ValidationError


def run(args):
    return main(args)


def test_expand_kmax_zero(tmp_path, capsys):
    out = tmp_path / "f.json"
    assert run(["expand", "--kmax", "0", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["f_of_g"]["rendered"] == "ln(pi)"
    assert payload["f_of_g"]["terms"] == []


def test_expand_first_order(tmp_path):
    out = tmp_path / "f.json"
    assert run(["expand", "--kmax", "1", "--convention", "action",
                "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["f_of_g"]["rendered"] == "ln(pi) - i*g"
    term, = payload["f_of_g"]["terms"]
    assert (term["im_num"], term["im_den"]) == (-1, 1)


def test_expand_cap_exit_2():
    assert run(["expand", "--kmax", "99"]) == 2


def test_expand_csv(tmp_path):
    out = tmp_path / "f.csv"
    assert run(["expand", "--kmax", "1", "--format", "csv",
                "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].split(",")[:4] == ["section", "l", "p", "k"]
    assert any(line.startswith("f_of_g") for line in lines)


def test_knots_k1(tmp_path):
    out = tmp_path / "k.jsonl"
    assert run(["knots", "--kmax", "1", "--out", str(out)]) == 0
    records = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(records) == 2
    assert all(r["code"] == "O1U1" and r["reduced_code"] == "" for r in records)


def test_knots_contains_trefoil(tmp_path):
    out = tmp_path / "k.jsonl"
    assert run(["knots", "--kmax", "3", "--out", str(out)]) == 0
    codes = [json.loads(line)["code"] for line in out.read_text().splitlines()]
    assert "O1U2O3U1O2U3" in codes


def test_outputs_thread_independent(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["expand", "--kmax", "2", "--threads", "1", "--out", str(a)]) == 0
    assert run(["expand", "--kmax", "2", "--threads", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_suites_pass():
    assert run(["verify", "logcheck", "--kmax", "2"]) == 0
    assert run(["verify", "euler", "--kmax", "2"]) == 0
    assert run(["verify", "propagators", "--N", "1", "--d", "1"]) == 0
    assert run(["verify", "bound", "--N", "2", "--d", "1", "--eps", "0.2"]) == 0


def test_verify_unknown_suite_rejected():
    with pytest.raises(SystemExit) as exc:
        run(["verify", "nonsense"])
    assert exc.value.code == 2


def test_config_file_precedence(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("kmax = 2\nconvention = paper_series\n# note\n")
    out = tmp_path / "o.json"
    assert run(["expand", "--config", str(cfg_file), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["z_series"]["kmax"] == 2
    assert run(["expand", "--config", str(cfg_file), "--kmax", "1",
                "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["z_series"]["kmax"] == 1
    assert payload["z_series"]["convention"] == "paper_series"


def test_config_file_rejects_unknown_keys(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("frobnicate = 1\n")
    assert run(["expand", "--config", str(bad)]) == 2
    with pytest.raises(ValidationError):
        load_config_file(str(bad))


def test_run_config_validation():
    cfg = RunConfig(command="expand", kmax=9)
    with pytest.raises(ValidationError):
        cfg.validate()
    with pytest.raises(ValidationError):
        RunConfig(command="expand", threads=0).validate()
    with pytest.raises(ValidationError):
        RunConfig(command="expand", eps=(0.0,)).validate()
    with pytest.raises(ValidationError):
        RunConfig(command="expand", format="xml").validate()


def test_parser_flags_exist():
    parser = make_parser()
    args = parser.parse_args(["expand", "--kmax", "3", "--N", "1,2", "--d", "1",
                              "--eps", "0.1,0.01", "--convention", "action",
                              "--action", "standard", "--threads", "2",
                              "--out", "x.json", "--format", "json"])
    cfg = build_config(args)
    assert cfg.N == (1, 2) and cfg.eps == (0.1, 0.01) and cfg.threads == 2


def test_wick_ordered_expand(tmp_path):
    out = tmp_path / "wo.json"
    assert run(["expand", "--kmax", "2", "--action", "wick_ordered",
                "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    ks = {t["k"] for t in payload["z_series"]["terms"]}
    assert 1 not in ks      # order g is pure tadpole, removed by ordering
