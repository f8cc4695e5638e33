import csv
import json
import xml.etree.ElementTree as ET

import pytest

from mmrelay.cli import main
from mmrelay.config import SimConfig, parse_config
from mmrelay.errors import ConfigError

SVG = "{http://www.w3.org/2000/svg}"


def test_empty_config_gives_defaults(tmp_path):
    cfg = tmp_path / "empty.cfg"
    cfg.write_text("# nothing\n\n")
    config = parse_config(cfg)
    assert config == SimConfig()
    assert (config.m, config.n, config.width, config.height) == (3, 10, 1000.0, 1000.0)
    assert 1 / config.beta == pytest.approx(141.4)
    assert config.epsilon == 1e-4 and config.pair_file_sizes() == (1e9,) * 3
    p = config.channel_params()
    assert (p.alpha_nlos, p.alpha_los, p.a_nlos, p.a_los, p.m_t, p.m_r, p.p_t, p.w) == (3.88, 2.2, 1, 1, 4, 4, 1, 1e9)


def test_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("epsilon = 0.5\nn = 4  # fewer relays\nfile_sizes = 1e9, 2e9, 3e9\n")
    config = parse_config(cfg)
    assert config.epsilon == 0.5 and config.n == 4
    assert config.pair_file_sizes() == (1e9, 2e9, 3e9)
    assert parse_config(cfg, {"epsilon": "0.25"}).epsilon == 0.25


@pytest.mark.parametrize(
    "text,fragment",
    [("epsilon = 1.5\n", "epsilon"), ("bogus = 1\n", "line 1"), ("m = 3\nn = ten\n", "line 2"), ("n 3\n", "line 1")],
)
def test_config_errors(tmp_path, text, fragment):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(text)
    with pytest.raises(ConfigError, match=fragment):
        parse_config(cfg)


def test_simulate_json_trace_and_render(tmp_path, capsys):
    out, trace, svg = tmp_path / "run.json", tmp_path / "trace.jsonl", tmp_path / "pf.svg"
    assert main(["simulate", "--seed", "4", "--json", str(out), "--trace", str(trace), "--svg", str(svg)]) == 0
    table = capsys.readouterr().out.splitlines()
    assert "prop-fair" in table[0] and "min-delay" in table[0]
    assert sum(line.startswith("(s") for line in table) == 3

    doc = json.loads(out.read_text())
    assert set(doc["record"]["delays"]) == {"direct", "pf", "md"}
    records = [json.loads(line) for line in trace.read_text().splitlines()]
    assert {r["strategy"] for r in records} == {"pf", "md"}
    assert {"round", "relay", "greedy", "taken", "mutated", "delta_potential"} <= set(records[0])

    rendered = tmp_path / "md.svg"
    assert main(["render", str(out), "--svg", str(rendered), "--strategy", "md"]) == 0
    root = ET.parse(rendered).getroot()
    glyphs = [e for e in root.iter() if e.get("class") in ("source", "destination", "relay")]
    assert len(glyphs) == 16
    assert len([g for g in root.iter(f"{SVG}g") if g.get("class") == "path"]) == 3
    ET.parse(svg)


def test_render_direct_paths_dashed(tmp_path):
    out, svg = tmp_path / "run.json", tmp_path / "direct.svg"
    assert main(["simulate", "--seed", "1", "--set", "n=0", "--json", str(out)]) == 0
    assert main(["render", str(out), "--svg", str(svg)]) == 0
    lines = list(ET.parse(svg).getroot().iter(f"{SVG}line"))
    assert len(lines) == 3
    assert all(line.get("class") == "nlos" and line.get("stroke-dasharray") for line in lines)


def test_render_missing_fields(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"record": {}}))
    assert main(["render", str(bad), "--svg", str(tmp_path / "x.svg")]) != 0
    assert main(["render", str(tmp_path / "absent.json"), "--svg", str(tmp_path / "x.svg")]) == 2


def test_batch_csv_and_summary(tmp_path, capsys):
    csv_a, csv_b, summary = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "s.json"
    assert main(["batch", "--runs", "1", "--seed", "2", "--csv", str(csv_a), "--json", str(summary)]) == 0
    rows = list(csv.DictReader(csv_a.open()))
    assert len(rows) == 3 * 3
    assert "mean sum of delays" in capsys.readouterr().out
    assert json.loads(summary.read_text())["stats"]["runs"] == 1
    assert main(["batch", "--runs", "1", "--seed", "2", "--csv", str(csv_b)]) == 0
    assert csv_a.read_bytes() == csv_b.read_bytes()


def test_batch_jobs_do_not_change_output(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["batch", "--runs", "6", "--csv", str(a)]) == 0
    assert main(["batch", "--runs", "6", "--jobs", "2", "--csv", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_oracle_command(capsys):
    assert main(["oracle", "--runs", "3"]) == 0
    assert "3/3 audits passed" in capsys.readouterr().out
    assert main(["oracle", "--runs", "1", "--set", "m=3", "--set", "n=10"]) == 3


def test_usage_errors():
    assert main(["simulate", "--epsilon", "1.5"]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1


def test_cli_matches_library(tmp_path):
    from mmrelay.harness import run_single

    out = tmp_path / "run.json"
    main(["simulate", "--seed", "8", "--json", str(out)])
    doc = json.loads(out.read_text())
    rec = run_single(8, SimConfig(seed=8))
    assert doc["record"]["delays"]["pf"] == list(rec.delays["pf"])
