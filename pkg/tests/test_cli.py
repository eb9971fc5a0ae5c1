# tests/test_cli.py

import json
import re

import pytest

from marketnet.errors import EXIT_DATA, EXIT_OK, EXIT_USAGE
from marketnet.hier import parse_newick
from marketnet.main import run
from marketnet.synth import RegimeSpec, SynthSpec, generate, regime_windows

SPEC = SynthSpec(n_assets=10, n_days=240, seed=5, regimes=(
    RegimeSpec("calm", 120, 0.3, 0.01, 2, 0.3),
    RegimeSpec("crisis", 120, 0.7, 0.02, 2, 0.3),
))


@pytest.fixture
def prices(tmp_path):
    path = tmp_path / "prices.csv"
    panel = generate(SPEC)
    path.write_text(panel.to_csv(), encoding="utf-8")
    sectors = "".join(f"{t},{s}\n" for t, s in panel.meta.items())
    (tmp_path / "sectors.csv").write_text(sectors, encoding="utf-8")
    return path


def window_args():
    args = []
    for w in regime_windows(SPEC):
        args += ["--window", f"{w.name}:{w.start.isoformat()}:{w.end.isoformat()}"]
    return args


def analyze(prices, out, *extra):
    return run(["-n", "analyze", "-q", "--input", str(prices), "--out", str(out), *window_args(), *extra])


def test_analyze_writes_reports_and_window_files(prices, tmp_path):
    out = tmp_path / "out"
    assert analyze(prices, out, "--export", "dot", "--export", "newick") == EXIT_OK
    report = json.loads((out / "report.json").read_text(encoding="utf-8"))
    assert [w["window"]["name"] for w in report["windows"]] == ["calm", "crisis"]
    calm, crisis = report["windows"]
    assert calm["window_stats"]["mean_correlation"] < crisis["window_stats"]["mean_correlation"]

    summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
    assert summary["highest_mean_correlation"] == "crisis"
    for name in ("calm", "crisis"):
        for f in ("histogram.tsv", "sweep.tsv", "mst_degree.tsv", "mst.dot", "dendrogram.nwk"):
            assert (out / name / f).is_file()


def test_identical_runs_give_identical_report_bytes(prices, tmp_path):
    assert analyze(prices, tmp_path / "a", "--seed", "3") == EXIT_OK
    assert analyze(prices, tmp_path / "b", "--seed", "3", "--workers", "2") == EXIT_OK
    a = (tmp_path / "a" / "report.json").read_bytes()
    b = (tmp_path / "b" / "report.json").read_bytes()
    assert a == b


def test_cli_flags_reach_the_report(prices, tmp_path):
    out = tmp_path / "out"
    code = analyze(prices, out, "--theta", "0.4", "--sigma-mult", "2", "--scope", "whole",
                   "--fit-range", "0.2:0.6", "--log-binning", "--band-mode", "merge")
    assert code == EXIT_OK
    rep = json.loads((out / "report.json").read_text(encoding="utf-8"))["windows"][0]
    params = rep["provenance"]["parameters"]
    assert params["thetas"] == [0.4]
    assert params["sigma_multiples"] == [2]
    assert params["scope"] == "whole"
    assert params["clustering_range"] == [0.2, 0.6]
    assert rep["provenance"]["conventions"]["fit_binning"] == "log2"
    assert rep["hierarchy"]["bands"]["mode"] == "merge"
    assert "0.400000" in rep["threshold_networks"]["networks"]


def test_config_file_with_cli_override(prices, tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text(f'input = "{prices.name}"\noutput_dir = "from_file"\nstages = ["stats"]\n', encoding="utf-8")
    assert run(["-n", "analyze", "-q", "-c", str(cfg), "--out", str(tmp_path / "cli")]) == EXIT_OK
    assert (tmp_path / "cli" / "report.json").is_file()
    assert not (tmp_path / "from_file").exists()
    rep = json.loads((tmp_path / "cli" / "report.json").read_text(encoding="utf-8"))["windows"][0]
    assert rep["window"]["name"] == "full"
    assert rep["mst"] == {}


def test_empty_input_is_a_data_error(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("", encoding="utf-8")
    assert run(["-n", "analyze", "-q", "--input", str(empty), "--out", str(tmp_path / "o")]) == EXIT_DATA
    assert "Empty" in capsys.readouterr().out


def test_missing_input_file_and_missing_flag(tmp_path):
    assert run(["-n", "analyze", "-q", "--input", str(tmp_path / "nope.csv")]) == EXIT_DATA
    assert run(["-n", "analyze", "-q"]) == EXIT_DATA


def test_window_outside_the_panel_fails_with_data_code(prices, tmp_path):
    code = run(["-n", "analyze", "-q", "--input", str(prices), "--out", str(tmp_path / "o"),
                "--window", "ghost:1990-01-01:1990-12-31"])
    assert code == EXIT_DATA


@pytest.mark.parametrize("argv", [
    ["analyze", "--window", "bad-window"],
    ["analyze", "--theta", "1.5"],
    ["analyze", "--fit-range", "0.5"],
    ["analyze", "--scope", "everything"],
    ["frobnicate"],
])
def test_usage_errors_exit_one(argv):
    with pytest.raises(SystemExit) as err:
        run(["-n", *argv])
    assert err.value.code == EXIT_USAGE


def test_invalid_config_is_a_usage_error(tmp_path):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("workers = \"many\"\n", encoding="utf-8")
    assert run(["-n", "analyze", "-q", "-c", str(cfg)]) == EXIT_USAGE


def test_synth_default_scenario(tmp_path):
    out = tmp_path / "synthetic.csv"
    assert run(["-n", "synth", "--out", str(out)]) == EXIT_OK
    lines = out.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 1 + 1201
    assert len(lines[0].split(",")) == 51
    assert (tmp_path / "synthetic.sectors.csv").read_text(encoding="utf-8").startswith("ticker,sector\n")
    windows = (tmp_path / "synthetic.windows.csv").read_text(encoding="utf-8").splitlines()
    assert [w.split(",")[0] for w in windows] == ["name", "calm", "crisis", "recovery"]


def test_synth_is_byte_deterministic(tmp_path):
    assert run(["-n", "synth", "--out", str(tmp_path / "a.csv"), "--seed", "8"]) == EXIT_OK
    assert run(["-n", "synth", "--out", str(tmp_path / "b.csv"), "--seed", "8"]) == EXIT_OK
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_synth_rejects_mismatched_regime_days(tmp_path):
    cfg = tmp_path / "bad.toml"
    cfg.write_text(
        "[synth]\nn_assets = 5\nn_days = 100\n"
        "[[synth.regimes]]\nname = \"a\"\nn_days = 90\ncommon_loading = 0.5\nidiosyncratic_sigma = 0.01\n",
        encoding="utf-8",
    )
    out = tmp_path / "never.csv"
    assert run(["-n", "synth", "-c", str(cfg), "--out", str(out)]) == EXIT_DATA
    assert not out.exists()


def test_export_mst_inline_as_dot(prices, tmp_path):
    out = tmp_path / "mst.dot"
    assert run(["-n", "export", "--input", str(prices), "--sectors", str(prices.parent / "sectors.csv"),
                "--artifact", "mst", "--export", "dot", "--out", str(out)]) == EXIT_OK
    text = out.read_text(encoding="utf-8")
    assert len(re.findall(r'^  "[^"]+" \[label=', text, re.M)) == 10
    assert len(re.findall(r" -- ", text)) == 9
    assert 'sector="S1"' in text


def test_export_complete_threshold_graph(prices, tmp_path):
    out = tmp_path / "all.tsv"
    assert run(["-n", "export", "--input", str(prices), "--artifact", "threshold", "--theta=-1",
                "--export", "edgelist", "--out", str(out)]) == EXIT_OK
    assert len(out.read_text(encoding="utf-8").splitlines()) == 10 * 9 // 2


def test_export_dendrogram_reparses(prices, tmp_path):
    out = tmp_path / "tree.nwk"
    assert run(["-n", "export", "--input", str(prices), *window_args()[:2], "--artifact", "dendrogram",
                "--export", "newick", "--out", str(out)]) == EXIT_OK
    tree = parse_newick(out.read_text(encoding="utf-8"))
    assert tree.n == 10
    assert len(tree.merges) == 9


def test_export_from_existing_report(prices, tmp_path):
    assert analyze(prices, tmp_path / "run") == EXIT_OK
    out = tmp_path / "crisis_mst.graphml"
    code = run(["-n", "export", "--report", str(tmp_path / "run" / "report.json"), *window_args()[2:],
                "--artifact", "mst", "--export", "graphml", "--out", str(out)])
    assert code == EXIT_OK
    assert out.read_text(encoding="utf-8").count("<edge ") == 9

    nwk = tmp_path / "calm.nwk"
    assert run(["-n", "export", "--report", str(tmp_path / "run" / "report.json"), "--artifact", "dendrogram",
                "--export", "newick", "--out", str(nwk)]) == EXIT_OK
    assert parse_newick(nwk.read_text(encoding="utf-8")).n == 10


def test_export_errors(prices, tmp_path):
    out = tmp_path / "x"
    assert run(["-n", "export", "--input", str(prices), "--artifact", "mst", "--export", "gexf",
                "--out", str(out)]) == EXIT_DATA
    assert run(["-n", "export", "--input", str(prices), "--artifact", "threshold", "--export", "dot",
                "--out", str(out)]) == EXIT_DATA
    assert run(["-n", "export", "--report", str(tmp_path / "missing.json"), "--artifact", "mst",
                "--export", "dot", "--out", str(out)]) == EXIT_DATA

    assert run(["-n", "analyze", "-q", "--input", str(prices), "--out", str(tmp_path / "r"),
                "--stage", "stats"]) == EXIT_OK
    assert run(["-n", "export", "--report", str(tmp_path / "r" / "report.json"), "--artifact", "mst",
                "--export", "dot", "--out", str(out)]) == EXIT_DATA
