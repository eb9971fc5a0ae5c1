# tests/test_config.py

from datetime import date
from pathlib import Path

import pytest

from marketnet.config import (
    DEFAULT_SWEEP, STAGES, RunConfig, apply_overrides, load_config, load_synth_spec,
)
from marketnet.errors import DataError
from marketnet.ingest import WindowSpec
from marketnet.synth import crisis_scenario

REPO = Path(__file__).resolve().parents[1]

FULL = """
input = "data/prices.csv"
format = "long"
fill = "forward"
sectors = "data/sectors.csv"
output_dir = "out"
exports = ["dot", "newick"]
workers = 2
seed = 7
stages = ["stats", "mst"]

[[windows]]
name = "before"
start = 2006-06-02
end = "2007-11-30"

[thresholds]
thetas = [0.5, 0.6]
sigma_multiples = [1, 2]
degree_fit_thetas = [0.3]
scope = "whole"
sweep = { start = 0.1, stop = 0.5, step = 0.1 }

[fits]
clustering_range = [0.2, 0.4]
degree_range = [1, 20]
log_binning = true

[mst]
hub_top = 5

[hierarchy]
band_cutoffs = [0.9, 1.1]
band_mode = "merge"
newick_leaves = 30

[stats]
bin_width = 0.05
"""


def write(tmp_path, text, name="run.toml"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_defaults():
    config = RunConfig().validate()
    assert config.sigma_multiples == [1, 2, 3]
    assert config.sweep == DEFAULT_SWEEP
    assert config.band_cutoffs == (1.0, 1.2)
    assert config.hub_top == 10
    assert config.scope == "largest"
    assert config.stages == list(STAGES)
    assert all(config.wants(s) for s in STAGES)


def test_load_full_config(tmp_path):
    config = load_config(write(tmp_path, FULL))
    assert config.input_path == tmp_path / "data" / "prices.csv"
    assert config.sectors_path == tmp_path / "data" / "sectors.csv"
    assert config.output_dir == tmp_path / "out"
    assert (config.format, config.fill, config.workers, config.seed) == ("long", "forward", 2, 7)
    assert config.windows == [WindowSpec("before", date(2006, 6, 2), date(2007, 11, 30))]
    assert config.thetas == [0.5, 0.6]
    assert config.sigma_multiples == [1, 2]
    assert config.sweep == (0.1, 0.5, 0.1)
    assert config.scope == "whole"
    assert config.clustering_range == (0.2, 0.4)
    assert config.degree_range == (1.0, 20.0)
    assert config.log_binning is True
    assert config.hub_top == 5
    assert config.band_cutoffs == (0.9, 1.1)
    assert config.band_mode == "merge"
    assert config.newick_leaves == 30
    assert config.bin_width == 0.05
    assert config.wants("mst") and not config.wants("hierarchy")
    config.validate()


def test_windows_file_is_appended(tmp_path):
    (tmp_path / "w.csv").write_text("name,start,end\ncalm,2020-01-01,2020-06-30\n", encoding="utf-8")
    config = load_config(write(tmp_path, 'windows_file = "w.csv"\n'))
    assert [w.name for w in config.windows] == ["calm"]


def test_config_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_config(tmp_path / "nope.toml")
    with pytest.raises(ValueError):
        load_config(write(tmp_path, "input = \n"))
    with pytest.raises(TypeError):
        load_config(write(tmp_path, "workers = \"two\"\n"))
    with pytest.raises(TypeError):
        load_config(write(tmp_path, "[thresholds]\nsigma_multiples = [1.5]\n"))
    with pytest.raises(KeyError):
        load_config(write(tmp_path, "[[windows]]\nname = \"x\"\nstart = 2020-01-01\n"))
    with pytest.raises(FileNotFoundError):
        load_config(write(tmp_path, 'windows_file = "missing.csv"\n'))


def test_overrides_win_over_file(tmp_path):
    config = load_config(write(tmp_path, FULL))
    apply_overrides(config, scope="largest", thetas=[0.7], windows=[], workers=None)
    assert config.scope == "largest"
    assert config.thetas == [0.7]
    assert len(config.windows) == 1
    assert config.workers == 2
    with pytest.raises(AttributeError):
        apply_overrides(config, colour="blue")


@pytest.mark.parametrize("changes", [
    {"format": "xlsx"},
    {"fill": "backward"},
    {"scope": "biggest"},
    {"band_mode": "pairs"},
    {"stages": ["plots"]},
    {"workers": 0},
    {"clustering_range": (0.5, 0.1)},
    {"bin_width": 0.03},
    {"windows": [WindowSpec("a", date(2020, 1, 1), date(2020, 2, 1))] * 2},
])
def test_validate_rejects(changes):
    config = RunConfig(**changes)
    with pytest.raises(DataError):
        config.validate()


def test_empty_stage_list_is_rejected():
    config = RunConfig()
    config.stages = []
    with pytest.raises(DataError):
        config.validate()


def test_shipped_synth_file_is_the_crisis_scenario():
    assert load_synth_spec(REPO / "synth.toml") == crisis_scenario()


def test_synth_file_errors(tmp_path):
    with pytest.raises(KeyError):
        load_synth_spec(write(tmp_path, "seed = 1\n"))
    with pytest.raises(KeyError):
        load_synth_spec(write(tmp_path, "[synth]\nn_assets = 5\n"))
    with pytest.raises(TypeError):
        load_synth_spec(write(tmp_path, "[synth]\nn_assets = \"five\"\nregimes = []\n"))


def test_shipped_kospi_config_loads():
    config = load_config(REPO / "kospi.toml").validate()
    assert config.sigma_multiples == [1, 2, 3]
    assert config.windows == [
        WindowSpec("before", date(2006, 6, 2), date(2007, 11, 30)),
        WindowSpec("during", date(2007, 12, 3), date(2009, 6, 30)),
        WindowSpec("after", date(2009, 7, 1), date(2010, 12, 30)),
    ]
    assert config.fill == "forward"
