from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from signdiff.core import ConfigurationError, Grid, SolutionField
from signdiff.harness import (
    ComparisonReport,
    ComparisonRow,
    RunConfig,
    build_config,
    compare_table1,
    config_summary,
    format_csv,
    parse_config_text,
    run,
    sup_error,
)

DATA = Path(__file__).parent / "data"


def test_config_text_parsing():
    values = parse_config_text("# comment\nk = 2\nT = 0.1, 0.4\nscheme=rw   # trailing\nn 400\n\n")
    assert values == {"k": 2.0, "T": (0.1, 0.4), "scheme": "rw", "n": 400}


@pytest.mark.parametrize("text,key", [("bogus = 1", "bogus"), ("n = 2.5", "n"), ("k = abc", "k")])
def test_config_text_errors_name_the_key(text, key):
    with pytest.raises(ConfigurationError, match=f"^{key}:"):
        parse_config_text(text)


def test_flags_override_file_values():
    cfg = build_config({"k": 2.0, "n": 400, "scheme": "rw"}, {"k": 3.0, "n": None})
    assert cfg.k == 3.0 and cfg.n == 400 and cfg.scheme == "rw"


@pytest.mark.parametrize("overrides,key", [
    ({"k": -1.0}, "k/a"),
    ({"scheme": "mc"}, "scheme"),
    ({"T": ()}, "T"),
    ({"scheme": "rw", "n": 10}, "n"),
    ({"scheme": "rw", "n": 100, "T": (0.004,)}, "n/T"),
    ({"scheme": "fund", "h": 0.3}, "h"),
    ({"scheme": "fund", "steps": 0}, "steps"),
    ({"split": "upwind"}, "split"),
    ({"a": float("inf")}, "a"),
    ({"N": 0}, "N"),
])
def test_validation_names_the_offending_key(overrides, key):
    with pytest.raises(ConfigurationError, match=f"^{key}:"):
        build_config({}, overrides)


def test_csv_format_is_full_precision_with_lf():
    grid = Grid.from_half_width(1.0, 1)
    text = format_csv(SolutionField(0.1, grid, np.array([0.0, 1 / 3, 0.0]), "test"))
    assert text == "x,u\n-1,0\n0,0.33333333333333331\n1,0\n"


def test_sup_error_uses_interior_nodes_of_the_coarse_field():
    coarse = SolutionField(0.1, Grid.from_half_width(1.0, 2), np.array([5.0, 1.0, 1.0, 1.0, -5.0]), "a")
    fine = SolutionField(0.1, Grid.from_half_width(1.0, 4), np.ones(9), "b")
    assert sup_error(coarse, fine) == 0.0


def test_comparison_report_csv():
    report = ComparisonReport([ComparisonRow("spectral", "rw", "n=100", 0.5, 0.25)])
    assert report.to_csv().splitlines() == ["scheme_a,scheme_b,parameter,sup_error,wall_time",
                                             "spectral,rw,n=100,0.5,0.250000"]


def test_spectral_reference_run_is_reproduced(tmp_path):
    cfg = RunConfig(scheme="spectral", out=str(tmp_path))
    result = run(cfg)
    produced = (tmp_path / "spectral_T0.4.csv").read_text()
    reference = (DATA / "spectral_example1_T0.4_N200.csv").read_text()
    got = np.loadtxt(produced.splitlines()[1:], delimiter=",")
    want = np.loadtxt(reference.splitlines()[1:], delimiter=",")
    np.testing.assert_allclose(got, want, atol=1e-13)
    assert produced.splitlines()[0] == "x,u"
    assert any(p.name == "metadata.jsonl" for p in result.files)


def test_identical_configs_give_byte_identical_csv(tmp_path):
    outputs = []
    for name in ("first", "second"):
        run(RunConfig(scheme="all", T=(0.1, 0.4), n=400, h=0.01, steps=40, out=str(tmp_path / name)))
        outputs.append({p.name: p.read_bytes() for p in sorted((tmp_path / name).glob("*_T*.csv"))})
    assert outputs[0] == outputs[1]
    assert set(outputs[0]) == {f"{s}_T{t}.csv" for s in ("spectral", "rw", "fund") for t in ("0.1", "0.4")}


def test_all_schemes_write_metadata_and_comparison(tmp_path):
    result = run(RunConfig(scheme="all", T=(0.0, 0.4), n=400, h=0.01, steps=40, out=str(tmp_path)))
    records = [json.loads(line) for line in (tmp_path / "metadata.jsonl").read_text().splitlines()]
    assert len(records) == 6
    assert {r["scheme"] for r in records} == {"spectral", "rw", "fund"}
    assert all(r["wall_time"] >= 0 and r["k"] == -0.5 for r in records)
    assert records[0]["parameters"] == {"N": 200}
    rows = (tmp_path / "comparison.csv").read_text().splitlines()
    assert len(rows) == 4 and all("T=0.4" in row for row in rows[1:])
    assert all(0 < row.sup_error < 5e-2 for row in result.report.rows)


def test_tabulated_initial_condition_file(tmp_path):
    datum = tmp_path / "u0.csv"
    xs = np.linspace(-1, 1, 41)
    np.savetxt(datum, np.column_stack([xs, 1 - xs**2]), delimiter=",", header="x,u", comments="")
    result = run(RunConfig(scheme="rw", n=400, ic=str(datum), out=str(tmp_path / "out")))
    values = result.fields[("rw", 0.4)].values
    assert values.max() < 1.0 and values.min() >= -1e-12


def test_table1_report_rows():
    report = compare_table1((100, 625))
    assert [row.parameter for row in report.rows] == ["n=100", "n=625"]
    assert report.rows[0].sup_error > report.rows[1].sup_error


def test_config_summary_round_trips_through_json():
    summary = config_summary(RunConfig(T=(0.1, 0.2)))
    assert json.loads(json.dumps(summary))["T"] == [0.1, 0.2]
