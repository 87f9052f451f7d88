import csv
import json
import re
import warnings
from dataclasses import fields

import numpy as np
import pydot
import pytest

from conftest import DATASET_FILES, bridged_triangles, dataset_path
from netclust.graph import Graph, GraphParseError, load_graph
from netclust.gso import GsoParams, optimize
from netclust.harness import (
    CSV_COLUMNS,
    PUBLISHED_COUNTS,
    Report,
    RunConfig,
    export_dot,
    read_csv_report,
    read_report,
    run_benchmark,
    write_report,
)
from netclust.oracle import brute_force_max_modularity

QUICK = dict(group_size=10, iterations=30)


def quick_config(path, **kw):
    params = GsoParams(seed=kw.pop("seed", 7), **QUICK)
    return RunConfig(input=str(path), params=params, **kw)


def test_config_requires_seed(karate_path):
    with pytest.raises(ValueError, match="seed"):
        RunConfig(input=str(karate_path), params=GsoParams())
    with pytest.raises(ValueError):
        RunConfig(input=str(karate_path), params=GsoParams(seed=1), repeats=0)


def test_karate_report_counts(karate_path):
    report = run_benchmark(quick_config(karate_path))
    assert (report.n, report.m_edges) == (34, 78)
    assert (report.expected_n, report.expected_m_edges) == (34, 78)
    assert report.dataset == "karate"
    assert report.warnings == []


def test_dolphins_report_counts():
    path = dataset_path("dolphins")
    if not path.exists():
        pytest.fail(f"dataset file {path} is missing")
    report = run_benchmark(quick_config(path))
    assert (report.n, report.m_edges) == (62, 159)


def test_repeats_use_consecutive_seeds(karate_path):
    report = run_benchmark(quick_config(karate_path, repeats=3, seed=7))
    assert [r.seed for r in report.runs] == [7, 8, 9]
    assert report.best_q == max(r.best_q for r in report.runs)
    assert report.to_dict()["aggregate"]["best_q"] == report.best_q
    assert report.mean_q == pytest.approx(np.mean([r.best_q for r in report.runs]))


def test_repeats_with_workers_match_sequential(karate_path):
    a = run_benchmark(quick_config(karate_path, repeats=3))
    b = run_benchmark(quick_config(karate_path, repeats=3, workers=3))
    assert [r.trace for r in a.runs] == [r.trace for r in b.runs]


def test_count_mismatch_warns(tmp_path):
    path = tmp_path / "football.edgelist"
    path.write_text("0 1\n1 2\n")
    with pytest.warns(UserWarning, match="published n=115"):
        report = run_benchmark(quick_config(path))
    assert report.warnings and "m_edges=615" in report.warnings[0]


def test_unknown_dataset_has_no_expectation(tmp_path):
    path = tmp_path / "toy.edgelist"
    path.write_text("0 1\n1 2\n2 0\n")
    report = run_benchmark(quick_config(path))
    assert report.expected_n is None and report.warnings == []


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        run_benchmark(quick_config(tmp_path / "nope.gml"))


def test_parse_error_propagates(tmp_path):
    path = tmp_path / "bad.gml"
    path.write_text("graph [\n node [ id 0 ]\n edge [ source 0 target 3 ]\n]\n")
    with pytest.raises(GraphParseError, match="line 3"):
        run_benchmark(quick_config(path))


def test_json_round_trip(tmp_path, karate_path):
    out = tmp_path / "r.json"
    report = run_benchmark(quick_config(karate_path, repeats=2, report=str(out)))
    back = read_report(out)
    assert back == report
    raw = json.loads(out.read_text())
    assert raw["schema"] == "netclust.report/1"
    assert set(raw["params"]) == {f.name for f in fields(GsoParams)}


def test_csv_rows_and_columns(tmp_path, karate_path):
    out = tmp_path / "r.csv"
    report = run_benchmark(quick_config(karate_path, report=str(out), report_format="csv"))
    with open(out, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
        assert reader.fieldnames == CSV_COLUMNS
    assert [r["kind"] for r in rows] == ["run", "aggregate"]
    assert float(rows[1]["best_q"]) == report.best_q
    back = read_csv_report(out)
    assert back.params == report.params
    assert [(r.seed, r.best_q) for r in back.runs] == [(r.seed, r.best_q) for r in report.runs]


def test_report_reruns_exactly(tmp_path, karate_path):
    out = tmp_path / "r.json"
    run_benchmark(quick_config(karate_path, repeats=2, report=str(out)))
    saved = read_report(out)
    graph = load_graph(saved.input, saved.format)
    for run in saved.runs:
        params = GsoParams.from_dict({**saved.params, "seed": run.seed})
        result = optimize(graph, params)
        assert result.best_q == run.best_q
        assert result.trace == run.trace


def test_write_report_rejects_format(tmp_path, karate_path):
    report = run_benchmark(quick_config(karate_path))
    with pytest.raises(ValueError):
        write_report(report, tmp_path / "x", "xml")


def test_report_schema_guard():
    with pytest.raises(ValueError, match="schema"):
        Report.from_dict({"schema": "other"})


# -- DOT ----------------------------------------------------------------------


def color_indices(dot_text):
    return [int(x) for x in re.findall(r"colorindex=(\d+)", dot_text)]


def test_dot_two_nodes():
    g = Graph.from_edges(2, [(0, 1)])
    text = export_dot(g, [0, 1])
    assert sorted(color_indices(text)) == [0, 1]
    assert len(re.findall(r" -- ", text)) == 1


def test_dot_all_in_one(triangles):
    assert set(color_indices(export_dot(triangles, [5] * 6))) == {0}


def test_dot_optimum_has_two_classes_of_three(triangles):
    _, labels = brute_force_max_modularity(triangles)
    idx = color_indices(export_dot(triangles, labels))
    assert sorted(idx.count(k) for k in set(idx)) == [3, 3]


def test_dot_uses_original_ids(karate_path):
    g = load_graph(karate_path)
    text = export_dot(g, np.zeros(g.n, dtype=int))
    assert '"34" [label="34"' in text
    assert '"1" -- "2";' in text


@pytest.mark.parametrize("name", sorted(DATASET_FILES))
def test_dot_parses_for_datasets(name):
    path = dataset_path(name)
    if not path.exists():
        pytest.fail(f"dataset file {path} is missing")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        g = load_graph(path)
    result = optimize(g, GsoParams(seed=0, group_size=8, iterations=20))
    parsed = pydot.graph_from_dot_data(export_dot(g, result.best_partition))
    assert parsed and len(parsed) == 1
    dot = parsed[0]
    assert dot.get_type() == "graph"
    assert len(dot.get_edges()) == g.m_edges
    assert len([nd for nd in dot.get_nodes() if nd.get_name() != "node"]) == g.n


def test_dot_quotes_awkward_ids():
    g = Graph.from_edges(2, [(0, 1)], id_map=('a "b"', "c\\d"))
    assert pydot.graph_from_dot_data(export_dot(g, [0, 0]))


def test_dot_file_written(tmp_path, karate_path):
    out = tmp_path / "k.dot"
    report = run_benchmark(quick_config(karate_path, dot=str(out)))
    text = out.read_text()
    assert len(set(color_indices(text))) == report.best_run.n_communities


def test_published_counts_manifest():
    assert PUBLISHED_COUNTS["karate"] == (34, 78)
    assert PUBLISHED_COUNTS["dolphins"] == (62, 159)
    assert set(PUBLISHED_COUNTS) == set(DATASET_FILES)
    assert bridged_triangles().m_edges == 7
