"""End-to-end CLI runs over temp files."""

import csv
import json

import numpy as np
import pytest

from hodgewalk import write_complex
from hodgewalk.cli import main


@pytest.fixture()
def complex_file(fig1, tmp_path):
    path = tmp_path / "fig1.txt"
    write_complex(fig1, path)
    return str(path)


def read_rows(path):
    with open(path, newline="") as fh:
        return [row for row in csv.reader(fh) if row and not row[0].startswith("#")]


def test_spectrum(complex_file, tmp_path, capsys):
    out = tmp_path / "eigs.csv"
    assert main(["spectrum", complex_file, "--output", str(out)]) == 0
    rows = read_rows(out)
    assert rows[0][:2] == ["i", "j"]
    assert len(rows) == 11    # header + one row per edge
    header = out.read_text().splitlines()[0]
    assert header.startswith("# eigenvalues:")


def test_decompose(complex_file, tmp_path, capsys, fig1):
    flow = tmp_path / "flow.csv"
    flow.write_text("0,2,1\n1,5,1\n3,4,-2\n4,5,-2\n")
    out = tmp_path / "dec.csv"
    assert main(["decompose", complex_file, "--flow", str(flow),
                 "--flavor", "unnormalized", "--output", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["recomposition_error"] < 1e-8
    rows = read_rows(out)
    totals = np.array([[float(r[3]), float(r[4]), float(r[5])] for r in rows[1:]])
    flows = np.array([float(r[2]) for r in rows[1:]])
    assert np.allclose(totals.sum(axis=1), flows, atol=1e-8)


def test_embed_with_svg(complex_file, tmp_path):
    traj = tmp_path / "traj.csv"
    traj.write_text("t1,0,1\nt1,1,5\nt1,2,4\nt1,3,3\nt2,0,3\nt2,1,4\n")
    out = tmp_path / "emb.csv"
    svg = tmp_path / "emb.svg"
    assert main(["embed", complex_file, "--trajectories", str(traj),
                 "--output", str(out), "--svg", str(svg)]) == 0
    rows = read_rows(out)
    assert rows[0] == ["traj_id", "prefix_index", "coord_1", "coord_2"]
    t1_rows = [r for r in rows[1:] if r[0] == "t1"]
    assert len(t1_rows) == 4    # prefix 0..3
    assert svg.exists() and svg.read_text().lstrip().startswith("<?xml")


def test_pagerank_personalized(complex_file, tmp_path, capsys):
    out = tmp_path / "pr.csv"
    assert main(["pagerank", complex_file, "--edge", "1,2", "--gauge",
                 "--norms", "--output", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["scaling"] == "beta-2" and summary["gauged"]
    assert set(summary["norms"]) == {"l2", "grad", "curl", "harm"}
    scores = [float(r[2]) for r in read_rows(out)[1:]]
    assert min(scores) >= -1e-12


def test_pagerank_all(complex_file, tmp_path, capsys):
    out = tmp_path / "all.csv"
    assert main(["pagerank", complex_file, "--all", "--output", str(out)]) == 0
    assert len(read_rows(out)) == 11
    assert json.loads(capsys.readouterr().out)["mode"] == "harmonic_all_edges"


def test_pagerank_generalized(complex_file, tmp_path, capsys):
    out = tmp_path / "g.csv"
    assert main(["pagerank", complex_file, "--edge", "1,2", "--kappa", "0.01",
                 "--output", str(out)]) == 0
    assert json.loads(capsys.readouterr().out)["scaling"] == "none"


def test_stability(complex_file, tmp_path, capsys):
    out = tmp_path / "rho.csv"
    assert main(["stability", complex_file, "--beta-range", "2.1", "2.6", "4",
                 "--output", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert -1.0 <= summary["mean_rho"] <= 1.0
    assert len(read_rows(out)) == 5


def test_simulate(complex_file, tmp_path):
    out = tmp_path / "sim.csv"
    assert main(["simulate", complex_file, "--start", "1,5", "--steps", "50",
                 "--chains", "20", "--seed", "3", "--output", str(out)]) == 0
    rows = read_rows(out)
    assert rows[0] == ["i", "j", "orientation", "visit_frequency"]
    freqs = np.array([float(r[3]) for r in rows[1:]])
    assert freqs.sum() == pytest.approx(1.0, abs=1e-9)


def test_simulate_reversed_start(complex_file, tmp_path):
    out = tmp_path / "sim.csv"
    assert main(["simulate", complex_file, "--start", "1,5,reversed", "--steps", "0",
                 "--chains", "4", "--seed", "0", "--output", str(out)]) == 0
    rows = read_rows(out)
    hit = [r for r in rows[1:] if float(r[3]) > 0]
    assert len(hit) == 1 and hit[0][:3] == ["1", "5", "reversed"]


def test_error_exit_code(complex_file, capsys):
    # (0, 4) is not an edge of the complex.
    assert main(["pagerank", complex_file, "--edge", "0,4"]) == 1
    assert "error:" in capsys.readouterr().err


def test_pagerank_all_with_norm_columns(complex_file, tmp_path, capsys):
    out = tmp_path / "all.csv"
    assert main(["pagerank", complex_file, "--all", "--norms", "--output", str(out)]) == 0
    rows = read_rows(out)
    assert rows[0] == ["i", "j", "score", "l2", "grad", "curl", "harm"]
    capsys.readouterr()


def test_ingest_tracks_pipeline(tmp_path, capsys):
    rows = ["id,timestamp,lat,lon"]
    t = 0.0
    for k in range(200):
        rows.append(f"A,{t},{-20.0 + 0.015 * k},{45.0 + 0.02 * k}")
        t += 12.0
    drifters = tmp_path / "drifters.csv"
    drifters.write_text("\n".join(rows) + "\n")
    complex_out = tmp_path / "cells.txt"
    traj_out = tmp_path / "cell_trajs.csv"
    assert main(["ingest-tracks", str(drifters),
                 "--complex-out", str(complex_out),
                 "--trajectories-out", str(traj_out),
                 "--hex-width", "1.0"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["n1"] >= 1 and summary["trajectories"] >= 1
    rows = read_rows(traj_out)
    assert rows[0] == ["traj_id", "step", "cell_id"]
    # The emitted files feed straight back into the embedding pipeline.
    emb_out = tmp_path / "emb.csv"
    assert main(["embed", str(complex_out), "--trajectories", str(traj_out),
                 "--output", str(emb_out)]) == 0


def test_ingest_graph_pipeline(tmp_path, capsys):
    edges = tmp_path / "edges.csv"
    cats = tmp_path / "cats.csv"
    edges.write_text('"A","B"\n"B","C"\n"A","C"\n')
    cats.write_text('"A",x\n"B",x\n"C",y\n')
    complex_out = tmp_path / "books.txt"
    assert main(["ingest-graph", str(edges), "--categories", str(cats),
                 "--complex-out", str(complex_out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["n0"] == 3 and summary["n2"] == 1
    assert summary["categories"] == {"x": 2, "y": 1}
