"""Command line interface.

Subcommands operate on a complex file in the line-oriented text format
(``n0 <int>``, ``e i j``, ``t i j k``) and exchange flows and trajectories
as CSV.  See the README for examples.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from .complex import read_complex, write_complex
from .decomposition import decompose
from .embedding import Trajectory, embed_trajectory
from .errors import HodgewalkError
from .ingest import (
    MADAGASCAR_BBOX,
    HexGrid,
    build_complex_from_tracks,
    load_graph_with_categories,
    load_tracks,
    write_trajectories,
)
from .laplacian import NormalizedL1, spectrum
from .pagerank import (
    PageRankQuery,
    gauge_normalize,
    harmonic_pagerank_all_edges,
    pagerank,
    pagerank_norms,
    rank_stability,
)
from .simulate import LiftedWalk


def _open_out(path):
    return sys.stdout if path in (None, "-") else open(path, "w", newline="")


def _close_out(fh):
    if fh is not sys.stdout:
        fh.close()


def _read_flow(l1: NormalizedL1, path) -> np.ndarray:
    """Flow CSV: rows ``i,j,value``; unlisted edges are zero."""
    flow = np.zeros(l1.n1)
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#") or row[0].strip().lower() == "i":
                continue
            i, j, value = int(row[0]), int(row[1]), float(row[2])
            sign = 1.0 if i < j else -1.0
            flow[l1.complex.edge_index(i, j)] += sign * value
    return flow


def cmd_spectrum(args) -> int:
    sc = read_complex(args.complex)
    l1 = NormalizedL1(sc)
    dec = spectrum(l1, k=args.k, which=args.which)
    out = _open_out(args.output)
    writer = csv.writer(out)
    out.write("# eigenvalues: " + " ".join(f"{v:.12g}" for v in dec.eigenvalues) + "\n")
    writer.writerow(["i", "j"] + [f"u{k + 1}" for k in range(dec.eigenvectors.shape[1])])
    for e, (i, j) in enumerate(sc.edges):
        writer.writerow([i, j] + [f"{v:.12g}" for v in dec.eigenvectors[e, :]])
    _close_out(out)
    print(f"kernel_dim={dec.kernel_dim} lambda_max={dec.lambda_max:.6g}", file=sys.stderr)
    return 0


def cmd_decompose(args) -> int:
    sc = read_complex(args.complex)
    l1 = NormalizedL1(sc)
    flow = _read_flow(l1, args.flow)
    parts = decompose(l1, flow, flavor=args.flavor)
    out = _open_out(args.output)
    writer = csv.writer(out)
    writer.writerow(["i", "j", "flow", "gradient", "curl", "harmonic"])
    for e, (i, j) in enumerate(sc.edges):
        writer.writerow([i, j, f"{flow[e]:.12g}", f"{parts.gradient[e]:.12g}",
                         f"{parts.curl[e]:.12g}", f"{parts.harmonic[e]:.12g}"])
    _close_out(out)
    summary = {
        "flavor": parts.flavor,
        "norm_flow": float(np.linalg.norm(flow)),
        "norm_gradient": float(np.linalg.norm(parts.gradient)),
        "norm_curl": float(np.linalg.norm(parts.curl)),
        "norm_harmonic": float(np.linalg.norm(parts.harmonic)),
        "recomposition_error": float(np.linalg.norm(parts.total() - flow)),
    }
    print(json.dumps(summary))
    return 0


def _read_trajectories(path) -> list[Trajectory]:
    """Trajectory CSV: rows ``traj_id,step,vertex`` sorted by step per id."""
    steps: dict[str, list[tuple[int, int]]] = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#") or row[0].strip().lower() == "traj_id":
                continue
            steps.setdefault(row[0].strip(), []).append((int(row[1]), int(row[2])))
    trajectories = []
    for traj_id, pairs in steps.items():
        pairs.sort()
        trajectories.append(Trajectory(tuple(v for _, v in pairs), traj_id=traj_id))
    return trajectories


def cmd_embed(args) -> int:
    sc = read_complex(args.complex)
    l1 = NormalizedL1(sc)
    trajectories = _read_trajectories(args.trajectories)
    out = _open_out(args.output)
    writer = csv.writer(out)
    k = l1.harmonic_basis().shape[1]
    writer.writerow(["traj_id", "prefix_index"] + [f"coord_{c + 1}" for c in range(k)])
    finals = {}
    for traj in trajectories:
        points = embed_trajectory(l1, traj)
        for p in points:
            writer.writerow([traj.traj_id, p.prefix_index] + [f"{v:.12g}" for v in p.coordinates])
        finals[traj.traj_id] = points[-1].coordinates
    _close_out(out)
    if args.svg:
        _scatter_svg(finals, args.svg)
    return 0


def _scatter_svg(finals: dict, path: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 5))
    for traj_id, coords in finals.items():
        x = coords[0] if coords.size > 0 else 0.0
        y = coords[1] if coords.size > 1 else 0.0
        ax.scatter([x], [y], label=str(traj_id))
    ax.set_xlabel("coord_1")
    ax.set_ylabel("coord_2")
    ax.legend(fontsize="x-small")
    fig.savefig(path, format="svg")
    plt.close(fig)


def cmd_pagerank(args) -> int:
    sc = read_complex(args.complex)
    l1 = NormalizedL1(sc)
    mode = "generalized" if args.kappa is not None else "standard"
    if args.all:
        scores = harmonic_pagerank_all_edges(l1, beta=args.beta)
        per_edge_norms = None
        if args.norms:
            per_edge_norms = [
                pagerank_norms(l1, pagerank(l1, PageRankQuery(teleport=e, beta=args.beta)))
                for e in range(l1.n1)
            ]
        out = _open_out(args.output)
        writer = csv.writer(out)
        header = ["i", "j", "score"] + (["l2", "grad", "curl", "harm"] if args.norms else [])
        writer.writerow(header)
        for e, (i, j) in enumerate(sc.edges):
            row = [i, j, f"{scores[e]:.12g}"]
            if per_edge_norms is not None:
                n = per_edge_norms[e]
                row += [f"{n[k]:.12g}" for k in ("l2", "grad", "curl", "harm")]
            writer.writerow(row)
        _close_out(out)
        print(json.dumps({"mode": "harmonic_all_edges", "beta": args.beta,
                          "max_score": float(scores.max(initial=0.0))}))
        return 0
    i, j = (int(v) for v in args.edge.split(","))
    query = PageRankQuery(
        teleport=sc.edge_index(i, j),
        mode=mode,
        beta=args.beta,
        kappa=args.kappa if args.kappa is not None else 1e-3,
    )
    result = pagerank(l1, query)
    if args.gauge:
        result = gauge_normalize(l1, result)
    out = _open_out(args.output)
    writer = csv.writer(out)
    writer.writerow(["i", "j", "score"])
    for e, (a, b) in enumerate(sc.edges):
        writer.writerow([a, b, f"{result.pi[e]:.12g}"])
    _close_out(out)
    summary = {"mode": mode, "beta": args.beta, "kappa": args.kappa,
               "scaling": "beta-2" if mode == "standard" else "none",
               "gauged": bool(args.gauge)}
    if args.norms:
        summary["norms"] = pagerank_norms(l1, result)
    print(json.dumps(summary))
    return 0


def cmd_stability(args) -> int:
    sc = read_complex(args.complex)
    l1 = NormalizedL1(sc)
    lo, hi, count = args.beta_range
    betas = np.linspace(lo, hi, int(count))
    report = rank_stability(l1, betas)
    out = _open_out(args.output)
    writer = csv.writer(out)
    writer.writerow(["beta"] + [f"{b:.6g}" for b in report.betas])
    for k, b in enumerate(report.betas):
        writer.writerow([f"{b:.6g}"] + [f"{v:.6g}" for v in report.rho[k]])
    _close_out(out)
    print(json.dumps({"mean_rho": report.mean_rho, "excluded_pairs": len(report.excluded)}))
    return 0


def cmd_simulate(args) -> int:
    sc = read_complex(args.complex)
    walk = LiftedWalk(sc)
    parts = args.start.split(",")
    i, j = int(parts[0]), int(parts[1])
    reversed_ = len(parts) > 2 and parts[2].strip().lower() == "reversed"
    state = sc.edge_index(i, j) + (sc.n1 if reversed_ else 0)
    run = walk.run(start=state, n_steps=args.steps, n_chains=args.chains, seed=args.seed)
    freqs = run.visit_frequencies()
    out = _open_out(args.output)
    writer = csv.writer(out)
    writer.writerow(["i", "j", "orientation", "visit_frequency"])
    for e, (a, b) in enumerate(sc.edges):
        writer.writerow([a, b, "forward", f"{freqs[e]:.12g}"])
        writer.writerow([a, b, "reversed", f"{freqs[e + sc.n1]:.12g}"])
    _close_out(out)
    return 0


def cmd_ingest_tracks(args) -> int:
    bbox = tuple(args.bbox)
    tracks = load_tracks(args.drifters, bbox=bbox, min_active_days=args.min_active_days)
    grid = HexGrid.for_bbox(bbox, width=args.hex_width)
    sc, trajectories = build_complex_from_tracks(tracks, grid,
                                                 net_flow_threshold=args.net_flow_threshold)
    write_complex(sc, args.complex_out)
    write_trajectories(trajectories, args.trajectories_out)
    print(json.dumps({"tracks": len(tracks), "n0": sc.n0, "n1": sc.n1, "n2": sc.n2,
                      "trajectories": len(trajectories)}))
    return 0


def cmd_ingest_graph(args) -> int:
    sc, labels = load_graph_with_categories(args.edges, args.categories)
    write_complex(sc, args.complex_out)
    counts = {}
    for lab in labels:
        counts[lab] = counts.get(lab, 0) + 1
    print(json.dumps({"n0": sc.n0, "n1": sc.n1, "n2": sc.n2, "categories": counts}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hodgewalk",
                                     description="Edge-space spectral analysis of simplicial complexes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalues/eigenvectors of the symmetrized Laplacian")
    p.add_argument("complex")
    p.add_argument("--k", type=int, default=None, help="number of smallest eigenpairs")
    p.add_argument("--which", choices=["smallest", "full"], default="full")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("decompose", help="gradient/curl/harmonic split of a flow")
    p.add_argument("complex")
    p.add_argument("--flow", required=True, help="CSV of i,j,value rows")
    p.add_argument("--flavor", choices=["unnormalized", "symmetrized", "normalized"],
                   default="symmetrized")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("embed", help="harmonic prefix embeddings of trajectories")
    p.add_argument("complex")
    p.add_argument("--trajectories", required=True, help="CSV of traj_id,step,vertex rows")
    p.add_argument("--output", default="-")
    p.add_argument("--svg", default=None, help="write a scatter of final embeddings")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("pagerank", help="simplicial PageRank scores")
    p.add_argument("complex")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--edge", help="i,j teleport edge (personalized)")
    group.add_argument("--all", action="store_true", help="harmonic PageRank of every edge")
    p.add_argument("--beta", type=float, default=2.5)
    p.add_argument("--kappa", type=float, default=None, help="use the generalized variant")
    p.add_argument("--gauge", action="store_true")
    p.add_argument("--norms", action="store_true")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_pagerank)

    p = sub.add_parser("stability", help="Spearman stability of harmonic PageRank over beta")
    p.add_argument("complex")
    p.add_argument("--beta-range", type=float, nargs=3, default=(2.05, 2.67, 10),
                   metavar=("LO", "HI", "COUNT"))
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("ingest-tracks", help="drifter CSV -> complex + trajectory files")
    p.add_argument("drifters", help="CSV with id,timestamp,lat,lon columns")
    p.add_argument("--complex-out", required=True)
    p.add_argument("--trajectories-out", required=True)
    p.add_argument("--bbox", type=float, nargs=4, default=list(MADAGASCAR_BBOX),
                   metavar=("LAT_MIN", "LAT_MAX", "LON_MIN", "LON_MAX"))
    p.add_argument("--hex-width", type=float, default=1.66)
    p.add_argument("--min-active-days", type=float, default=90.0)
    p.add_argument("--net-flow-threshold", type=int, default=1)
    p.set_defaults(func=cmd_ingest_tracks)

    p = sub.add_parser("ingest-graph", help="labeled edge list -> clique complex file")
    p.add_argument("edges", help="CSV of label,label rows")
    p.add_argument("--categories", required=True, help="CSV of label,category rows")
    p.add_argument("--complex-out", required=True)
    p.set_defaults(func=cmd_ingest_graph)

    p = sub.add_parser("simulate", help="Monte Carlo lifted edge walk")
    p.add_argument("complex")
    p.add_argument("--start", required=True, help="i,j[,reversed]")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--chains", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (HodgewalkError, OSError, KeyError, IndexError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
