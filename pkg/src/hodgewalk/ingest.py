"""Building complexes and trajectories from data files.

Two pipelines: geospatial drifter CSVs, discretized on a hexagonal grid
after an area-preserving azimuthal projection; and edge-list graphs with a
node-category file, expanded to their clique complex.  No network access;
dataset locations come from explicit paths or the HODGEWALK_DATA
environment variable.
"""

from __future__ import annotations

import csv
import logging
import math
import os
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

import numpy as np

from .complex import SimplicialComplex, clique_complex
from .embedding import Trajectory
from .errors import ParseError

__all__ = [
    "GeoTrack",
    "HexGrid",
    "MADAGASCAR_BBOX",
    "load_tracks",
    "build_complex_from_tracks",
    "load_graph_with_categories",
    "write_trajectories",
    "data_dir",
]

log = logging.getLogger(__name__)

MADAGASCAR_BBOX = (-30.0, -10.0, 39.0, 55.0)   # lat_min, lat_max, lon_min, lon_max


def data_dir() -> Path | None:
    """Directory named by HODGEWALK_DATA, if set."""
    root = os.environ.get("HODGEWALK_DATA")
    return Path(root) if root else None


@dataclass(frozen=True)
class GeoTrack:
    """One contiguous buoy segment: strictly increasing sample times (hours)."""

    buoy_id: str
    times: np.ndarray    # hours since an arbitrary epoch
    lats: np.ndarray
    lons: np.ndarray

    def __len__(self) -> int:
        return self.times.shape[0]


def _parse_time(text: str) -> float:
    """Sample time in hours: ISO-8601 timestamps or plain numeric hours."""
    try:
        return float(text)
    except ValueError:
        return datetime.fromisoformat(text).timestamp() / 3600.0


def load_tracks(
    csv_path,
    bbox=MADAGASCAR_BBOX,
    min_active_days: float = 90.0,
    max_gap_hours: float = 18.0,
) -> list[GeoTrack]:
    """Read drifter samples and return bbox-clipped contiguous segments.

    The CSV needs columns id, timestamp, lat, lon (a header row with those
    names, or headerless in that order).  A buoy must span at least
    ``min_active_days`` to be kept at all; its in-bbox samples are then
    split into contiguous segments wherever the nominal 12-hour cadence is
    broken by more than ``max_gap_hours``.  Buoys with non-monotone
    timestamps are rejected with a warning.
    """
    rows: dict[str, list[tuple[float, float, float]]] = {}
    with open(csv_path, newline="") as fh:
        reader = csv.reader(fh)
        col = {"id": 0, "timestamp": 1, "lat": 2, "lon": 3}
        for lineno, raw in enumerate(reader, start=1):
            if not raw or raw[0].lstrip().startswith("#"):
                continue
            if lineno == 1 and {c.strip().lower() for c in raw} >= {"id", "timestamp", "lat", "lon"}:
                col = {name.strip().lower(): k for k, name in enumerate(raw)}
                continue
            try:
                buoy = raw[col["id"]].strip()
                t = _parse_time(raw[col["timestamp"]].strip())
                lat = float(raw[col["lat"]])
                lon = float(raw[col["lon"]])
            except (ValueError, IndexError) as exc:
                raise ParseError(f"malformed drifter row at line {lineno}: {raw}", line=lineno) from exc
            rows.setdefault(buoy, []).append((t, lat, lon))

    tracks: list[GeoTrack] = []
    for buoy, samples in rows.items():
        times = np.array([s[0] for s in samples])
        if np.any(np.diff(times) <= 0):
            log.warning("buoy %s rejected: non-monotone timestamps", buoy)
            continue
        if times[-1] - times[0] < min_active_days * 24.0:
            continue
        lats = np.array([s[1] for s in samples])
        lons = np.array([s[2] for s in samples])
        inside = (
            (lats >= bbox[0]) & (lats <= bbox[1]) & (lons >= bbox[2]) & (lons <= bbox[3])
        )
        # Split on cadence gaps and on excursions outside the bbox.
        segments: list[list[int]] = []
        current: list[int] = []
        for k in range(len(times)):
            if not inside[k]:
                segments.append(current)
                current = []
                continue
            if current and times[k] - times[current[-1]] > max_gap_hours:
                segments.append(current)
                current = []
            current.append(k)
        segments.append(current)
        part = 0
        for seg in segments:
            if len(seg) < 2:
                continue
            idx = np.asarray(seg)
            tracks.append(GeoTrack(
                buoy_id=f"{buoy}/{part}",
                times=times[idx],
                lats=lats[idx],
                lons=lons[idx],
            ))
            part += 1
    return tracks


@dataclass(frozen=True)
class HexGrid:
    """Flat-top hexagonal binning of an area-preserving projection.

    ``width`` is the corner-to-corner width of a hexagon measured in
    projected units, which equal degrees of latitude at the projection
    center; the default matches a 1.66-degree cell.  ``center`` is the
    (lat, lon) of the azimuthal projection center.
    """

    center: tuple[float, float]
    width: float = 1.66

    _R: float = field(default=math.degrees(1.0), repr=False)   # sphere radius in degree units

    def project(self, lat: float, lon: float) -> tuple[float, float]:
        """Lambert azimuthal equal-area forward projection."""
        phi0, lam0 = math.radians(self.center[0]), math.radians(self.center[1])
        phi, lam = math.radians(lat), math.radians(lon)
        denom = 1.0 + math.sin(phi0) * math.sin(phi) + math.cos(phi0) * math.cos(phi) * math.cos(lam - lam0)
        k = math.sqrt(2.0 / denom)
        x = self._R * k * math.cos(phi) * math.sin(lam - lam0)
        y = self._R * k * (math.cos(phi0) * math.sin(phi) - math.sin(phi0) * math.cos(phi) * math.cos(lam - lam0))
        return x, y

    def cell(self, lat: float, lon: float) -> tuple[int, int]:
        """Axial (q, r) coordinates of the hexagon containing a point."""
        x, y = self.project(lat, lon)
        size = self.width / 2.0
        q = (2.0 / 3.0) * x / size
        r = (-1.0 / 3.0 * x + math.sqrt(3.0) / 3.0 * y) / size
        return _axial_round(q, r)

    @classmethod
    def for_bbox(cls, bbox=MADAGASCAR_BBOX, width: float = 1.66) -> "HexGrid":
        center = ((bbox[0] + bbox[1]) / 2.0, (bbox[2] + bbox[3]) / 2.0)
        return cls(center=center, width=width)


def _axial_round(q: float, r: float) -> tuple[int, int]:
    """Round fractional axial coordinates to the containing hexagon."""
    s = -q - r
    rq, rr, rs = round(q), round(r), round(s)
    dq, dr, ds = abs(rq - q), abs(rr - r), abs(rs - s)
    if dq > dr and dq > ds:
        rq = -rr - rs
    elif dr > ds:
        rr = -rq - rs
    return int(rq), int(rr)


def build_complex_from_tracks(
    tracks: list[GeoTrack],
    grid: HexGrid,
    net_flow_threshold: int = 1,
) -> tuple[SimplicialComplex, list[Trajectory]]:
    """Hex-bin the tracks into a clique complex plus edge trajectories.

    A cell becomes a node if any sample lands in it; a pair of cells becomes
    an edge if the absolute net transition count between them reaches the
    threshold; all 3-cliques are filled.  Each track is re-expressed as its
    cell sequence (consecutive repeats collapsed) and split wherever a step
    uses a cell pair that did not survive as an edge.
    """
    cell_seqs: list[tuple[str, list[tuple[int, int]]]] = []
    occupied: set[tuple[int, int]] = set()
    net: dict[tuple[tuple[int, int], tuple[int, int]], int] = {}
    for track in tracks:
        seq: list[tuple[int, int]] = []
        for lat, lon in zip(track.lats, track.lons):
            c = grid.cell(lat, lon)
            occupied.add(c)
            if not seq or seq[-1] != c:
                seq.append(c)
        cell_seqs.append((track.buoy_id, seq))
        for a, b in zip(seq, seq[1:]):
            key, sign = ((a, b), 1) if a <= b else ((b, a), -1)
            net[key] = net.get(key, 0) + sign

    edges = [pair for pair, flow in net.items() if abs(flow) >= net_flow_threshold]
    sc = clique_complex(edges, isolated_vertices=occupied)

    trajectories: list[Trajectory] = []
    for buoy_id, seq in cell_seqs:
        current: list[int] = []
        part = 0
        for k, cell in enumerate(seq):
            vid = sc.label_to_id[cell]
            if not current:
                current = [vid]
                continue
            prev_cell = seq[k - 1]
            if sc.has_edge(sc.label_to_id[prev_cell], vid):
                current.append(vid)
            else:
                log.debug("track %s split at step %d: (%s, %s) is not an edge",
                          buoy_id, k, prev_cell, cell)
                if len(current) >= 2:
                    trajectories.append(Trajectory(tuple(current), traj_id=f"{buoy_id}/{part}"))
                    part += 1
                current = [vid]
        if len(current) >= 2:
            trajectories.append(Trajectory(tuple(current), traj_id=f"{buoy_id}/{part}"))
    return sc, trajectories


def write_trajectories(trajectories: list[Trajectory], path) -> None:
    """Trajectory CSV (traj_id, step, cell_id), one row per visited cell.

    Cell ids are the dense vertex ids of the emitted complex, so the file
    feeds directly into the embedding pipeline.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["traj_id", "step", "cell_id"])
        for traj in trajectories:
            for step, vid in enumerate(traj.vertices):
                writer.writerow([traj.traj_id, step, vid])


def _read_csv_rows(path, n_fields: int):
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or row[0].lstrip().startswith("#"):
                continue
            if len(row) < n_fields:
                raise ParseError(f"expected {n_fields} fields at line {lineno}: {row}", line=lineno)
            yield [f.strip() for f in row[:n_fields]]


def load_graph_with_categories(edge_file, category_file) -> tuple[SimplicialComplex, list[str]]:
    """Clique complex of a labeled edge list plus per-node categories.

    Both files are headerless CSV: ``label1,label2`` per edge and
    ``label,category`` per node.  Duplicate edges collapse; a node without
    a category is labeled "unknown" with a warning.
    """
    edges = [tuple(row) for row in _read_csv_rows(edge_file, 2)]
    categories = {row[0]: row[1] for row in _read_csv_rows(category_file, 2)}
    sc = clique_complex(edges)
    labels = []
    for lab in sc.labels:
        if lab not in categories:
            log.warning("node %r has no category; labeled 'unknown'", lab)
            labels.append("unknown")
        else:
            labels.append(categories[lab])
    return sc, labels
