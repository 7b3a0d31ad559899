"""Synthetic hazard corpus: roads, buildings, elements at risk, flood and fire rasters.

Both rasters share one grid. The flood raster is valid on the western
``flood_fraction`` of the columns and the fire raster on the eastern
``fire_fraction``; the two overlap in the middle when the fractions add up
to more than one. Vector coordinates are kept off the cell lattice so that
"touches a cell" and "overlaps a cell" never disagree.
"""

from __future__ import annotations

import json
import math
import random
import time
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np

from .namespaces import EX
from .query.evaluator import ResultTable, run_query
from .raster import Raster, Scale, write_asc_grid
from .usecases import EAR_NAMESPACE, QUERIES
from .workspace import Workspace

MANIFEST = "manifest.json"
REFERENCE_TIME = datetime(2019, 5, 23, 10, 20, 13, tzinfo=timezone(timedelta(hours=5, minutes=30)))


@dataclass(frozen=True)
class CorpusConfig:
    roads: int = 200
    buildings: int = 100
    elements_at_risk: int = 40
    seed: int = 1
    grid: int = 50
    cell: float = 500.0
    flood_fraction: float = 0.6
    fire_fraction: float = 0.6
    flood_nodata_rate: float = 0.03

    @property
    def extent(self) -> float:
        return self.grid * self.cell


def _off_lattice(v: float, cell: float) -> float:
    v = round(v, 2)
    return v + 0.01 if math.isclose(v % cell, 0.0, abs_tol=1e-9) else v


def _point(rng: random.Random, cfg: CorpusConfig, margin: float = 50.0) -> tuple[float, float]:
    return (rng.uniform(margin, cfg.extent - margin), rng.uniform(margin, cfg.extent - margin))


def _clamp(v: float, cfg: CorpusConfig) -> float:
    return min(max(v, 1.0), cfg.extent - 1.0)


def make_roads(rng: random.Random, cfg: CorpusConfig) -> list[list[tuple[float, float]]]:
    roads = []
    for _ in range(cfg.roads):
        pts = [_point(rng, cfg)]
        heading = rng.uniform(0, 2 * math.pi)
        for _ in range(rng.randint(1, 3)):
            heading += rng.uniform(-0.8, 0.8)
            length = rng.uniform(300, 1500)
            x, y = pts[-1]
            pts.append((_clamp(x + length * math.cos(heading), cfg), _clamp(y + length * math.sin(heading), cfg)))
        line = [(_off_lattice(x, cfg.cell), _off_lattice(y, cfg.cell)) for x, y in pts]
        deduped = [p for k, p in enumerate(line) if k == 0 or p != line[k - 1]]
        if len(deduped) < 2:
            deduped.append((deduped[0][0] + 10.01, deduped[0][1] + 10.01))
        roads.append(deduped)
    return roads


def make_buildings(rng: random.Random, cfg: CorpusConfig) -> list[list[tuple[float, float]]]:
    buildings = []
    for _ in range(cfg.buildings):
        cx, cy = _point(rng, cfg, margin=300.0)
        hw, hh = rng.uniform(15, 150), rng.uniform(15, 150)
        theta = rng.uniform(0, math.pi / 2)
        c, s = math.cos(theta), math.sin(theta)
        ring = []
        for dx, dy in ((-hw, -hh), (hw, -hh), (hw, hh), (-hw, hh)):
            ring.append((_off_lattice(cx + dx * c - dy * s, cfg.cell), _off_lattice(cy + dx * s + dy * c, cfg.cell)))
        ring.append(ring[0])
        buildings.append(ring)
    return buildings


def _iso(moment: datetime, rng: random.Random) -> str:
    offset = rng.choice([0, 60, 330, -240])
    return moment.astimezone(timezone(timedelta(minutes=offset))).isoformat()


def make_elements_at_risk(rng: random.Random, cfg: CorpusConfig, roads) -> list[dict]:
    features = []
    for k in range(cfg.elements_at_risk):
        if rng.random() < 0.6:
            road = rng.choice(roads)
            seg = rng.randrange(len(road) - 1)
            (x0, y0), (x1, y1) = road[seg], road[seg + 1]
            t = rng.uniform(0.1, 0.9)
            nx, ny = -(y1 - y0), x1 - x0
            norm = math.hypot(nx, ny) or 1.0
            d = rng.uniform(0.0, 6.0)
            x, y = x0 + t * (x1 - x0) + d * nx / norm, y0 + t * (y1 - y0) + d * ny / norm
        else:
            x, y = _point(rng, cfg)
        x, y = _off_lattice(x, cfg.cell), _off_lattice(y, cfg.cell)
        if rng.random() < 0.5:
            geometry = {"type": "Point", "coordinates": [x, y]}
        else:
            ring = [[x, y], [round(x + 4.0, 2), y], [round(x + 4.0, 2), round(y + 4.0, 2)], [x, round(y + 4.0, 2)], [x, y]]
            geometry = {"type": "Polygon", "coordinates": [ring]}
        opens = REFERENCE_TIME + timedelta(minutes=rng.uniform(-600, 240))
        closes = opens + timedelta(minutes=rng.uniform(60, 720))
        features.append({
            "type": "Feature",
            "geometry": geometry,
            "properties": {
                "name": f"element {k}",
                "capacity": rng.randint(10, 1000),
                "openTime": _iso(opens.replace(microsecond=0), rng),
                "closeTime": _iso(closes.replace(microsecond=0), rng),
            },
        })
    return features


def make_rasters(rng: random.Random, cfg: CorpusConfig) -> tuple[Raster, Raster]:
    n = cfg.grid
    phases = [rng.uniform(0, 2 * math.pi) for _ in range(4)]
    flood = np.empty((n, n))
    fire = np.empty((n, n))
    flood_cols = round(cfg.flood_fraction * n)
    fire_first = n - round(cfg.fire_fraction * n)
    for j in range(n):
        for i in range(n):
            x, y = (i + 0.5) * cfg.cell, (j + 0.5) * cfg.cell
            depth = 22 + 15 * math.sin(x / 3100 + phases[0]) * math.cos(y / 4300 + phases[1]) + rng.uniform(-4, 4)
            heat = 50 + 35 * math.sin(y / 2700 + phases[2]) * math.cos(x / 3900 + phases[3]) + rng.uniform(-8, 8)
            flood[j, i] = round(max(depth, 0.0), 2)
            fire[j, i] = round(max(heat, 0.0), 2)
            if i >= flood_cols or rng.random() < cfg.flood_nodata_rate:
                flood[j, i] = -9999.0
            if i < fire_first:
                fire[j, i] = -9999.0
    return (
        Raster(0.0, 0.0, cfg.cell, cfg.cell, flood, Scale("ratio", "cm")),
        Raster(0.0, 0.0, cfg.cell, cfg.cell, fire, Scale("ratio", "fire index")),
    )


def _feature_collection(features) -> dict:
    return {"type": "FeatureCollection", "features": features}


def generate(directory, cfg: CorpusConfig = CorpusConfig()) -> Path:
    """Write the corpus files, the use-case queries and a manifest into ``directory``."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(cfg.seed)
    roads = make_roads(rng, cfg)
    buildings = make_buildings(rng, cfg)
    ears = make_elements_at_risk(rng, cfg, roads)
    flood, fire = make_rasters(rng, cfg)

    def lines(items, kind):
        return [
            {"type": "Feature", "geometry": {"type": kind, "coordinates": coords if kind == "LineString" else [coords]},
             "properties": {"name": f"{kind.lower()} {k}"}}
            for k, coords in enumerate(items)
        ]

    files = {
        "roads.geojson": json.dumps(_feature_collection(lines(roads, "LineString"))),
        "buildings.geojson": json.dumps(_feature_collection(lines(buildings, "Polygon"))),
        "elements_at_risk.geojson": json.dumps(_feature_collection(ears)),
        "flood.asc": write_asc_grid(flood),
        "fire.asc": write_asc_grid(fire),
    }
    for name, text in files.items():
        (out / name).write_text(text, encoding="utf-8")
    qdir = out / "queries"
    qdir.mkdir(exist_ok=True)
    for name, text in QUERIES.items():
        (qdir / f"{name}.rq").write_text(text, encoding="utf-8")
    manifest = {
        "config": cfg.__dict__,
        "layers": [
            {"file": "roads.geojson", "kind": "geojson", "class": EX + "Road"},
            {"file": "buildings.geojson", "kind": "geojson", "class": EX + "Building"},
            {"file": "elements_at_risk.geojson", "kind": "geojson", "class": EAR_NAMESPACE + "ElementAtRisk"},
            {"file": "flood.asc", "kind": "asc", "class": EX + "FloodRiskArea", "unit": "cm"},
            {"file": "fire.asc", "kind": "asc", "class": EX + "FireRiskArea", "unit": "fire index"},
        ],
        "queries": {name: f"queries/{name}.rq" for name in QUERIES},
    }
    (out / MANIFEST).write_text(json.dumps(manifest, indent=1), encoding="utf-8")
    return out


def load(directory, base: str | None = None) -> Workspace:
    """Ingest a generated corpus into a fresh in-memory workspace."""
    root = Path(directory)
    manifest = json.loads((root / MANIFEST).read_text(encoding="utf-8"))
    ws = Workspace()
    for layer in manifest["layers"]:
        path = root / layer["file"]
        if layer["kind"] == "geojson":
            ws.load_geojson(path, layer["class"], base)
        else:
            ws.load_asc(path, layer["class"], layer.get("unit", ""), base)
    return ws


def queries(directory) -> dict[str, str]:
    root = Path(directory)
    manifest = json.loads((root / MANIFEST).read_text(encoding="utf-8"))
    return {name: (root / rel).read_text(encoding="utf-8") for name, rel in manifest["queries"].items()}


@dataclass
class BenchRow:
    name: str
    seconds: float
    rows: int
    table: ResultTable


def bench(directory, base: str | None = None) -> list[BenchRow]:
    ws = load(directory, base)
    report = []
    for name, text in queries(directory).items():
        start = time.perf_counter()
        table = run_query(text, ws.graph)
        report.append(BenchRow(name, time.perf_counter() - start, len(table.rows), table))
    return report


def bench_figure(report: list[BenchRow], path) -> None:
    """Bar chart of query wall times; needs the optional matplotlib extra."""
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError as exc:
        raise RuntimeError("the figure needs matplotlib (pip install rastergraph[plot])") from exc
    fig, ax = plt.subplots(figsize=(6, 3.2))
    ax.bar([r.name for r in report], [r.seconds * 1000 for r in report], color="#4a7ab5")
    ax.set_ylabel("wall time (ms)")
    ax.set_title("use-case query timings")
    for k, r in enumerate(report):
        ax.annotate(f"{r.rows} rows", (k, r.seconds * 1000), ha="center", va="bottom", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
