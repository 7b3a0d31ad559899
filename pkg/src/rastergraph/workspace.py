"""A directory holding the loaded graph as sorted N-Triples."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from . import ingest
from .raster import Raster, parse_asc_grid
from .rdf import Graph
from .rdf_io import parse_rdf, serialize_ntriples

GRAPH_FILE = "graph.nt"


@dataclass
class Workspace:
    graph: Graph = field(default_factory=Graph)
    rasters: dict[str, Raster] = field(default_factory=dict)
    path: Path | None = None

    @classmethod
    def open(cls, path) -> "Workspace":
        path = Path(path)
        graph_file = path / GRAPH_FILE
        graph = parse_rdf(graph_file.read_text(encoding="utf-8")) if graph_file.exists() else Graph()
        return cls(graph, {}, path)

    def save(self) -> None:
        if self.path is None:
            return
        self.path.mkdir(parents=True, exist_ok=True)
        (self.path / GRAPH_FILE).write_text(serialize_ntriples(self.graph), encoding="utf-8")

    def load_rdf(self, source) -> int:
        text = Path(source).read_text(encoding="utf-8")
        return self.graph.update(parse_rdf(text))

    def load_geojson(self, source, class_iri: str, base: str | None = None) -> int:
        return ingest.ingest_geojson(self.graph, source, class_iri, base)

    def load_asc(self, source, class_iri: str, unit_label: str = "", base: str | None = None,
                 name: str | None = None) -> int:
        raster = parse_asc_grid(Path(source).read_text(encoding="utf-8"))
        self.rasters[name or Path(source).stem] = raster
        return ingest.ingest_raster(self.graph, raster, class_iri, unit_label, base)
