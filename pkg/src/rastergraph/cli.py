"""Command-line front end: ingestion, queries, raster conversion, corpus and bench."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import corpus
from .geometry import GeometryError
from .ingest import IngestError
from .namespaces import DEFAULT_PREFIXES
from .query.evaluator import eval_select
from .query.parser import QuerySyntaxError, parse_query
from .raster import (
    RasterError,
    parse_asc_grid,
    parse_coverage_json,
    parse_raster_hex_wkb,
    write_asc_grid,
    write_coverage_json,
    write_raster_hex_wkb,
)
from .rdf import MalformedTermError
from .rdf_io import RdfSyntaxError
from .workspace import Workspace

FORMATS = ("covjson", "asc", "hexwkb")
_READERS = {"covjson": parse_coverage_json, "asc": parse_asc_grid, "hexwkb": parse_raster_hex_wkb}
_WRITERS = {"covjson": write_coverage_json, "asc": write_asc_grid, "hexwkb": write_raster_hex_wkb}


class CliError(Exception):
    pass


def expand_iri(text: str) -> str:
    if text.startswith("<") and text.endswith(">"):
        return text[1:-1]
    prefix, sep, local = text.partition(":")
    if sep and prefix in DEFAULT_PREFIXES and not local.startswith("//"):
        return DEFAULT_PREFIXES[prefix] + local
    return text


def sniff_format(path: Path, text: str) -> str:
    suffix = path.suffix.lower()
    if suffix == ".asc":
        return "asc"
    if suffix in (".json", ".covjson"):
        return "covjson"
    if suffix in (".hex", ".wkb", ".hexwkb"):
        return "hexwkb"
    body = text.lstrip()
    if body.startswith("{"):
        return "covjson"
    if body[:5].lower() in ("ncols", "nrows"):
        return "asc"
    return "hexwkb"


def _open(args) -> Workspace:
    return Workspace.open(args.workspace)


def cmd_load_rdf(args) -> int:
    ws = _open(args)
    added = ws.load_rdf(args.file)
    ws.save()
    print(f"added {added} triples ({len(ws.graph)} total)")
    return 0


def cmd_load_geojson(args) -> int:
    ws = _open(args)
    added = ws.load_geojson(Path(args.file), expand_iri(args.class_iri), args.base)
    ws.save()
    print(f"added {added} triples ({len(ws.graph)} total)")
    return 0


def cmd_load_asc(args) -> int:
    ws = _open(args)
    added = ws.load_asc(Path(args.file), expand_iri(args.class_iri), args.unit, args.base)
    ws.save()
    print(f"added {added} triples ({len(ws.graph)} total)")
    return 0


def cmd_query(args) -> int:
    if args.expression is not None:
        text = args.expression
    elif args.file:
        text = Path(args.file).read_text(encoding="utf-8")
    else:
        raise CliError("query needs a query file or -e TEXT")
    query = parse_query(text)
    table = eval_select(query, _open(args).graph)
    sys.stdout.write(table.to_json() if args.format == "json" else table.to_tsv())
    return 0


def cmd_convert(args) -> int:
    src = Path(args.input)
    text = src.read_text(encoding="utf-8")
    fmt = args.source_format or sniff_format(src, text)
    raster = _READERS[fmt](text)
    out = _WRITERS[args.to](raster)
    if args.output == "-":
        sys.stdout.write(out if out.endswith("\n") else out + "\n")
    else:
        Path(args.output).write_text(out, encoding="utf-8")
    return 0


def cmd_gen_corpus(args) -> int:
    cfg = corpus.CorpusConfig(
        roads=args.roads,
        buildings=args.buildings,
        elements_at_risk=args.elements,
        seed=args.seed,
        flood_fraction=args.flood_fraction,
        fire_fraction=args.fire_fraction,
    )
    out = corpus.generate(args.dir, cfg)
    print(f"corpus written to {out}")
    return 0


def cmd_bench(args) -> int:
    report = corpus.bench(args.dir, args.base)
    print("query\trows\tms")
    for row in report:
        print(f"{row.name}\t{row.rows}\t{row.seconds * 1000:.1f}")
    if args.figure:
        corpus.bench_figure(report, args.figure)
        print(f"figure written to {args.figure}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rastergraph", description=__doc__)
    p.add_argument("--workspace", default=".rastergraph", help="workspace directory (default: %(default)s)")
    p.add_argument("--base", default=None, help="base IRI for minted nodes (env RASTERGRAPH_BASE_IRI)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("load-rdf", help="add an N-Triples/prefix document to the workspace")
    s.add_argument("file")
    s.set_defaults(func=cmd_load_rdf)

    s = sub.add_parser("load-geojson", help="add GeoJSON features")
    s.add_argument("file")
    s.add_argument("--class", dest="class_iri", required=True, help="class IRI or prefixed name")
    s.set_defaults(func=cmd_load_geojson)

    s = sub.add_parser("load-asc", help="add an ESRI ASCII raster")
    s.add_argument("file")
    s.add_argument("--class", dest="class_iri", required=True)
    s.add_argument("--unit", default="", help="unit label stored on the scale node")
    s.set_defaults(func=cmd_load_asc)

    s = sub.add_parser("query", help="run a SELECT query against the workspace")
    s.add_argument("file", nargs="?")
    s.add_argument("-e", dest="expression", help="inline query text")
    s.add_argument("--format", choices=("tsv", "json"), default="tsv")
    s.set_defaults(func=cmd_query)

    s = sub.add_parser("convert", help="convert a raster between literal formats")
    s.add_argument("input")
    s.add_argument("--to", choices=FORMATS, required=True)
    s.add_argument("--from", dest="source_format", choices=FORMATS, default=None)
    s.add_argument("output", help="output path, or - for stdout")
    s.set_defaults(func=cmd_convert)

    s = sub.add_parser("gen-corpus", help="write a synthetic hazard corpus")
    s.add_argument("dir")
    s.add_argument("--roads", type=int, default=200)
    s.add_argument("--buildings", type=int, default=100)
    s.add_argument("--elements", type=int, default=40, help="elements at risk")
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--flood-fraction", type=float, default=0.6)
    s.add_argument("--fire-fraction", type=float, default=0.6)
    s.set_defaults(func=cmd_gen_corpus)

    s = sub.add_parser("bench", help="time the use-case queries on a generated corpus")
    s.add_argument("dir")
    s.add_argument("--figure", default=None, help="also write a bar chart (needs matplotlib)")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, QuerySyntaxError, RdfSyntaxError, MalformedTermError, RasterError,
            GeometryError, IngestError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
