"""Serialization of complexes and export of realized meshes.

Documents are JSON and parameter-exact: only the radii and the fold
invariant are stored, never floating star vectors, so a round trip is
lossless.  OBJ export is deterministic (vertices sorted by lattice
coordinate) and keeps quads as quads.
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

from .complexes import Facet, SigmaComplex, build
from .errors import ParseError, VersionMismatchError
from .geometry import Mesh, realize
from .star import StarParams, alpha_of_t

__all__ = [
    "FORMAT_NAME",
    "FORMAT_VERSION",
    "serialize",
    "parse",
    "export_obj",
    "load_obj",
    "export_animation",
]

FORMAT_NAME = "sigmafold-complex"
FORMAT_VERSION = 1


def serialize(cx: SigmaComplex, params: StarParams, indent: int | None = 2) -> str:
    """Canonical JSON text for a complex and its star parameters."""
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "star": {"r": list(params.r), "lambda": params.lam},
        "facets": [
            {"anchor": list(f.anchor), "type": list(f.ftype)} for f in cx.facets
        ],
        "periods": [list(g) for g in cx.lattice.generators],
        "metadata": _jsonable(cx.metadata),
    }
    return json.dumps(doc, indent=indent, sort_keys=True)


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


def parse(text: str) -> tuple[SigmaComplex, StarParams]:
    """Rebuild a complex from document text, validating via build()."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise ParseError(f"not a {FORMAT_NAME} document")
    if doc.get("version") != FORMAT_VERSION:
        raise VersionMismatchError(
            f"document version {doc.get('version')!r}, supported: {FORMAT_VERSION}"
        )
    try:
        star = doc["star"]
        params = StarParams(tuple(star["r"]), star["lambda"])
        facets = [
            Facet(tuple(int(x) for x in f["anchor"]), tuple(int(x) for x in f["type"]))
            for f in doc["facets"]
        ]
        periods = [tuple(int(x) for x in g) for g in doc.get("periods", [])]
        metadata = doc.get("metadata", {})
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed document field: {exc}") from exc
    cx = build(facets, periods, metadata)
    return cx, params


def export_obj(mesh: Mesh) -> str:
    """Wavefront OBJ text: sorted vertices, 1-based quad faces.

    Coordinates carry 12 significant digits; output is bit-identical
    across runs for identical meshes.
    """
    order = mesh.vertex_order
    index = {k: i + 1 for i, k in enumerate(order)}
    lines = ["# sigmafold mesh", f"# vertices {len(order)} quads {len(mesh.quads)}"]
    for k in order:
        x, y, z = mesh.vertices[k]
        lines.append(f"v {x:.12g} {y:.12g} {z:.12g}")
    for quad in mesh.quads:
        a, b, c, d = (index[c] for c in quad)
        lines.append(f"f {a} {b} {c} {d}")
    return "\n".join(lines) + "\n"


def load_obj(text: str):
    """Minimal OBJ reader: returns (points, quads) with 0-based indices."""
    points: list[list[float]] = []
    quads: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "v":
            if len(parts) < 4:
                raise ParseError(f"line {lineno}: vertex needs 3 coordinates")
            points.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            idx = tuple(int(p.split("/")[0]) - 1 for p in parts[1:])
            quads.append(idx)
    return points, quads


def export_animation(
    cx: SigmaComplex,
    params: StarParams,
    frames: int,
    directory,
    margin: float = 0.02,
    ts=None,
    extent=1,
) -> list[dict]:
    """Write one OBJ per fold state plus a manifest.json.

    By default the fold parameter is sampled uniformly over
    [margin, 1 - margin]; explicit values can be given via ts.
    """
    if ts is None:
        if frames < 2:
            raise ValueError(f"need at least 2 frames, got {frames}")
        ts = [margin + k * (1.0 - 2 * margin) / (frames - 1) for k in range(frames)]
    ts = [float(t) for t in ts]
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IOError(f"cannot create {directory}: {exc}") from exc
    manifest = []
    for k, t in enumerate(ts):
        mesh = realize(cx, params, t, extent=extent)
        name = f"frame_{k:04d}.obj"
        (directory / name).write_text(export_obj(mesh))
        manifest.append(
            {"frame": k, "file": name, "t": t, "alpha_radians": alpha_of_t(params.lam, t)}
        )
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
    return manifest
