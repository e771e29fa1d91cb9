"""JSON-over-HTTP design-session service for the interactive designer.

A session holds one complex and an undo stack.  Every mutation is
validated before it is committed: the server never stores an invalid
complex, and a rejected move leaves the session unchanged.  Facet
placement follows the paper-described design loop: pick a boundary edge,
inspect the (at most three) legal facets there, veto those that would
collide at the current fold state.
"""

from __future__ import annotations

import itertools
import math
import threading
import uuid
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import io as sio
from .complexes import Edge, Facet, SigmaComplex, build, facet_corners
from .errors import (
    DuplicateFacetError,
    ForbiddenFacetError,
    NonManifoldEdgeError,
    NotAdjacentError,
    NotBoundaryEdgeError,
    SigmafoldError,
)
from .geometry import collision_sweep, facets_intersect, realize, replicated_facets
from .lattice import vadd, unit
from .star import StarParams, alpha_of_t, star_vectors
from .vertex_types import enumerate_vertex_types

DEFAULT_SEED = Facet((0, 0, 0, 0), (1, 3))


@dataclass
class Session:
    id: str
    params: StarParams
    complex: SigmaComplex
    undo_stack: list[SigmaComplex] = field(default_factory=list)
    t: float = 0.5
    lock: threading.Lock = field(default_factory=threading.Lock)


class StarBody(BaseModel):
    r: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)
    lam: float = 1.0 / 3.0


class SessionBody(BaseModel):
    star: StarBody | None = None
    seed_vertex_type: str | None = None


class FacetBody(BaseModel):
    anchor: tuple[int, int, int, int]
    ftype: tuple[int, int]
    t: float | None = None


def vertex_star_facets(signature) -> list[Facet]:
    """Facet set of a vertex figure from its signed-direction word."""
    n = len(signature)
    out = []
    for m in range(n):
        d1, s1 = signature[m]
        d2, s2 = signature[(m + 1) % n]
        anchor = (0, 0, 0, 0)
        if s1 < 0:
            anchor = tuple(a - b for a, b in zip(anchor, unit(d1)))
        if s2 < 0:
            anchor = tuple(a - b for a, b in zip(anchor, unit(d2)))
        i, j = min(d1, d2), max(d1, d2)
        out.append(Facet(anchor, (i, j)))
    return out


def _facet_payload(f: Facet) -> dict:
    return {"anchor": list(f.anchor), "ftype": list(f.ftype)}


def _collides(cx: SigmaComplex, candidate: Facet, params: StarParams, t: float) -> bool:
    """Would the candidate's interior hit existing facets at fold state t?"""
    vectors = star_vectors(params.state(alpha_of_t(params.lam, t)))
    cand_quad = np.array(facet_corners(candidate), dtype=float) @ vectors
    cand_edges = set(_facet_edge_keys(candidate))
    for f in replicated_facets(cx, 1):
        if set(_facet_edge_keys(f)) & cand_edges:
            continue  # sharing an edge is legal contact
        quad = np.array(facet_corners(f), dtype=float) @ vectors
        try:
            if facets_intersect(cand_quad, quad, 1e-9):
                return True
        except SigmafoldError:
            continue
    return False


def _facet_edge_keys(f: Facet):
    from .complexes import facet_edges

    return facet_edges(f)


def create_app(static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="sigmafold design service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}

    def get_session(session_id: str) -> Session:
        s = sessions.get(session_id)
        if s is None:
            raise HTTPException(404, f"unknown session {session_id}")
        return s

    @app.post("/api/session")
    def new_session(body: SessionBody | None = None):
        body = body or SessionBody()
        star = body.star or StarBody()
        params = StarParams(tuple(star.r), star.lam)
        if body.seed_vertex_type:
            wanted = body.seed_vertex_type.strip().lower()
            entry = next(
                (t for t in enumerate_vertex_types() if t.name.lower() == wanted),
                None,
            )
            if entry is None:
                raise HTTPException(400, f"unknown vertex type {body.seed_vertex_type!r}")
            cx = build(vertex_star_facets(entry.signature))
        else:
            cx = build([DEFAULT_SEED])
        sid = uuid.uuid4().hex[:12]
        sessions[sid] = Session(id=sid, params=params, complex=cx)
        return {"id": sid, "facets": len(cx.facets)}

    @app.get("/api/session/{session_id}/complex")
    def get_complex(session_id: str):
        s = get_session(session_id)
        return {"document": sio.serialize(s.complex, s.params)}

    @app.get("/api/session/{session_id}/legal-moves")
    def legal_moves(session_id: str, tail: str, direction: int, t: float | None = None):
        s = get_session(session_id)
        try:
            tail_coord = tuple(int(x) for x in tail.split(","))
        except ValueError:
            raise HTTPException(400, f"bad tail {tail!r}; expected 'a,b,c,d'")
        if len(tail_coord) != 4 or direction not in (1, 2, 3, 4):
            raise HTTPException(400, "tail must have 4 components, direction 1..4")
        at = s.t if t is None else t
        try:
            candidates = s.complex.legal_extensions(Edge(tail_coord, direction))
        except NotBoundaryEdgeError as exc:
            raise HTTPException(409, str(exc))
        return {
            "edge": {"tail": list(tail_coord), "direction": direction},
            "t": at,
            "candidates": [
                {**_facet_payload(f), "collides": _collides(s.complex, f, s.params, at)}
                for f in candidates
            ],
        }

    @app.post("/api/session/{session_id}/extend")
    def extend(session_id: str, body: FacetBody):
        s = get_session(session_id)
        with s.lock:
            at = s.t if body.t is None else body.t
            facet = Facet(tuple(body.anchor), tuple(body.ftype))
            try:
                new_cx = s.complex.extend(facet)
            except ForbiddenFacetError as exc:
                raise HTTPException(409, f"ForbiddenFacet: {exc}")
            except DuplicateFacetError as exc:
                raise HTTPException(409, f"Duplicate: {exc}")
            except NonManifoldEdgeError as exc:
                raise HTTPException(409, f"NonManifoldEdge: {exc}")
            except NotAdjacentError as exc:
                raise HTTPException(409, f"NotAdjacent: {exc}")
            if _collides(s.complex, s.complex.canon_facet(facet), s.params, at):
                raise HTTPException(409, "Collision: facet interior would hit the complex")
            s.undo_stack.append(s.complex)
            s.complex = new_cx
        return {"document": sio.serialize(s.complex, s.params), "facets": len(s.complex.facets)}

    @app.post("/api/session/{session_id}/undo")
    def undo(session_id: str):
        s = get_session(session_id)
        with s.lock:
            if not s.undo_stack:
                raise HTTPException(409, "nothing to undo")
            s.complex = s.undo_stack.pop()
        return {"document": sio.serialize(s.complex, s.params), "facets": len(s.complex.facets)}

    @app.get("/api/session/{session_id}/mesh")
    def mesh(session_id: str, t: float = 0.5, extent: int = 1):
        s = get_session(session_id)
        s.t = t
        m = realize(s.complex, s.params, t, extent=extent)
        order = m.vertex_order
        types = {}
        for v in order:
            try:
                if s.complex.is_interior_vertex(v):
                    types[",".join(map(str, v))] = s.complex.classify_vertex(v).name
            except SigmafoldError:
                continue
        return {
            "t": t,
            "alpha_radians": alpha_of_t(s.params.lam, t),
            "vertices": [
                {"coord": list(v), "position": [float(x) for x in m.vertices[v]]}
                for v in order
            ],
            "quads": [list(q) for q in m.quad_indices()],
            "vertex_types": types,
        }

    @app.get("/api/session/{session_id}/collisions")
    def collisions(session_id: str, steps: int = 50, margin: float = 0.02):
        s = get_session(session_id)
        report = collision_sweep(
            s.complex, s.params, steps=steps, t_range=(margin, 1.0 - margin)
        )
        return {
            "steps": report.steps,
            "t_range": list(report.t_range),
            "events": [
                {
                    "facet_a": _facet_payload(ev.facet_a),
                    "facet_b": _facet_payload(ev.facet_b),
                    "t_lo": ev.t_lo,
                    "t_hi": ev.t_hi,
                }
                for ev in report.events
            ],
        }

    @app.get("/api/session/{session_id}/classify")
    def classify(session_id: str):
        s = get_session(session_id)
        return {"census": s.complex.vertex_census()}

    @app.get("/api/catalog")
    def catalog():
        return {
            "types": [
                {
                    "name": t.name,
                    "valency": t.valency,
                    "acute": t.acute,
                    "obtuse": t.obtuse,
                    "signature": [list(e) for e in t.signature],
                }
                for t in enumerate_vertex_types()
            ]
        }

    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="designer")

    return app
