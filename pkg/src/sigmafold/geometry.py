"""Geometric realization, folding verification and collision detection.

A complex is realized at a fold parameter t by placing every vertex at
base + sum(n_i * v_i(alpha(t))).  Facet congruence along the fold and
exact collapse at the ends are theorems for this family; the functions
here verify them numerically from realized coordinates rather than from
the defining formulas.
"""

from __future__ import annotations

import itertools
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .complexes import Facet, SigmaComplex, build, facet_corners
from .errors import (
    DegenerateQuadError,
    EdgeUnmatchedError,
    NonGenericError,
    NonParallelogramFaceError,
    RealizationAsymmetryWarning,
)
from .lattice import Coord4, vadd, vscale
from .star import StarParams, StarState, alpha_of_t, star_vectors

__all__ = [
    "Mesh",
    "realize",
    "congruence_check",
    "CongruenceReport",
    "collapse_extent",
    "facets_intersect",
    "collision_sweep",
    "CollisionReport",
    "CollisionEvent",
    "lift_geometry",
]


@dataclass
class Mesh:
    """Realized complex: vertex positions keyed by lattice coordinates."""

    vertices: dict[Coord4, np.ndarray]
    quads: list[tuple[Coord4, Coord4, Coord4, Coord4]]
    star: StarState
    base: np.ndarray

    @property
    def positions(self) -> np.ndarray:
        return np.array([self.vertices[k] for k in self.vertex_order])

    @property
    def vertex_order(self) -> list[Coord4]:
        return sorted(self.vertices)

    def quad_indices(self) -> list[tuple[int, int, int, int]]:
        index = {k: i for i, k in enumerate(self.vertex_order)}
        return [tuple(index[c] for c in quad) for quad in self.quads]

    def diameter(self) -> float:
        pts = self.positions
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        return float(np.linalg.norm(hi - lo))


def _check_realization_requirements(cx: SigmaComplex, params: StarParams):
    reqs = cx.metadata.get("realization_requirements", ())
    r = params.r
    for req in reqs:
        ok = {
            "r1 == r2": r[0] == r[1],
            "r3 == r4": r[2] == r[3],
        }.get(req, True)
        if not ok:
            warnings.warn(
                f"star radii {r} break the construction requirement {req!r}; "
                "mirrored parts will not be congruent",
                RealizationAsymmetryWarning,
                stacklevel=3,
            )


def replicated_facets(cx: SigmaComplex, extent) -> list[Facet]:
    """Facet set with periodic complexes replicated `extent` times per
    period direction (int or per-direction tuple)."""
    gens = cx.lattice.generators
    if not gens:
        return list(cx.facets)
    if isinstance(extent, int):
        extents = (extent,) * len(gens)
    else:
        extents = tuple(extent)
    if len(extents) != len(gens) or any(e < 1 for e in extents):
        raise ValueError(f"bad replication extent {extent} for {len(gens)} periods")
    out = []
    for combo in itertools.product(*(range(e) for e in extents)):
        shift = (0, 0, 0, 0)
        for k, g in zip(combo, gens):
            shift = vadd(shift, vscale(k, g))
        out.extend(Facet(vadd(f.anchor, shift), f.ftype) for f in cx.facets)
    return out


def realize(
    cx: SigmaComplex,
    params: StarParams,
    t: float,
    base=(0.0, 0.0, 0.0),
    extent=1,
) -> Mesh:
    """Realize at fold parameter t; periodic input is replicated first."""
    _check_realization_requirements(cx, params)
    state = params.state(alpha_of_t(params.lam, t))
    vectors = star_vectors(state)
    base = np.asarray(base, dtype=float)
    facets = replicated_facets(cx, extent)
    corners = [facet_corners(f) for f in facets]
    keys = sorted({c for quad in corners for c in quad})
    coords = np.array(keys, dtype=float)
    points = base + coords @ vectors
    vertices = {k: points[i] for i, k in enumerate(keys)}
    return Mesh(vertices=vertices, quads=corners, star=state, base=base)


@dataclass(frozen=True)
class CongruenceReport:
    ok: bool
    max_relative_deviation: float
    failures: tuple[Facet, ...] = ()


def _facet_gauge(mesh: Mesh):
    """Per-quad edge lengths and diagonal from realized coordinates."""
    out = []
    for quad in mesh.quads:
        p = [mesh.vertices[c] for c in quad]
        out.append(
            (
                float(np.linalg.norm(p[1] - p[0])),
                float(np.linalg.norm(p[3] - p[0])),
                float(np.linalg.norm(p[2] - p[0])),
            )
        )
    return np.array(out)


def congruence_check(
    cx: SigmaComplex,
    params: StarParams,
    t1: float,
    t2: float,
    tol: float = 1e-9,
    extent=1,
) -> CongruenceReport:
    """Compare realized edge lengths and diagonals of every facet at two
    fold states; they must agree to relative tol."""
    m1 = realize(cx, params, t1, extent=extent)
    m2 = realize(cx, params, t2, extent=extent)
    g1, g2 = _facet_gauge(m1), _facet_gauge(m2)
    rel = np.abs(g1 - g2) / np.maximum(np.maximum(np.abs(g1), np.abs(g2)), 1e-300)
    worst = rel.max(axis=1)
    bad = [i for i, w in enumerate(worst) if w >= tol]
    facets = replicated_facets(cx, extent)
    return CongruenceReport(
        ok=not bad,
        max_relative_deviation=float(worst.max()) if len(worst) else 0.0,
        failures=tuple(facets[i] for i in bad),
    )


def collapse_extent(cx: SigmaComplex, params: StarParams, endpoint: str, extent=1) -> float:
    """Residual thickness at a collapse endpoint.

    plane_x0: max |x| at t=1;  plane_y0: max |y| at t=0.
    """
    if endpoint == "plane_x0":
        mesh = realize(cx, params, 1.0, extent=extent)
        axis = 0
    elif endpoint == "plane_y0":
        mesh = realize(cx, params, 0.0, extent=extent)
        axis = 1
    else:
        raise ValueError(f"endpoint must be 'plane_x0' or 'plane_y0', got {endpoint!r}")
    return float(np.abs(mesh.positions[:, axis]).max())


# -- facet-facet intersection ----------------------------------------------------


def _quad_frame(quad: np.ndarray, tol: float):
    """Orthonormal in-plane frame and normal for a planar quad."""
    u = quad[1] - quad[0]
    w = quad[3] - quad[0]
    n = np.cross(u, w)
    nn = np.linalg.norm(n)
    scale = max(np.linalg.norm(u), np.linalg.norm(w))
    if nn < (tol * max(scale, 1.0)) ** 2 or scale == 0.0:
        raise DegenerateQuadError("quad area below tolerance (collapse endpoint state?)")
    return u, w, n / nn


def _interval_strictly_inside(quad2d: np.ndarray, p0: np.ndarray, d: np.ndarray, margin: float):
    """Parameter interval of the line p0 + t*d strictly inside a convex 2D polygon."""
    lo, hi = -np.inf, np.inf
    m = len(quad2d)
    for k in range(m):
        a, b = quad2d[k], quad2d[(k + 1) % m]
        edge = b - a
        normal = np.array([edge[1], -edge[0]])  # inward/outward fixed below
        # orient the normal to the polygon interior using the centroid
        if normal @ (quad2d.mean(axis=0) - a) < 0:
            normal = -normal
        denom = normal @ d
        offset = normal @ (p0 - a) + margin  # strict: stay margin inside
        if abs(denom) < 1e-300:
            if normal @ (p0 - a) <= margin:
                return None
            continue
        bound = -offset / denom
        if denom > 0:
            lo = max(lo, bound)
        else:
            hi = min(hi, bound)
    if lo >= hi:
        return None
    return lo, hi


def facets_intersect(quad_a: np.ndarray, quad_b: np.ndarray, tol: float = 1e-9) -> bool:
    """Do the relative interiors of two planar parallelograms intersect?

    Coplanar overlap counts; contact along shared edges or vertices does
    not.  Raises DegenerateQuadError for quads of near-zero area.
    """
    qa = np.asarray(quad_a, dtype=float)
    qb = np.asarray(quad_b, dtype=float)
    ua, wa, na = _quad_frame(qa, tol)
    ub, wb, nb = _quad_frame(qb, tol)
    scale = max(np.linalg.norm(ua), np.linalg.norm(wa), np.linalg.norm(ub), np.linalg.norm(wb))
    eps = tol * scale
    cross = np.cross(na, nb)
    if np.linalg.norm(cross) > tol:
        # non-coplanar: interiors can only meet along the plane-plane line
        d = cross / np.linalg.norm(cross)
        # a point on both planes: solve [na; nb; d] x = [na.a0, nb.b0, 0]
        m = np.vstack([na, nb, d])
        rhs = np.array([na @ qa[0], nb @ qb[0], 0.0])
        try:
            p0 = np.linalg.solve(m, rhs)
        except np.linalg.LinAlgError:
            return False
        ia = _line_in_quad(qa, p0, d, eps)
        if ia is None:
            return False
        ib = _line_in_quad(qb, p0, d, eps)
        if ib is None:
            return False
        lo = max(ia[0], ib[0])
        hi = min(ia[1], ib[1])
        return hi - lo > eps / max(scale, 1e-300)
    # coplanar (or parallel): if planes are offset, no contact
    if abs(na @ (qb[0] - qa[0])) > eps:
        return False
    # project to 2D and run a strict separating-axis test
    axis_u = ua / np.linalg.norm(ua)
    axis_v = np.cross(na, axis_u)
    a2 = np.array([[p @ axis_u, p @ axis_v] for p in qa])
    b2 = np.array([[p @ axis_u, p @ axis_v] for p in qb])
    for poly in (a2, b2):
        for k in range(len(poly)):
            edge = poly[(k + 1) % len(poly)] - poly[k]
            axis = np.array([edge[1], -edge[0]])
            norm = np.linalg.norm(axis)
            if norm < 1e-300:
                continue
            axis = axis / norm
            pa = a2 @ axis
            pb = b2 @ axis
            if min(pa.max(), pb.max()) - max(pa.min(), pb.min()) <= eps:
                return False
    return True


def _line_in_quad(quad: np.ndarray, p0: np.ndarray, d: np.ndarray, eps: float):
    """Interval of p0 + t*d lying strictly inside the planar quad."""
    u = quad[1] - quad[0]
    w = quad[3] - quad[0]
    n = np.cross(u, w)
    basis = np.vstack([u, w]).T
    # coordinates (s, r) with point = quad0 + s*u + r*w
    m = np.vstack([u, w, n]).T
    try:
        minv = np.linalg.inv(m)
    except np.linalg.LinAlgError:
        return None
    q0 = minv @ (p0 - quad[0])
    dq = minv @ d
    lo, hi = -np.inf, np.inf
    rel = eps / max(np.linalg.norm(u), np.linalg.norm(w))
    for coord, dcoord in ((q0[0], dq[0]), (q0[1], dq[1])):
        if abs(dcoord) < 1e-14:
            if not (rel < coord < 1.0 - rel):
                return None
            continue
        t0 = (rel - coord) / dcoord
        t1 = (1.0 - rel - coord) / dcoord
        lo = max(lo, min(t0, t1))
        hi = min(hi, max(t0, t1))
    if lo >= hi:
        return None
    return lo, hi


# -- collision sweep ---------------------------------------------------------------


@dataclass(frozen=True)
class CollisionEvent:
    facet_a: Facet
    facet_b: Facet
    t_lo: float
    t_hi: float


@dataclass(frozen=True)
class CollisionReport:
    events: tuple[CollisionEvent, ...]
    steps: int
    t_range: tuple[float, float]

    @property
    def empty(self) -> bool:
        return not self.events

    def __bool__(self):
        return bool(self.events)


def _candidate_pairs(facets: list[Facet]):
    """Pairs eligible for the narrow phase: facets sharing no edge.

    Pairs sharing only a vertex are kept: the known self-intersections of
    this family happen between facets touching at one corner.
    """
    edge_sets = []
    for f in facets:
        from .complexes import facet_edges

        edge_sets.append(frozenset(facet_edges(f)))
    pairs = []
    for i in range(len(facets)):
        for j in range(i + 1, len(facets)):
            if edge_sets[i] & edge_sets[j]:
                continue
            pairs.append((i, j))
    return pairs


def _quads_at(cx_facets, params: StarParams, t: float):
    vectors = star_vectors(params.state(alpha_of_t(params.lam, t)))
    quads = []
    for f in cx_facets:
        quads.append(np.array(facet_corners(f), dtype=float) @ vectors)
    return quads


def _hits_at(cx_facets, pairs, params, t, tol) -> set[tuple[int, int]]:
    quads = _quads_at(cx_facets, params, t)
    boxes_lo = np.array([q.min(axis=0) for q in quads])
    boxes_hi = np.array([q.max(axis=0) for q in quads])
    pad = tol * float(np.linalg.norm(boxes_hi.max(axis=0) - boxes_lo.min(axis=0)))
    hits = set()
    for i, j in pairs:
        if np.any(boxes_lo[i] > boxes_hi[j] + pad) or np.any(boxes_lo[j] > boxes_hi[i] + pad):
            continue
        try:
            if facets_intersect(quads[i], quads[j], tol):
                hits.add((i, j))
        except DegenerateQuadError:
            continue
    return hits


def collision_sweep(
    cx: SigmaComplex,
    params: StarParams,
    steps: int = 50,
    t_range: tuple[float, float] = (0.02, 0.98),
    tol: float = 1e-9,
    extent=1,
    refine: float = 1e-4,
) -> CollisionReport:
    """Sample the fold for self-intersections and bracket their onsets.

    Broad phase: axis-aligned boxes.  Narrow phase: facets_intersect on
    pairs that share no edge.  Each colliding pair is reported with a
    t-interval; interval ends are refined by bisection to `refine`.
    """
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    lo, hi = t_range
    if not (0.0 < lo < hi < 1.0):
        raise ValueError(f"t_range must satisfy 0 < lo < hi < 1, got {t_range}")
    facets = replicated_facets(cx, extent)
    pairs = _candidate_pairs(facets)
    ts = np.linspace(lo, hi, steps)
    workers = max(1, int(os.environ.get("SIGMAFOLD_THREADS", "1")))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            sample_hits = list(pool.map(lambda t: _hits_at(facets, pairs, params, float(t), tol), ts))
    else:
        sample_hits = [_hits_at(facets, pairs, params, float(t), tol) for t in ts]

    def colliding(pair, t):
        return pair in _hits_at(facets, [pair], params, t, tol)

    def bisect(pair, t_clear, t_hit):
        while abs(t_hit - t_clear) > refine:
            mid = 0.5 * (t_clear + t_hit)
            if colliding(pair, mid):
                t_hit = mid
            else:
                t_clear = mid
        return t_clear, t_hit

    events = []
    all_pairs = sorted(set().union(*sample_hits)) if sample_hits else []
    for pair in all_pairs:
        flags = [pair in h for h in sample_hits]
        k = flags.index(True)
        m = len(flags) - 1 - flags[::-1].index(True)
        if k == 0:
            t_lo = float(ts[0])
        else:
            t_lo = bisect(pair, float(ts[k - 1]), float(ts[k]))[1]
        if m == len(flags) - 1:
            t_hi = float(ts[-1])
        else:
            t_hi = bisect(pair, float(ts[m + 1]), float(ts[m]))[1]
        events.append(CollisionEvent(facets[pair[0]], facets[pair[1]], t_lo, t_hi))
    events.sort(key=lambda ev: (ev.t_lo, ev.facet_a, ev.facet_b))
    return CollisionReport(tuple(events), steps, (lo, hi))


# -- lifting a mesh back to lattice coordinates --------------------------------------


def lift_geometry(points, quads, star: StarState, tol: float = 1e-6) -> SigmaComplex:
    """Recover the combinatorial complex from a realized quad mesh.

    Matches every mesh edge vector against +-v_i, labels vertices with
    lattice coordinates by breadth-first search, and rebuilds the facet
    set.  A labeling conflict certifies a loop that is not generically
    closed (or a mesh not based on this star).
    """
    pts = [np.asarray(p, dtype=float) for p in points]
    vectors = star_vectors(star)
    scale = max(np.linalg.norm(v) for v in vectors)
    quad_list = [tuple(q) for q in quads]
    for q in quad_list:
        if len(q) != 4:
            raise NonParallelogramFaceError(f"face {q} is not a quad")
        p = [pts[i] for i in q]
        if np.linalg.norm((p[0] + p[2]) - (p[1] + p[3])) > tol * max(scale, 1.0) * 4:
            raise NonParallelogramFaceError(f"face {q} fails parallelogram closure")

    def match(vec) -> tuple[int, int]:
        for i in range(4):
            for s in (1, -1):
                if np.linalg.norm(vec - s * vectors[i]) <= tol * max(np.linalg.norm(vectors[i]), 1.0):
                    return i + 1, s
        raise EdgeUnmatchedError(f"edge vector {vec} matches no star vector within {tol}")

    adjacency: dict[int, list[int]] = {}
    for q in quad_list:
        for k in range(4):
            a, b = q[k], q[(k + 1) % 4]
            adjacency.setdefault(a, []).append(b)
            adjacency.setdefault(b, []).append(a)

    labels: dict[int, Coord4] = {}
    parent: dict[int, int] = {}
    start = min(adjacency)
    labels[start] = (0, 0, 0, 0)
    queue = [start]
    while queue:
        cur = queue.pop(0)
        for nxt in adjacency[cur]:
            d, s = match(pts[nxt] - pts[cur])
            step = vscale(s, (1, 0, 0, 0) if d == 1 else (0, 1, 0, 0) if d == 2 else (0, 0, 1, 0) if d == 3 else (0, 0, 0, 1))
            want = vadd(labels[cur], step)
            if nxt in labels:
                if labels[nxt] != want:
                    loop = _offending_loop(parent, cur, nxt)
                    raise NonGenericError(
                        f"label conflict at mesh vertex {nxt}: "
                        f"{labels[nxt]} vs {want}",
                        loop=loop,
                    )
            else:
                labels[nxt] = want
                parent[nxt] = cur
                queue.append(nxt)

    facets = []
    for q in quad_list:
        corner_labels = [labels[i] for i in q]
        anchor = tuple(min(c[k] for c in corner_labels) for k in range(4))
        spans = sorted(
            k + 1
            for k in range(4)
            if max(c[k] for c in corner_labels) > anchor[k]
        )
        if len(spans) != 2:
            raise NonParallelogramFaceError(f"face {q} does not span two lattice directions")
        facets.append(Facet(anchor, (spans[0], spans[1])))  # type: ignore[arg-type]
    return build(facets)


def _offending_loop(parent, a, b):
    """Vertex loop witnessing a labeling conflict: root->a plus edge to b, back to root."""
    path_a = [a]
    while path_a[-1] in parent:
        path_a.append(parent[path_a[-1]])
    path_b = [b]
    while path_b[-1] in parent:
        path_b.append(parent[path_b[-1]])
    return path_a[::-1] + path_b
