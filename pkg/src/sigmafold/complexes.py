"""Combinatorial model of facet complexes on the 4-star lattice.

Facets are parallelograms anchored on integer combinations of the star
vectors; a complex is a finite facet set, optionally together with a
period lattice, in which case the facet set is a fundamental-domain
representative set and all incidence queries run modulo the lattice.
Storing integer coordinates makes every closed edge loop generically
closed by construction, so deformability never needs a runtime check.
"""

from __future__ import annotations

import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    BoundaryVertexError,
    DisconnectedError,
    DuplicateFacetError,
    DuplicateFacetWarning,
    ForbiddenFacetError,
    NonManifoldEdgeError,
    NotAdjacentError,
    NotBoundaryEdgeError,
    NotClosedError,
    NotManifoldError,
    NotSublatticeError,
    UnrecognizedVertexError,
)
from .lattice import Coord4, Lattice, TRIVIAL_LATTICE, unit, vadd, vneg, vsub
from .vertex_types import (
    VertexType,
    canonical_signature,
    catalog_by_signature,
    curvature as vertex_curvature,
)

__all__ = [
    "ADMISSIBLE_TYPES",
    "FORBIDDEN_TYPES",
    "Facet",
    "Edge",
    "SigmaComplex",
    "build",
    "facet_corners",
    "facet_edges",
    "is_admissible",
    "mirror",
    "reflect",
    "translate",
    "vertex_curvature",
    "PolyhedronReport",
    "QuotientEuler",
]

ADMISSIBLE_TYPES = ((1, 3), (1, 4), (2, 3), (2, 4))
FORBIDDEN_TYPES = ((1, 2), (3, 4))


class Facet(NamedTuple):
    anchor: Coord4
    ftype: tuple[int, int]


class Edge(NamedTuple):
    tail: Coord4
    direction: int


def is_admissible(ftype: Sequence[int]) -> bool:
    i, j = ftype
    return (min(i, j), max(i, j)) in ADMISSIBLE_TYPES


def normalize_facet(anchor: Sequence[int], ftype: Sequence[int]) -> Facet:
    i, j = int(ftype[0]), int(ftype[1])
    if i > j:
        i, j = j, i
    return Facet(tuple(int(x) for x in anchor), (i, j))  # type: ignore[arg-type]


def facet_corners(f: Facet) -> tuple[Coord4, Coord4, Coord4, Coord4]:
    """Corners in cyclic order: a, a+e_i, a+e_i+e_j, a+e_j."""
    i, j = f.ftype
    a = f.anchor
    ei, ej = unit(i), unit(j)
    return (a, vadd(a, ei), vadd(vadd(a, ei), ej), vadd(a, ej))


def facet_edges(f: Facet) -> tuple[Edge, Edge, Edge, Edge]:
    i, j = f.ftype
    a = f.anchor
    ei, ej = unit(i), unit(j)
    return (
        Edge(a, i),
        Edge(vadd(a, ei), j),
        Edge(vadd(a, ej), i),
        Edge(a, j),
    )


def _corner_class(f: Facet, corner: Coord4) -> str:
    """Obtuse at the anchor and the opposite corner, acute at the others."""
    i, j = f.ftype
    opposite = vadd(vadd(f.anchor, unit(i)), unit(j))
    return "obtuse" if corner == f.anchor or corner == opposite else "acute"


@dataclass(frozen=True)
class PolyhedronReport:
    ok: bool
    bad_edges: tuple[Edge, ...] = ()
    bad_vertices: tuple[Coord4, ...] = ()


@dataclass(frozen=True)
class QuotientEuler:
    vertices: int
    edges: int
    faces: int
    chi: int
    genus: int | None
    curvature_sum: float
    odd_chi: bool


class SigmaComplex:
    """Immutable facet complex; operations return new values."""

    def __init__(
        self,
        facets: Iterable[Facet],
        lattice: Lattice = TRIVIAL_LATTICE,
        metadata: Mapping | None = None,
    ):
        self.lattice = lattice
        self.facets: tuple[Facet, ...] = tuple(sorted(set(facets)))
        self.metadata: dict = dict(metadata or {})
        self._edge_counts: Counter | None = None
        self._vertex_instances: dict | None = None

    # -- identity ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, SigmaComplex):
            return NotImplemented
        return self.facets == other.facets and self.lattice == other.lattice

    def __hash__(self):
        return hash((self.facets, self.lattice))

    def __repr__(self):
        per = f", periods={list(self.lattice.generators)}" if self.lattice.rank else ""
        return f"SigmaComplex({len(self.facets)} facets{per})"

    @property
    def periods(self) -> tuple[Coord4, ...]:
        return self.lattice.generators

    def canon_facet(self, f: Facet) -> Facet:
        return Facet(self.lattice.canon(f.anchor), f.ftype)

    def canon_edge(self, e: Edge) -> Edge:
        return Edge(self.lattice.canon(e.tail), e.direction)

    def canon_vertex(self, v: Sequence[int]) -> Coord4:
        return self.lattice.canon(v)

    def facet_census(self) -> dict[tuple[int, int], int]:
        census: Counter = Counter(f.ftype for f in self.facets)
        return dict(census)

    # -- incidence --------------------------------------------------------

    def edges(self) -> dict[Edge, int]:
        """Edge -> incidence count, canonical modulo the period lattice."""
        if self._edge_counts is None:
            counts: Counter = Counter()
            for f in self.facets:
                for e in facet_edges(f):
                    counts[self.canon_edge(e)] += 1
            self._edge_counts = counts
        return dict(self._edge_counts)

    def edge_count(self, e: Edge) -> int:
        if self._edge_counts is None:
            self.edges()
        assert self._edge_counts is not None
        return self._edge_counts.get(self.canon_edge(e), 0)

    def vertices(self) -> list[Coord4]:
        return sorted(self._instances_by_vertex().keys())

    def _instances_by_vertex(self) -> dict[Coord4, list[Facet]]:
        """Canonical vertex -> facet instances translated to touch it."""
        if self._vertex_instances is None:
            table: dict[Coord4, list[Facet]] = defaultdict(list)
            for f in self.facets:
                for corner in facet_corners(f):
                    cv = self.canon_vertex(corner)
                    shift = vsub(corner, cv)
                    table[cv].append(Facet(vsub(f.anchor, shift), f.ftype))
            self._vertex_instances = dict(table)
        return self._vertex_instances

    def _vertex_link(self, v: Sequence[int]):
        """Facet instances around v and their incident-edge adjacency.

        Returns (instances, edge_map) where edge_map maps each incident
        edge to the instance indices using it.
        """
        cv = self.canon_vertex(v)
        instances = self._instances_by_vertex().get(cv, [])
        edge_map: dict[Edge, list[int]] = defaultdict(list)
        for idx, inst in enumerate(instances):
            for e in facet_edges(inst):
                if e.tail == cv or vadd(e.tail, unit(e.direction)) == cv:
                    edge_map[e].append(idx)
        return cv, instances, edge_map

    def _trace_link(self, v: Sequence[int]):
        """Order the facet instances around v into a cycle or path."""
        cv, instances, edge_map = self._vertex_link(v)
        if not instances:
            raise BoundaryVertexError(f"{tuple(v)} is not a vertex of the complex")
        if len(instances) == 1:
            return cv, list(instances), [], False
        for e, users in edge_map.items():
            if len(users) > 2:
                raise NotManifoldError(f"edge {e} has {len(users)} facets at vertex {cv}")
        neighbors: dict[int, list[tuple[int, Edge]]] = defaultdict(list)
        open_edges: dict[int, list[Edge]] = defaultdict(list)
        for e, users in edge_map.items():
            if len(users) == 2:
                a, b = users
                if a == b:
                    raise NotManifoldError(f"facet wraps onto edge {e} at vertex {cv}")
                neighbors[a].append((b, e))
                neighbors[b].append((a, e))
            else:
                open_edges[users[0]].append(e)
        start = min(range(len(instances)), key=lambda i: instances[i])
        ends = [i for i in range(len(instances)) if len(neighbors[i]) < 2]
        closed = not ends
        if not closed:
            # a path must have exactly two ends
            if len(ends) != 2 or any(len(neighbors[i]) > 2 for i in neighbors):
                raise NotManifoldError(f"vertex {cv} link is not a path or cycle")
            start = min(ends, key=lambda i: instances[i])
        order = [start]
        used_edges: list[Edge] = []
        prev = None
        while True:
            options = [
                (nxt, e)
                for nxt, e in neighbors[order[-1]]
                if not (used_edges and e == used_edges[-1])
            ]
            if prev is not None:
                options = [(nxt, e) for nxt, e in options if nxt != prev or len(instances) == 2]
            if not options:
                break
            if len(order) == 1 and closed:
                options.sort(key=lambda t: instances[t[0]])
            nxt, e = options[0]
            if closed and nxt == start:
                used_edges.append(e)
                break
            order.append(nxt)
            used_edges.append(e)
            prev = order[-2]
            if len(order) > len(instances):
                raise NotManifoldError(f"vertex {cv} link does not close properly")
        if len(order) != len(instances):
            raise NotManifoldError(f"vertex {cv} link is not a single cycle or path")
        return cv, [instances[i] for i in order], used_edges, closed

    def is_interior_vertex(self, v: Sequence[int]) -> bool:
        try:
            _, _, _, closed = self._trace_link(v)
        except (NotManifoldError, BoundaryVertexError):
            return False
        return closed

    def vertex_cycle(self, v: Sequence[int]) -> list[tuple[Facet, str]]:
        """Facets in cyclic order around an interior vertex with corner classes."""
        cv, ordered, _, closed = self._trace_link(v)
        if not closed:
            raise BoundaryVertexError(f"vertex {cv} lies on the boundary")
        return [(f, _corner_class(f, cv)) for f in ordered]

    def vertex_word(self, v: Sequence[int]):
        """Cyclic signed-direction word of the edges around an interior vertex."""
        cv, ordered, used_edges, closed = self._trace_link(v)
        if not closed:
            raise BoundaryVertexError(f"vertex {cv} lies on the boundary")
        word = []
        # used_edges[m] is shared by ordered[m] and ordered[m+1]; the word
        # convention puts edge m before facet m, so rotate by one.
        edges_cyclic = [used_edges[-1]] + used_edges[:-1]
        for e in edges_cyclic:
            sign = 1 if e.tail == cv else -1
            word.append((e.direction, sign))
        return tuple(word)

    def classify_vertex(self, v: Sequence[int]) -> VertexType:
        word = self.vertex_word(v)
        sig = canonical_signature(word)
        entry = catalog_by_signature().get(sig)
        if entry is None:
            raise UnrecognizedVertexError(
                f"vertex {tuple(v)} signature {sig} not in catalog"
            )
        return entry

    def interior_vertices(self) -> list[Coord4]:
        return [v for v in self.vertices() if self.is_interior_vertex(v)]

    def vertex_census(self) -> dict[str, int]:
        """Counts of catalog type names over all interior vertices."""
        census: Counter = Counter()
        for v in self.interior_vertices():
            census[self.classify_vertex(v).name] += 1
        return dict(census)

    # -- global structure --------------------------------------------------

    def boundary(self) -> list[list[Edge]]:
        """Incidence-1 edges ordered into closed loops where possible."""
        bd = [e for e, c in self.edges().items() if c == 1]
        by_vertex: dict[Coord4, list[Edge]] = defaultdict(list)
        for e in bd:
            by_vertex[self.canon_vertex(e.tail)].append(e)
            by_vertex[self.canon_vertex(vadd(e.tail, unit(e.direction)))].append(e)
        remaining = set(bd)
        loops: list[list[Edge]] = []
        while remaining:
            start = min(remaining)
            loop = [start]
            remaining.discard(start)
            cursor = self.canon_vertex(vadd(start.tail, unit(start.direction)))
            first = self.canon_vertex(start.tail)
            while cursor != first:
                options = [e for e in by_vertex[cursor] if e in remaining]
                if not options:
                    break  # open path; emit as-is
                e = min(options)
                loop.append(e)
                remaining.discard(e)
                a = self.canon_vertex(e.tail)
                b = self.canon_vertex(vadd(e.tail, unit(e.direction)))
                cursor = b if a == cursor else a
            loops.append(loop)
        return loops

    def is_polyhedron(self) -> PolyhedronReport:
        bad_edges = tuple(sorted(e for e, c in self.edges().items() if c > 2))
        bad_vertices = []
        for v in self.vertices():
            try:
                self._trace_link(v)
            except NotManifoldError:
                bad_vertices.append(v)
        return PolyhedronReport(
            ok=not bad_edges and not bad_vertices,
            bad_edges=bad_edges,
            bad_vertices=tuple(bad_vertices),
        )

    # -- design moves -------------------------------------------------------

    def legal_extensions(self, edge: Edge) -> list[Facet]:
        """Facets that may be laid across a boundary edge (at most 3)."""
        e = self.canon_edge(Edge(tuple(int(x) for x in edge.tail), int(edge.direction)))
        count = self.edge_count(e)
        if count == 0:
            raise NotBoundaryEdgeError(f"{e} is not an edge of the complex")
        if count != 1:
            raise NotBoundaryEdgeError(f"{e} has incidence {count}")
        d = e.direction
        partners = [j for (i, j) in ADMISSIBLE_TYPES if i == d] + [
            i for (i, j) in ADMISSIBLE_TYPES if j == d
        ]
        candidates = []
        for other in partners:
            for anchor in (e.tail, vsub(e.tail, unit(other))):
                candidates.append(self.canon_facet(normalize_facet(anchor, (d, other))))
        existing = set(self.facets)
        result = []
        for cand in candidates:
            if cand in existing:
                continue
            if any(
                self.edge_count(ce) >= 2
                for ce in facet_edges(cand)
            ):
                continue
            result.append(cand)
        return sorted(set(result))

    def extend(self, facet: Facet) -> "SigmaComplex":
        """Return a new complex with the facet added across a shared edge."""
        f = self.canon_facet(normalize_facet(facet.anchor, facet.ftype))
        if f.ftype in FORBIDDEN_TYPES:
            raise ForbiddenFacetError(f"facet type {f.ftype} is forbidden")
        if f in set(self.facets):
            raise DuplicateFacetError(f"{f} already present")
        shared = [e for e in facet_edges(f) if self.edge_count(e) > 0]
        if not shared:
            raise NotAdjacentError(f"{f} shares no edge with the complex")
        for e in facet_edges(f):
            if self.edge_count(e) >= 2:
                raise NonManifoldEdgeError(f"edge {self.canon_edge(e)} already has two facets")
        return SigmaComplex(self.facets + (f,), self.lattice, self.metadata)

    # -- quotients -----------------------------------------------------------

    def quotient_euler(self, sublattice: Iterable[Sequence[int]], lam: float) -> QuotientEuler:
        """Euler data of the quotient by a full-rank sublattice of the periods."""
        sub = sublattice if isinstance(sublattice, Lattice) else Lattice(list(sublattice))
        reps = self.lattice.coset_representatives(sub)
        cells = [
            Facet(vadd(f.anchor, c), f.ftype) for f in self.facets for c in reps
        ]
        quotient = SigmaComplex(
            [Facet(sub.canon(f.anchor), f.ftype) for f in cells], sub
        )
        if len(quotient.facets) != len(cells):
            raise NotSublatticeError("sublattice identifies distinct facets")
        edge_counts = quotient.edges()
        open_edges = [e for e, c in edge_counts.items() if c != 2]
        if open_edges:
            raise NotClosedError(
                f"{len(open_edges)} edges do not have incidence 2, e.g. {open_edges[0]}"
            )
        nv = len(quotient.vertices())
        ne = len(edge_counts)
        nf = len(quotient.facets)
        chi = nv - ne + nf
        from .star import facet_angle_gamma

        gamma = facet_angle_gamma(lam)
        total = 0.0
        for v in quotient.vertices():
            cycle = quotient.vertex_cycle(v)
            o = sum(1 for _, cls in cycle if cls == "obtuse")
            a = len(cycle) - o
            total += vertex_curvature(gamma, a, o)
        odd = chi % 2 != 0
        return QuotientEuler(
            vertices=nv,
            edges=ne,
            faces=nf,
            chi=chi,
            genus=None if odd else (2 - chi) // 2,
            curvature_sum=total,
            odd_chi=odd,
        )

    # -- orientation -----------------------------------------------------------

    def orientation(self) -> dict[Facet, int] | None:
        """Consistent facet orientations, or None if not orientable.

        The canonical corner cycle of each facet induces two directed
        half-edges per edge; adjacent facets must traverse a shared edge
        oppositely.
        """
        signs: dict[Facet, int] = {}
        edge_users: dict[Edge, list[tuple[Facet, int]]] = defaultdict(list)
        for f in self.facets:
            corners = facet_corners(f)
            for k in range(4):
                a, b = corners[k], corners[(k + 1) % 4]
                diff = vsub(b, a)
                if any(x > 0 for x in diff):
                    tail, direction, sense = a, diff.index(1) + 1, 1
                else:
                    tail, direction, sense = b, diff.index(-1) + 1, -1
                edge_users[self.canon_edge(Edge(tail, direction))].append((f, sense))
        adj: dict[Facet, list[tuple[Facet, int]]] = defaultdict(list)
        for e, users in edge_users.items():
            if len(users) == 2:
                (f1, s1), (f2, s2) = users
                # opposite senses mean equal orientation signs
                rel = -1 if s1 == s2 else 1
                adj[f1].append((f2, rel))
                adj[f2].append((f1, rel))
        for seed in self.facets:
            if seed in signs:
                continue
            signs[seed] = 1
            stack = [seed]
            while stack:
                f = stack.pop()
                for g, rel in adj[f]:
                    want = signs[f] * rel
                    if g not in signs:
                        signs[g] = want
                        stack.append(g)
                    elif signs[g] != want:
                        return None
        return signs

    def translation_orientation(self, g: Sequence[int]) -> int:
        """+1 if translating by g preserves orientation, -1 if it reverses."""
        signs = self.orientation()
        if signs is None:
            raise NotManifoldError("complex is not orientable")
        gv = tuple(int(x) for x in g)
        for f, s in signs.items():
            shifted = self.canon_facet(Facet(vadd(f.anchor, gv), f.ftype))
            if shifted in signs:
                return 1 if signs[shifted] == s else -1
        raise NotSublatticeError(f"translation {gv} does not map the complex to itself")

    def orientation_preserving_sublattice(self) -> Lattice:
        """Largest sublattice of the periods acting orientation-preservingly."""
        gens = list(self.lattice.generators)
        if not gens:
            return self.lattice
        parities = [self.translation_orientation(g) for g in gens]
        if all(p == 1 for p in parities):
            return self.lattice
        k = parities.index(-1)
        new_gens = []
        for i, g in enumerate(gens):
            if parities[i] == 1:
                new_gens.append(g)
            elif i == k:
                new_gens.append(vadd(g, g))
            else:
                new_gens.append(vadd(g, gens[k]))
        return Lattice(new_gens)


def build(
    facets: Iterable[Facet | tuple],
    periods: Iterable[Sequence[int]] = (),
    metadata: Mapping | None = None,
) -> SigmaComplex:
    """Validate, canonicalize and assemble a complex.

    Duplicates (after reduction modulo the periods) are dropped with a
    warning; forbidden facet types and dependent period generators are
    errors, as is a facet set that is not connected.
    """
    lattice = periods if isinstance(periods, Lattice) else Lattice(list(periods))
    normalized = []
    for f in facets:
        if isinstance(f, Facet):
            nf = normalize_facet(f.anchor, f.ftype)
        else:
            anchor, ftype = f
            nf = normalize_facet(anchor, ftype)
        if nf.ftype in FORBIDDEN_TYPES:
            raise ForbiddenFacetError(f"facet type {nf.ftype} is forbidden")
        if nf.ftype not in ADMISSIBLE_TYPES:
            raise ForbiddenFacetError(f"facet type {nf.ftype} is not a star facet type")
        normalized.append(Facet(lattice.canon(nf.anchor), nf.ftype))
    if not normalized:
        raise DisconnectedError("a complex needs at least one facet")
    unique = sorted(set(normalized))
    if len(unique) != len(normalized):
        dups = len(normalized) - len(unique)
        warnings.warn(
            f"dropped {dups} duplicate facet(s) after lattice reduction",
            DuplicateFacetWarning,
            stacklevel=2,
        )
    cx = SigmaComplex(unique, lattice, metadata)
    # connectivity over shared canonical vertices
    vertex_map: dict[Coord4, list[int]] = defaultdict(list)
    for idx, f in enumerate(cx.facets):
        for corner in facet_corners(f):
            vertex_map[lattice.canon(corner)].append(idx)
    seen = {0}
    stack = [0]
    adj: dict[int, set[int]] = defaultdict(set)
    for users in vertex_map.values():
        for a in users:
            adj[a].update(users)
    while stack:
        cur = stack.pop()
        for nxt in adj[cur]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    if len(seen) != len(cx.facets):
        raise DisconnectedError(
            f"complex splits into components ({len(seen)} of {len(cx.facets)} facets reachable)"
        )
    return cx


def translate(cx: SigmaComplex, g: Sequence[int]) -> SigmaComplex:
    gv = tuple(int(x) for x in g)
    return SigmaComplex(
        [Facet(cx.lattice.canon(vadd(f.anchor, gv)), f.ftype) for f in cx.facets],
        cx.lattice,
        cx.metadata,
    )


_MIRROR_MAPS = {
    "swap12": ((1, 0, 2, 3), {1: 2, 2: 1, 3: 3, 4: 4}, "r1 == r2"),
    "swap34": ((0, 1, 3, 2), {1: 1, 2: 2, 3: 4, 4: 3}, "r3 == r4"),
}


def mirror(cx: SigmaComplex, axis: str) -> SigmaComplex:
    """Combinatorial mirror swapping star indices 1<->2 or 3<->4.

    The mirrored complex realizes congruently only when the swapped radii
    agree; that requirement is recorded in the metadata and checked at
    realization time.
    """
    if axis not in _MIRROR_MAPS:
        raise ValueError(f"axis must be 'swap12' or 'swap34', got {axis!r}")
    perm, typemap, requirement = _MIRROR_MAPS[axis]

    def map_anchor(a: Coord4) -> Coord4:
        return (a[perm[0]], a[perm[1]], a[perm[2]], a[perm[3]])

    def map_type(t: tuple[int, int]) -> tuple[int, int]:
        i, j = typemap[t[0]], typemap[t[1]]
        return (min(i, j), max(i, j))

    new_periods = [map_anchor(g) for g in cx.lattice.generators]
    lattice = Lattice(new_periods)
    facets = [Facet(lattice.canon(map_anchor(f.anchor)), map_type(f.ftype)) for f in cx.facets]
    metadata = dict(cx.metadata)
    reqs = set(metadata.get("realization_requirements", ()))
    reqs.add(requirement)
    metadata["realization_requirements"] = tuple(sorted(reqs))
    return SigmaComplex(facets, lattice, metadata)


def reflect(cx: SigmaComplex, through_sum: Sequence[int]) -> SigmaComplex:
    """Point reflection n -> K - n in combinatorial coordinates.

    Maps the facet anchored at a with type (i,j) to the facet anchored at
    K - a - e_i - e_j of the same type; realizes as a point reflection of
    space for every star of the family.
    """
    k = tuple(int(x) for x in through_sum)
    facets = []
    for f in cx.facets:
        i, j = f.ftype
        new_anchor = vsub(vsub(vsub(k, f.anchor), unit(i)), unit(j))
        facets.append(Facet(cx.lattice.canon(new_anchor), f.ftype))
    return SigmaComplex(facets, cx.lattice, cx.metadata)
