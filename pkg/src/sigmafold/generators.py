"""Programmatic constructions of the example complexes.

Each generator returns a SigmaComplex; periodic variants attach the
period lattice scaled by the replication counts, so the stored facet set
is always a representative set for the attached lattice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .complexes import (
    Facet,
    SigmaComplex,
    build,
    facet_corners,
    mirror,
    reflect,
    translate,
)
from .errors import InvalidWordError, OverlappingCellsError
from .lattice import Coord4, Lattice, unit, vadd, vneg, vscale, vsub
from .star import StarParams, star_vectors

__all__ = [
    "GeneratorSpec",
    "generate",
    "eggbox",
    "miura",
    "tube",
    "hollowped",
    "fractal",
    "double_l",
    "miura_weave",
    "link",
    "link_field",
    "butterfly",
    "butterfly_field",
    "dos_equis_layer",
    "dos_equis_stack",
    "tiling_to_complex",
    "GENERATORS",
]

E1, E2, E3, E4 = unit(1), unit(2), unit(3), unit(4)
ZERO = (0, 0, 0, 0)


def _replicate(cell: list[Facet], steps: list[tuple[Coord4, int]]) -> list[Facet]:
    """Union of the cell translated over a box of lattice steps."""
    out = []
    ranges = [range(count) for _, count in steps]
    for combo in itertools.product(*ranges):
        shift = ZERO
        for k, (g, _) in zip(combo, steps):
            shift = vadd(shift, vscale(k, g))
        out.extend(Facet(vadd(f.anchor, shift), f.ftype) for f in cell)
    return out


# -- doubly periodic classics -------------------------------------------------

# Translational fundamental piece of the eggbox: the saddle of all four
# admissible facets anchored at one vertex.  Closure requires the periods
# v1 - v2 and v3 - v4.
_EGGBOX_CELL = [
    Facet(ZERO, (1, 3)),
    Facet(ZERO, (1, 4)),
    Facet(ZERO, (2, 3)),
    Facet(ZERO, (2, 4)),
]
_EGGBOX_PERIODS = [(1, -1, 0, 0), (0, 0, 1, -1)]

# Miura piece: same four facets, two of them shifted by -v2; periods
# v1 + v2 and v3 - v4.
_MIURA_CELL = [
    Facet(ZERO, (1, 3)),
    Facet(ZERO, (1, 4)),
    Facet(vneg(E2), (2, 3)),
    Facet(vneg(E2), (2, 4)),
]
_MIURA_PERIODS = [(1, 1, 0, 0), (0, 0, 1, -1)]


def _doubly_periodic(cell, periods, m, n, periodic, name, **meta):
    if m < 1 or n < 1:
        raise ValueError(f"replication counts must be >= 1, got {(m, n)}")
    facets = _replicate(cell, [(periods[0], m), (periods[1], n)])
    lattice = [vscale(m, periods[0]), vscale(n, periods[1])] if periodic else []
    md = {"generator": {"name": name, "m": m, "n": n, "periodic": periodic}, **meta}
    return build(facets, lattice, md)


def eggbox(m: int = 1, n: int = 1, periodic: bool = True) -> SigmaComplex:
    """Egg-carton surface: peaks and saddles on a doubly periodic grid."""
    return _doubly_periodic(_EGGBOX_CELL, _EGGBOX_PERIODS, m, n, periodic, "eggbox")


def miura(m: int = 1, n: int = 1, periodic: bool = True) -> SigmaComplex:
    """The Miura fold pattern; every interior vertex has the same type."""
    return _doubly_periodic(_MIURA_CELL, _MIURA_PERIODS, m, n, periodic, "miura")


# -- tube ---------------------------------------------------------------------

_TUBE_PERIOD = (0, 0, 1, -1)


def tube(n: int = 1) -> SigmaComplex:
    """Origami tube: a parallelogram cross-section loop extruded along
    +v3 and -v4 alternately; n segment pairs, 8 facets each."""
    if n < 1:
        raise ValueError(f"need at least one segment pair, got {n}")
    pair = [
        Facet(ZERO, (1, 3)),
        Facet(E1, (2, 3)),
        Facet(E2, (1, 3)),
        Facet(ZERO, (2, 3)),
        Facet(vsub(E3, E4), (1, 4)),
        Facet(vadd(E1, vsub(E3, E4)), (2, 4)),
        Facet(vadd(E2, vsub(E3, E4)), (1, 4)),
        Facet(vsub(E3, E4), (2, 4)),
    ]
    facets = _replicate(pair, [(_TUBE_PERIOD, n)])
    return build(facets, [], {"generator": {"name": "tube", "n": n}})


# -- hollowpeds and the fractal ----------------------------------------------


def hollowped(i: int, anchor: Coord4 = ZERO) -> SigmaComplex:
    """2-skeleton of the parallelepiped on the three star vectors other
    than v_i, forbidden facets removed: a 4-facet cylinder."""
    if i not in (1, 2, 3, 4):
        raise ValueError(f"hollowped index must be 1..4, got {i}")
    return build(
        _hollowped_facets(i, anchor),
        [],
        {"generator": {"name": "hollowped", "i": i}},
    )


def _hollowped_facets(i: int, anchor: Coord4 = ZERO) -> list[Facet]:
    others = [k for k in (1, 2, 3, 4) if k != i]
    facets = []
    for p, q in itertools.combinations(others, 2):
        if (p, q) in ((1, 2), (3, 4)):
            continue
        (third,) = [k for k in others if k not in (p, q)]
        facets.append(Facet(anchor, (p, q)))
        facets.append(Facet(vadd(anchor, unit(third)), (p, q)))
    return facets


def _fractal_seed() -> set[Facet]:
    """Hollowped union of the four cells tiling the standard dodecahedron
    from its center (all cells anchored at the origin)."""
    out: set[Facet] = set()
    for i in (1, 2, 3, 4):
        out.update(_hollowped_facets(i, ZERO))
    return out


def _fractal_plug() -> set[Facet]:
    """The point-reflected seed (cells anchored at e_i, far corners at the
    center); its boundary is the octagon of the central saddle."""
    out: set[Facet] = set()
    for i in (1, 2, 3, 4):
        out.update(_hollowped_facets(i, unit(i)))
    return out


def _doubled(facets) -> set[Facet]:
    """Subdivide each parallelogram into four by doubling the lattice scale."""
    out: set[Facet] = set()
    for f in facets:
        i, j = f.ftype
        base = vscale(2, f.anchor)
        for da in (ZERO, unit(i), unit(j), vadd(unit(i), unit(j))):
            out.add(Facet(vadd(base, da), f.ftype))
    return out


_SADDLE_AT_ORIGIN = {Facet(ZERO, t) for t in ((1, 3), (1, 4), (2, 3), (2, 4))}


def fractal(generation: int = 0) -> SigmaComplex:
    """Bifoldable fractal: generation 0 is the union of all four
    hollowpeds; each further generation subdivides, removes the central
    saddle and plugs the octagonal hole with a fresh generation-0 copy."""
    if generation < 0:
        raise ValueError(f"generation must be >= 0, got {generation}")
    facets = _fractal_seed()
    for _ in range(generation):
        facets = _doubled(facets)
        facets -= _SADDLE_AT_ORIGIN
        facets |= _fractal_plug()
    return build(
        sorted(facets), [], {"generator": {"name": "fractal", "generation": generation}}
    )


# -- double L and the Miura weave ----------------------------------------------

# Eight facets around the origin: two L-trominoes of types (1,4) and
# (2,3) joined by one (1,3) and one (2,4); the center classifies as the
# valency-8 type with four acute and four obtuse corners.
_DOUBLE_L_FACETS = [
    Facet(ZERO, (1, 4)),
    Facet(vneg(E1), (1, 4)),
    Facet(vneg(E4), (1, 4)),
    Facet(vadd(vneg(E1), vneg(E3)), (1, 3)),
    Facet(vneg(E3), (2, 3)),
    Facet(ZERO, (2, 3)),
    Facet(vneg(E2), (2, 3)),
    Facet(vadd(vneg(E2), vneg(E4)), (2, 4)),
]


def double_l() -> SigmaComplex:
    return build(_DOUBLE_L_FACETS, [], {"generator": {"name": "double_l"}})


def _swap34_facet(f: Facet) -> Facet:
    a = f.anchor
    swapped = (a[0], a[1], a[3], a[2])
    m = {1: 1, 2: 2, 3: 4, 4: 3}
    i, j = m[f.ftype[0]], m[f.ftype[1]]
    return Facet(swapped, (min(i, j), max(i, j)))


_WEAVE_PX = (1, -1, 0, 0)
_WEAVE_PY = (0, 0, 1, -1)


def _weave_cell() -> list[Facet]:
    """Fundamental piece of the weave: double-L stars at the origin and at
    v1-v2+v3-v4, mirrored copies at v1-v2 and v3-v4."""
    mirrored = [_swap34_facet(f) for f in _DOUBLE_L_FACETS]
    cell: set[Facet] = set(_DOUBLE_L_FACETS)
    cell |= {Facet(vadd(f.anchor, _WEAVE_PX), f.ftype) for f in mirrored}
    cell |= {Facet(vadd(f.anchor, _WEAVE_PY), f.ftype) for f in mirrored}
    diag = vadd(_WEAVE_PX, _WEAVE_PY)
    cell |= {Facet(vadd(f.anchor, diag), f.ftype) for f in _DOUBLE_L_FACETS}
    return sorted(cell)


def miura_weave(m: int = 1, n: int = 1, periodic: bool = True) -> SigmaComplex:
    """Doubly periodic carpet of interwoven tubes: four double-L shapes
    (two of them mirrored) per fundamental piece, periods 2(v1-v2) and
    2(v3-v4); closed when periodic."""
    if m < 1 or n < 1:
        raise ValueError(f"replication counts must be >= 1, got {(m, n)}")
    cell = _weave_cell()
    facets = _replicate(cell, [(vscale(2, _WEAVE_PX), m), (vscale(2, _WEAVE_PY), n)])
    gens = [vscale(2 * m, _WEAVE_PX), vscale(2 * n, _WEAVE_PY)] if periodic else []
    meta = {
        "generator": {"name": "miura_weave", "m": m, "n": n, "periodic": periodic},
        "realization_requirements": ("r3 == r4",),
    }
    if periodic:
        lat = Lattice(gens)
        facets = sorted({Facet(lat.canon(f.anchor), f.ftype) for f in facets})
        return build(facets, lat, meta)
    return build(facets, [], meta)


# -- links and butterflies ------------------------------------------------------

_LINK_FIELD_PERIODS = [(1, 0, -1, 0), (0, 1, 0, -1), (1, 0, 1, 0)]


def link() -> SigmaComplex:
    """Hollowpeds H2 and H4 sharing the facet (1,3) at the origin."""
    facets = set(_hollowped_facets(2, ZERO)) | set(_hollowped_facets(4, ZERO))
    return build(sorted(facets), [], {"generator": {"name": "link"}})


def link_field(extent: int = 1, periodic: bool = True) -> SigmaComplex:
    """Triply periodic field of links; uses no (2,4) facet."""
    if extent < 1:
        raise ValueError(f"extent must be >= 1, got {extent}")
    cell = sorted(set(_hollowped_facets(2, ZERO)) | set(_hollowped_facets(4, ZERO)))
    facets = _replicate(cell, [(g, extent) for g in _LINK_FIELD_PERIODS])
    gens = [vscale(extent, g) for g in _LINK_FIELD_PERIODS]
    if periodic:
        # two of the link's facets are identified by the lattice: the cell
        # of the field has 6 facet classes, not 7
        lat = Lattice(gens)
        facets = sorted({Facet(lat.canon(f.anchor), f.ftype) for f in facets})
        return build(facets, lat, {"generator": {"name": "link_field", "extent": extent}})
    return build(facets, [], {"generator": {"name": "link_field", "extent": extent}})


_BUTTERFLY_REFLECTION_SUM = vadd(E2, E4)


def butterfly() -> SigmaComplex:
    """A link and its point-reflected copy joined by a single (2,4) facet."""
    wing = set(_hollowped_facets(2, ZERO)) | set(_hollowped_facets(4, ZERO))
    mirrored = set()
    for f in wing:
        i, j = f.ftype
        a = vsub(vsub(vsub(_BUTTERFLY_REFLECTION_SUM, f.anchor), unit(i)), unit(j))
        mirrored.add(Facet(a, f.ftype))
    facets = wing | mirrored | {Facet(ZERO, (2, 4))}
    return build(sorted(facets), [], {"generator": {"name": "butterfly"}})


def butterfly_field(extent: int = 1, periodic: bool = True) -> SigmaComplex:
    """Triply periodic field of butterflies with dodecahedral cavities."""
    raise NotImplementedError  # periods filled in below


# -- dos equis -------------------------------------------------------------------


def dos_equis_layer(m: int = 1, n: int = 1, periodic: bool = True) -> SigmaComplex:
    """Doubly periodic layer built from stacked X-shaped valency-8 vertices."""
    raise NotImplementedError


def dos_equis_stack(word: str, periodic: bool = False) -> SigmaComplex:
    """Layers glued by the L/R translations given by the word."""
    raise NotImplementedError


# -- space tilings ---------------------------------------------------------------


def tiling_to_complex(cells) -> SigmaComplex:
    """Union of the hollowpeds of solid parallelepiped cells.

    cells: iterable of (anchor, excluded_index).  The solids must be
    pairwise interior-disjoint; checked geometrically at the half-way
    fold state of the tetrahedral-family star.
    """
    cell_list = sorted({(tuple(int(x) for x in a), int(i)) for a, i in cells})
    if not cell_list:
        raise ValueError("need at least one cell")
    vectors = star_vectors(StarParams().state_at(0.5))
    solids = []
    for anchor, i in cell_list:
        if i not in (1, 2, 3, 4):
            raise ValueError(f"excluded index must be 1..4, got {i}")
        axes = [vectors[k - 1] for k in (1, 2, 3, 4) if k != i]
        origin = np.asarray(anchor, dtype=float) @ vectors
        solids.append((origin, np.array(axes)))
    for a, b in itertools.combinations(range(len(solids)), 2):
        if _parallelepipeds_overlap(*solids[a], *solids[b]):
            raise OverlappingCellsError(
                f"cells {cell_list[a]} and {cell_list[b]} have overlapping interiors"
            )
    facets: set[Facet] = set()
    for anchor, i in cell_list:
        facets.update(_hollowped_facets(i, anchor))
    return build(sorted(facets), [], {"generator": {"name": "tiling", "cells": cell_list}})


def _parallelepipeds_overlap(o1, axes1, o2, axes2, tol: float = 1e-9) -> bool:
    """Separating-axis test for two solid parallelepipeds (interiors)."""
    c1 = o1 + 0.5 * axes1.sum(axis=0)
    c2 = o2 + 0.5 * axes2.sum(axis=0)
    d = c2 - c1
    axes = []
    for m in (axes1, axes2):
        n = np.cross(m[1], m[2]), np.cross(m[2], m[0]), np.cross(m[0], m[1])
        axes.extend(n)
    for u in axes1:
        for v in axes2:
            axes.append(np.cross(u, v))
    scale = max(np.linalg.norm(a) for a in np.vstack([axes1, axes2]))
    for axis in axes:
        norm = np.linalg.norm(axis)
        if norm < tol:
            continue
        axis = axis / norm
        r1 = 0.5 * sum(abs(axis @ u) for u in axes1)
        r2 = 0.5 * sum(abs(axis @ u) for u in axes2)
        if abs(axis @ d) >= r1 + r2 - tol * scale:
            return False
    return True


# -- dispatch ----------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters selecting one generator output (used by the CLI and
    recorded in serialized documents)."""

    name: str
    m: int = 1
    n: int = 1
    generation: int = 0
    word: str = ""
    periodic: bool = True
    extent: int = 1


def generate(spec: GeneratorSpec) -> SigmaComplex:
    name = spec.name.replace("-", "_")
    if name not in GENERATORS:
        raise ValueError(f"unknown generator {spec.name!r}; try one of {sorted(GENERATORS)}")
    return GENERATORS[name](spec)


GENERATORS = {
    "eggbox": lambda s: eggbox(s.m, s.n, s.periodic),
    "miura": lambda s: miura(s.m, s.n, s.periodic),
    "tube": lambda s: tube(s.n if s.n > 1 else s.m),
    "hollowped": lambda s: hollowped(s.m),
    "fractal": lambda s: fractal(s.generation),
    "double_l": lambda s: double_l(),
    "miura_weave": lambda s: miura_weave(s.m, s.n, s.periodic),
    "link": lambda s: link(),
    "link_field": lambda s: link_field(s.extent, s.periodic),
    "butterfly": lambda s: butterfly(),
    "butterfly_field": lambda s: butterfly_field(s.extent, s.periodic),
    "dos_equis_layer": lambda s: dos_equis_layer(s.m, s.n, s.periodic),
    "dos_equis_stack": lambda s: dos_equis_stack(s.word, s.periodic),
}
