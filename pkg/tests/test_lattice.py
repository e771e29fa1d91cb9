from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from sigmafold.errors import BadLatticeError, NotSublatticeError
from sigmafold.lattice import (
    Lattice,
    TRIVIAL_LATTICE,
    integer_rank,
    smith_diagonalize,
    vadd,
    vscale,
)

small_int = st.integers(-6, 6)
vec4 = st.tuples(small_int, small_int, small_int, small_int)


def mat_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


@given(st.lists(vec4, min_size=1, max_size=3))
def test_smith_diagonalize_consistency(gens):
    m = [[g[i] for g in gens] for i in range(4)]
    left, left_inv, diag, right = smith_diagonalize(m)
    # left @ left_inv == identity
    prod = mat_mul(left, left_inv)
    assert prod == [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    # left @ m @ right is diagonal with the reported entries
    d = mat_mul(mat_mul(left, m), right)
    for i in range(4):
        for j in range(len(gens)):
            if i == j:
                assert d[i][j] == diag[i]
            else:
                assert d[i][j] == 0


def test_bad_lattice_rejected():
    with pytest.raises(BadLatticeError):
        Lattice([(1, 0, -1, 0), (2, 0, -2, 0)])
    with pytest.raises(BadLatticeError):
        Lattice([(1, 1, 0, 0), (0, 0, 1, 1), (1, 1, 1, 1)])


def test_trivial_lattice():
    assert TRIVIAL_LATTICE.canon((3, -2, 1, 0)) == (3, -2, 1, 0)
    assert TRIVIAL_LATTICE.contains((0, 0, 0, 0))
    assert not TRIVIAL_LATTICE.contains((1, 0, 0, 0))


def test_canon_is_class_function_eggbox():
    lat = Lattice([(1, -1, 0, 0), (0, 0, 1, -1)])
    v = (3, 1, -2, 5)
    for a, b in itertools.product(range(-2, 3), repeat=2):
        shift = vadd(vscale(a, (1, -1, 0, 0)), vscale(b, (0, 0, 1, -1)))
        assert lat.canon(vadd(v, shift)) == lat.canon(v)
    assert lat.contains((2, -2, -3, 3))
    assert not lat.contains((1, 0, 0, 0))


@given(vec4, st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
def test_canon_invariance_rank3(v, a, b, c):
    gens = [(1, 0, -1, 0), (0, 1, 0, -1), (1, 0, 1, 0)]
    lat = Lattice(gens)
    shift = (0, 0, 0, 0)
    for k, g in zip((a, b, c), gens):
        shift = vadd(shift, vscale(k, g))
    assert lat.canon(vadd(v, shift)) == lat.canon(v)
    assert lat.contains(shift)


def test_coordinates_of_roundtrip():
    gens = [(1, 0, -1, 0), (0, 1, 0, -1), (1, 0, 1, 0)]
    lat = Lattice(gens)
    for coeffs in itertools.product(range(-2, 3), repeat=3):
        v = (0, 0, 0, 0)
        for k, g in zip(coeffs, gens):
            v = vadd(v, vscale(k, g))
        assert lat.coordinates_of(v) == coeffs
    assert lat.coordinates_of((1, 0, 0, 0)) is None


def test_coset_representatives_index():
    lat = Lattice([(1, -1, 0, 0), (0, 0, 1, -1)])
    sub = Lattice([(2, -2, 0, 0), (0, 0, 1, -1)])
    reps = lat.coset_representatives(sub)
    assert len(reps) == 2
    canon = {sub.canon(r) for r in reps}
    assert len(canon) == 2

    sub2 = Lattice([(1, -1, 0, 0), (0, 0, 3, -3)])
    assert lat.index_of(sub2) == 3

    # doubling both generators gives index 4
    sub4 = Lattice([(2, -2, 0, 0), (0, 0, 2, -2)])
    assert lat.index_of(sub4) == 4


def test_coset_representatives_requires_sublattice():
    lat = Lattice([(1, -1, 0, 0), (0, 0, 1, -1)])
    with pytest.raises(NotSublatticeError):
        lat.coset_representatives(Lattice([(1, 0, 0, 0), (0, 0, 1, -1)]))
    with pytest.raises(NotSublatticeError):
        lat.coset_representatives(Lattice([(1, -1, 0, 0)]))


def test_integer_rank():
    assert integer_rank([]) == 0
    assert integer_rank([(2, 0, 0, 0)]) == 1
    assert integer_rank([(1, 0, -1, 0), (2, 0, -2, 0)]) == 1
    assert integer_rank([(1, 0, -1, 0), (0, 1, 0, -1), (1, 0, 1, 0)]) == 3
