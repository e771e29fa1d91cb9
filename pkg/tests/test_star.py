from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sigmafold.errors import DomainError
from sigmafold.star import (
    StarParams,
    StarState,
    alpha_of_t,
    beta_of_alpha,
    facet_angle_gamma,
    star_vectors,
    t_of_alpha,
    tetrahedral_star,
)


def test_params_validation():
    with pytest.raises(DomainError):
        StarParams((1, 1, 1, -1), 0.5)
    with pytest.raises(DomainError):
        StarParams((1, 1, 1, 1), 1.0)
    with pytest.raises(DomainError):
        StarParams((1, 1, 1, 1), 0.0)


def test_state_interval():
    p = StarParams((1, 1, 1, 1), 1 / 3)
    StarState(p, math.pi / 2)
    StarState(p, math.asin(1 / 3))
    with pytest.raises(DomainError):
        StarState(p, 0.1)


def test_beta_of_alpha_trivial_endpoints():
    assert beta_of_alpha(1 / 3, math.pi / 2) == pytest.approx(math.asin(1 / 3), abs=1e-15)
    assert beta_of_alpha(1 / 3, math.asin(1 / 3)) == pytest.approx(math.pi / 2, abs=1e-12)


def test_beta_of_alpha_65_degrees():
    # frozen from a bisection solve of sin(beta) = (1/3)/sin(65 deg)
    beta = beta_of_alpha(1 / 3, math.radians(65.0))
    assert math.degrees(beta) == pytest.approx(21.579547909891062, abs=1e-9)


def test_beta_domain_error():
    with pytest.raises(DomainError):
        beta_of_alpha(1 / 3, 0.2)
    with pytest.raises(DomainError):
        beta_of_alpha(1 / 3, 1.7)


def test_alpha_of_t_endpoints_and_midpoint():
    lam = 1 / 3
    assert alpha_of_t(lam, 1.0) == pytest.approx(math.pi / 2, abs=1e-15)
    assert alpha_of_t(lam, 0.0) == pytest.approx(math.asin(lam), abs=1e-15)
    mid = (math.asin(lam) + math.pi / 2) / 2
    assert alpha_of_t(lam, 0.5) == pytest.approx(mid, abs=1e-15)
    assert mid == pytest.approx(0.9553, abs=1e-4)
    # close to arccos(sqrt(2/3)) only coincidentally; they differ
    assert abs(mid - math.acos(math.sqrt(2 / 3))) > 1e-3
    with pytest.raises(DomainError):
        alpha_of_t(lam, 1.5)


def test_t_of_alpha_inverts_chart():
    lam = 0.4
    for t in np.linspace(0, 1, 11):
        assert t_of_alpha(lam, alpha_of_t(lam, t)) == pytest.approx(t, abs=1e-12)


def test_facet_angle_gamma():
    assert facet_angle_gamma(1 / 3) == pytest.approx(math.acos(1 / 3), abs=1e-15)
    assert math.degrees(facet_angle_gamma(1 / 3)) == pytest.approx(70.528779, abs=1e-5)
    assert facet_angle_gamma(0.5) == pytest.approx(math.radians(60), abs=1e-12)


def test_star_vectors_collapsed_state():
    p = StarParams((1, 1, 1, 1), 1 / 3)
    v = star_vectors(StarState(p, math.pi / 2))
    assert np.allclose(v[0], [0, 0, 1], atol=1e-12)
    assert np.allclose(v[1], [0, 0, 1], atol=1e-12)
    assert np.allclose(v[2], [0, math.sqrt(8) / 3, -1 / 3], atol=1e-12)
    assert np.allclose(v[3], [0, -math.sqrt(8) / 3, -1 / 3], atol=1e-12)


def test_star_vectors_unequal_radii():
    p = StarParams((2, 1, 1, 1), 0.5)
    st_ = StarState(p, math.pi / 3)
    v = star_vectors(st_)
    assert np.linalg.norm(v[0]) == pytest.approx(2.0, abs=1e-12)
    for i in (1, 2, 3):
        assert np.linalg.norm(v[i]) == pytest.approx(1.0, abs=1e-12)
    assert math.sin(st_.beta) == pytest.approx(0.5 / math.sin(math.pi / 3), abs=1e-12)
    assert math.sin(st_.beta) == pytest.approx(1 / math.sqrt(3), abs=1e-12)


def test_tetrahedral_star():
    ts = tetrahedral_star()
    assert ts.params.lam == pytest.approx(1 / 3, abs=1e-15)
    assert ts.alpha == pytest.approx(ts.beta, abs=1e-12)
    v = star_vectors(ts)
    for i in range(4):
        assert np.linalg.norm(v[i]) == pytest.approx(1.0, abs=1e-12)
    # every pairwise dot product is -1/3 (admissible and forbidden alike)
    for i in range(4):
        for j in range(i + 1, 4):
            assert v[i] @ v[j] == pytest.approx(-1 / 3, abs=1e-12)


def test_admissible_dot_products_constant_along_fold():
    p = StarParams((2.0, 0.7, 1.3, 1.1), 0.41)
    for t in np.linspace(0, 1, 7):
        v = star_vectors(p.state_at(float(t)))
        for (i, j) in ((0, 2), (0, 3), (1, 2), (1, 3)):
            expected = -p.r[i] * p.r[j] * p.lam
            assert v[i] @ v[j] == pytest.approx(expected, rel=1e-12)


@given(
    lam=st.floats(0.01, 0.99),
    u=st.floats(0.0, 1.0),
)
def test_fold_invariant_property(lam, u):
    alpha = alpha_of_t(lam, u)
    beta = beta_of_alpha(lam, alpha)
    assert math.sin(alpha) * math.sin(beta) == pytest.approx(lam, rel=1e-12)
    assert math.asin(lam) - 1e-12 <= beta <= math.pi / 2 + 1e-12


def test_planarity_at_endpoints():
    p = StarParams((1.5, 0.5, 1.0, 2.0), 0.27)
    v1 = star_vectors(p.state_at(1.0))
    assert np.max(np.abs(v1[:, 0])) < 1e-12
    v0 = star_vectors(p.state_at(0.0))
    assert np.max(np.abs(v0[:, 1])) < 1e-12


def test_three_subsets_independent_interior():
    p = StarParams((1, 1, 1, 1), 1 / 3)
    v = star_vectors(p.state_at(0.5))
    import itertools

    for sub in itertools.combinations(range(4), 3):
        det = np.linalg.det(v[list(sub)])
        assert abs(det) > 1e-12
