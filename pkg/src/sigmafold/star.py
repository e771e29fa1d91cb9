"""The one-parameter family of 4-vector stars and its folding law.

The four star vectors live in the two vertical coordinate planes:
v1, v2 in y=0 and v3, v4 in x=0.  A fold keeps the radii fixed and moves
the opening angles (alpha, beta) along the constraint
sin(alpha) * sin(beta) = lambda, which keeps every admissible facet
congruent.  The ends of the legal alpha interval are the two collapsed
states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "StarParams",
    "StarState",
    "beta_of_alpha",
    "alpha_of_t",
    "t_of_alpha",
    "facet_angle_gamma",
    "star_vectors",
    "tetrahedral_star",
]


@dataclass(frozen=True)
class StarParams:
    """Radii r1..r4 and the fold invariant lambda = sin(alpha)sin(beta)."""

    r: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)
    lam: float = 1.0 / 3.0

    def __post_init__(self):
        if len(self.r) != 4:
            raise DomainError(f"need exactly 4 radii, got {len(self.r)}")
        object.__setattr__(self, "r", tuple(float(x) for x in self.r))
        if any(x <= 0 for x in self.r):
            raise DomainError(f"radii must be positive, got {self.r}")
        if not 0.0 < self.lam < 1.0:
            raise DomainError(f"lambda must lie in (0,1), got {self.lam}")

    @property
    def alpha_min(self) -> float:
        return math.asin(self.lam)

    def state(self, alpha: float) -> "StarState":
        return StarState(self, alpha)

    def state_at(self, t: float) -> "StarState":
        return StarState(self, alpha_of_t(self.lam, t))


@dataclass(frozen=True)
class StarState:
    """A star of the family frozen at one fold angle alpha.

    alpha = pi/2 and alpha = arcsin(lambda) are the two degenerate
    (collapsed) states; both are representable.
    """

    params: StarParams
    alpha: float

    def __post_init__(self):
        lo = self.params.alpha_min
        if not lo - 1e-15 <= self.alpha <= math.pi / 2 + 1e-15:
            raise DomainError(
                f"alpha={self.alpha} outside [arcsin(lambda), pi/2]="
                f"[{lo}, {math.pi / 2}]"
            )

    @property
    def beta(self) -> float:
        return beta_of_alpha(self.params.lam, self.alpha)

    @property
    def degenerate(self) -> bool:
        lo = self.params.alpha_min
        return min(abs(self.alpha - lo), abs(self.alpha - math.pi / 2)) < 1e-12


def beta_of_alpha(lam: float, alpha: float) -> float:
    """Companion angle with sin(alpha)sin(beta) = lam."""
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lambda must lie in (0,1), got {lam}")
    lo = math.asin(lam)
    if not lo - 1e-12 <= alpha <= math.pi / 2 + 1e-12:
        raise DomainError(f"alpha={alpha} outside legal interval [{lo}, {math.pi/2}]")
    # Clamp: at alpha = arcsin(lam) the ratio is 1 up to roundoff.
    s = min(1.0, lam / math.sin(alpha))
    return math.asin(s)


def alpha_of_t(lam: float, t: float) -> float:
    """Linear fold chart: t=0 collapses into y=0, t=1 into x=0."""
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lambda must lie in (0,1), got {lam}")
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"fold parameter t={t} outside [0,1]")
    lo = math.asin(lam)
    return lo + t * (math.pi / 2 - lo)


def t_of_alpha(lam: float, alpha: float) -> float:
    """Inverse of the fold chart."""
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lambda must lie in (0,1), got {lam}")
    lo = math.asin(lam)
    if not lo - 1e-12 <= alpha <= math.pi / 2 + 1e-12:
        raise DomainError(f"alpha={alpha} outside legal interval [{lo}, {math.pi/2}]")
    return min(1.0, max(0.0, (alpha - lo) / (math.pi / 2 - lo)))


def facet_angle_gamma(lam: float) -> float:
    """Acute angle of every admissible facet: gamma = arccos(lambda)."""
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lambda must lie in (0,1), got {lam}")
    return math.acos(lam)


def star_vectors(state: StarState) -> np.ndarray:
    """The four star vectors as a 4x3 array (row i = v_{i+1})."""
    r = state.params.r
    a = state.alpha
    b = state.beta
    ca, sa = math.cos(a), math.sin(a)
    cb, sb = math.cos(b), math.sin(b)
    return np.array(
        [
            [r[0] * ca, 0.0, r[0] * sa],
            [-r[1] * ca, 0.0, r[1] * sa],
            [0.0, r[2] * cb, -r[2] * sb],
            [0.0, -r[3] * cb, -r[3] * sb],
        ]
    )


def tetrahedral_star() -> StarState:
    """Unit radii, alpha = beta = arccos(sqrt(2/3)); lambda = 1/3.

    All four vectors are unit length and every pairwise dot product
    equals -1/3, i.e. the vectors point to the corners of a regular
    tetrahedron.
    """
    alpha = math.acos(math.sqrt(2.0 / 3.0))
    return StarState(StarParams((1.0, 1.0, 1.0, 1.0), 1.0 / 3.0), alpha)
