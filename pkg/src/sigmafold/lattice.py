"""Exact integer-lattice arithmetic for combinatorial coordinates.

Vertices of a complex carry integer 4-vectors (coefficients of the star
vectors).  Periodic complexes are stored as representatives modulo a
period lattice; everything here is exact integer arithmetic so that
canonical forms are stable and hashable.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import BadLatticeError, NotSublatticeError

Coord4 = tuple[int, int, int, int]

ZERO4: Coord4 = (0, 0, 0, 0)
E1: Coord4 = (1, 0, 0, 0)
E2: Coord4 = (0, 1, 0, 0)
E3: Coord4 = (0, 0, 1, 0)
E4: Coord4 = (0, 0, 0, 1)
UNIT = (E1, E2, E3, E4)


def unit(direction: int) -> Coord4:
    """Unit vector for a 1-based direction index."""
    return UNIT[direction - 1]


def vadd(a: Sequence[int], b: Sequence[int]) -> Coord4:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])


def vsub(a: Sequence[int], b: Sequence[int]) -> Coord4:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3])


def vneg(a: Sequence[int]) -> Coord4:
    return (-a[0], -a[1], -a[2], -a[3])


def vscale(k: int, a: Sequence[int]) -> Coord4:
    return (k * a[0], k * a[1], k * a[2], k * a[3])


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    n, m, p = len(a), len(b), len(b[0])
    return [[sum(a[i][k] * b[k][j] for k in range(m)) for j in range(p)] for i in range(n)]


def _matvec(a: list[list[int]], v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(a[i][k] * v[k] for k in range(len(v))) for i in range(len(a)))


def smith_diagonalize(m: list[list[int]]):
    """Diagonalize an integer matrix: L @ m @ R is diagonal.

    Returns (L, Linv, diag, R) where L and Linv are mutually inverse
    unimodular row transforms and diag holds the diagonal entries (length
    min(rows, cols), zeros included).  The divisibility chain of full
    Smith normal form is not enforced; a diagonal form is enough for
    membership tests and canonical residues.
    """
    a = [row[:] for row in m]
    rows, cols = len(a), len(a[0]) if a else 0
    left = _identity(rows)
    left_inv = _identity(rows)
    right = _identity(cols)

    def row_op(i, j, q):
        # row_i -= q * row_j
        for c in range(cols):
            a[i][c] -= q * a[j][c]
        for c in range(rows):
            left[i][c] -= q * left[j][c]
        # inverse accumulates the opposite column op
        for r in range(rows):
            left_inv[r][j] += q * left_inv[r][i]

    def col_op(i, j, q):
        # col_i -= q * col_j
        for r in range(rows):
            a[r][i] -= q * a[r][j]
        for r in range(cols):
            right[r][i] -= q * right[r][j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]
        for r in range(rows):
            left_inv[r][i], left_inv[r][j] = left_inv[r][j], left_inv[r][i]

    def swap_cols(i, j):
        for r in range(rows):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(cols):
            right[r][i], right[r][j] = right[r][j], right[r][i]

    p = 0
    while p < rows and p < cols:
        # locate the smallest nonzero entry in the trailing block
        best = None
        for i in range(p, rows):
            for j in range(p, cols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(p, best[0])
        swap_cols(p, best[1])
        clean = False
        while not clean:
            clean = True
            for i in range(p + 1, rows):
                if a[i][p] != 0:
                    q = a[i][p] // a[p][p]
                    row_op(i, p, q)
                    if a[i][p] != 0:
                        swap_rows(p, i)
                        clean = False
            for j in range(p + 1, cols):
                if a[p][j] != 0:
                    q = a[p][j] // a[p][p]
                    col_op(j, p, q)
                    if a[p][j] != 0:
                        swap_cols(p, j)
                        clean = False
        p += 1

    diag = [a[i][i] if i < cols else 0 for i in range(min(rows, cols))]
    return left, left_inv, diag, right


class Lattice:
    """A rank-k sublattice of Z^4 given by 0..3 generators.

    Provides exact membership tests and a canonical representative for
    every residue class, used to deduplicate facets, edges and vertices
    of periodic complexes.
    """

    def __init__(self, generators: Iterable[Sequence[int]]):
        gens = [tuple(int(x) for x in g) for g in generators]
        for g in gens:
            if len(g) != 4:
                raise BadLatticeError(f"period generator {g} is not a 4-vector")
        if len(gens) > 3:
            raise BadLatticeError("at most 3 period generators are supported")
        self.generators: tuple[Coord4, ...] = tuple(gens)  # type: ignore[assignment]
        k = len(gens)
        if k == 0:
            self.rank = 0
            self._left = _identity(4)
            self._left_inv = _identity(4)
            self._diag: list[int] = []
            return
        m = [[gens[j][i] for j in range(k)] for i in range(4)]  # 4 x k, columns = gens
        left, left_inv, diag, right = smith_diagonalize(m)
        if any(d == 0 for d in diag):
            raise BadLatticeError(f"period generators {gens} are linearly dependent")
        self.rank = k
        self._left = left
        self._left_inv = left_inv
        self._right = right
        self._diag = [abs(d) for d in diag]
        # keep signs consistent with abs(diag)
        for i, d in enumerate(diag):
            if d < 0:
                for c in range(4):
                    self._left[i][c] = -self._left[i][c]
                for r in range(4):
                    self._left_inv[r][i] = -self._left_inv[r][i]

    def __repr__(self):
        return f"Lattice({list(self.generators)})"

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0

    def canon(self, v: Sequence[int]) -> Coord4:
        """Canonical representative of v modulo the lattice."""
        if self.rank == 0:
            return tuple(int(x) for x in v)  # type: ignore[return-value]
        w = list(_matvec(self._left, v))
        for i in range(self.rank):
            w[i] %= self._diag[i]
        return _matvec(self._left_inv, w)  # type: ignore[return-value]

    def contains(self, v: Sequence[int]) -> bool:
        if self.rank == 0:
            return all(x == 0 for x in v)
        w = _matvec(self._left, v)
        for i in range(4):
            if i < self.rank:
                if w[i] % self._diag[i] != 0:
                    return False
            elif w[i] != 0:
                return False
        return True

    def coordinates_of(self, v: Sequence[int]) -> tuple[int, ...] | None:
        """Integer coordinates of v in the generator basis, or None."""
        if not self.contains(v):
            return None
        w = _matvec(self._left, v)
        # With L M R = D the diagonal coordinates are y_i = w_i / d_i and
        # the generator-basis coordinates are x = R y.
        y = [w[i] // self._diag[i] for i in range(self.rank)]
        k = self.rank
        x = [sum(self._right[i][j] * y[j] for j in range(k)) for i in range(k)]
        acc = ZERO4
        for xi, g in zip(x, self.generators):
            acc = vadd(acc, vscale(xi, g))
        if tuple(acc) != tuple(int(c) for c in v):
            return None
        return tuple(x)

    def coset_representatives(self, sub: "Lattice") -> list[Coord4]:
        """Representatives of this lattice modulo a full-rank sublattice."""
        if sub.rank != self.rank:
            raise NotSublatticeError(
                f"sublattice rank {sub.rank} != lattice rank {self.rank}"
            )
        if self.rank == 0:
            return [ZERO4]
        coords = []
        for h in sub.generators:
            c = self.coordinates_of(h)
            if c is None:
                raise NotSublatticeError(f"{h} is not in the period lattice")
            coords.append(c)
        k = self.rank
        a = [[coords[j][i] for j in range(k)] for i in range(k)]  # k x k, cols = sub gens
        left, left_inv, diag, _ = smith_diagonalize(a)
        if any(d == 0 for d in diag):
            raise NotSublatticeError("sublattice generators are dependent")
        # new basis of self: columns of G @ left_inv; sub is diagonal in it
        base = []
        for j in range(k):
            g = ZERO4
            for i in range(k):
                g = vadd(g, vscale(left_inv[i][j], self.generators[i]))
            base.append(g)
        reps: list[Coord4] = []

        def rec(i: int, acc: Coord4):
            if i == k:
                reps.append(acc)
                return
            for c in range(abs(diag[i])):
                rec(i + 1, vadd(acc, vscale(c, base[i])))

        rec(0, ZERO4)
        return reps

    def index_of(self, sub: "Lattice") -> int:
        return len(self.coset_representatives(sub))


TRIVIAL_LATTICE = Lattice([])


def integer_rank(vectors: Iterable[Sequence[int]]) -> int:
    """Rank over Q of a set of integer 4-vectors."""
    vecs = [tuple(int(x) for x in v) for v in vectors]
    if not vecs:
        return 0
    m = [[v[i] for v in vecs] for i in range(4)]
    _, _, diag, _ = smith_diagonalize(m)
    return sum(1 for d in diag if d != 0)
