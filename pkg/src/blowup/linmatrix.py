"""Matrices of linear forms: Jacobian duals, minors, rank modulo an ideal,
scalar conjugation and the x1-normalized canonical shape."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .groebner import GroebnerBasis, Ideal
from .poly import AmbientMismatch, Polynomial, PolyRing, VariableBlock


class ShapeError(ValueError):
    pass


class LinearMatrix:
    """Rectangular matrix whose entries are zero or linear forms in one block of its ring."""

    def __init__(self, entries: Sequence[Sequence[Polynomial]], block: str = "x",
                 ring: PolyRing | None = None, check: bool = True):
        rows = [list(r) for r in entries]
        if not rows or not rows[0]:
            raise ShapeError("matrix dimensions must be positive")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ShapeError("ragged matrix")
        ring = ring or rows[0][0].ring
        self.ring = ring
        self.block = block
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(rows)
        self.ncols = len(rows[0])
        self._minor_cache: dict = {}
        if check:
            names = ring.block(block).names
            for i, r in enumerate(rows):
                for j, e in enumerate(r):
                    if e.ring != ring:
                        raise AmbientMismatch(f"entry ({i}, {j}) lives in another ring")
                    if not e.is_linear_in(names):
                        raise ValueError(f"entry ({i}, {j}) = {e} is not linear in the {block}-block")

    @classmethod
    def from_strings(cls, ring: PolyRing, rows: Sequence[Sequence[str]], block: str = "x"):
        return cls([[ring.parse(s) for s in r] for r in rows], block, ring)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def variables(self) -> tuple[str, ...]:
        return self.ring.block(self.block).names

    def __getitem__(self, ij) -> Polynomial:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, LinearMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in r) for r in self.rows)
        return f"LinearMatrix[{body}]"

    def to_strings(self) -> list[list[str]]:
        return [[str(e) for e in r] for r in self.rows]

    def columns(self, cols: Sequence[int]) -> "LinearMatrix":
        return LinearMatrix([[r[j] for j in cols] for r in self.rows], self.block, self.ring, False)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "LinearMatrix":
        return LinearMatrix([[self.rows[i][j] for j in cols] for i in rows], self.block, self.ring, False)

    def transpose(self) -> "LinearMatrix":
        return LinearMatrix([list(c) for c in zip(*self.rows)], self.block, self.ring, False)

    def map_entries(self, fn, ring: PolyRing | None = None, block: str | None = None) -> "LinearMatrix":
        return LinearMatrix([[fn(e) for e in r] for r in self.rows], block or self.block,
                            ring or self.ring, False)

    def to_ring(self, ring: PolyRing) -> "LinearMatrix":
        return self.map_entries(lambda e: e.to_ring(ring), ring)

    def coefficient_matrix(self, name: str) -> list[list]:
        """Scalar matrix of the coefficients of one variable."""
        i = self.ring.index[name]
        zero = self.ring.field.zero
        out = []
        for r in self.rows:
            row = []
            for e in r:
                c = zero
                for m, v in e.terms_dict.items():
                    if m[i]:
                        c = v
                row.append(c)
            out.append(row)
        return out

    def evaluate(self, point: Sequence) -> list[list]:
        """Scalar matrix at a point of the block's variables."""
        values = dict(zip(self.variables, point))
        full = {n: values.get(n, 0) for n in self.ring.names}
        return [[e.evaluate(full) for e in r] for r in self.rows]

    # minors --------------------------------------------------------------

    def minor(self, rows: Sequence[int], cols: Sequence[int]) -> Polynomial:
        """Determinant of a square submatrix, by memoized Laplace expansion along the first row."""
        rows, cols = tuple(rows), tuple(cols)
        if len(rows) != len(cols):
            raise ShapeError("minor needs as many rows as columns")
        return self._det(rows, cols)

    def _det(self, rows, cols) -> Polynomial:
        if not rows:
            return self.ring.one
        cache = self._minor_cache
        key = (rows, cols)
        hit = cache.get(key)
        if hit is not None:
            return hit
        if len(rows) == 1:
            val = self.rows[rows[0]][cols[0]]
        else:
            top, rest = rows[0], rows[1:]
            val = self.ring.zero
            for k, c in enumerate(cols):
                e = self.rows[top][c]
                if not e:
                    continue
                sub = self._det(rest, cols[:k] + cols[k + 1:])
                if not sub:
                    continue
                val = val + e * sub if k % 2 == 0 else val - e * sub
        cache[key] = val
        return val

    def det(self) -> Polynomial:
        if self.nrows != self.ncols:
            raise ShapeError("determinant of a non-square matrix")
        return self._det(tuple(range(self.nrows)), tuple(range(self.ncols)))

    def all_minors(self, r: int):
        """Yield (rows, cols, minor) over all r x r submatrices, nonzero minors only."""
        if r < 1 or r > min(self.nrows, self.ncols):
            return
        for rows in combinations(range(self.nrows), r):
            for cols in combinations(range(self.ncols), r):
                m = self._det(rows, cols)
                if m:
                    yield rows, cols, m


def minors(M: LinearMatrix, r: int) -> Ideal:
    """I_r(M): zero ideal when r exceeds a dimension, unit ideal for r = 0."""
    if r < 0:
        raise ValueError("minor size must be nonnegative")
    if r == 0:
        return Ideal(M.ring, [M.ring.one])
    return Ideal(M.ring, [m for _, _, m in M.all_minors(r)])


# --------------------------------------------------------------------------
# Jacobian dual
# --------------------------------------------------------------------------

def bigraded_ring(x_ring: PolyRing, t_names: Sequence[str]) -> PolyRing:
    """k[x, t] with the x-block of ``x_ring`` followed by a t-block."""
    return PolyRing(x_ring.field, [x_ring.block("x"), VariableBlock(tuple(t_names), "t")])


def t_ring(field, t_names: Sequence[str]) -> PolyRing:
    return PolyRing(field, [VariableBlock(tuple(t_names), "t")])


def jacobian_dual(phi: LinearMatrix, t: VariableBlock | Sequence[str] | None = None,
                  check: bool = True) -> LinearMatrix:
    """The unique t-linear matrix B with t * phi = x * B.

    B has one row per x-variable and one column per column of phi; its entries
    live in k[t].  With ``check`` the identity is verified in k[x, t].
    """
    if phi.block != "x":
        raise ValueError("phi must be linear in the x-block")
    names = _t_names(t, phi.nrows)
    TR = t_ring(phi.ring.field, names)
    xs = phi.variables
    tvars = TR.gens
    coeff = {x: phi.coefficient_matrix(x) for x in xs}
    rows = []
    for x in xs:
        C = coeff[x]
        row = []
        for j in range(phi.ncols):
            row.append(TR.linear_form({names[i]: C[i][j] for i in range(phi.nrows) if C[i][j]}))
        rows.append(row)
    B = LinearMatrix(rows, "t", TR, False)
    if check and not check_jacobian_dual(phi, B):
        raise AssertionError("t*phi != x*B")
    return B


def _t_names(t, n: int) -> tuple[str, ...]:
    if t is None:
        return tuple(f"t{i}" for i in range(1, n + 1))
    names = tuple(t.names) if isinstance(t, VariableBlock) else tuple(t)
    if len(names) != n:
        raise ShapeError(f"need {n} t-variables, got {len(names)}")
    return names


def row_times(vector: Sequence[Polynomial], M: LinearMatrix, ring: PolyRing) -> list[Polynomial]:
    """The row vector ``vector * M`` computed in ``ring``."""
    out = []
    for j in range(M.ncols):
        acc = ring.zero
        for i in range(M.nrows):
            acc = acc + vector[i] * M.rows[i][j].to_ring(ring)
        out.append(acc)
    return out


def check_jacobian_dual(phi: LinearMatrix, B: LinearMatrix) -> bool:
    """Verify t * phi == x * B entrywise in k[x, t]."""
    S = bigraded_ring(phi.ring, B.variables)
    tvec = [S.var(n) for n in B.variables]
    xvec = [S.var(n) for n in phi.variables]
    if B.nrows != len(xvec) or B.ncols != phi.ncols:
        return False
    return row_times(tvec, phi, S) == row_times(xvec, B, S)


def symmetric_ideal(phi: LinearMatrix, t: VariableBlock | Sequence[str] | None = None) -> Ideal:
    """I_1(t * phi) in k[x, t]."""
    names = _t_names(t, phi.nrows)
    S = bigraded_ring(phi.ring, names)
    tvec = [S.var(n) for n in names]
    return Ideal(S, row_times(tvec, phi, S))


# --------------------------------------------------------------------------
# signed maximal minors
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SignedMinorVector:
    """delta^i = (-1)^(i+1) * (minor of a d x (d-1) matrix deleting row i), i = 1..d."""

    source: LinearMatrix
    delta: tuple[Polynomial, ...]

    def __iter__(self):
        return iter(self.delta)

    def __len__(self):
        return len(self.delta)

    def __getitem__(self, i):
        return self.delta[i]

    def laplace_checks(self) -> list[Polynomial]:
        """sum_i B[i][j] * delta^i for every column j; all must vanish."""
        B = self.source
        out = []
        for j in range(B.ncols):
            acc = B.ring.zero
            for i in range(B.nrows):
                acc = acc + B.rows[i][j] * self.delta[i]
            out.append(acc)
        return out

    def is_zero(self) -> bool:
        return not any(self.delta)


def signed_maximal_minors(B: LinearMatrix) -> SignedMinorVector:
    d = B.nrows
    if B.ncols != d - 1:
        raise ShapeError(f"expected a {d} x {d - 1} matrix, got {B.nrows} x {B.ncols}")
    cols = tuple(range(d - 1))
    delta = []
    for i in range(d):
        m = B.minor(tuple(r for r in range(d) if r != i), cols)
        delta.append(m if i % 2 == 0 else -m)
    return SignedMinorVector(B, tuple(delta))


# --------------------------------------------------------------------------
# rank modulo an ideal
# --------------------------------------------------------------------------

def rank_mod_witness(M: LinearMatrix, Q: GroebnerBasis | None = None):
    """(rank, rows, cols): the largest minor size with a minor nonzero modulo Q, and one such minor."""
    if Q is not None:
        if Q.ring.names != M.ring.names:
            raise AmbientMismatch("matrix and ideal live in different rings")
        if Q.is_unit:
            raise ValueError("rank modulo the unit ideal is undefined")
    for r in range(min(M.nrows, M.ncols), 0, -1):
        for rows in combinations(range(M.nrows), r):
            for cols in combinations(range(M.ncols), r):
                m = M._det(rows, cols)
                if not m:
                    continue
                if Q is None or Q.reduce(m.to_ring(Q.ring)):
                    return r, rows, cols
    return 0, (), ()


def rank_mod(M: LinearMatrix, Q: GroebnerBasis | None = None) -> int:
    return rank_mod_witness(M, Q)[0]


# --------------------------------------------------------------------------
# scalar linear algebra
# --------------------------------------------------------------------------

def identity(n: int, field) -> list[list]:
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def mat_mul(A, B, field) -> list[list]:
    return [[_dot(row, col, field) for col in zip(*B)] for row in A]


def _dot(a, b, field):
    acc = field.zero
    for x, y in zip(a, b):
        if x and y:
            acc = field.add(acc, field.mul(x, y))
    return acc


def scalar_det(A, field):
    """Determinant by Gaussian elimination over an exact field."""
    M = [list(r) for r in A]
    n = len(M)
    det = field.one
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return field.zero
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = field.neg(det)
        det = field.mul(det, M[c][c])
        inv = field.inv(M[c][c])
        for r in range(c + 1, n):
            if M[r][c]:
                f = field.mul(M[r][c], inv)
                M[r] = [field.sub(a, field.mul(f, b)) for a, b in zip(M[r], M[c])]
    return det


def scalar_inverse(A, field):
    n = len(A)
    M = [list(r) + identity(n, field)[i] for i, r in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            raise ValueError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        inv = field.inv(M[c][c])
        M[c] = [field.mul(v, inv) for v in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [field.sub(a, field.mul(f, b)) for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


def scalar_rank(A, field) -> int:
    return len(rank_factorization(A, field)[2])


def rank_factorization(A, field):
    """Invertible P, C with P * A * C = [[I_r, 0], [0, 0]], by full-pivoting elimination.

    Returns (P, C, pivots).  Pivots are chosen as the first nonzero entry of
    the remaining block in row-major order, so the output is deterministic.
    """
    m, n = len(A), len(A[0])
    M = [list(r) for r in A]
    P = identity(m, field)
    C = identity(n, field)
    pivots = []
    for s in range(min(m, n)):
        piv = next(((i, j) for i in range(s, m) for j in range(s, n) if M[i][j]), None)
        if piv is None:
            break
        i, j = piv
        pivots.append(piv)
        M[s], M[i] = M[i], M[s]
        P[s], P[i] = P[i], P[s]
        for row in M:
            row[s], row[j] = row[j], row[s]
        for row in C:
            row[s], row[j] = row[j], row[s]
        inv = field.inv(M[s][s])
        M[s] = [field.mul(v, inv) for v in M[s]]
        P[s] = [field.mul(v, inv) for v in P[s]]
        for r in range(m):
            if r != s and M[r][s]:
                f = M[r][s]
                M[r] = [field.sub(a, field.mul(f, b)) for a, b in zip(M[r], M[s])]
                P[r] = [field.sub(a, field.mul(f, b)) for a, b in zip(P[r], P[s])]
        for c in range(s + 1, n):
            if M[s][c]:
                f = M[s][c]
                for row in M:
                    row[c] = field.sub(row[c], field.mul(f, row[s]))
                for row in C:
                    row[c] = field.sub(row[c], field.mul(f, row[s]))
    return P, C, pivots


# --------------------------------------------------------------------------
# conjugation and canonical form
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalarConjugation:
    """The pair (A, C) acting by phi -> A * phi * C."""

    A: tuple
    C: tuple
    field: object

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(tuple(r) for r in self.A))
        object.__setattr__(self, "C", tuple(tuple(r) for r in self.C))
        for name, M in (("A", self.A), ("C", self.C)):
            if any(len(r) != len(M) for r in M):
                raise ShapeError(f"{name} must be square")
            if not scalar_det(M, self.field):
                raise ValueError(f"{name} is singular")

    @classmethod
    def identity(cls, n: int, field) -> "ScalarConjugation":
        return cls(identity(n, field), identity(n - 1, field), field)

    @classmethod
    def random(cls, n: int, m: int, field, rng) -> "ScalarConjugation":
        def rand_gl(k):
            while True:
                M = [[field.random_element(rng) for _ in range(k)] for _ in range(k)]
                if scalar_det(M, field):
                    return M
        return cls(rand_gl(n), rand_gl(m), field)


def conjugate(phi: LinearMatrix, S: ScalarConjugation) -> LinearMatrix:
    n, m = phi.shape
    if len(S.A) != n or len(S.C) != m:
        raise ShapeError("conjugation matrices do not fit the matrix")
    ring = phi.ring
    A, C = S.A, S.C
    left = []
    for i in range(n):
        row = []
        for l in range(m):
            acc = ring.zero
            for k in range(n):
                if A[i][k]:
                    acc = acc + phi.rows[k][l].scale(A[i][k])
            row.append(acc)
        left.append(row)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = ring.zero
            for l in range(m):
                if C[l][j]:
                    acc = acc + left[i][l].scale(C[l][j])
            row.append(acc)
        out.append(row)
    return LinearMatrix(out, phi.block, ring, False)


def change_variables(phi: LinearMatrix, T) -> LinearMatrix:
    """Substitute x_i -> sum_c T[i][c] x_c in every entry."""
    ring = phi.ring
    xs = phi.variables
    images = {x: ring.linear_form({xs[c]: T[i][c] for c in range(len(xs))}) for i, x in enumerate(xs)}
    return phi.map_entries(lambda e: e.substitute(images))


def point_frame(point: Sequence, field) -> list[list]:
    """Invertible T whose first column is ``point``; x = T y sends (1:0:...:0) to the point."""
    d = len(point)
    k = next((i for i, v in enumerate(point) if v), None)
    if k is None:
        raise ValueError("the zero vector is not a projective point")
    cols = [list(point)] + [[field.one if r == i else field.zero for r in range(d)]
                            for i in range(d) if i != k]
    return [[cols[c][r] for c in range(d)] for r in range(d)]


def is_canonical_shape(phi: LinearMatrix, u: int) -> bool:
    """x1 appears exactly at (i, i), i < u, with coefficient 1, and nowhere else."""
    x1 = phi.variables[0]
    C = phi.coefficient_matrix(x1)
    f = phi.ring.field
    for i in range(phi.nrows):
        for j in range(phi.ncols):
            want = f.one if (i == j and i < u) else f.zero
            if C[i][j] != want:
                return False
    return True


@dataclass(frozen=True)
class CanonicalForm:
    conjugation: ScalarConjugation
    change_of_variables: tuple
    matrix: LinearMatrix
    u: int


def canonical_form(phi: LinearMatrix, point: Sequence, u: int | None = None) -> CanonicalForm:
    """Bring phi to the shape where x1 occurs only on the first u diagonal slots.

    ``point`` is a k-rational zero of I_{u+1}(phi).  The x-coordinates are
    changed so that the point becomes (1:0:...:0); then the x1-coefficient
    matrix (phi evaluated at the point) is rank-factored to diag(I_u, 0).
    """
    field = phi.ring.field
    d = len(phi.variables)
    if len(point) != d:
        raise ValueError(f"point needs {d} coordinates")
    try:
        point = [field(v) for v in point]
    except (TypeError, ValueError) as exc:
        raise ValueError(f"point {point!r} is not rational over {field!r}") from exc
    T = point_frame(point, field)
    at_point = phi.evaluate(point)
    r = scalar_rank(at_point, field)
    if u is None:
        u = r
    elif r > u:
        raise ValueError(f"point is not a zero of I_{u + 1}(phi): rank there is {r}")
    elif r < u:
        raise ValueError(f"phi has rank {r} < u = {u} at the point; u is not the least index")
    moved = change_variables(phi, T)
    P, C, _ = rank_factorization(moved.coefficient_matrix(moved.variables[0]), field)
    S = ScalarConjugation(P, C, field)
    out = conjugate(moved, S)
    if not is_canonical_shape(out, u):
        raise AssertionError("canonical form construction failed")
    return CanonicalForm(S, tuple(tuple(r) for r in T), out, u)
