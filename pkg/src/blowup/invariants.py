"""Minor-ideal heights, condition G_s, the index u, symmetric-algebra
dimension, and the Rees and special-fiber ideals of a presentation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .groebner import Budget, GroebnerBasis, Ideal, dimension, eliminate, height, ideal_equal
from .linmatrix import LinearMatrix, minors, symmetric_ideal
from .poly import GREVLEX, MonomialOrder, Polynomial, PolyRing, VariableBlock


class HypothesisError(ValueError):
    """An input fails a hypothesis required by the requested computation."""

    def __init__(self, check: str, message: str):
        self.check = check
        super().__init__(f"{check}: {message}")


# --------------------------------------------------------------------------
# heights of minor ideals and G_s
# --------------------------------------------------------------------------

def minor_height(M: LinearMatrix, j: int, budget: Budget | None = None) -> int:
    """height(I_j(M)); I_j for j <= 0 is the unit ideal (height = #vars + 1 by convention)."""
    if j <= 0:
        return M.ring.nvars + 1
    return height(minors(M, j), budget)


def minor_heights(M: LinearMatrix, budget: Budget | None = None) -> dict[int, int]:
    return {j: minor_height(M, j, budget) for j in range(1, min(M.nrows, M.ncols) + 1)}


def check_Gs_ideal(phi: LinearMatrix, s: int, heights: dict | None = None,
                   budget: Budget | None = None) -> bool:
    """height I_j(phi) >= n - j + 1 for n - s + 1 <= j <= n - 1, n = #rows."""
    return check_Gs_module(phi, 1, s, heights, budget)


def check_Gs_module(psi: LinearMatrix, e: int, s: int, heights: dict | None = None,
                    budget: Budget | None = None) -> bool:
    """G_s for coker(psi) of rank e: height I_j >= m - j - (e - 2) for m - s - (e - 2) <= j <= m - e."""
    if e < 1:
        raise ValueError("rank e must be positive")
    m = psi.nrows
    for j in range(max(1, m - s - (e - 2)), m - e + 1):
        h = heights[j] if heights and j in heights else minor_height(psi, j, budget)
        if h < m - j - (e - 2):
            return False
    return True


@dataclass
class GsProfile:
    heights: dict[int, int]
    satisfied: dict[int, bool]
    u: int | None
    d: int
    n: int


def gs_profile(phi: LinearMatrix, budget: Budget | None = None) -> GsProfile:
    d = len(phi.variables)
    n = phi.nrows
    hs = minor_heights(phi, budget)
    sat = {s: check_Gs_ideal(phi, s, hs) for s in range(1, d + 1)}
    u = next((j - 1 for j in sorted(hs) if j >= 2 and hs[j] == d - 1), None)
    return GsProfile(hs, sat, u, d, n)


def compute_u(phi: LinearMatrix, profile: GsProfile | None = None,
              budget: Budget | None = None) -> int:
    """Least u with height I_{u+1}(phi) = d - 1, for phi satisfying G_{d-1} but not G_d."""
    prof = profile or gs_profile(phi, budget)
    d, n, hs = prof.d, prof.n, prof.heights
    if not prof.satisfied[d - 1]:
        raise HypothesisError("G_{d-1}", "phi does not satisfy G_{d-1}")
    if prof.satisfied[d]:
        raise HypothesisError("not G_d", "phi satisfies G_d")
    if hs.get(n - d + 1) != d - 1:
        raise HypothesisError("height I_{n-d+1}", f"height I_{n - d + 1}(phi) = {hs.get(n - d + 1)} != d - 1")
    u = prof.u
    if u is None or not 1 <= u <= n - d:
        raise HypothesisError("u", f"no u in [1, {n - d}] with height I_(u+1) = d - 1")
    for i in range(1, u + 1):
        if hs[i] != d:
            raise HypothesisError("u", f"height I_{i}(phi) = {hs[i]} != d for i <= u")
    return u


# --------------------------------------------------------------------------
# symmetric algebra
# --------------------------------------------------------------------------

def sym_dimension(psi: LinearMatrix, budget: Budget | None = None) -> int:
    """Krull dimension of k[x, t]/I_1(t * psi) with a fresh t-block of size #rows."""
    return dimension(symmetric_ideal(psi), budget)


# --------------------------------------------------------------------------
# Rees algebra and special fiber
# --------------------------------------------------------------------------

def signed_generators(phi: LinearMatrix) -> list[Polynomial]:
    """(-1)^(i+1) * det(phi with row i deleted), i = 1..n: the Hilbert--Burch generators."""
    n, m = phi.shape
    if m != n - 1:
        raise ValueError("need an n x (n-1) matrix")
    cols = tuple(range(m))
    gens = []
    for i in range(n):
        g = phi.minor(tuple(r for r in range(n) if r != i), cols)
        gens.append(g if i % 2 == 0 else -g)
    return gens


@dataclass
class ReesPresentation:
    """Presentation of the Rees algebra and special fiber of I = <generators> in R[t]."""

    generators: list[Polynomial]
    ring: PolyRing                      # k[x, t]
    fiber_ring: PolyRing                # k[t]
    rees: Ideal                         # the defining ideal J
    fiber: Ideal                        # Q = J cap k[t]
    sym: Ideal | None = None            # I_1(t * phi)
    phi: LinearMatrix | None = None
    dim_sym: int | None = None
    dim_rees: int | None = None
    analytic_spread: int | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def fiber_basis(self) -> GroebnerBasis:
        return self.fiber.groebner()

    @property
    def rees_basis(self) -> GroebnerBasis:
        return self.rees.groebner()


def _aux_name(names: Sequence[str]) -> str:
    w = "w"
    while w in names:
        w += "_"
    return w


def rees_from_generators(gens: Sequence[Polynomial], t_names: Sequence[str] | None = None,
                         extra: Sequence[Polynomial] = (), budget: Budget | None = None) -> ReesPresentation:
    """Kernel J of k[x, t] -> k[x, w], t_i -> w * g_i, and Q = J cap k[t].

    J comes from one Groebner basis in the order w > grevlex(x, t); its
    w-free part is already the reduced grevlex basis of J.  Q is then
    obtained by eliminating the x-block from J.  The generators must be
    homogeneous of one common degree.  ``extra`` are known kernel elements
    (the symmetric relations) seeded into the computation.
    """
    gens = list(gens)
    if not gens or not any(gens):
        raise ValueError("the ideal must be nonzero")
    R = gens[0].ring
    degs = {g.total_degree() for g in gens if g}
    if len(degs) != 1 or not all(g.is_homogeneous() for g in gens):
        raise ValueError("generators must be homogeneous of a common degree")
    deg = degs.pop()
    n = len(gens)
    t_names = tuple(t_names or (f"t{i}" for i in range(1, n + 1)))
    xb = R.block("x")
    S = PolyRing(R.field, [xb, VariableBlock(t_names, "t")])
    w = _aux_name(S.names)
    order = MonomialOrder.elimination(1, S.nvars)
    A = PolyRing(R.field, [VariableBlock((w,), "aux"), *S.blocks], order)
    W = A.var(w)
    eqs = [A.var(t) - W * g.to_ring(A) for t, g in zip(t_names, gens)]
    eqs += [e.to_ring(A) for e in extra]
    weights = (1,) + (1,) * len(xb) + (deg + 1,) * n
    gb = Ideal(A, eqs, weights).groebner(order, budget)
    J = [e.to_ring(S) for e, lm in zip(gb.elements, gb.leading) if not lm[0]]
    rees = Ideal(S, J)
    rees._gb[GREVLEX] = GroebnerBasis(S, GREVLEX, J, rees)
    Q = eliminate(rees, xb, budget)
    P = ReesPresentation(gens, S, Q.ring, rees, Q)
    P.notes.append(f"elimination basis size {len(gb)}, pairs {gb.stats.pairs}")
    return P


def rees_ideal(phi: LinearMatrix, budget: Budget | None = None, check_dim: bool = True) -> ReesPresentation:
    """Rees and fiber ideals of I = I_{n-1}(phi), generated by the signed maximal minors."""
    gens = signed_generators(phi)
    if not any(gens):
        raise HypothesisError("I != 0", "the maximal minors of phi all vanish")
    sym = symmetric_ideal(phi)
    P = rees_from_generators(gens, sym.ring.block("t").names, sym.gens, budget)
    P.sym = sym
    P.phi = phi
    if check_dim:
        d = len(phi.variables)
        P.dim_rees = dimension(P.rees, budget)
        if P.dim_rees != d + 1:
            raise HypothesisError("dim Rees", f"dim Rees = {P.dim_rees} != d + 1 = {d + 1} (degenerate input)")
    return P


def fiber_ideal(P: ReesPresentation) -> Ideal:
    """Q = J cap k[t], computed by eliminating the x-block from J."""
    return P.fiber


def analytic_spread(P: ReesPresentation, budget: Budget | None = None) -> int:
    """dim k[t]/Q; Q = 0 gives the number of t-variables."""
    if P.analytic_spread is None:
        P.analytic_spread = dimension(P.fiber, budget)
    return P.analytic_spread


def symmetric_in_rees(P: ReesPresentation) -> bool:
    gb = P.rees.groebner()
    return all(not gb.reduce(g) for g in P.sym.gens)


# --------------------------------------------------------------------------
# presentation inputs
# --------------------------------------------------------------------------

@dataclass
class PresentationInput:
    """An n x (n-1) x-linear matrix phi with I = I_{n-1}(phi) and its hypothesis battery."""

    phi: LinearMatrix
    checks: dict[str, bool] = field(default_factory=dict)
    profile: GsProfile | None = None
    seed: int | None = None
    declared_u: int | None = None
    declared_point: tuple | None = None

    @property
    def d(self) -> int:
        return len(self.phi.variables)

    @property
    def n(self) -> int:
        return self.phi.nrows

    @property
    def mu(self) -> int:
        return self.phi.nrows

    @property
    def ideal(self) -> Ideal:
        return Ideal(self.phi.ring, signed_generators(self.phi))

    def run_checks(self, budget: Budget | None = None) -> dict[str, bool]:
        phi = self.phi
        d, n = self.d, self.n
        if phi.ncols != n - 1:
            raise ValueError("presentation matrices are n x (n-1)")
        prof = self.profile = gs_profile(phi, budget)
        hs = prof.heights
        self.checks = {
            "linear": True,
            "height_I_is_2": hs[n - 1] == 2,
            "I1_is_maximal": hs[1] == d and _is_maximal_ideal(phi),
            "mu_at_least_d_plus_1": n >= d + 1,
            "G_{d-1}": prof.satisfied[d - 1],
            "not_G_d": not prof.satisfied[d],
        }
        return self.checks

    def hypotheses_hold(self) -> bool:
        if not self.checks:
            self.run_checks()
        return all(self.checks.values())

    def failed(self) -> list[str]:
        if not self.checks:
            self.run_checks()
        return [k for k, v in self.checks.items() if not v]


def _is_maximal_ideal(phi: LinearMatrix) -> bool:
    """I_1(phi) = <x_1, ..., x_d>: the entries span all linear forms."""
    ring = phi.ring
    xs = ring.block("x").names
    I1 = Ideal(ring, [e for r in phi.rows for e in r])
    return ideal_equal(I1, Ideal(ring, [ring.var(x) for x in xs]))
