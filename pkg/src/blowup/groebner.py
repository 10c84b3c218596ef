"""Buchberger's algorithm and the ideal operations built on it.

The engine works on raw ``{exponent tuple: coefficient}`` dicts.  Pairs are
chosen by the normal strategy (smallest sugar degree of the lcm first), the
product and chain criteria are applied through the Gebauer--Moeller update,
and input generators are queued like pairs so that homogeneous inputs are
handled strictly degree by degree.
"""

from __future__ import annotations

import heapq
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

from .poly import GREVLEX, AmbientMismatch, MonomialOrder, Polynomial, PolyRing, VariableBlock


class BudgetExceeded(RuntimeError):
    """A Groebner basis computation hit its pair or degree cap."""


class ZeroIdealError(ValueError):
    """The zero ideal has no initial degree."""


@dataclass(frozen=True)
class Budget:
    max_pairs: int = 50_000
    max_degree: int = 40

    def __post_init__(self):
        if self.max_pairs < 1 or self.max_degree < 1:
            raise ValueError("budgets must be positive")

    @classmethod
    def from_env(cls) -> "Budget":
        """Defaults, overridden by ``BLOWUP_MAX_PAIRS`` / ``BLOWUP_MAX_DEGREE``."""
        return cls(int(os.environ.get("BLOWUP_MAX_PAIRS", 50_000)),
                   int(os.environ.get("BLOWUP_MAX_DEGREE", 40)))


_default_budget: Budget | None = None


def default_budget() -> Budget:
    global _default_budget
    if _default_budget is None:
        _default_budget = Budget.from_env()
    return _default_budget


def set_default_budget(budget: Budget | None) -> None:
    global _default_budget
    _default_budget = budget


# --------------------------------------------------------------------------
# raw engine
# --------------------------------------------------------------------------

def _mask(m) -> int:
    bits = 0
    for i, e in enumerate(m):
        if e:
            bits |= 1 << i
    return bits


def _divides(a, b) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple([x if x > y else y for x, y in zip(a, b)])


class _Elem:
    __slots__ = ("lm", "mask", "poly", "sugar", "deg")

    def __init__(self, lm, poly, sugar):
        self.lm = lm
        self.mask = _mask(lm)
        self.poly = poly
        self.sugar = sugar
        self.deg = sum(lm)


class _Reducer:
    """Full reduction of dicts against a growing list of monic elements."""

    def __init__(self, order: MonomialOrder, p: int | None, weights):
        self.key = order.key
        self.p = p
        self.weights = weights
        self.elems: list[_Elem] = []

    def wdeg(self, m) -> int:
        w = self.weights
        if w is None:
            return sum(m)
        return sum(a * b for a, b in zip(w, m))

    def find(self, m, mmask):
        for g in self.elems:
            if not (g.mask & ~mmask) and _divides(g.lm, m):
                return g
        return None

    def reduce(self, poly: dict, sugar: int = 0, full: bool = True):
        """Return (remainder, sugar).  ``poly`` is consumed."""
        key = self.key
        p = self.p
        heap = [(key(m), m) for m in poly]
        heapq.heapify(heap)
        push, pop = heapq.heappush, heapq.heappop
        out = {}
        find = self.find
        wdeg = self.wdeg
        while heap:
            _, m = pop(heap)
            c = poly.pop(m, None)
            if c is None:
                continue
            g = find(m, _mask(m))
            if g is None:
                out[m] = c
                if not full:
                    for mm, cc in poly.items():
                        out[mm] = cc
                    return out, sugar
                continue
            q = tuple([a - b for a, b in zip(m, g.lm)])
            s = g.sugar + wdeg(q)
            if s > sugar:
                sugar = s
            get = poly.get
            if p is None:
                for gm, gc in g.poly.items():
                    if gm == g.lm:
                        continue
                    nm = tuple([a + b for a, b in zip(gm, q)])
                    old = get(nm)
                    if old is None:
                        poly[nm] = -c * gc
                        push(heap, (key(nm), nm))
                    else:
                        v = old - c * gc
                        if v:
                            poly[nm] = v
                        else:
                            del poly[nm]
            else:
                for gm, gc in g.poly.items():
                    if gm == g.lm:
                        continue
                    nm = tuple([a + b for a, b in zip(gm, q)])
                    old = get(nm)
                    if old is None:
                        poly[nm] = (-c * gc) % p
                        push(heap, (key(nm), nm))
                    else:
                        v = (old - c * gc) % p
                        if v:
                            poly[nm] = v
                        else:
                            del poly[nm]
        return out, sugar


def _monic(poly: dict, key, p):
    lm = min(poly, key=key)
    c = poly[lm]
    if p is None:
        if c != 1:
            inv = 1 / c
            poly = {m: v * inv for m, v in poly.items()}
    elif c != 1:
        inv = pow(c, -1, p)
        poly = {m: v * inv % p for m, v in poly.items()}
    return lm, poly


def _spoly(f: _Elem, g: _Elem, lcm, p):
    qf = tuple([a - b for a, b in zip(lcm, f.lm)])
    qg = tuple([a - b for a, b in zip(lcm, g.lm)])
    out = {}
    for m, c in f.poly.items():
        if m != f.lm:
            out[tuple([a + b for a, b in zip(m, qf)])] = c
    for m, c in g.poly.items():
        if m == g.lm:
            continue
        nm = tuple([a + b for a, b in zip(m, qg)])
        old = out.get(nm)
        if old is None:
            out[nm] = -c if p is None else (-c) % p
        else:
            v = old - c if p is None else (old - c) % p
            if v:
                out[nm] = v
            else:
                del out[nm]
    return out


@dataclass
class GBStats:
    pairs: int = 0
    zero_reductions: int = 0
    max_degree: int = 0
    size: int = 0


def groebner_dicts(polys: Sequence[dict], order: MonomialOrder, p: int | None,
                   weights=None, budget: Budget | None = None,
                   stats: GBStats | None = None) -> list[dict]:
    """Reduced Groebner basis of raw polynomial dicts (monic, sorted by leading monomial)."""
    budget = budget or default_budget()
    key = order.key
    red = _Reducer(order, p, weights)
    wdeg = red.wdeg
    stats = stats if stats is not None else GBStats()

    allel: list[_Elem] = []
    active: list[int] = []
    pairs: set = set()
    queue = []
    counter = 0

    for poly in polys:
        if not poly:
            continue
        s = max(wdeg(m) for m in poly)
        lm = min(poly, key=key)
        queue.append((s, sum(lm), key(lm), counter, None, dict(poly)))
        counter += 1
    heapq.heapify(queue)

    def update(ih: int):
        nonlocal active, pairs, counter
        h = allel[ih]
        mh = h.lm
        C = list(active)
        D = []
        while C:
            ig = C.pop()
            mg = allel[ig].lm
            l_hg = _lcm(mh, mg)
            coprime = all(not (a and b) for a, b in zip(mh, mg))
            if coprime:
                D.append((ig, l_hg, True))
                continue
            dominated = False
            for ip in C:
                if _divides(_lcm(mh, allel[ip].lm), l_hg):
                    dominated = True
                    break
            if not dominated:
                for ip, l2, _ in D:
                    if _divides(l2, l_hg):
                        dominated = True
                        break
            if not dominated:
                D.append((ig, l_hg, False))
        new_pairs = set()
        for pair in pairs:
            i, j, l12 = pair
            if _divides(mh, l12) and _lcm(allel[i].lm, mh) != l12 and _lcm(allel[j].lm, mh) != l12:
                continue
            new_pairs.add(pair)
        for ig, l_hg, coprime in D:
            if coprime:
                continue
            pair = (ig, ih, l_hg)
            new_pairs.add(pair)
            s = max(allel[ig].sugar - wdeg(allel[ig].lm), h.sugar - wdeg(mh)) + wdeg(l_hg)
            heapq.heappush(queue, (s, sum(l_hg), key(l_hg), counter, pair, None))
            counter += 1
        pairs = new_pairs
        active = [ig for ig in active if not _divides(mh, allel[ig].lm)]
        active.append(ih)
        red.elems = [allel[i] for i in active]

    while queue:
        s, deg, _, _, pair, gen = heapq.heappop(queue)
        if pair is not None:
            if pair not in pairs:
                continue
            pairs.discard(pair)
            stats.pairs += 1
            if stats.pairs > budget.max_pairs:
                raise BudgetExceeded(f"more than {budget.max_pairs} pairs")
            if deg > budget.max_degree:
                raise BudgetExceeded(f"pair degree {deg} exceeds cap {budget.max_degree}")
            i, j, l12 = pair
            poly = _spoly(allel[i], allel[j], l12, p)
        else:
            poly = gen
            if deg > budget.max_degree:
                raise BudgetExceeded(f"generator degree {deg} exceeds cap {budget.max_degree}")
        rem, s = red.reduce(poly, s)
        if not rem:
            stats.zero_reductions += 1
            continue
        lm, rem = _monic(rem, key, p)
        stats.max_degree = max(stats.max_degree, deg)
        if not any(lm):
            # unit ideal
            return [{lm: 1 if p is not None else rem[lm]}]
        allel.append(_Elem(lm, rem, s))
        update(len(allel) - 1)

    # inter-reduce the minimal basis
    basis = [allel[i] for i in active]
    basis.sort(key=lambda e: key(e.lm))
    out = []
    for idx, e in enumerate(basis):
        red.elems = basis[:idx] + basis[idx + 1:]
        tail = dict(e.poly)
        c = tail.pop(e.lm)
        rem, _ = red.reduce(tail, 0)
        rem[e.lm] = c
        out.append(rem)
    stats.size = len(out)
    return out


# --------------------------------------------------------------------------
# ideals
# --------------------------------------------------------------------------

class Ideal:
    """Ideal of a polynomial ring given by generators.

    ``weights`` declares a positive grading under which the generators are
    homogeneous (defaults to the standard grading).  Groebner bases are
    cached per monomial order.
    """

    def __init__(self, ring: PolyRing, gens: Iterable[Polynomial] = (), weights=None):
        gens = list(gens)
        for g in gens:
            if not isinstance(g, Polynomial) or g.ring != ring:
                raise AmbientMismatch("generator outside the ideal's ring")
        self.ring = ring
        self.gens = tuple(g for g in gens if g)
        self.weights = tuple(weights) if weights is not None else None
        self._gb: dict = {}

    @property
    def is_zero(self) -> bool:
        return not self.gens

    @property
    def is_homogeneous(self) -> bool:
        """Homogeneous in the declared grading; multihomogeneous in the blocks if a t-block exists."""
        if self.ring.has_block("t") and self.ring.has_block("x") and self.weights is None:
            return all(g.bidegree() is not None for g in self.gens)
        return all(g.is_homogeneous(self.weights) for g in self.gens)

    def groebner(self, order: MonomialOrder | None = None, budget: Budget | None = None) -> "GroebnerBasis":
        order = order or self.ring.order
        gb = self._gb.get(order)
        if gb is None:
            gb = self._gb[order] = GroebnerBasis.compute(self, order, budget)
        return gb

    def __contains__(self, poly: Polynomial) -> bool:
        return not normal_form(poly, self.groebner())

    def contains_ideal(self, other: "Ideal") -> bool:
        gb = self.groebner()
        return all(not gb.reduce(g) for g in other.gens)

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise AmbientMismatch("ideals live in different rings")
        w = self.weights if self.weights == other.weights else None
        return Ideal(self.ring, self.gens + other.gens, w)

    def map_to(self, ring: PolyRing) -> "Ideal":
        return Ideal(ring, [g.to_ring(ring) for g in self.gens])

    def dimension(self) -> int:
        return dimension(self)

    def height(self) -> int:
        return height(self)

    def initial_degree(self) -> int:
        return initial_degree(self)

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.gens)) or '0'})"


class GroebnerBasis:
    """Reduced, monic Groebner basis with cached invariants."""

    def __init__(self, ring: PolyRing, order: MonomialOrder, elements: list[Polynomial],
                 source: Ideal | None = None, stats: GBStats | None = None):
        self.ring = ring
        self.order = order
        self.elements = elements
        self.source = source
        self.stats = stats or GBStats(size=len(elements))
        self.leading = [e.lm(order) for e in elements]
        self._reducer = None
        self._dim = None

    @classmethod
    def compute(cls, ideal: Ideal, order: MonomialOrder | None = None,
                budget: Budget | None = None) -> "GroebnerBasis":
        ring = ideal.ring
        order = order or ring.order
        stats = GBStats()
        raw = groebner_dicts([g.terms_dict for g in ideal.gens], order, ring.field.p,
                             ideal.weights, budget, stats)
        return cls(ring, order, [Polynomial(ring, d) for d in raw], ideal, stats)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def is_zero(self) -> bool:
        return not self.elements

    @property
    def is_unit(self) -> bool:
        return any(not any(m) for m in self.leading)

    def reduce(self, poly: Polynomial) -> Polynomial:
        if poly.ring != self.ring:
            raise AmbientMismatch("polynomial outside the basis ring")
        if not poly or not self.elements:
            return poly
        if self._reducer is None:
            red = _Reducer(self.order, self.ring.field.p, None)
            red.elems = [_Elem(lm, e.terms_dict, 0) for lm, e in zip(self.leading, self.elements)]
            self._reducer = red
        rem, _ = self._reducer.reduce(dict(poly.terms_dict))
        return Polynomial(self.ring, rem)

    def contains(self, poly: Polynomial) -> bool:
        return not self.reduce(poly)

    def initial_ideal(self) -> list[tuple]:
        return list(self.leading)

    @property
    def dimension(self) -> int:
        if self._dim is None:
            self._dim = monomial_dimension(self.leading, self.ring.nvars)
        return self._dim

    @property
    def initial_degree(self) -> int:
        if not self.elements:
            raise ZeroIdealError("the zero ideal has no initial degree")
        return min(e.total_degree() for e in self.elements)

    def is_groebner(self) -> bool:
        """Check Buchberger's criterion directly: every S-polynomial reduces to zero."""
        p = self.ring.field.p
        els = [_Elem(lm, e.terms_dict, 0) for lm, e in zip(self.leading, self.elements)]
        for i in range(len(els)):
            for j in range(i + 1, len(els)):
                s = _spoly(els[i], els[j], _lcm(els[i].lm, els[j].lm), p)
                if self.reduce(Polynomial(self.ring, s)):
                    return False
        return True

    def is_reduced(self) -> bool:
        one = self.ring.field.one
        for i, e in enumerate(self.elements):
            if e.terms_dict[self.leading[i]] != one:
                return False
            for j, lm in enumerate(self.leading):
                if j != i and any(_divides(lm, m) for m in e.terms_dict):
                    return False
        return True

    def __repr__(self):
        return f"GroebnerBasis([{', '.join(map(str, self.elements))}], {self.order!r})"


# --------------------------------------------------------------------------
# operations
# --------------------------------------------------------------------------

def buchberger(ideal: Ideal, order: MonomialOrder | None = None,
               budget: Budget | None = None) -> GroebnerBasis:
    return ideal.groebner(order, budget)


def normal_form(poly: Polynomial, basis: GroebnerBasis) -> Polynomial:
    return basis.reduce(poly)


def canonical_basis(ideal: Ideal, budget: Budget | None = None) -> GroebnerBasis:
    return ideal.groebner(GREVLEX, budget)


def ideal_equal(a: Ideal, b: Ideal, budget: Budget | None = None) -> bool:
    """Equality of ideals by comparing reduced grevlex bases."""
    if a.ring.names != b.ring.names or a.ring.field != b.ring.field:
        raise AmbientMismatch("ideals live in different rings")
    if b.ring != a.ring:
        b = b.map_to(a.ring)
    ga, gb = canonical_basis(a, budget), canonical_basis(b, budget)
    return [e.terms_dict for e in ga] == [e.terms_dict for e in gb]


def subring_without(ring: PolyRing, names: Iterable[str]) -> PolyRing:
    drop = set(names)
    blocks = []
    for b in ring.blocks:
        kept = tuple(n for n in b.names if n not in drop)
        if kept:
            blocks.append(VariableBlock(kept, b.role))
    if not blocks:
        raise ValueError("cannot eliminate every variable")
    return PolyRing(ring.field, blocks)


def elimination_ring(ring: PolyRing, names: Sequence[str]) -> tuple[PolyRing, MonomialOrder]:
    """The ring with ``names`` moved into a leading block, and its elimination order."""
    names = [n for n in ring.names if n in set(names)]
    rest = subring_without(ring, names)
    lead = VariableBlock(tuple(names), "aux")
    elim_ring = PolyRing(ring.field, (lead,) + rest.blocks)
    order = MonomialOrder.elimination(len(names), rest.nvars)
    return PolyRing(ring.field, elim_ring.blocks, order), order


def eliminate(ideal: Ideal, block: VariableBlock | Iterable[str] | None,
              budget: Budget | None = None) -> Ideal:
    """Generators of ``ideal`` intersected with the subring free of ``block``.

    Variables of ``block`` absent from the ring are ignored; the result lives
    in the ring with the eliminated variables removed.
    """
    if block is None:
        names = []
    elif isinstance(block, VariableBlock):
        names = list(block.names)
    else:
        names = list(block)
    names = [n for n in names if n in ideal.ring.index]
    if not names:
        return ideal
    rest = subring_without(ideal.ring, names)
    elim_ring, order = elimination_ring(ideal.ring, names)
    moved = Ideal(elim_ring, [g.to_ring(elim_ring) for g in ideal.gens], _permute_weights(ideal, elim_ring))
    gb = moved.groebner(order, budget)
    k = len(names)
    kept = [e.to_ring(rest) for e, lm in zip(gb.elements, gb.leading) if not any(lm[:k])]
    out = Ideal(rest, kept, _permute_weights(ideal, rest))
    # the surviving elements are already the reduced grevlex basis of the result
    out._gb[GREVLEX] = GroebnerBasis(rest, GREVLEX, kept, out)
    return out


def _permute_weights(ideal: Ideal, ring: PolyRing):
    if ideal.weights is None:
        return None
    w = dict(zip(ideal.ring.names, ideal.weights))
    return tuple(w[n] for n in ring.names)


def monomial_dimension(leading: Sequence[tuple], nvars: int) -> int:
    """Krull dimension of k[x]/<monomials>: the largest set of variables containing no support.

    Returns -1 when a constant is among the monomials (unit ideal).
    """
    supports = set()
    for m in leading:
        s = frozenset(i for i, e in enumerate(m) if e)
        if not s:
            return -1
        supports.add(s)
    minimal = [s for s in supports if not any(t < s for t in supports)]
    minimal.sort(key=len)
    return nvars - _min_hitting_set(minimal, nvars)


def _min_hitting_set(edges: list[frozenset], nvars: int) -> int:
    best = [nvars]

    def search(chosen: frozenset, size: int):
        if size >= best[0]:
            return
        uncovered = None
        for e in edges:
            if not (e & chosen):
                if uncovered is None or len(e) < len(uncovered):
                    uncovered = e
                    if len(e) == 1:
                        break
        if uncovered is None:
            best[0] = size
            return
        for v in sorted(uncovered):
            search(chosen | {v}, size + 1)

    search(frozenset(), 0)
    return best[0]


def dimension(ideal: Ideal, budget: Budget | None = None) -> int:
    """Krull dimension of ring/ideal; the zero ideal gives the number of variables."""
    if ideal.is_zero:
        return ideal.ring.nvars
    return ideal.groebner(GREVLEX, budget).dimension


def height(ideal: Ideal, budget: Budget | None = None) -> int:
    return ideal.ring.nvars - dimension(ideal, budget)


def initial_degree(ideal: Ideal, budget: Budget | None = None) -> int:
    if ideal.is_zero:
        raise ZeroIdealError("the zero ideal has no initial degree")
    return ideal.groebner(GREVLEX, budget).initial_degree
