"""Multivariate polynomials over exact fields.

A :class:`PolyRing` is a coefficient field together with an ordered list of
named variable blocks (``x``, ``t``, ``aux``) and a default monomial order.
Polynomials store a dict ``exponent tuple -> nonzero coefficient``; exponent
tuples are dense, one slot per ring variable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .field import QQ, CoeffField

ROLES = ("x", "t", "aux")


class AmbientMismatch(ValueError):
    """Operands live in different rings."""


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int, line: int | None = None):
        self.text = text
        self.pos = pos
        self.line = line
        where = f"line {line}, column {pos + 1}" if line is not None else f"position {pos}"
        super().__init__(f"{message} at {where}: {text!r}")


@dataclass(frozen=True)
class VariableBlock:
    names: tuple[str, ...]
    role: str = "x"

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if self.role not in ROLES:
            raise ValueError(f"unknown block role {self.role!r}")
        if not self.names:
            raise ValueError("empty variable block")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        for name in self.names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise ValueError(f"bad variable name {name!r}")

    def __len__(self):
        return len(self.names)

    @classmethod
    def indexed(cls, stem: str, count: int, role: str = "x", start: int = 1) -> "VariableBlock":
        return cls(tuple(f"{stem}{i}" for i in range(start, start + count)), role)


# --------------------------------------------------------------------------
# monomial orders
# --------------------------------------------------------------------------

def _grevlex_key(m):
    return (-sum(m),) + m[::-1]


def _lex_key(m):
    return tuple(-e for e in m)


_INNER = {"grevlex": _grevlex_key, "lex": _lex_key}


class MonomialOrder:
    """Monomial order on dense exponent tuples.

    ``key(m)`` returns a tuple that is *smaller* for *larger* monomials, so
    ``sorted(monos, key=order.key)`` lists monomials in decreasing order and a
    min-heap keyed this way pops the leading monomial first.

    A block order is given by ``blocks = ((size, inner), ...)``; monomials are
    compared on the first block with its inner order, ties broken on the next
    block, and so on.  With a degree-compatible inner order on the first
    block, any monomial involving a first-block variable beats every monomial
    free of them, which is what elimination needs.
    """

    __slots__ = ("kind", "blocks", "_key", "_cache")

    def __init__(self, kind: str = "grevlex", blocks: Sequence[tuple[int, str]] | None = None):
        if kind in _INNER:
            if blocks is not None:
                raise ValueError("blocks only apply to block orders")
            self._key = _INNER[kind]
        elif kind == "block":
            if not blocks or len(blocks) < 2:
                raise ValueError("a block order needs at least two blocks")
            blocks = tuple((int(size), inner) for size, inner in blocks)
            for size, inner in blocks:
                if size < 1 or inner not in _INNER:
                    raise ValueError(f"bad block ({size}, {inner!r})")
            self._key = _make_block_key(blocks)
        else:
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.blocks = blocks
        self._cache = {}

    @classmethod
    def grevlex(cls):
        return cls("grevlex")

    @classmethod
    def lex(cls):
        return cls("lex")

    @classmethod
    def elimination(cls, eliminated: int, kept: int, inner: str = "grevlex",
                    kept_inner: str = "grevlex") -> "MonomialOrder":
        return cls("block", ((eliminated, inner), (kept, kept_inner)))

    def key(self, m):
        cache = self._cache
        k = cache.get(m)
        if k is None:
            k = cache[m] = self._key(m)
        return k

    def greater(self, a, b) -> bool:
        return self.key(a) < self.key(b)

    def nvars(self) -> int | None:
        if self.blocks is None:
            return None
        return sum(size for size, _ in self.blocks)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.blocks) == (other.kind, other.blocks)

    def __hash__(self):
        return hash((self.kind, self.blocks))

    def __repr__(self):
        if self.blocks is None:
            return f"MonomialOrder({self.kind!r})"
        return f"MonomialOrder('block', {self.blocks!r})"

    def __getstate__(self):
        return (self.kind, self.blocks)

    def __setstate__(self, state):
        self.__init__(*state)


def _make_block_key(blocks):
    spans = []
    start = 0
    for size, inner in blocks:
        spans.append((start, start + size, _INNER[inner]))
        start += size

    def key(m):
        out = ()
        for a, b, f in spans:
            out += f(m[a:b])
        return out

    return key


GREVLEX = MonomialOrder.grevlex()
LEX = MonomialOrder.lex()


# --------------------------------------------------------------------------
# rings
# --------------------------------------------------------------------------

class PolyRing:
    """k[blocks...] with a default monomial order.  Rings compare by value."""

    def __init__(self, field: CoeffField, blocks: Sequence[VariableBlock],
                 order: MonomialOrder | None = None):
        if isinstance(blocks, VariableBlock):
            blocks = [blocks]
        self.field = field
        self.blocks = tuple(blocks)
        self.names = tuple(n for b in self.blocks for n in b.names)
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"variable names repeat across blocks: {self.names}")
        self.nvars = len(self.names)
        self.index = {n: i for i, n in enumerate(self.names)}
        self.order = order or GREVLEX
        if self.order.nvars() not in (None, self.nvars):
            raise ValueError("block order does not match the number of variables")
        self._zero_mono = (0,) * self.nvars

    @classmethod
    def from_names(cls, field: CoeffField, names: Iterable[str] | str, role: str = "x",
                   order: MonomialOrder | None = None) -> "PolyRing":
        if isinstance(names, str):
            names = names.replace(",", " ").split()
        return cls(field, [VariableBlock(tuple(names), role)], order)

    def _ident(self):
        return (self.field, self.blocks, self.order)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self._ident() == other._ident()

    def __hash__(self):
        return hash(self._ident())

    def __repr__(self):
        return f"PolyRing({self.field!r}, {list(self.names)}, {self.order!r})"

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.field, self.blocks, order)

    def block(self, role: str) -> VariableBlock:
        for b in self.blocks:
            if b.role == role:
                return b
        raise KeyError(f"no {role!r} block in {self!r}")

    def has_block(self, role: str) -> bool:
        return any(b.role == role for b in self.blocks)

    def block_range(self, block: VariableBlock | str) -> range:
        if isinstance(block, str):
            block = self.block(block)
        start = 0
        for b in self.blocks:
            if b == block:
                return range(start, start + len(b))
            start += len(b)
        raise KeyError(f"{block!r} is not a block of {self!r}")

    # element construction ------------------------------------------------

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {self._zero_mono: c} if c else {})

    def var(self, name: str) -> "Polynomial":
        try:
            i = self.index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r} in {self!r}") from None
        m = [0] * self.nvars
        m[i] = 1
        return Polynomial(self, {tuple(m): self.field.one})

    @property
    def gens(self) -> list["Polynomial"]:
        return [self.var(n) for n in self.names]

    def block_gens(self, role: str) -> list["Polynomial"]:
        return [self.var(n) for n in self.block(role).names]

    def monomial(self, exps, coeff=1) -> "Polynomial":
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError("exponent vector has the wrong length")
        c = self.field(coeff)
        return Polynomial(self, {exps: c} if c else {})

    def from_terms(self, terms: Mapping) -> "Polynomial":
        f = self.field
        out = {}
        for m, c in terms.items():
            c = f(c)
            if c:
                out[tuple(m)] = c
        return Polynomial(self, out)

    def linear_form(self, coeffs: Mapping[str, object]) -> "Polynomial":
        out = {}
        f = self.field
        for name, c in coeffs.items():
            c = f(c)
            if c:
                m = [0] * self.nvars
                m[self.index[name]] = 1
                out[tuple(m)] = c
        return Polynomial(self, out)

    def parse(self, text: str, line: int | None = None) -> "Polynomial":
        return _Parser(self, text, line).parse()

    def __call__(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            return value.to_ring(self)
        if isinstance(value, str):
            return self.parse(value)
        return self.const(value)


# --------------------------------------------------------------------------
# polynomials
# --------------------------------------------------------------------------

def _mono_mul(a, b):
    return tuple([x + y for x, y in zip(a, b)])


class Polynomial:
    """Immutable polynomial; ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "_terms", "_hash", "_bideg")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self._terms = terms
        self._hash = None
        self._bideg = False

    # basic access ----------------------------------------------------------

    @property
    def terms_dict(self) -> dict:
        return self._terms

    def terms(self, order: MonomialOrder | None = None) -> list:
        key = (order or self.ring.order).key
        return sorted(self._terms.items(), key=lambda mc: key(mc[0]))

    def monomials(self, order: MonomialOrder | None = None) -> list:
        return [m for m, _ in self.terms(order)]

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def lm(self, order: MonomialOrder | None = None):
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        key = (order or self.ring.order).key
        return min(self._terms, key=key)

    def lc(self, order: MonomialOrder | None = None):
        return self._terms[self.lm(order)]

    def coefficient(self, mono) -> object:
        return self._terms.get(tuple(mono), self.ring.field.zero)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(m) for m in self._terms)

    def weighted_degree(self, weights) -> int:
        if not self._terms:
            return -1
        return max(sum(w * e for w, e in zip(weights, m)) for m in self._terms)

    def degree_in(self, block: VariableBlock | str) -> int:
        """Maximal degree in the variables of one block (-1 for zero)."""
        r = self.ring.block_range(block)
        if not self._terms:
            return -1
        return max(sum(m[i] for i in r) for m in self._terms)

    def is_homogeneous(self, weights=None) -> bool:
        if not self._terms:
            return True
        if weights is None:
            degs = {sum(m) for m in self._terms}
        else:
            degs = {sum(w * e for w, e in zip(weights, m)) for m in self._terms}
        return len(degs) == 1

    def is_block_homogeneous(self) -> bool:
        """Homogeneous separately in every variable block."""
        return self.multidegree() is not None or not self._terms

    def multidegree(self):
        """Tuple of per-block degrees if every term shares it, else None."""
        if not self._terms:
            return None
        ranges = [self.ring.block_range(b) for b in self.ring.blocks]
        degs = {tuple(sum(m[i] for i in r) for r in ranges) for m in self._terms}
        return degs.pop() if len(degs) == 1 else None

    def bidegree(self):
        """(deg in x, deg in t) when bihomogeneous, else None.  Cached."""
        if self._bideg is False:
            ring = self.ring
            if not self._terms or not (ring.has_block("x") and ring.has_block("t")):
                self._bideg = None
            else:
                rx, rt = ring.block_range("x"), ring.block_range("t")
                degs = {(sum(m[i] for i in rx), sum(m[i] for i in rt)) for m in self._terms}
                self._bideg = degs.pop() if len(degs) == 1 else None
        return self._bideg

    def variables(self) -> list[str]:
        used = [False] * self.ring.nvars
        for m in self._terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return [n for n, u in zip(self.ring.names, used) if u]

    def is_linear_in(self, names: Iterable[str]) -> bool:
        """Zero or homogeneous of degree one with support inside ``names``."""
        idx = {self.ring.index[n] for n in names}
        for m in self._terms:
            nz = [i for i, e in enumerate(m) if e]
            if len(nz) != 1 or m[nz[0]] != 1 or nz[0] not in idx:
                return False
        return True

    def linear_coefficients(self) -> dict[str, object]:
        """Coefficients of a linear form, keyed by variable name."""
        out = {}
        for m, c in self._terms.items():
            nz = [i for i, e in enumerate(m) if e]
            if len(nz) != 1 or m[nz[0]] != 1:
                raise ValueError(f"{self} is not a linear form")
            out[self.ring.names[nz[0]]] = c
        return out

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise AmbientMismatch(f"{self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.field.p
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c if p is None else (v + c) % p
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.field.neg
        return Polynomial(self.ring, {m: neg(c) for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.field.p
        out = {}
        get = out.get
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple([a + b for a, b in zip(m1, m2)])
                out[m] = get(m, 0) + c1 * c2
        if p is None:
            out = {m: c for m, c in out.items() if c}
        else:
            out = {m: c % p for m, c in out.items() if c % p}
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        f = self.ring.field
        c = f(c)
        if not c:
            return self.ring.zero
        return Polynomial(self.ring, {m: f.mul(v, c) for m, v in self._terms.items()})

    def monic(self, order: MonomialOrder | None = None) -> "Polynomial":
        if not self._terms:
            return self
        return self.scale(self.ring.field.inv(self.lc(order)))

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative int")
        result = self.ring.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == self.ring.const(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # ring maps --------------------------------------------------------------

    def to_ring(self, ring: PolyRing) -> "Polynomial":
        """Re-express in another ring that contains every used variable (matched by name)."""
        if ring == self.ring:
            return self
        if ring.field != self.ring.field:
            raise AmbientMismatch("coefficient fields differ")
        perm = []
        for i, name in enumerate(self.ring.names):
            j = ring.index.get(name)
            perm.append((i, j))
        out = {}
        n = ring.nvars
        for m, c in self._terms.items():
            new = [0] * n
            for i, j in perm:
                if m[i]:
                    if j is None:
                        raise AmbientMismatch(
                            f"variable {self.ring.names[i]!r} does not exist in {ring!r}")
                    new[j] = m[i]
            out[tuple(new)] = c
        return Polynomial(ring, out)

    def substitute(self, mapping: Mapping, target: PolyRing | None = None) -> "Polynomial":
        """Ring homomorphism sending variables to polynomials of ``target``.

        ``mapping`` keys are variable names (or generator polynomials).  Unmapped
        variables are sent to the variable of the same name in ``target``.
        """
        target = target or self.ring
        if target.field != self.ring.field:
            raise AmbientMismatch("coefficient fields differ")
        images = []
        keyed = {}
        for k, v in mapping.items():
            if isinstance(k, Polynomial):
                names = k.variables()
                if len(k) != 1 or len(names) != 1 or k.total_degree() != 1:
                    raise ValueError(f"{k} is not a variable")
                k = names[0]
            if k not in self.ring.index:
                raise KeyError(f"unknown variable {k!r}")
            if isinstance(v, Polynomial):
                if v.ring != target:
                    raise AmbientMismatch(f"image of {k} does not live in the target ring")
            else:
                v = target(v)
            keyed[k] = v
        for name in self.ring.names:
            if name in keyed:
                images.append(keyed[name])
            elif name in target.index:
                images.append(target.var(name))
            else:
                images.append(None)
        powers = [dict() for _ in images]
        result = target.zero
        for m, c in self._terms.items():
            term = target.const(c)
            for i, e in enumerate(m):
                if not e:
                    continue
                img = images[i]
                if img is None:
                    raise AmbientMismatch(
                        f"no image for variable {self.ring.names[i]!r} in the target ring")
                pw = powers[i].get(e)
                if pw is None:
                    pw = powers[i][e] = img ** e
                term = term * pw
            result = result + term
        return result

    def evaluate(self, point: Mapping[str, object] | Sequence):
        """Value at a point given as a full coordinate sequence or a name map."""
        f = self.ring.field
        if isinstance(point, Mapping):
            vals = [f(point[n]) for n in self.ring.names]
        else:
            vals = [f(v) for v in point]
            if len(vals) != self.ring.nvars:
                raise ValueError("point has the wrong number of coordinates")
        p = f.p
        total = f.zero
        for m, c in self._terms.items():
            v = c
            for x, e in zip(vals, m):
                if e:
                    v = v * (x ** e if p is None else pow(x, e, p))
            total = total + v
        return total if p is None else total % p

    # printing -------------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        f = self.ring.field
        names = self.ring.names
        pieces = []
        for m, c in self.terms():
            if f.p is not None and c > f.p // 2:
                sign, mag = "-", f.p - c
            elif f.p is None and c < 0:
                sign, mag = "-", -c
            else:
                sign, mag = "+", c
            factors = []
            for n, e in zip(names, m):
                if e == 1:
                    factors.append(n)
                elif e:
                    factors.append(f"{n}^{e}")
            mono = "*".join(factors)
            cs = f.to_str(mag)
            if not mono:
                body = cs
            elif cs == "1":
                body = mono
            else:
                body = f"{cs}*{mono}"
            pieces.append((sign, body))
        out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Polynomial({self})"


# --------------------------------------------------------------------------
# parsing
# --------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*^()]))")


class _Parser:
    def __init__(self, ring: PolyRing, text: str, line: int | None):
        self.ring = ring
        self.text = text
        self.line = line
        self.toks = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            mt = _TOKEN.match(text, pos)
            if not mt:
                self.error("unexpected character", len(text) - len(text[pos:].lstrip()))
            start = mt.start(mt.lastindex)
            if mt.group(1):
                self.toks.append(("num", int(mt.group(1)), start))
            elif mt.group(2):
                self.toks.append(("name", mt.group(2), start))
            else:
                op = mt.group(3)
                self.toks.append(("op", "^" if op == "**" else op, start))
            pos = mt.end()
        self.i = 0

    def error(self, msg, pos=None):
        if pos is None:
            pos = self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)
        raise ParseError(msg, self.text, pos, self.line)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if not self.toks:
            self.error("empty expression", 0)
        p = self.expr()
        if self.i < len(self.toks):
            self.error("unexpected token")
        return p

    def expr(self):
        kind, val, _ = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self):
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.factor()
            else:
                return acc

    def factor(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, e, pos = self.take()
            if kind != "num":
                self.error("expected integer exponent", pos)
            base = base ** e
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return self.ring.const(val)
        if kind == "name":
            if val not in self.ring.index:
                self.error(f"unknown variable {val!r}", pos)
            return self.ring.var(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            kind, val, pos = self.take()
            if (kind, val) != ("op", ")"):
                self.error("expected ')'", pos)
            return inner
        if kind == "op" and val == "-":
            return -self.factor()
        self.error("unexpected token" if kind else "unexpected end of input", pos)
