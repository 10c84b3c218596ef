"""Exact coefficient fields: the rationals and prime fields F_p."""

from __future__ import annotations

from fractions import Fraction

DEFAULT_PRIME = 32003


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class CoeffField:
    """A coefficient field, either ``QQ`` (``p is None``) or ``GF(p)``.

    Elements of ``QQ`` are :class:`fractions.Fraction` values, elements of
    ``GF(p)`` are ints in ``range(p)``.  Fields compare by value.
    """

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None:
            p = int(p)
            if not 2 <= p < 2**31 or not is_prime(p):
                raise ValueError(f"modulus {p} is not a prime below 2^31")
        self.p = p

    @classmethod
    def rationals(cls) -> "CoeffField":
        return cls(None)

    @classmethod
    def prime(cls, p: int = DEFAULT_PRIME) -> "CoeffField":
        return cls(p)

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __eq__(self, other):
        return isinstance(other, CoeffField) and other.p == self.p

    def __hash__(self):
        return hash(("CoeffField", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    @property
    def spec(self) -> str:
        """Textual form used by matrix files and reports."""
        return "qq" if self.p is None else f"fp {self.p}"

    @classmethod
    def from_spec(cls, text: str) -> "CoeffField":
        parts = text.lower().split()
        if parts in (["qq"], ["q"], ["rationals"]):
            return cls(None)
        if len(parts) == 2 and parts[0] in ("fp", "gf"):
            return cls(int(parts[1]))
        if len(parts) == 1 and parts[0].startswith(("fp", "gf")) and parts[0][2:].isdigit():
            return cls(int(parts[0][2:]))
        raise ValueError(f"unknown field specification {text!r}")

    # element arithmetic ------------------------------------------------

    def __call__(self, value):
        """Coerce an int, Fraction or string into the field."""
        if self.p is None:
            return Fraction(value)
        if isinstance(value, Fraction):
            return value.numerator * self.inv(value.denominator % self.p) % self.p
        if isinstance(value, str):
            value = Fraction(value)
            return self(value)
        return int(value) % self.p

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else (a * b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("division by zero in " + repr(self))
        if self.p is None:
            return 1 / Fraction(a)
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def random_element(self, rng, nonzero: bool = False, bound: int = 10):
        """Uniform element of F_p, or a small integer in [-bound, bound] over QQ."""
        if self.p is None:
            while True:
                c = Fraction(rng.randint(-bound, bound))
                if c or not nonzero:
                    return c
        lo = 1 if nonzero else 0
        return rng.randrange(lo, self.p)

    def elements(self):
        """Iterate over all elements (prime fields only)."""
        if self.p is None:
            raise ValueError("QQ is infinite")
        return range(self.p)

    def to_str(self, c) -> str:
        if self.p is not None:
            return str(c)
        c = Fraction(c)
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


QQ = CoeffField(None)


def GF(p: int = DEFAULT_PRIME) -> CoeffField:
    return CoeffField(p)
