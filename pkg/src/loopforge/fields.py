"""Exact scalar arithmetic over prime fields GF(p) and the rationals.

Scalars are plain Python values in canonical form: residues 0..p-1 (ints)
for GF(p), reduced ``fractions.Fraction`` for the rationals.  Each field
object also provides an array layer (``vector``/``zeros``/``canon``) used by
the linear-algebra module; GF(p) vectors are int64 numpy arrays, rational
vectors are object arrays of Fractions.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import EnumerationUnsupported


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """GF(p) for a prime p, residues stored as machine integers."""

    __slots__ = ("p",)

    dtype = np.int64
    finite = True

    def __init__(self, p: int):
        p = int(p)
        if p < 2 or p > 2**31:
            raise ValueError(f"prime field modulus out of range: {p}")
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    # -- scalar layer ------------------------------------------------
    @property
    def char(self) -> int:
        return self.p

    @property
    def order(self) -> int:
        return self.p

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def from_int(self, k) -> int:
        return int(k) % self.p

    def add(self, a, b) -> int:
        return (a + b) % self.p

    def sub(self, a, b) -> int:
        return (a - b) % self.p

    def neg(self, a) -> int:
        return (-a) % self.p

    def mul(self, a, b) -> int:
        return (a * b) % self.p

    def inv(self, a) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError(f"inverse of 0 in GF({self.p})")
        return pow(a, -1, self.p)

    def div(self, a, b) -> int:
        return self.mul(a, self.inv(b))

    def elements(self):
        return range(self.p)

    # -- array layer ---------------------------------------------------
    def vector(self, coords) -> np.ndarray:
        return np.asarray(coords, dtype=np.int64) % self.p

    def zeros(self, n: int) -> np.ndarray:
        return np.zeros(n, dtype=np.int64)

    def canon(self, arr: np.ndarray) -> np.ndarray:
        return arr % self.p

    @property
    def spec(self) -> str:
        return f"gf:{self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("gf", self.p))

    def __repr__(self):
        return f"GF({self.p})"


class RationalField:
    """The rational numbers with exact Fraction arithmetic."""

    __slots__ = ()

    dtype = object
    finite = False

    char = 0
    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, k) -> Fraction:
        return Fraction(k)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / Fraction(b)

    def elements(self):
        raise EnumerationUnsupported("the rationals are not enumerable")

    def vector(self, coords) -> np.ndarray:
        out = np.empty(len(coords), dtype=object)
        for i, c in enumerate(coords):
            out[i] = c if isinstance(c, Fraction) else Fraction(c)
        return out

    def zeros(self, n: int) -> np.ndarray:
        out = np.empty(n, dtype=object)
        out[:] = Fraction(0)
        return out

    def canon(self, arr: np.ndarray) -> np.ndarray:
        return arr

    @property
    def spec(self) -> str:
        return "q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rationals")

    def __repr__(self):
        return "Q"


QQ = RationalField()


def field_from_spec(spec: str):
    """Parse a field spec string: ``gf:p`` for GF(p), ``q`` for the rationals."""
    s = spec.strip().lower()
    if s in ("q", "qq", "rationals"):
        return QQ
    if s.startswith("gf:"):
        return PrimeField(int(s[3:]))
    raise ValueError(f"unrecognised field spec {spec!r} (expected 'gf:p' or 'q')")
