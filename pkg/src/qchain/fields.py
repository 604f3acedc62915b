"""Exact field arithmetic for F_p (p prime) and the rationals.

Elements of F_p are Python ints in the canonical range [0, p); rational
elements are `fractions.Fraction`. All arithmetic is exact, floats are
never used anywhere in this package.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Union

Elem = Union[int, Fraction]

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """A field of scalars: either F_p for a prime p, or the rationals.

    `char` is p for F_p and 0 for the rationals.
    """

    __slots__ = ("char",)

    def __init__(self, char: int):
        if char != 0 and not _is_prime(char):
            raise ValueError("field characteristic must be 0 or a prime, got %r" % (char,))
        self.char = char

    # -- constructors ---------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.char == 0

    def of_int(self, n: int) -> Elem:
        if self.char == 0:
            return Fraction(n)
        return n % self.char

    def zero(self) -> Elem:
        return self.of_int(0)

    def one(self) -> Elem:
        return self.of_int(1)

    # -- arithmetic ------------------------------------------------------

    def add(self, a: Elem, b: Elem) -> Elem:
        if self.char == 0:
            return a + b
        return (a + b) % self.char

    def sub(self, a: Elem, b: Elem) -> Elem:
        if self.char == 0:
            return a - b
        return (a - b) % self.char

    def neg(self, a: Elem) -> Elem:
        if self.char == 0:
            return -a
        return (-a) % self.char

    def mul(self, a: Elem, b: Elem) -> Elem:
        if self.char == 0:
            return a * b
        return (a * b) % self.char

    def inv(self, a: Elem) -> Elem:
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        if self.char == 0:
            return 1 / a
        return pow(a, self.char - 2, self.char)

    def div(self, a: Elem, b: Elem) -> Elem:
        return self.mul(a, self.inv(b))

    def is_zero(self, a: Elem) -> bool:
        return a == 0

    def eq(self, a: Elem, b: Elem) -> bool:
        return a == b

    # -- element parsing / printing --------------------------------------

    def parse_elem(self, text: str) -> Elem:
        """Parse an exact scalar: an integer, or 'num/den' over the rationals."""
        text = text.strip()
        if "/" in text:
            if self.char != 0:
                raise ValueError("fraction %r is only valid over the rationals" % (text,))
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        return self.of_int(int(text))

    def format_elem(self, a: Elem) -> str:
        if self.char == 0:
            f = Fraction(a)
            if f.denominator == 1:
                return str(f.numerator)
            return "%d/%d" % (f.numerator, f.denominator)
        return str(a % self.char)

    def elements(self):
        """Iterate all field elements (finite fields only)."""
        if self.char == 0:
            raise ValueError("cannot enumerate the rationals")
        return range(self.char)

    # -- misc -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.char == self.char

    def __hash__(self) -> int:
        return hash(("Field", self.char))

    def __repr__(self) -> str:
        return "QQ" if self.char == 0 else "F%d" % self.char

    @property
    def name(self) -> str:
        return "Q" if self.char == 0 else "F%d" % self.char


QQ = Field(0)
F2 = Field(2)
F3 = Field(3)
F5 = Field(5)


def field_by_name(name: str) -> Field:
    """Resolve 'Q' or 'Fp' / 'p' to a Field instance."""
    name = name.strip()
    if name in ("Q", "QQ", "0"):
        return QQ
    if name.startswith("F"):
        name = name[1:]
    char = int(name)
    for known in (F2, F3, F5):
        if known.char == char:
            return known
    return Field(char)
