"""Exact arithmetic in the ordered value group: Q^k with lexicographic order.

Every metric value, coordinate and radius in this package is a ``LexScalar``:
a k-vector of exact rationals compared lexicographically.  The group is
divisible, so halving and rational rescaling are always exact.  No floats
appear anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

#: The scalar field acting on the value group (exact rationals).
FRational = Fraction

RationalLike = Union[int, Fraction, str]


class RankMismatchError(ValueError):
    """Two scalars of different lexicographic rank were combined."""


class LexScalar:
    """Element of Q^k ordered lexicographically.

    Comparison is tuple comparison on the coordinates, which is exactly the
    lexicographic order; addition is componentwise, so the order is
    translation invariant.
    """

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable[RationalLike]):
        self.coords = tuple(Fraction(c) for c in coords)
        if not self.coords:
            raise ValueError("lex rank must be at least 1")

    @classmethod
    def _raw(cls, coords: tuple) -> "LexScalar":
        # internal fast path: coords is already a tuple of Fractions
        obj = object.__new__(cls)
        obj.coords = coords
        return obj

    @classmethod
    def from_rational(cls, q: RationalLike, rank: int) -> "LexScalar":
        """Embed a rational into Q^k on the leading coordinate."""
        return cls((Fraction(q),) + (Fraction(0),) * (rank - 1))

    @classmethod
    def zero(cls, rank: int) -> "LexScalar":
        return cls((Fraction(0),) * rank)

    @classmethod
    def unit(cls, rank: int) -> "LexScalar":
        return cls.from_rational(1, rank)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def _check(self, other: "LexScalar") -> None:
        if len(self.coords) != len(other.coords):
            raise RankMismatchError(
                f"rank {len(self.coords)} vs rank {len(other.coords)}"
            )

    def __add__(self, other: "LexScalar") -> "LexScalar":
        self._check(other)
        return LexScalar._raw(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LexScalar") -> "LexScalar":
        self._check(other)
        return LexScalar._raw(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LexScalar":
        return LexScalar._raw(tuple(-a for a in self.coords))

    def __mul__(self, q: RationalLike) -> "LexScalar":
        q = Fraction(q)
        return LexScalar._raw(tuple(q * a for a in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, q: RationalLike) -> "LexScalar":
        q = Fraction(q)
        if q == 0:
            raise ZeroDivisionError("division of a lex scalar by zero")
        return LexScalar._raw(tuple(a / q for a in self.coords))

    def __abs__(self) -> "LexScalar":
        return -self if self.sign() < 0 else self

    def sign(self) -> int:
        for a in self.coords:
            if a > 0:
                return 1
            if a < 0:
                return -1
        return 0

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LexScalar) and self.coords == other.coords

    def __lt__(self, other: "LexScalar") -> bool:
        self._check(other)
        return self.coords < other.coords

    def __le__(self, other: "LexScalar") -> bool:
        self._check(other)
        return self.coords <= other.coords

    def __gt__(self, other: "LexScalar") -> bool:
        return not self <= other

    def __ge__(self, other: "LexScalar") -> bool:
        return not self < other

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return "LexScalar(%s)" % (", ".join(str(c) for c in self.coords))

    # -- serialization: arrays of "p/q" strings in atlas files --

    def to_strings(self) -> list:
        return [f"{c.numerator}/{c.denominator}" for c in self.coords]

    @classmethod
    def from_strings(cls, items: Sequence[RationalLike]) -> "LexScalar":
        return cls(Fraction(str(s)) for s in items)


def compare(a: LexScalar, b: LexScalar) -> int:
    """Lexicographic comparison: -1, 0 or 1."""
    a._check(b)
    if a.coords < b.coords:
        return -1
    if a.coords > b.coords:
        return 1
    return 0


def scale(q: RationalLike, a: LexScalar) -> LexScalar:
    """Exact action of the rational scalar field on the value group."""
    return a * Fraction(q)
