"""Exact arithmetic in PSL(2,Z).

Elements are stored as the sign-canonical integer matrix: of the two
matrices ``M`` and ``-M`` representing an element, we keep the one whose
first nonzero entry (reading ``a, b, c, d``) is positive.  Entries are
checked against the signed 64-bit range after every product.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Tuple, Union

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

Matrix2 = Tuple[int, int, int, int]


class DeterminantError(ValueError):
    """Raised for matrices that are not in SL(2,Z)."""


def _check_width(entries):
    for x in entries:
        # -x must also fit, so INT64_MIN is excluded
        if not (-INT64_MAX <= x <= INT64_MAX):
            raise OverflowError(f"matrix entry {x} exceeds the 64-bit range")


@dataclass(frozen=True, slots=True)
class GroupElement:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        m = (self.a, self.b, self.c, self.d)
        _check_width(m)
        if self.a * self.d - self.b * self.c != 1:
            raise DeterminantError(f"determinant of {m} is not 1")
        if _sign_of_first_nonzero(m) < 0:
            raise ValueError(f"{m} is not sign-canonical; use canonicalize()")

    @property
    def matrix(self) -> Matrix2:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return mul(self, other)

    def inverse(self) -> "GroupElement":
        return canonicalize((self.d, -self.b, -self.c, self.a))

    def __str__(self):
        return "matrix({},{},{},{})".format(*self.matrix)


def _sign_of_first_nonzero(m):
    for x in m:
        if x:
            return 1 if x > 0 else -1
    return 0


def canonicalize(m: Union[Matrix2, GroupElement]) -> GroupElement:
    """Return the sign-canonical representative of ``±m``.

    >>> canonicalize((0, -1, 1, 0))
    GroupElement(a=0, b=1, c=-1, d=0)
    """
    if isinstance(m, GroupElement):
        return m
    a, b, c, d = (int(x) for x in m)
    _check_width((a, b, c, d))
    if a * d - b * c != 1:
        raise DeterminantError(f"determinant of {(a, b, c, d)} is not 1")
    if _sign_of_first_nonzero((a, b, c, d)) < 0:
        a, b, c, d = -a, -b, -c, -d
    return GroupElement(a, b, c, d)


def mul(g: GroupElement, h: GroupElement) -> GroupElement:
    a, b, c, d = g.a, g.b, g.c, g.d
    e, f, k, l = h.a, h.b, h.c, h.d
    # Python ints never wrap; the width check turns overflow into an error
    return canonicalize((a * e + b * k, a * f + b * l, c * e + d * k, c * f + d * l))


IDENTITY = GroupElement(1, 0, 0, 1)


class Letter(enum.Enum):
    """Letters of the symmetric alphabet {r, u, ū}; r is its own inverse."""

    R = "r"
    U = "u"
    UINV = "U"

    @property
    def inverse(self) -> "Letter":
        return _INVERSES[self]

    def __repr__(self):
        return f"Letter.{self.name}"


_INVERSES = {Letter.R: Letter.R, Letter.U: Letter.UINV, Letter.UINV: Letter.U}

# BFS and export order
LETTERS = (Letter.R, Letter.U, Letter.UINV)

_GENERATORS = {
    Letter.R: canonicalize((0, 1, -1, 0)),
    Letter.U: canonicalize((1, 1, 0, 1)),
    Letter.UINV: canonicalize((1, -1, 0, 1)),
}


def generator(s: Letter) -> GroupElement:
    return _GENERATORS[s]


def inverse(s: Letter) -> Letter:
    return s.inverse
