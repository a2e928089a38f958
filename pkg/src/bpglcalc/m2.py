"""Exact arithmetic in the bigraded ground ring M2 = F2[rho, tau].

An M2Element is a frozenset of exponent pairs (i, j), one per monomial
rho^i tau^j appearing with coefficient 1; addition is symmetric difference
(characteristic 2).  The empty set is zero.  Bidegrees are pairs
(topological degree t, motivic weight w) with |rho| = (-1, -1) and
|tau| = (0, -1), so the monomial rho^i tau^j sits in (-i, -i - j).

Homogeneity is not enforced at construction: intermediate sums built
termwise may mix bidegrees, and ``is_homogeneous`` is a separate predicate.

Rendering follows the shared grammar: ``rho^i tau^j`` terms joined by
`` + ``, exponent 1 elided, exponent 0 factors elided, ``1`` for the empty
monomial and ``0`` for the empty sum.  Term order is ascending rho-exponent,
then ascending tau-exponent, so output is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import DomainError, NotDivisible


@dataclass(frozen=True)
class Bidegree:
    """A (topological degree, motivic weight) pair."""

    t: int
    w: int

    def __add__(self, other: "Bidegree") -> "Bidegree":
        return Bidegree(self.t + other.t, self.w + other.w)

    def __mul__(self, k: int) -> "Bidegree":
        return Bidegree(self.t * k, self.w * k)

    __rmul__ = __mul__

    def shear(self) -> tuple[int, int]:
        """The quilt shear (t, w) -> (t, w - t)."""
        return (self.t, self.w - self.t)

    @staticmethod
    def unshear(x: int, y: int) -> "Bidegree":
        """Inverse of ``shear``: (x, y) -> (x, y + x)."""
        return Bidegree(x, y + x)


RHO_DEGREE = Bidegree(-1, -1)
TAU_DEGREE = Bidegree(0, -1)


class M2Element:
    """An exact polynomial in rho and tau over F2."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[int, int]] = ()):
        clean = set()
        for i, j in terms:
            if i < 0 or j < 0:
                raise DomainError(f"negative exponent in monomial rho^{i} tau^{j}")
            pair = (i, j)
            if pair in clean:
                clean.discard(pair)
            else:
                clean.add(pair)
        object.__setattr__(self, "terms", frozenset(clean))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, M2Element) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.terms))

    def __add__(self, other: "M2Element") -> "M2Element":
        return M2Element.from_frozenset(self.terms ^ other.terms)

    __sub__ = __add__  # characteristic 2

    def __mul__(self, other: "M2Element") -> "M2Element":
        acc: set[tuple[int, int]] = set()
        for i1, j1 in self.terms:
            for i2, j2 in other.terms:
                pair = (i1 + i2, j1 + j2)
                acc.symmetric_difference_update({pair})
        return M2Element.from_frozenset(frozenset(acc))

    @classmethod
    def from_frozenset(cls, terms: frozenset) -> "M2Element":
        el = cls.__new__(cls)
        object.__setattr__(el, "terms", terms)
        return el

    def is_homogeneous(self) -> bool:
        degs = {monomial_bidegree(i, j) for i, j in self.terms}
        return len(degs) <= 1

    def bidegree(self) -> Bidegree:
        degs = {monomial_bidegree(i, j) for i, j in self.terms}
        if len(degs) != 1:
            raise DomainError("bidegree of zero or inhomogeneous element")
        return degs.pop()

    def __repr__(self) -> str:
        return f"M2Element({render_m2(self)!r})"

    def __str__(self) -> str:
        return render_m2(self)


def monomial_bidegree(i: int, j: int) -> Bidegree:
    return Bidegree(-i, -i - j)


ZERO = M2Element()
ONE = M2Element([(0, 0)])


def monomial(i: int, j: int) -> M2Element:
    return M2Element([(i, j)])


def rho(e: int = 1) -> M2Element:
    return monomial(e, 0)


def tau(e: int = 1) -> M2Element:
    return monomial(0, e)


def rho_exact_divide(a: M2Element, e: int) -> M2Element:
    """The unique q with rho^e * q = a; every term needs rho-exponent >= e."""
    if e < 0:
        raise DomainError("negative rho-power")
    bad = [(i, j) for i, j in a.terms if i < e]
    if bad:
        raise NotDivisible(f"term rho^{bad[0][0]} tau^{bad[0][1]} not divisible by rho^{e}")
    return M2Element.from_frozenset(frozenset((i - e, j) for i, j in a.terms))


def nu2(k: int) -> int:
    """2-adic valuation of a positive integer."""
    if k <= 0:
        raise DomainError(f"2-adic valuation needs k >= 1, got {k}")
    return (k & -k).bit_length() - 1


def mk(k: int) -> int:
    """The torsion exponent 2^(nu2(k)+1) - 1."""
    return 2 ** (nu2(k) + 1) - 1


def binom_odd(n: int, c: int) -> bool:
    """Whether binom(n, c) is odd, by Lucas: the bits of c embed in n."""
    return 0 <= c <= n and (n & c) == c


def render_m2(a: M2Element) -> str:
    if not a.terms:
        return "0"
    return " + ".join(render_m2_monomial(i, j) for i, j in sorted(a.terms))


def render_m2_monomial(i: int, j: int) -> str:
    parts = []
    if i == 1:
        parts.append("rho")
    elif i > 1:
        parts.append(f"rho^{i}")
    if j == 1:
        parts.append("tau")
    elif j > 1:
        parts.append(f"tau^{j}")
    return " ".join(parts) if parts else "1"
