"""Triple Massey products in Ext over (M2, E) via preferred null-homotopies.

The Ext^1 basis is {rho^j vbar(k) : k >= 1, 0 <= j < m_k}; in a fixed
internal bidegree (t, w) there is at most one basis class (k = t - w,
j = m_k - t) and at most one coboundary (d0 of the unique M2 monomial in
that bidegree, which exists only for t <= 0).  Identification of a
homogeneous 1-cocycle therefore reduces to elimination against at most two
vectors, which is still done as honest F2 elimination.

The bracket <rho^r vbar(k), rho^s, rho^t vbar(l)> is defined when
r + s >= m_k and s + t >= m_l.  Its preferred representative

    rho^(s+t+r-m_l) vbar(k) eta_R(tau^l) + rho^(r+s+t-m_k) tau^k vbar(l)

collapses on the nose to rho^E vbar(k+l) with E = m_(k+l) - m_k - m_l
+ r + s + t; the code still builds the representative from the two
null-homotopies, checks it is a cocycle, and identifies it independently.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import einfty, m2
from .einfty import DEFAULT_CAP, EInftyElement, d0, d1, e_mul, vbar
from .errors import BracketUndefined, DomainError, InternalError, NotACocycle, NotHomogeneous
from .m2 import Bidegree, M2Element, mk


@dataclass(frozen=True)
class ExtOneClass:
    """The class rho^j vbar(k); j >= m_k is allowed only as a name for zero."""

    k: int
    j: int

    def __post_init__(self):
        if self.k < 1 or self.j < 0:
            raise DomainError(f"bad Ext^1 parameters k={self.k}, j={self.j}")

    @property
    def is_zero(self) -> bool:
        return self.j >= mk(self.k)

    def cocycle(self, cap: int = DEFAULT_CAP) -> EInftyElement:
        return einfty.rho_mul(vbar(self.k, cap), self.j)

    def cocycle_bidegree(self) -> Bidegree:
        m = mk(self.k)
        return Bidegree(m - self.j, m - self.k - self.j)

    def homotopy_bidegree(self) -> Bidegree:
        """Internal degree minus the Adams filtration 1 in the stem."""
        m = mk(self.k)
        return Bidegree(m - self.j - 1, m - self.k - self.j)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        if self.j == 0:
            return f"v({self.k})"
        return f"rho^{self.j} v({self.k})"


@dataclass(frozen=True)
class MasseyResult:
    representative: EInftyElement
    closed_form: ExtOneClass
    identified: tuple[ExtOneClass, ...]
    exponent_formula_check: bool

    @property
    def is_zero(self) -> bool:
        return not self.identified


def null_homotopy(k: int, e: int) -> M2Element:
    """The monomial u with d0(u) = rho^e vbar(k), defined for e >= m_k."""
    if k < 1:
        raise DomainError(f"null_homotopy needs k >= 1, got {k}")
    if e < mk(k):
        raise DomainError(
            f"rho^{e} v({k}) is nonzero in Ext (e < m_k = {mk(k)}); no null-homotopy"
        )
    return m2.monomial(e - mk(k), k)


def massey_triple(
    r: int, k: int, s: int, t: int, l: int, cap: int = DEFAULT_CAP
) -> MasseyResult:
    """<rho^r vbar(k), rho^s, rho^t vbar(l)> from the preferred homotopies."""
    if k < 1 or l < 1:
        raise DomainError("bracket heights must be positive")
    if min(r, s, t) < 0:
        raise DomainError("rho-exponents must be nonnegative")
    if r + s < mk(k):
        raise BracketUndefined(
            f"r + s >= m_k violated: {r} + {s} < {mk(k)} = m_{k}"
        )
    if s + t < mk(l):
        raise BracketUndefined(
            f"s + t >= m_l violated: {s} + {t} < {mk(l)} = m_{l}"
        )

    u = null_homotopy(k, r + s)          # d0(u) = rho^(r+s) vbar(k)
    v = null_homotopy(l, s + t)          # d0(v) = rho^(s+t) vbar(l)
    first = e_mul(einfty.rho_mul(vbar(k, cap), r), einfty.eta_R(v, cap), cap)
    second = e_mul(einfty.embed(u), einfty.rho_mul(vbar(l, cap), t), cap)
    rep = first + second

    if d1(rep, cap):
        raise InternalError("bracket representative is not a cocycle")

    exponent = mk(k + l) - mk(k) - mk(l) + r + s + t
    closed = ExtOneClass(k + l, exponent)
    if closed.is_zero:
        boundary = d0(m2.monomial(exponent - mk(k + l), k + l), cap)
        if rep != boundary:
            raise InternalError("saturated bracket representative is not the expected coboundary")

    identified = tuple(identify_ext1(rep, cap))
    expected = () if closed.is_zero else (ExtOneClass(k + l, exponent),)
    return MasseyResult(rep, closed, identified, identified == expected)


def identify_ext1(z: EInftyElement, cap: int = DEFAULT_CAP) -> list[ExtOneClass]:
    """Express a homogeneous 1-cocycle in the Ext^1 basis modulo coboundaries."""
    if not z.is_homogeneous():
        raise NotHomogeneous("identify_ext1 needs a homogeneous element")
    if d1(z, cap):
        raise NotACocycle("element has nonzero cobar differential")
    z = z.reduced_part()
    if not z:
        return []
    deg = z.bidegree()
    t, w = deg.t, deg.w

    candidates: list[tuple[EInftyElement, ExtOneClass | None]] = []
    k = t - w
    if k >= 1 and 0 <= mk(k) - t < mk(k):
        cls = ExtOneClass(k, mk(k) - t)
        candidates.append((cls.cocycle(cap), cls))
    if t <= 0 and (t - w) >= 1:
        boundary = d0(m2.monomial(-t, t - w), cap)
        if boundary:
            candidates.append((boundary, None))

    # F2 elimination over at most two vectors.
    for mask in range(1, 1 << len(candidates)):
        acc = einfty.E_ZERO
        picked: list[ExtOneClass] = []
        for idx, (vec, cls) in enumerate(candidates):
            if mask >> idx & 1:
                acc = acc + vec
                if cls is not None:
                    picked.append(cls)
        if acc == z:
            return picked
    raise InternalError(
        f"cocycle in bidegree ({t}, {w}) is outside the modeled Ext^1"
    )


def middle_class_bracket_is_zero(
    r: int, s: int, t: int, k: int, cap: int = DEFAULT_CAP
) -> bool:
    """Degeneracy of <rho^r, rho^s vbar(k), rho^t>: zero with zero indeterminacy.

    The preferred null-homotopies coincide, so the 0-cochain representative
    cancels identically, and the bidegree where a nonzero value could hide
    admits no Ext^1 class (its rho-exponent r+s+t is already >= m_k).
    """
    if k < 1:
        raise DomainError("height must be positive")
    if r + s < mk(k) or s + t < mk(k):
        raise BracketUndefined(
            f"needs r + s and s + t >= m_k = {mk(k)}; got {r}+{s}, {s}+{t}"
        )
    u = null_homotopy(k, r + s)
    v = null_homotopy(k, s + t)
    rep = m2.rho(r) * v + u * m2.rho(t)
    if rep:
        raise InternalError("degenerate bracket representative did not cancel")
    exponent = r + s + t
    if exponent < mk(k):  # pragma: no cover - excluded by definedness
        raise InternalError("unexpected nonzero Ext^1 class in degenerate bracket")
    return True
