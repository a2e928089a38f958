"""The homotopy ring of BPGL as a normal-form monomial rewriting system.

A monomial is rho^e times a finite multiset of generators v_n(b).  Normal
form folds every shift onto the factor of minimal index: v_m(b) v_n(c)
rewrites to v_m(b + 2^(n-m) c) v_n for n >= m, so a monomial is stored as
(e, shift B, sorted index tuple) with B carried by the first (minimal)
index.  Two kinds of vanishing are built into normalization:

* rho-torsion: a monomial with factors dies once e >= 2^(n_min + 1) - 1,
  where n_min is the minimal index present (pure rho-powers never die);
* doubled v_0: a monomial with two or more index-0 factors represents a
  class divisible by 4 and is zero in this mod-2 bookkeeping.  One v_0
  factor is kept: it witnesses multiplication by 2 (the Z/4 extensions).

Elements are F2 spans of nonzero normal-form monomials.  Coefficients
really live over the 2-adics in places; everything asserted here is an
identity among monomial generators and their 2-torsion multiples, where
mod-2 bookkeeping is faithful.  Indeterminacy subgroups are reported as
generator lists with the order annotation left unresolved.

Grammar: ``rho^e * v{n}({b})`` factors joined by ``*``; ``v{n}``
abbreviates ``v{n}(0)``; monomials joined by `` + ``; ``0`` and ``1`` as
usual.  ``parse_element`` accepts this grammar back.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .brackets import ExtOneClass, massey_triple
from .errors import BracketUndefined, DomainError, FormulaMismatch, ParseError
from .m2 import Bidegree


def generator_bidegree(n: int, b: int) -> Bidegree:
    return Bidegree(2 ** (n + 1) - 2, 2**n - 1 - 2 ** (n + 1) * b)


@dataclass(frozen=True, order=True)
class BPGLMonomial:
    """Normal form rho^e * v_{n1}(shift) * v_{n2} * ... with n1 <= n2 <= ..."""

    e: int
    shift: int
    indices: tuple[int, ...]

    def bidegree(self) -> Bidegree:
        deg = Bidegree(-self.e, -self.e)
        for pos, n in enumerate(self.indices):
            deg = deg + generator_bidegree(n, self.shift if pos == 0 else 0)
        return deg

    def factors(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (n, self.shift if pos == 0 else 0) for pos, n in enumerate(self.indices)
        )

    def filtration(self) -> int:
        return len(self.indices)

    def __str__(self) -> str:
        return render_monomial(self)


MONOMIAL_ONE = BPGLMonomial(0, 0, ())


def normalize(factors: Iterable[tuple[int, int]], e: int = 0) -> BPGLMonomial | None:
    """Fold shifts onto the minimal index; None encodes the zero monomial."""
    if e < 0:
        raise DomainError("negative rho-exponent")
    fs = sorted(factors)
    for n, b in fs:
        if n < 0 or b < 0:
            raise DomainError(f"bad generator v_{n}({b})")
    if not fs:
        return BPGLMonomial(e, 0, ())
    n_min = fs[0][0]
    if e >= 2 ** (n_min + 1) - 1:
        return None  # rho-torsion
    if sum(1 for n, _ in fs if n == 0) >= 2:
        return None  # divisible by 4, zero mod 2
    shift = sum(b * 2 ** (n - n_min) for n, b in fs)
    return BPGLMonomial(e, shift, tuple(n for n, _ in fs))


class BPGLElement:
    """An F2 span of normal-form monomials."""

    __slots__ = ("monomials",)

    def __init__(self, monomials: Iterable[BPGLMonomial | None] = ()):
        acc: set[BPGLMonomial] = set()
        for mono in monomials:
            if mono is None:
                continue
            if mono in acc:
                acc.discard(mono)
            else:
                acc.add(mono)
        object.__setattr__(self, "monomials", frozenset(acc))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BPGLElement) and self.monomials == other.monomials

    def __hash__(self) -> int:
        return hash(self.monomials)

    def __bool__(self) -> bool:
        return bool(self.monomials)

    def __iter__(self) -> Iterator[BPGLMonomial]:
        return iter(sorted(self.monomials))

    def __add__(self, other: "BPGLElement") -> "BPGLElement":
        el = BPGLElement.__new__(BPGLElement)
        object.__setattr__(el, "monomials", self.monomials ^ other.monomials)
        return el

    __sub__ = __add__

    def __mul__(self, other: "BPGLElement") -> "BPGLElement":
        return mul(self, other)

    def is_homogeneous(self) -> bool:
        return len({m.bidegree() for m in self.monomials}) <= 1

    def bidegree(self) -> Bidegree:
        degs = {m.bidegree() for m in self.monomials}
        if len(degs) != 1:
            raise DomainError("bidegree of zero or inhomogeneous element")
        return degs.pop()

    def __repr__(self) -> str:
        return f"BPGLElement({render_element(self)!r})"

    def __str__(self) -> str:
        return render_element(self)


B_ZERO = BPGLElement()
B_ONE = BPGLElement([MONOMIAL_ONE])


def element(*monomials: BPGLMonomial | None) -> BPGLElement:
    return BPGLElement(monomials)


def gen(n: int, b: int = 0, e: int = 0) -> BPGLElement:
    return element(normalize([(n, b)], e))


def rho_power(e: int) -> BPGLElement:
    return element(BPGLMonomial(e, 0, ()))


def mul_monomials(a: BPGLMonomial, b: BPGLMonomial) -> BPGLMonomial | None:
    return normalize(a.factors() + b.factors(), a.e + b.e)


def mul(x: BPGLElement, y: BPGLElement) -> BPGLElement:
    acc: set[BPGLMonomial] = set()
    for a in x.monomials:
        for b in y.monomials:
            mono = mul_monomials(a, b)
            if mono is not None:
                acc.symmetric_difference_update({mono})
    el = BPGLElement.__new__(BPGLElement)
    object.__setattr__(el, "monomials", frozenset(acc))
    return el


def i_filtration(x: BPGLElement) -> int:
    """Minimal number of v-generator factors across monomials."""
    if not x:
        raise DomainError("filtration of zero")
    return min(m.filtration() for m in x.monomials)


# ---------------------------------------------------------------------------
# bidegree enumeration
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def enumerate_bidegree(t: int, w: int) -> tuple[BPGLMonomial, ...]:
    """All nonzero normal-form monomials of bidegree (t, w).

    Pure rho-powers account for the diagonal t = w <= 0.  For monomials
    with factors, any index-0 factor forces e = 0, every index-(n>0)
    factor adds 2^(n+1) - 2 > 0 to the topological degree, and the weight
    equation determines the unique shift; the search is finite because the
    weight budget bounds sum(2^n - 1) by t - w.
    """
    out: list[BPGLMonomial] = []
    if t <= 0 and w == t:
        out.append(BPGLMonomial(-t, 0, ()))
    if t < 0 or t - w < 0:
        return tuple(out)

    max_factors = -(-t // 2) + 1  # ceil(t/2) + 1, asserted below
    for multiset in _index_multisets(t, t - w):
        assert len(multiset) <= max_factors, "factor-count bound violated"
        top = sum(2 ** (n + 1) - 2 for n in multiset)
        weight = sum(2**n - 1 for n in multiset)
        if multiset:
            n_min = multiset[0]
            assert 2 ** (multiset[-1] + 1) - 2 <= t + 2 ** (n_min + 1) - 2, (
                "index bound violated"
            )
            # variant without an extra v_0 factor
            e = top - t
            if 0 <= e <= 2 ** (n_min + 1) - 2:
                num = weight - e - w
                denom = 2 ** (n_min + 1)
                if num >= 0 and num % denom == 0:
                    out.append(BPGLMonomial(e, num // denom, multiset))
        # variant with one extra v_0 factor (forces e = 0)
        if top == t:
            num = weight - w
            if num >= 0 and num % 2 == 0:
                out.append(BPGLMonomial(0, num // 2, (0,) + multiset))
    return tuple(sorted(set(out)))


def _index_multisets(t: int, weight_budget: int) -> list[tuple[int, ...]]:
    """Nondecreasing tuples of indices >= 1 within both degree budgets."""
    results: list[tuple[int, ...]] = [()]
    max_n = 0
    while 2 ** (max_n + 2) - 2 <= t + 2 ** (max_n + 2) and 2 ** (max_n + 1) - 1 <= weight_budget:
        max_n += 1

    def recurse(prefix: tuple[int, ...], low: int, top_left: int, weight_left: int):
        for n in range(low, max_n + 1):
            top = 2 ** (n + 1) - 2
            weight = 2**n - 1
            # the minimal index of the final multiset is prefix[0] (or n);
            # allow the torsion slack 2^(n_min+1) - 2 on the top budget
            n_min = prefix[0] if prefix else n
            if top > top_left + 2 ** (n_min + 1) - 2 or weight > weight_left:
                continue
            new = prefix + (n,)
            results.append(new)
            recurse(new, n, top_left - top, weight_left - weight)

    recurse((), 1, t, weight_budget)
    return [tuple(sorted(ms)) for ms in results]


# ---------------------------------------------------------------------------
# brackets
# ---------------------------------------------------------------------------


INDETERMINACY_ORDER_NOTE = "order Z2 (2-adic vs Z/2 not resolved here)"


@dataclass(frozen=True)
class BracketSpec:
    """Parameters of <rho^r v_m(b), rho^s, rho^t v_n(c)>."""

    m: int
    b: int
    n: int
    c: int
    r: int
    s: int
    t: int

    def __post_init__(self):
        if min(self.m, self.b, self.n, self.c, self.r, self.s, self.t) < 0:
            raise DomainError("bracket parameters must be nonnegative")

    def validate(self):
        if self.r + self.s < 2 ** (self.m + 1) - 1:
            raise BracketUndefined(
                f"r + s >= 2^(m+1) - 1 violated: {self.r} + {self.s} < {2 ** (self.m + 1) - 1}"
            )
        if self.s + self.t < 2 ** (self.n + 1) - 1:
            raise BracketUndefined(
                f"s + t >= 2^(n+1) - 1 violated: {self.s} + {self.t} < {2 ** (self.n + 1) - 1}"
            )

    def ordered(self) -> "BracketSpec":
        """Swap the outer entries so that m >= n (symmetry of the bracket)."""
        if self.m >= self.n:
            return self
        return BracketSpec(self.n, self.c, self.m, self.b, self.t, self.s, self.r)

    def ext_translation(self) -> tuple[int, int, int, int, int]:
        """(r, k, s, t, l) parameters of the detecting cobar bracket."""
        k = (1 + 2 * self.b) * 2**self.m
        l = (1 + 2 * self.c) * 2**self.n
        return (self.r, k, self.s, self.t, l)


def indeterminacy(spec: BracketSpec) -> list[BPGLElement]:
    """Subgroup generators of the bracket indeterminacy, by enumeration.

    The subgroup is rho^r v_m(b) * pi_(x_t, y_t) + rho^t v_n(c) * pi_(x_r, y_r),
    where (x_*, y_*) are the degrees of choices of the two null-homotopies.
    The result is checked against the closed form (nonzero only for t = 0,
    r + s = 2^(m+1) - 1, m > 0) and a mismatch is a hard error.
    """
    spec = spec.ordered()
    spec.validate()
    m_, b, n, c, r, s, t = spec.m, spec.b, spec.n, spec.c, spec.r, spec.s, spec.t

    gens: set[BPGLMonomial] = set()
    left = gen(m_, b, r)
    right = gen(n, c, t)
    deg_t = Bidegree(2 ** (n + 1) - 1 - s - t, 2**n - 1 - s - t - 2 ** (n + 1) * c)
    deg_r = Bidegree(2 ** (m_ + 1) - 1 - r - s, 2**m_ - 1 - r - s - 2 ** (m_ + 1) * b)
    for factor, deg in ((left, deg_t), (right, deg_r)):
        for mono in enumerate_bidegree(deg.t, deg.w):
            product = mul(factor, element(mono))
            for out in product.monomials:
                gens.add(out)

    closed = closed_form_indeterminacy(spec)
    enumerated = sorted(gens)
    expected = sorted(m for g in closed for m in g.monomials)
    if enumerated != expected:
        raise FormulaMismatch(
            f"enumerated indeterminacy {[str(g) for g in enumerated]} != "
            f"closed form {[str(g) for g in expected]} for {spec}"
        )
    return [element(mono) for mono in enumerated]


def closed_form_indeterminacy(spec: BracketSpec) -> list[BPGLElement]:
    spec = spec.ordered()
    m_, b, n, c = spec.m, spec.b, spec.n, spec.c
    if spec.t == 0 and spec.r + spec.s == 2 ** (m_ + 1) - 1 and m_ > 0:
        generator = mul(gen(0, (1 + 2 * b) * 2 ** (m_ - 1)), gen(n, c))
        if generator:
            return [generator]
    return []


@dataclass(frozen=True)
class BracketValue:
    element: BPGLElement
    indeterminacy: tuple[BPGLElement, ...]
    filtration_caveat_cleared: bool
    detected: ExtOneClass


def bracket_value(spec: BracketSpec, cap: int = 16) -> BracketValue:
    """The chromatic-form bracket value, modulo higher filtration.

    Computed through the cobar engine under k = (1+2b) 2^m, l = (1+2c) 2^n;
    the result is rho^E v_{n'}(d') with (1+2d') 2^(n') = k + l and
    E = m_(k+l) - m_k - m_l + r + s + t.  The filtration caveat is cleared
    exactly when E reaches the stabilization bound 2^(floor(n'/2) + 1) - 1,
    past which higher-filtration corrections are rho-annihilated.
    """
    spec = spec.ordered()
    spec.validate()
    r, k, s, t, l = spec.ext_translation()
    result = massey_triple(r, k, s, t, l, cap)
    if not result.exponent_formula_check:
        raise FormulaMismatch("cobar identification disagrees with closed form")

    total = k + l
    n_out = (total & -total).bit_length() - 1
    d_out = (total >> (n_out + 1))  # total = (1 + 2 d) 2^n
    exponent = result.closed_form.j
    value = gen(n_out, d_out, exponent) if not result.closed_form.is_zero else B_ZERO
    caveat_cleared = exponent >= 2 ** (n_out // 2 + 1) - 1
    return BracketValue(
        element=value,
        indeterminacy=tuple(indeterminacy(spec)),
        filtration_caveat_cleared=caveat_cleared,
        detected=result.closed_form,
    )


def detect(mono: BPGLMonomial) -> ExtOneClass:
    """The Ext^1 class detecting a single-generator monomial rho^e v_n(b)."""
    if len(mono.indices) != 1:
        raise DomainError("detection map needs a single-generator monomial")
    n = mono.indices[0]
    return ExtOneClass((1 + 2 * mono.shift) * 2**n, mono.e)


# ---------------------------------------------------------------------------
# grammar
# ---------------------------------------------------------------------------


_FACTOR_RE = re.compile(r"^v(\d+)(?:\((\d+)\))?$")
_RHO_RE = re.compile(r"^rho(?:\^(\d+))?$")


def render_monomial(mono: BPGLMonomial) -> str:
    parts = []
    if mono.e == 1:
        parts.append("rho")
    elif mono.e > 1:
        parts.append(f"rho^{mono.e}")
    for n, b in mono.factors():
        parts.append(f"v{n}({b})" if b else f"v{n}")
    return " * ".join(parts) if parts else "1"


def render_element(x: BPGLElement) -> str:
    if not x.monomials:
        return "0"
    return " + ".join(render_monomial(m) for m in x)


def parse_monomial(text: str) -> BPGLMonomial | None:
    e = 0
    factors: list[tuple[int, int]] = []
    text = text.strip()
    if text == "0":
        return None
    if text == "1":
        return MONOMIAL_ONE
    for token in (p.strip() for p in text.split("*")):
        if not token:
            raise ParseError("empty factor")
        rho_match = _RHO_RE.match(token)
        if rho_match:
            e += int(rho_match.group(1) or 1)
            continue
        factor_match = _FACTOR_RE.match(token)
        if factor_match:
            factors.append((int(factor_match.group(1)), int(factor_match.group(2) or 0)))
            continue
        raise ParseError(f"unrecognized factor {token!r}")
    return normalize(factors, e)


def parse_element(text: str) -> BPGLElement:
    text = text.strip()
    if not text:
        raise ParseError("empty element")
    return BPGLElement(parse_monomial(part) for part in text.split(" + "))
