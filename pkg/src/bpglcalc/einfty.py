"""Canonical-form arithmetic in E = M2[tau_0, tau_1, ...]/(tau_i^2 - rho tau_{i+1}).

Elements are stored square-free: a term is a triple (i, j, support) standing
for rho^i tau^j * prod(tau_s for s in support) with support a frozenset of
distinct generator indices.  Repeated indices are eliminated by the carry
rewrite tau_i^2 -> rho tau_{i+1}, which behaves exactly like binary addition:
a multiset with multiplicity c_s at index s reduces to support = bits of
V = sum(c_s * 2^s) together with an extra rho-power of (sum(c_s) - popcount(V)).
Rewrites can escalate indices without bound, so every reduction carries an
index cap (default 16) and raises CapExceeded instead of truncating.

Generator bidegrees: |tau_s| = (2^(s+1) - 1, 2^s - 1).  The structure maps
are eta_L (plain inclusion of M2), eta_R (rho -> rho, tau -> tau + rho tau_0),
the augmentation (kill every tau_s), the degree-0 cobar differential
d0 = eta_R + eta_L, and the reduced degree-1 cobar differential d1 landing in
the tensor square.

Tensor squares (CobarOneElement) model the reduced cobar group in degree 2.
Terms are (i, j, left support, right support): ground-ring coefficients
always sit on the left factor, and a coefficient crossing the tensor sign
from the right is twisted through eta_R.  Terms whose left or right support
is empty are degenerate in the reduced complex and are dropped by
canonicalization.

Rendering extends the M2 grammar: generators print as ``t0 t1 ...`` after the
coefficient, tensor factors are joined by `` | ``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator

from . import m2
from .errors import CapExceeded, DomainError, InternalError, NotDivisible
from .m2 import Bidegree, M2Element, binom_odd, mk

DEFAULT_CAP = 16

Term = tuple[int, int, frozenset]  # (rho exp, tau exp, tau-generator support)


def tau_gen_bidegree(s: int) -> Bidegree:
    return Bidegree(2 ** (s + 1) - 1, 2**s - 1)


def term_bidegree(term: Term) -> Bidegree:
    i, j, support = term
    deg = m2.monomial_bidegree(i, j)
    for s in support:
        deg = deg + tau_gen_bidegree(s)
    return deg


def _reduce_counts(counts: dict[int, int], cap: int) -> tuple[int, frozenset]:
    """Carry-reduce a tau-index multiset; returns (extra rho power, support)."""
    total = sum(counts.values())
    value = sum(c << s for s, c in counts.items())
    if value and value.bit_length() - 1 > cap:
        raise CapExceeded(
            f"reduction needs tau_{value.bit_length() - 1}, above cap {cap}"
        )
    support = frozenset(s for s in range(value.bit_length()) if value >> s & 1)
    return total - len(support), support


class EInftyElement:
    """An M2-linear combination of square-free tau monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Term] = ()):
        acc: set[Term] = set()
        for t in terms:
            if t in acc:
                acc.discard(t)
            else:
                acc.add(t)
        object.__setattr__(self, "terms", frozenset(acc))

    @classmethod
    def from_frozenset(cls, terms: frozenset) -> "EInftyElement":
        el = cls.__new__(cls)
        object.__setattr__(el, "terms", terms)
        return el

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EInftyElement) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[Term]:
        return iter(sorted(self.terms, key=_term_key))

    def __add__(self, other: "EInftyElement") -> "EInftyElement":
        return EInftyElement.from_frozenset(self.terms ^ other.terms)

    __sub__ = __add__

    def __mul__(self, other: "EInftyElement") -> "EInftyElement":
        return e_mul(self, other)

    def is_homogeneous(self) -> bool:
        return len({term_bidegree(t) for t in self.terms}) <= 1

    def bidegree(self) -> Bidegree:
        degs = {term_bidegree(t) for t in self.terms}
        if len(degs) != 1:
            raise DomainError("bidegree of zero or inhomogeneous element")
        return degs.pop()

    def reduced_part(self) -> "EInftyElement":
        """Drop terms with empty support (the eta_L(M2) summand)."""
        return EInftyElement.from_frozenset(
            frozenset(t for t in self.terms if t[2])
        )

    def __repr__(self) -> str:
        return f"EInftyElement({render_e(self)!r})"

    def __str__(self) -> str:
        return render_e(self)


def _term_key(t: Term):
    return (sorted(t[2]), t[0], t[1])


E_ZERO = EInftyElement()
E_ONE = EInftyElement([(0, 0, frozenset())])


def reduce(
    indices: Iterable[int],
    coeff: tuple[int, int] = (0, 0),
    cap: int = DEFAULT_CAP,
) -> EInftyElement:
    """Canonicalize a formal tau monomial with possibly repeated indices."""
    counts: dict[int, int] = {}
    for s in indices:
        if s < 0:
            raise DomainError(f"negative tau index {s}")
        if s > cap:
            raise CapExceeded(f"tau_{s} above cap {cap}")
        counts[s] = counts.get(s, 0) + 1
    extra, support = _reduce_counts(counts, cap)
    return EInftyElement([(coeff[0] + extra, coeff[1], support)])


def tau_monomial(*indices: int) -> EInftyElement:
    return reduce(indices)


def embed(a: M2Element) -> EInftyElement:
    """eta_L: the plain inclusion of the ground ring."""
    return EInftyElement((i, j, frozenset()) for i, j in a.terms)


eta_L = embed


def eta_R(a: M2Element, cap: int = DEFAULT_CAP) -> EInftyElement:
    """The right unit: rho -> rho, tau -> tau + rho tau_0, multiplicatively."""
    out: set[Term] = set()
    for i, j in a.terms:
        for term in _eta_r_monomial(i, j, cap):
            out.symmetric_difference_update({term})
    return EInftyElement.from_frozenset(frozenset(out))


@lru_cache(maxsize=None)
def _eta_r_monomial(i: int, j: int, cap: int) -> frozenset:
    # (tau + rho tau_0)^j over F2: the c-th binomial term is
    # rho^c tau^(j-c) tau_0^c, and tau_0^c reduces to rho^(c - popcount(c))
    # times the square-free monomial on the bits of c.
    out = set()
    for c in range(j + 1):
        if not binom_odd(j, c):
            continue
        extra, support = _reduce_counts({0: c} if c else {}, cap)
        out.add((i + c + extra, j - c, support))
    return frozenset(out)


def d0(a: M2Element, cap: int = DEFAULT_CAP) -> EInftyElement:
    """Degree-0 cobar differential eta_R + eta_L (characteristic 2)."""
    return eta_R(a, cap) + embed(a)


def augment(x: EInftyElement) -> M2Element:
    """The augmentation: kill every tau generator."""
    return M2Element((i, j) for i, j, support in x.terms if not support)


def e_mul(x: EInftyElement, y: EInftyElement, cap: int = DEFAULT_CAP) -> EInftyElement:
    out: set[Term] = set()
    for i1, j1, s1 in x.terms:
        for i2, j2, s2 in y.terms:
            counts: dict[int, int] = {}
            for s in s1:
                counts[s] = counts.get(s, 0) + 1
            for s in s2:
                counts[s] = counts.get(s, 0) + 1
            extra, support = _reduce_counts(counts, cap)
            term = (i1 + i2 + extra, j1 + j2, support)
            out.symmetric_difference_update({term})
    return EInftyElement.from_frozenset(frozenset(out))


def scale(a: M2Element, x: EInftyElement, cap: int = DEFAULT_CAP) -> EInftyElement:
    """Left module action of M2 (through eta_L)."""
    return e_mul(embed(a), x, cap)


def rho_mul(x: EInftyElement, e: int) -> EInftyElement:
    return EInftyElement.from_frozenset(
        frozenset((i + e, j, s) for i, j, s in x.terms)
    )


def rho_exact_divide(x: EInftyElement, e: int) -> EInftyElement:
    bad = [t for t in x.terms if t[0] < e]
    if bad:
        raise NotDivisible(f"term with rho-exponent {bad[0][0]} < {e}")
    return EInftyElement.from_frozenset(
        frozenset((i - e, j, s) for i, j, s in x.terms)
    )


def max_rho_divisibility(x: EInftyElement) -> int:
    """Largest e with every term rho-divisible e times."""
    if not x:
        raise DomainError("rho-divisibility of zero")
    return min(i for i, _, _ in x.terms)


@lru_cache(maxsize=None)
def vbar(k: int, cap: int = DEFAULT_CAP) -> EInftyElement:
    """The basic 1-cocycle d0(tau^k) / rho^(m_k)."""
    if k <= 0:
        raise DomainError(f"vbar needs k >= 1, got {k}")
    diff = d0(m2.tau(k), cap)
    try:
        return rho_exact_divide(diff, mk(k))
    except NotDivisible as exc:  # pragma: no cover - guarded by theory
        raise InternalError(f"d0(tau^{k}) not divisible by rho^{mk(k)}") from exc


# ---------------------------------------------------------------------------
# degree-2 cobar group
# ---------------------------------------------------------------------------

TensorTerm = tuple[int, int, frozenset, frozenset]


class CobarOneElement:
    """An element of the reduced tensor square, coefficients on the left."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[TensorTerm] = ()):
        acc: set[TensorTerm] = set()
        for t in terms:
            if not t[2] or not t[3]:
                continue  # degenerate in the reduced complex
            if t in acc:
                acc.discard(t)
            else:
                acc.add(t)
        object.__setattr__(self, "terms", frozenset(acc))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CobarOneElement) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "CobarOneElement") -> "CobarOneElement":
        out = CobarOneElement.__new__(CobarOneElement)
        object.__setattr__(out, "terms", self.terms ^ other.terms)
        return out

    __sub__ = __add__

    def __iter__(self) -> Iterator[TensorTerm]:
        return iter(sorted(self.terms, key=lambda t: (sorted(t[2]), sorted(t[3]), t[0], t[1])))

    def bidegree(self) -> Bidegree:
        degs = set()
        for i, j, left, right in self.terms:
            deg = m2.monomial_bidegree(i, j)
            for s in left:
                deg = deg + tau_gen_bidegree(s)
            for s in right:
                deg = deg + tau_gen_bidegree(s)
            degs.add(deg)
        if len(degs) != 1:
            raise DomainError("bidegree of zero or inhomogeneous tensor")
        return degs.pop()

    def __repr__(self) -> str:
        return f"CobarOneElement({render_cobar(self)!r})"

    def __str__(self) -> str:
        return render_cobar(self)


C_ZERO = CobarOneElement()


def tensor(left: EInftyElement, right: EInftyElement, cap: int = DEFAULT_CAP) -> CobarOneElement:
    """Canonical tensor: right-factor coefficients cross via eta_R."""
    out: set[TensorTerm] = set()
    for i2, j2, s2 in right.terms:
        moved = e_mul(left, _eta_r_as_element(i2, j2, cap), cap)
        for i1, j1, s1 in moved.terms:
            term = (i1, j1, s1, s2)
            if not s1 or not s2:
                continue
            out.symmetric_difference_update({term})
    return CobarOneElement(out)


def _eta_r_as_element(i: int, j: int, cap: int) -> EInftyElement:
    return EInftyElement.from_frozenset(_eta_r_monomial(i, j, cap))


def d1(x: EInftyElement, cap: int = DEFAULT_CAP) -> CobarOneElement:
    """Reduced degree-1 cobar differential.

    On a canonical term c * tau_S the reduced coproduct contributes
    d0(c) (x) tau_S plus the sum of c tau_T (x) tau_(S-T) over proper
    nonempty subsets T; the first summand is the eta_R twist that makes
    d1 a bimodule derivation rather than a plain one.  Terms with empty
    support project to zero.  The tau generators and rho are primitive,
    so d1 kills them, and d1 . d0 = 0.
    """
    out: set[TensorTerm] = set()
    for i, j, support in x.terms:
        if not support:
            continue
        for di, dj, dsupport in d0(m2.monomial(i, j), cap).terms:
            term = (di, dj, dsupport, support)
            if dsupport:
                out.symmetric_difference_update({term})
        indices = sorted(support)
        n = len(indices)
        for mask in range(1, (1 << n) - 1):
            left = frozenset(indices[b] for b in range(n) if mask >> b & 1)
            right = support - left
            out.symmetric_difference_update({(i, j, left, right)})
    return CobarOneElement(out)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def render_e_term(term: Term) -> str:
    i, j, support = term
    coeff = m2.render_m2_monomial(i, j)
    gens = " ".join(f"t{s}" for s in sorted(support))
    if not gens:
        return coeff
    if coeff == "1":
        return gens
    return f"{coeff} {gens}"


def render_e(x: EInftyElement) -> str:
    if not x.terms:
        return "0"
    return " + ".join(render_e_term(t) for t in x)


def render_cobar(x: CobarOneElement) -> str:
    if not x.terms:
        return "0"
    parts = []
    for i, j, left, right in x:
        lhs = render_e_term((i, j, left))
        rhs = " ".join(f"t{s}" for s in sorted(right))
        parts.append(f"{lhs} | {rhs}")
    return " + ".join(parts)
