"""Sparse multivariate polynomials, monomials and monomial orders.

A monomial is a tuple of non-negative exponents, one per ambient variable.
A module term is a pair ``(position, monomial)``. Orders are exposed as sort
keys where *smaller key means larger term*, so ``sorted(terms, key=...)``
lists terms in descending order and ``min`` picks the leading term.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping

from .errors import ContextMismatch
from .field import DEFAULT_FIELD, Field

Monomial = tuple


def binomial(n: int, k: int) -> int:
    """C(n, k), zero outside ``0 <= k <= n``."""
    if k < 0 or n < k:
        return 0
    return comb(n, k)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return not any(x and y for x, y in zip(a, b))


def monomials_of_degree(nvars: int, degree: int):
    """All exponent tuples of the given total degree, lex-descending."""
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - first):
            yield (first,) + rest


ORDER_KINDS = ("grevlex", "lex", "grlex")
MODULE_EXTENSIONS = ("top", "pot")


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order together with its extension to free-module terms.

    ``module`` is ``"top"`` (term over position) or ``"pot"`` (position over
    term). With ``lower_position_first`` the basis vector e_0 beats e_1 on
    ties, which makes POT an elimination order for the leading positions.
    """

    kind: str = "grevlex"
    module: str = "top"
    lower_position_first: bool = True

    def __post_init__(self):
        if self.kind not in ORDER_KINDS:
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.module not in MODULE_EXTENSIONS:
            raise ValueError(f"unknown module extension {self.module!r}")

    def mono_key(self, m: Monomial) -> tuple:
        if self.kind == "grevlex":
            return (-sum(m),) + m[::-1]
        if self.kind == "lex":
            return tuple(-e for e in m)
        return (-sum(m),) + tuple(-e for e in m)

    def term_key(self, term) -> tuple:
        pos, m = term
        pk = pos if self.lower_position_first else -pos
        if self.module == "top":
            return self.mono_key(m) + (pk,)
        return (pk,) + self.mono_key(m)

    def cached_term_key(self):
        """A memoizing version of ``term_key`` for hot loops."""
        cache = {}
        raw = self.term_key

        def key(term):
            k = cache.get(term)
            if k is None:
                k = cache[term] = raw(term)
            return k

        return key

    def with_module(self, module: str) -> "MonomialOrder":
        return MonomialOrder(self.kind, module, self.lower_position_first)


GREVLEX = MonomialOrder()
LEX = MonomialOrder("lex")


def compare_monomials(a: Monomial, b: Monomial, order: MonomialOrder = GREVLEX) -> int:
    """Return 1 if ``a > b``, -1 if ``a < b``, 0 if equal."""
    if len(a) != len(b):
        raise ValueError(f"exponent vectors of different lengths: {a} vs {b}")
    ka, kb = order.mono_key(tuple(a)), order.mono_key(tuple(b))
    if ka == kb:
        return 0
    return 1 if ka < kb else -1


@dataclass(frozen=True)
class PolyRing:
    field: Field = DEFAULT_FIELD
    variables: tuple = ("x",)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def gens(self) -> tuple:
        return tuple(self.var(v) for v in self.variables)

    def var(self, name: str) -> "Polynomial":
        i = self.variables.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.field.one()})

    def const(self, c) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: self.field(c)})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def monomial(self, exps, coeff=1) -> "Polynomial":
        return Polynomial(self, {tuple(exps): self.field(coeff)})

    def __str__(self):
        return f"{self.field}[{', '.join(self.variables)}]"


class Polynomial:
    """An immutable element of ``ring`` stored as ``{exponents: coefficient}``.

    Zero coefficients are never stored, so the zero polynomial is the empty
    map and equality is map equality.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Mapping | None = None, _trusted=False):
        self.ring = ring
        if _trusted:
            self.terms = terms
        else:
            f = ring.field
            clean = {}
            for m, c in (terms or {}).items():
                m = tuple(m)
                if len(m) != ring.nvars:
                    raise ValueError(f"monomial {m} has wrong length for {ring}")
                c = f(c)
                if c:
                    clean[m] = c
            self.terms = clean

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ContextMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        red = self.ring.field.reducer()
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = red(out.get(m, 0) + c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.field.neg
        return Polynomial(self.ring, {m: neg(c) for m, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        red = self.ring.field.reducer()
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        out = {m: v for m, v in ((m, red(v)) for m, v in out.items()) if v}
        return Polynomial(self.ring, out, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def sorted_terms(self, order: MonomialOrder = GREVLEX) -> list:
        return sorted(self.terms.items(), key=lambda t: order.mono_key(t[0]))

    def leading_term(self, order: MonomialOrder = GREVLEX):
        if not self.terms:
            return None
        return min(self.terms.items(), key=lambda t: order.mono_key(t[0]))

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        f = self.ring.field
        out = []
        for m, c in self.sorted_terms():
            c = f.signed(c)
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.ring.variables, m) if e
            )
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            out.append(("-" if neg else "+", body))
        text = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    """Add, subtract or multiply two polynomials over the same ring."""
    if a.ring != b.ring:
        raise ContextMismatch(f"{a.ring} vs {b.ring}")
    op = op.lower()
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def product(polys: Iterable[Polynomial], ring: PolyRing) -> Polynomial:
    out = ring.one()
    for p in polys:
        out = out * p
    return out
