"""Buchberger's algorithm for submodules of free modules over k[x_1..x_D].

A quotient ring A = k[x]/I is handled by working in the ambient polynomial
ring and adjoining I e_i for every free-module component, so a normal form
over A is just an ambient normal form.

Internally a free-module element is a ``dict`` mapping a term
``(position, exponents)`` to a nonzero coefficient ("vec" below). The public
surface converts to and from :class:`FreeModuleElement`.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import BRError, NonHomogeneousError, RankMismatch
from .field import DEFAULT_FIELD, Field
from .poly import (
    GREVLEX,
    MonomialOrder,
    PolyRing,
    Polynomial,
    mono_coprime,
    mono_div,
    mono_divides,
    mono_lcm,
)

INFINITE = math.inf

POT = MonomialOrder("grevlex", "pot")


# ---------------------------------------------------------------------------
# vec helpers


def vec_degree(v: dict, shifts=None):
    """Shifted degree of the first term; ``None`` for the zero vector."""
    for pos, m in v:
        return sum(m) + (shifts[pos] if shifts else 0)
    return None


def vec_is_homogeneous(v: dict, shifts=None) -> bool:
    return len({sum(m) + (shifts[pos] if shifts else 0) for pos, m in v}) <= 1


def vec_scale(v: dict, q, c, red) -> dict:
    """Return ``c * x^q * v``."""
    out = {}
    for (pos, m), a in v.items():
        b = red(a * c)
        if b:
            out[(pos, tuple(x + y for x, y in zip(m, q)))] = b
    return out


def vec_add(a: dict, b: dict, red, scale=1) -> dict:
    out = dict(a)
    for t, c in b.items():
        v = red(out.get(t, 0) + scale * c)
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return out


def vec_shift_positions(v: dict, offset: int) -> dict:
    return {(pos + offset, m): c for (pos, m), c in v.items()}


# ---------------------------------------------------------------------------
# reduction and Buchberger


class _Reducer:
    """Index of monic basis elements by leading position."""

    def __init__(self, nranks_hint=0):
        self.by_pos: dict = {}

    def add(self, lead, vec):
        pos, m = lead
        self.by_pos.setdefault(pos, []).append((m, vec))

    def remove(self, lead, vec):
        lst = self.by_pos.get(lead[0], [])
        for i, (m, v) in enumerate(lst):
            if v is vec:
                del lst[i]
                return

    def find(self, term):
        pos, m = term
        for lm, vec in self.by_pos.get(pos, ()):
            if all(a <= b for a, b in zip(lm, m)):
                return lm, vec
        return None


def _normal_form(f: dict, reducer: _Reducer, key, red, lead_of) -> dict:
    """Fully reduce ``f``; every basis element must be monic."""
    f = dict(f)
    heap = [(key(t), t) for t in f]
    heapq.heapify(heap)
    result = {}
    while heap:
        _, t = heapq.heappop(heap)
        c = f.pop(t, None)
        if c is None:
            continue
        hit = reducer.find(t)
        if hit is None:
            result[t] = c
            continue
        lm, g = hit
        q = tuple(a - b for a, b in zip(t[1], lm))
        glead = lead_of[id(g)]
        for gt, gc in g.items():
            if gt == glead:
                continue
            nt = (gt[0], tuple(a + b for a, b in zip(gt[1], q)))
            old = f.get(nt)
            v = red((old or 0) - c * gc)
            if v:
                if old is None:
                    heapq.heappush(heap, (key(nt), nt))
                f[nt] = v
            elif old is not None:
                del f[nt]
    return result


class _Basis:
    """Mutable state of one Buchberger run."""

    def __init__(self, field: Field, order: MonomialOrder, shifts, is_ideal: bool):
        self.field = field
        self.red = field.reducer()
        self.order = order
        self.key = order.cached_term_key()
        self.shifts = shifts
        self.is_ideal = is_ideal
        self.polys: list = []
        self.leads: list = []
        self.lead_of: dict = {}
        self.active: list = []
        self.reducer = _Reducer()
        self.pairs: dict = {}
        self.heap: list = []
        self._seq = itertools.count()

    def lead(self, v):
        return min(v, key=self.key)

    def monic(self, v):
        lt = self.lead(v)
        c = v[lt]
        if c != 1:
            inv = self.field.inv(c)
            red = self.red
            v = {t: red(a * inv) for t, a in v.items()}
        return v, lt

    def term_degree(self, term):
        pos, m = term
        return sum(m) + (self.shifts[pos] if self.shifts else 0)

    def nf(self, v):
        return _normal_form(v, self.reducer, self.key, self.red, self.lead_of)

    def _push_pair(self, i, j, lcm):
        pos = self.leads[i][0]
        self.pairs[(i, j)] = lcm
        deg = self.term_degree((pos, lcm))
        heapq.heappush(self.heap, (deg, self.key((pos, lcm)), next(self._seq), i, j))

    def insert(self, v, lt, make_pairs=True):
        idx = len(self.polys)
        self.polys.append(v)
        self.leads.append(lt)
        self.lead_of[id(v)] = lt
        if make_pairs:
            self._update(idx)
        else:
            self.active.append(idx)
            self.reducer.add(lt, v)
        return idx

    def _disjoint(self, a, b):
        return self.is_ideal and mono_coprime(a, b)

    def _update(self, h):
        """Gebauer-Moeller installation of a new basis element."""
        ph, mh = self.leads[h]
        C = []
        for g in self.active:
            pg, mg = self.leads[g]
            if pg == ph:
                C.append((g, mono_lcm(mh, mg), mg))
        D = []
        for idx, (g1, l1, m1) in enumerate(C):
            if self._disjoint(mh, m1):
                D.append((g1, l1, m1))
                continue
            dominated = False
            for g2, l2, _ in itertools.chain(C[idx + 1:], D):
                if mono_divides(l2, l1):
                    dominated = True
                    break
            if not dominated:
                D.append((g1, l1, m1))
        E = [(g, l) for g, l, m in D if not self._disjoint(mh, m)]
        dead = []
        for (g1, g2), l in self.pairs.items():
            if self.leads[g1][0] != ph or not mono_divides(mh, l):
                continue
            if mono_lcm(self.leads[g1][1], mh) != l and mono_lcm(mh, self.leads[g2][1]) != l:
                dead.append((g1, g2))
        for p in dead:
            del self.pairs[p]
        for g, l in E:
            self._push_pair(g, h, l)
        keep = []
        for g in self.active:
            pg, mg = self.leads[g]
            if pg == ph and mono_divides(mh, mg):
                self.reducer.remove(self.leads[g], self.polys[g])
            else:
                keep.append(g)
        keep.append(h)
        self.active = keep
        self.reducer.add(self.leads[h], self.polys[h])

    def spoly(self, i, j, lcm):
        f, g = self.polys[i], self.polys[j]
        qf = mono_div(lcm, self.leads[i][1])
        qg = mono_div(lcm, self.leads[j][1])
        red = self.red
        s = vec_scale(f, qf, 1, red)
        for (pos, m), c in g.items():
            t = (pos, tuple(a + b for a, b in zip(m, qg)))
            v = red(s.get(t, 0) - c)
            if v:
                s[t] = v
            else:
                s.pop(t, None)
        return s

    def add_generator(self, v):
        v = self.nf(v)
        if v:
            v, lt = self.monic(v)
            self.insert(v, lt)

    def run(self, gens):
        pending = []
        for v in gens:
            if v:
                deg = max(self.term_degree(t) for t in v)
                pending.append((deg, next(self._seq), v))
        heapq.heapify(pending)
        while pending or self.heap:
            # lowest degree first; input generators before pairs on ties
            if pending and (not self.heap or pending[0][0] <= self.heap[0][0]):
                _, _, v = heapq.heappop(pending)
                self.add_generator(v)
                continue
            _, _, _, i, j = heapq.heappop(self.heap)
            lcm = self.pairs.pop((i, j), None)
            if lcm is None:
                continue
            self.add_generator(self.spoly(i, j, lcm))

    def reduced(self):
        """Interreduce the active elements into the reduced basis."""
        out = []
        for idx in self.active:
            v, lt = self.polys[idx], self.leads[idx]
            self.reducer.remove(lt, v)
            tail = {t: c for t, c in v.items() if t != lt}
            tail = self.nf(tail)
            tail[lt] = 1
            self.reducer.add(lt, v)
            out.append((lt, tail))
        out.sort(key=lambda p: self.key(p[0]))
        return out


def _groebner_vecs(gens, field, order, rank, shifts=None, known=()):
    """Reduced Groebner basis of ``gens`` plus an already-reduced basis ``known``.

    ``known`` elements are trusted to form a Groebner basis among
    themselves, so no S-pairs are formed between two of them.
    """
    b = _Basis(field, order, shifts, is_ideal=(rank == 1))
    for v in known:
        v, lt = b.monic(v)
        b.insert(v, lt, make_pairs=False)
    b.run(gens)
    return b.reduced()


# ---------------------------------------------------------------------------
# rings


class QuotientRing:
    """A standard-graded quotient ``k[vars]/(relations)``.

    Relations must be homogeneous. The reduced Groebner basis of the
    relation ideal is cached per monomial order.
    """

    def __init__(self, field: Field = DEFAULT_FIELD, variables: Sequence[str] = ("x",),
                 relations: Iterable = ()):
        self.field = field
        self.poly_ring = PolyRing(field, tuple(variables))
        rels = []
        for r in relations:
            if not isinstance(r, Polynomial) or r.ring != self.poly_ring:
                raise BRError(f"relation {r!r} is not a polynomial over {self.poly_ring}")
            if not r.is_homogeneous():
                raise NonHomogeneousError(f"relation {r} is not homogeneous")
            if r:
                rels.append(r)
        self.relations = tuple(rels)
        self._gb_cache: dict = {}
        if any(sum(m) == 0 for m, _ in (self.ideal_gb()[0:1] or [])):
            raise BRError("relations generate the unit ideal")

    @property
    def variables(self):
        return self.poly_ring.variables

    @property
    def nvars(self):
        return self.poly_ring.nvars

    def ideal_gb(self, order: MonomialOrder = GREVLEX) -> list:
        """Reduced GB of the relation ideal as ``[(lead_monomial, {mono: c})]``."""
        order = order.with_module("top")
        got = self._gb_cache.get(order)
        if got is None:
            gens = [{(0, m): c for m, c in r.terms.items()} for r in self.relations]
            gb = _groebner_vecs(gens, self.field, order, 1)
            got = [(lt[1], {m: c for (_, m), c in v.items()}) for lt, v in gb]
            self._gb_cache[order] = got
        return got

    def relation_vecs(self, positions: Iterable[int], order: MonomialOrder = GREVLEX):
        """``g * e_i`` for every ideal-GB element g and every listed position."""
        gb = self.ideal_gb(order)
        return [{(i, m): c for m, c in g.items()} for i in positions for _, g in gb]

    def reduce(self, p: Polynomial) -> Polynomial:
        """Normal form of ``p`` modulo the relations (grevlex)."""
        if not self.relations:
            return p
        v = {(0, m): c for m, c in p.terms.items()}
        v = _nf_against(v, self.relation_vecs([0]), self.field, GREVLEX)
        return Polynomial(self.poly_ring, {m: c for (_, m), c in v.items()}, _trusted=True)

    @cached_property
    def krull_dim(self) -> int:
        return krull_dim(self)

    @property
    def dim(self) -> int:
        return self.krull_dim

    def __repr__(self):
        rel = ", ".join(str(r) for r in self.relations)
        return f"QuotientRing({self.poly_ring}/({rel}))"

    def __str__(self):
        if not self.relations:
            return str(self.poly_ring)
        return f"{self.poly_ring}/({', '.join(str(r) for r in self.relations)})"


def _nf_against(v, basis_vecs, field, order):
    key = order.cached_term_key()
    red = field.reducer()
    reducer = _Reducer()
    lead_of = {}
    for g in basis_vecs:
        lt = min(g, key=key)
        c = g[lt]
        if c != 1:
            inv = field.inv(c)
            g = {t: red(a * inv) for t, a in g.items()}
        lead_of[id(g)] = lt
        reducer.add(lt, g)
    return _normal_form(v, reducer, key, red, lead_of)


# ---------------------------------------------------------------------------
# free modules


@dataclass(frozen=True)
class FreeModuleElement:
    """A vector of polynomials, one per component of a free module."""

    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise RankMismatch("free-module elements need rank >= 1")
        ring = self.components[0].ring
        if any(c.ring != ring for c in self.components):
            raise RankMismatch("components over different rings")

    @property
    def rank(self) -> int:
        return len(self.components)

    @property
    def poly_ring(self) -> PolyRing:
        return self.components[0].ring

    def to_vec(self) -> dict:
        return {(i, m): c for i, p in enumerate(self.components) for m, c in p.terms.items()}

    @classmethod
    def from_vec(cls, v: dict, rank: int, ring: PolyRing) -> "FreeModuleElement":
        comps = [dict() for _ in range(rank)]
        for (pos, m), c in v.items():
            comps[pos][m] = c
        return cls(tuple(Polynomial(ring, t, _trusted=True) for t in comps))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other):
        return FreeModuleElement(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other):
        return FreeModuleElement(tuple(a - b for a, b in zip(self.components, other.components)))

    def __rmul__(self, p):
        return FreeModuleElement(tuple(p * c for c in self.components))

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.components) + "]"


def _as_vec(e, rank=None) -> dict:
    if isinstance(e, FreeModuleElement):
        if rank is not None and e.rank != rank:
            raise RankMismatch(f"element of rank {e.rank}, expected {rank}")
        return e.to_vec()
    if isinstance(e, Polynomial):
        if rank not in (None, 1):
            raise RankMismatch(f"polynomial given where rank {rank} was expected")
        return {(0, m): c for m, c in e.terms.items()}
    return dict(e)


class GroebnerBasis:
    """Reduced Groebner basis of a submodule of A^rank (relations adjoined)."""

    def __init__(self, ring: QuotientRing, rank: int, order: MonomialOrder, basis, shifts=None):
        self.ring = ring
        self.rank = rank
        self.order = order
        self.shifts = shifts
        self._basis = basis  # list of (lead_term, monic vec)
        self._reducer = None

    @property
    def vecs(self) -> list:
        return [v for _, v in self._basis]

    @property
    def leading_terms(self) -> list:
        return [lt for lt, _ in self._basis]

    @property
    def generators(self) -> list:
        return [FreeModuleElement.from_vec(v, self.rank, self.ring.poly_ring) for v in self.vecs]

    def __len__(self):
        return len(self._basis)

    def _index(self):
        if self._reducer is None:
            self._reducer = _Reducer()
            self._lead_of = {}
            for lt, v in self._basis:
                self._reducer.add(lt, v)
                self._lead_of[id(v)] = lt
        return self._reducer

    def reduce_vec(self, v: dict) -> dict:
        reducer = self._index()
        return _normal_form(v, reducer, self.order.cached_term_key(),
                            self.ring.field.reducer(), self._lead_of)

    def normal_form(self, e) -> FreeModuleElement:
        v = self.reduce_vec(_as_vec(e, self.rank))
        return FreeModuleElement.from_vec(v, self.rank, self.ring.poly_ring)

    def contains(self, e) -> bool:
        return not self.reduce_vec(_as_vec(e, self.rank))

    def standard_monomials(self):
        return standard_monomials(self)

    def is_reduced(self) -> bool:
        """No leading term divides any term of another basis element."""
        for i, (lt, v) in enumerate(self._basis):
            for j, (lt2, w) in enumerate(self._basis):
                if i == j:
                    continue
                for pos, m in w:
                    if pos == lt[0] and mono_divides(lt[1], m):
                        return False
        return True


def buchberger(gens, ring: QuotientRing, order: MonomialOrder = GREVLEX, rank: int | None = None,
               shifts=None, relation_positions=None) -> GroebnerBasis:
    """Reduced Groebner basis of the submodule of A^rank spanned by ``gens``.

    ``gens`` may be :class:`FreeModuleElement`, :class:`Polynomial` (rank 1)
    or raw vec dicts. The relation ideal of ``ring`` is adjoined on every
    component unless ``relation_positions`` restricts it.
    """
    gens = list(gens)
    if rank is None:
        ranks = {g.rank for g in gens if isinstance(g, FreeModuleElement)}
        if len(ranks) > 1:
            raise RankMismatch(f"generators of mixed ranks {sorted(ranks)}")
        rank = ranks.pop() if ranks else 1
    vecs = [_as_vec(g, rank) for g in gens]
    if relation_positions is None:
        relation_positions = range(rank)
    known = ring.relation_vecs(relation_positions, order)
    basis = _groebner_vecs(vecs, ring.field, order, rank, shifts, known)
    return GroebnerBasis(ring, rank, order, basis, shifts)


def normal_form(e, gb: GroebnerBasis) -> FreeModuleElement:
    return gb.normal_form(e)


# ---------------------------------------------------------------------------
# lengths and dimension


def _count_standard(leads: list, nvars: int):
    """Number of monomials outside the monomial ideal spanned by ``leads``."""
    if any(sum(m) == 0 for m in leads):
        return 0
    for j in range(nvars):
        if not any(m[j] == sum(m) for m in leads):
            return INFINITE
    level = {(0,) * nvars}
    total = 0
    while level:
        total += len(level)
        nxt = set()
        for m in level:
            for j in range(nvars):
                c = m[:j] + (m[j] + 1,) + m[j + 1:]
                if c not in nxt and not any(all(a <= b for a, b in zip(l, c)) for l in leads):
                    nxt.add(c)
        level = nxt
    return total


def standard_monomials(gb: GroebnerBasis, rank: int | None = None):
    """k-dimension of A^rank / submodule, or ``INFINITE``."""
    rank = gb.rank if rank is None else rank
    nvars = gb.ring.nvars
    by_pos = {i: [] for i in range(rank)}
    for pos, m in gb.leading_terms:
        by_pos.setdefault(pos, []).append(m)
    total = 0
    for i in range(rank):
        c = _count_standard(by_pos[i], nvars)
        if c == INFINITE:
            return INFINITE
        total += c
    return total


def module_length(gens, rank: int, ring: QuotientRing, order: MonomialOrder = GREVLEX):
    """Length of A^rank modulo the span of ``gens``."""
    return standard_monomials(buchberger(gens, ring, order, rank=rank))


def krull_dim(ring: QuotientRing) -> int:
    """Largest set of variables containing the support of no leading monomial."""
    leads = [m for m, _ in ring.ideal_gb()]
    n = ring.nvars
    supports = [frozenset(j for j in range(n) if m[j]) for m in leads]
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return -1


# ---------------------------------------------------------------------------
# minimal generators


def minimal_generators(gens, ring: QuotientRing, rank: int | None = None, shifts=None) -> list:
    """A minimal homogeneous generating subset of ``gens`` (graded Nakayama).

    Generators are scanned by ascending degree; one is kept iff it does not
    already lie in the span of the kept ones plus the relations.
    """
    gens = list(gens)
    if rank is None:
        ranks = {g.rank for g in gens if isinstance(g, FreeModuleElement)}
        rank = ranks.pop() if ranks else 1
    vecs = []
    for i, g in enumerate(gens):
        v = _as_vec(g, rank)
        if not v:
            continue
        if not vec_is_homogeneous(v, shifts):
            raise NonHomogeneousError(f"generator {i} is not homogeneous")
        vecs.append((vec_degree(v, shifts), i, v))
    vecs.sort(key=lambda t: (t[0], t[1]))
    kept = []
    gb = buchberger([], ring, rank=rank, shifts=shifts)
    for _, i, v in vecs:
        if gb.reduce_vec(v):
            kept.append(i)
            gb = buchberger([_as_vec(gens[k], rank) for k in kept], ring, rank=rank, shifts=shifts)
    return [gens[i] for i in sorted(kept)]


def min_generators(gens, ring: QuotientRing, rank: int | None = None, shifts=None) -> int:
    """Minimal number of generators of the submodule spanned by ``gens``."""
    return len(minimal_generators(gens, ring, rank, shifts))


# ---------------------------------------------------------------------------
# syzygies, lifting, subquotients


def _columns_of(matrix) -> tuple[list, int]:
    """Accept a row-major list of Polynomial rows; return (column vecs, nrows)."""
    rows = [list(r) for r in matrix]
    s = len(rows)
    m = len(rows[0]) if rows else 0
    if any(len(r) != m for r in rows):
        raise RankMismatch("ragged matrix")
    cols = [{(i, mono): c for i in range(s) for mono, c in rows[i][j].terms.items()}
            for j in range(m)]
    return cols, s


def _elimination_gb(cols: list, s: int, ring: QuotientRing, shifts=None):
    """GB of the graph module spanned by (c_j ; e_j) in R^{s+m} under POT.

    Relations of ``ring`` are adjoined on the first ``s`` positions only.
    """
    m = len(cols)
    shifts = list(shifts) if shifts else [0] * s
    col_shifts = []
    aug = []
    zero = (0,) * ring.nvars
    for j, c in enumerate(cols):
        deg = vec_degree(c, shifts)
        col_shifts.append(deg if deg is not None else 0)
        v = dict(c)
        v[(s + j, zero)] = ring.field.one()
        aug.append(v)
    return buchberger(aug, ring, POT, rank=s + m, shifts=shifts + col_shifts,
                      relation_positions=range(s))


def _syzygy_vecs(cols: list, s: int, ring: QuotientRing, shifts=None, gb=None) -> list:
    gb = gb or _elimination_gb(cols, s, ring, shifts)
    rel = ring.relation_vecs(range(len(cols)))
    out = []
    for lt, v in gb._basis:
        if lt[0] < s:
            continue
        w = vec_shift_positions(v, -s)
        if rel:
            w = _nf_against(w, rel, ring.field, GREVLEX)
        if w:
            out.append(w)
    return out


def syzygies(matrix, ring: QuotientRing, shifts=None) -> list:
    """Generators of the kernel of A^m -> A^s given by an s x m matrix.

    ``matrix`` is row-major (list of rows of Polynomial). Returns an
    m x q matrix, row-major, whose columns generate the kernel.
    """
    cols, s = _columns_of(matrix)
    m = len(cols)
    syz = _syzygy_vecs(cols, s, ring, shifts)
    pr = ring.poly_ring
    return [[Polynomial(pr, {mono: c for (pos, mono), c in v.items() if pos == i}, _trusted=True)
             for v in syz] for i in range(m)]


def lift(vectors: list, cols: list, s: int, ring: QuotientRing, gb=None, shifts=None) -> list:
    """Express each vec in ``vectors`` as an A-combination of ``cols``.

    Raises :class:`BRError` when a vector is not in the span.
    """
    gb = gb or _elimination_gb(cols, s, ring, shifts)
    red = ring.field.reducer()
    out = []
    for v in vectors:
        r = gb.reduce_vec(v)
        if any(pos < s for pos, _ in r):
            raise BRError("vector does not lie in the submodule")
        out.append({(pos - s, m): red(-c) for (pos, m), c in r.items()})
    return out


def subquotient_length(kernel_cols: list, image_cols: list, s: int, ring: QuotientRing, shifts=None):
    """Length of <kernel_cols> / <image_cols> inside A^s (image must lie in kernel)."""
    q = len(kernel_cols)
    if q == 0:
        return 0
    gb = _elimination_gb(kernel_cols, s, ring, shifts)
    relations = _syzygy_vecs(kernel_cols, s, ring, gb=gb)
    lifts = lift(image_cols, kernel_cols, s, ring, gb=gb)
    return module_length(relations + lifts, q, ring)
