"""Parameter modules and graded pieces of the symmetric algebra.

A parameter module N in F = A^r is given by an r x n matrix whose columns
generate N. Its "powers" N^{v+1} S_{t-1} live in the degree v+t piece of
S = A[t_1..t_r], which is flattened to a free A-module with one component
per t-monomial (see :func:`sym_power_basis`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .errors import (
    BRError,
    InfiniteColength,
    NonHomogeneousError,
    NotInMaximalIdeal,
    NotMinimal,
    WrongColumnCount,
    ZeroDimensionalRing,
)
from .groebner import (
    INFINITE,
    QuotientRing,
    _nf_against,
    buchberger,
    min_generators,
    module_length,
    standard_monomials,
    subquotient_length,
)
from .poly import GREVLEX, Polynomial, binomial


def determinant(rows) -> Polynomial:
    """Laplace expansion along the first row; fine for the small r used here."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    ring = rows[0][0].ring
    total = ring.zero()
    for j, a in enumerate(rows[0]):
        if a.is_zero():
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _row_shifts(matrix) -> list:
    """Degree shifts s_i making every column homogeneous.

    Column j is homogeneous when deg(c_ij) + s_i is the same for all rows i
    with c_ij != 0. Shifts are normalised to start at 0 on each connected
    block of the row/column incidence graph.
    """
    r = len(matrix)
    n = len(matrix[0]) if r else 0
    for i in range(r):
        for j in range(n):
            if not matrix[i][j].is_homogeneous():
                raise NonHomogeneousError(f"entry ({i + 1},{j + 1}) = {matrix[i][j]} is not homogeneous")
    shifts = [None] * r
    col_deg = [None] * n
    for start in range(r):
        if shifts[start] is not None:
            continue
        shifts[start] = 0
        block, stack = [start], [("row", start)]
        while stack:
            kind, idx = stack.pop()
            if kind == "row":
                for j in range(n):
                    e = matrix[idx][j]
                    if e.is_zero():
                        continue
                    want = e.degree() + shifts[idx]
                    if col_deg[j] is None:
                        col_deg[j] = want
                        stack.append(("col", j))
                    elif col_deg[j] != want:
                        raise NonHomogeneousError(f"column {j + 1} cannot be made homogeneous")
            else:
                for i in range(r):
                    e = matrix[i][idx]
                    if e.is_zero():
                        continue
                    want = col_deg[idx] - e.degree()
                    if shifts[i] is None:
                        shifts[i] = want
                        block.append(i)
                        stack.append(("row", i))
                    elif shifts[i] != want:
                        raise NonHomogeneousError(f"column {idx + 1} cannot be made homogeneous")
        low = min(shifts[i] for i in block)
        for i in block:
            shifts[i] -= low
    return shifts


@dataclass(frozen=True, eq=False)
class ParameterModule:
    """A validated parameter module; build it with :func:`validate_parameter_module`."""

    ring: QuotientRing
    r: int
    matrix: tuple  # r rows of n Polynomials, reduced modulo the relations
    shifts: tuple
    conditions: dict = dc_field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.matrix[0])

    @property
    def d(self) -> int:
        return self.ring.krull_dim

    @property
    def columns(self) -> list:
        """Columns as vec dicts in F = A^r."""
        return [{(i, m): c for i in range(self.r) for m, c in self.matrix[i][j].terms.items()}
                for j in range(self.n)]

    def column_vector(self, j) -> tuple:
        return tuple(self.matrix[i][j] for i in range(self.r))

    @cached_property
    def colength(self) -> int:
        return colength(self)

    @cached_property
    def fitting_ideal(self) -> list:
        return fitting_ideal(self)

    def __str__(self):
        rows = "; ".join("[" + ", ".join(str(p) for p in row) + "]" for row in self.matrix)
        return f"N = [{rows}] over {self.ring}"


def _check_conditions(ring: QuotientRing, r: int, matrix, shifts) -> dict:
    d = ring.krull_dim
    n = len(matrix[0])
    cols = [{(i, m): c for i in range(r) for m, c in matrix[i][j].terms.items()} for j in range(n)]
    in_max = all(p.is_zero() or p.degree() > 0 for row in matrix for p in row)
    length = module_length(cols, r, ring)
    mu = min_generators(cols, ring, rank=r, shifts=shifts)
    return {
        "column_count": n == d + r - 1,
        "in_maximal_ideal": in_max,
        "finite_colength": length != INFINITE,
        "minimal": mu == d + r - 1,
        "colength": None if length == INFINITE else length,
        "mu": mu,
        "d": d,
        "n": n,
    }


def validate_parameter_module(ring: QuotientRing, r: int, matrix) -> ParameterModule:
    """Check the three parameter-module conditions and the column count.

    ``matrix`` is a list of ``r`` rows; entries may be Polynomials over the
    ambient ring or plain ints. Raises the first failing condition in the
    order: entries in m, finite colength, mu(N) = d + r - 1, n = d + r - 1.
    Finite colength already forces mu(N) >= d + r - 1, so NotMinimal means
    too many generators, and WrongColumnCount means redundant columns.
    """
    rows = [list(row) for row in matrix]
    if len(rows) != r:
        raise WrongColumnCount(f"matrix has {len(rows)} rows but rank is {r}")
    if not rows or not rows[0]:
        raise WrongColumnCount("matrix has no columns")
    if any(len(row) != len(rows[0]) for row in rows):
        raise WrongColumnCount("ragged matrix")
    pr = ring.poly_ring
    rows = [[ring.reduce(e if isinstance(e, Polynomial) else pr.const(e)) for e in row] for row in rows]
    shifts = _row_shifts(rows)
    cond = _check_conditions(ring, r, rows, shifts)
    n, d = cond["n"], cond["d"]
    if d == 0:
        raise ZeroDimensionalRing("the base ring has Krull dimension 0")
    if not cond["in_maximal_ideal"]:
        raise NotInMaximalIdeal("some matrix entry is a unit: N is not contained in mF")
    if not cond["finite_colength"]:
        raise InfiniteColength("F/N does not have finite length")
    if not cond["minimal"]:
        raise NotMinimal(f"N needs {cond['mu']} generators, not d + r - 1 = {d + r - 1}")
    if not cond["column_count"]:
        raise WrongColumnCount(f"n = {n} columns but d + r - 1 = {d + r - 1}")
    return ParameterModule(ring, r, tuple(tuple(row) for row in rows), tuple(shifts), cond)


def colength(pm: ParameterModule) -> int:
    """Length of F/N."""
    return module_length(pm.columns, pm.r, pm.ring)


def fitting_ideal(pm: ParameterModule) -> list:
    """All maximal minors of the matrix, columns taken in increasing order."""
    out = []
    for J in itertools.combinations(range(pm.n), pm.r):
        sub = [[pm.matrix[i][j] for j in J] for i in range(pm.r)]
        out.append(pm.ring.reduce(determinant(sub)))
    return out


# ---------------------------------------------------------------------------
# symmetric powers


@dataclass(frozen=True)
class SymPowerBasis:
    r: int
    m: int
    basis: tuple

    def index(self) -> dict:
        return {a: i for i, a in enumerate(self.basis)}

    def __len__(self):
        return len(self.basis)


def _exponents(r: int, m: int):
    if r == 1:
        yield (m,)
        return
    for a in range(m, -1, -1):
        for rest in _exponents(r - 1, m - a):
            yield (a,) + rest


def sym_power_basis(r: int, m: int) -> SymPowerBasis:
    """t-monomials of degree m in r variables, grevlex-descending."""
    if r < 1 or m < 0:
        raise ValueError("need r >= 1 and m >= 0")
    basis = sorted(_exponents(r, m), key=GREVLEX.mono_key)
    return SymPowerBasis(r, m, tuple(basis))


@dataclass
class GradedPiecePresentation:
    """Generators of N^{v+1} S_{t-1} inside S_{v+t} = A^{ambient_rank}."""

    nu: int
    t: int
    basis: SymPowerBasis
    generators: list  # vec dicts keyed by (basis index, monomial)
    shifts: list

    @property
    def ambient_rank(self) -> int:
        return len(self.basis)


def _s_mul(a: dict, b: dict, red) -> dict:
    """Product in S of elements stored as {(alpha, mono): c}."""
    out: dict = {}
    for (al, m1), c1 in a.items():
        for (be, m2), c2 in b.items():
            k = (tuple(x + y for x, y in zip(al, be)), tuple(x + y for x, y in zip(m1, m2)))
            out[k] = out.get(k, 0) + c1 * c2
    return {k: v for k, v in ((k, red(v)) for k, v in out.items()) if v}


def _s_reduce(a: dict, ring: QuotientRing) -> dict:
    """Reduce every A-coefficient modulo the relations."""
    if not ring.relations:
        return a
    alphas = sorted({al for al, _ in a})
    pos = {al: i for i, al in enumerate(alphas)}
    v = {(pos[al], m): c for (al, m), c in a.items()}
    v = _nf_against(v, ring.relation_vecs(range(len(alphas))), ring.field, GREVLEX)
    return {(alphas[p], m): c for (p, m), c in v.items()}


class _SymProducts:
    """Memoised products g_{j_1} ... g_{j_k} over non-decreasing index tuples."""

    def __init__(self, pm: ParameterModule):
        self.pm = pm
        self.red = pm.ring.field.reducer()
        r = pm.r
        self.cols = []
        for j in range(pm.n):
            g = {}
            for i in range(r):
                e = tuple(1 if k == i else 0 for k in range(r))
                for m, c in pm.matrix[i][j].terms.items():
                    g[(e, m)] = c
            self.cols.append(g)
        zero_t = (0,) * r
        zero_m = (0,) * pm.ring.nvars
        self.cache = {(): {(zero_t, zero_m): pm.ring.field.one()}}

    def get(self, J: tuple) -> dict:
        got = self.cache.get(J)
        if got is None:
            got = _s_reduce(_s_mul(self.get(J[:-1]), self.cols[J[-1]], self.red), self.pm.ring)
            self.cache[J] = got
        return got


def _piece_shifts(pm: ParameterModule, basis: SymPowerBasis) -> list:
    return [sum(a * s for a, s in zip(alpha, pm.shifts)) for alpha in basis.basis]


def graded_piece(pm: ParameterModule, nu: int, t: int, products: _SymProducts | None = None
                 ) -> GradedPiecePresentation:
    """Generators of N^{nu+1} S_{t-1} in S_{nu+t}; for t = 0 this is I(N) N^nu in S_nu."""
    if nu < 0 or t < 0:
        raise ValueError("need nu >= 0 and t >= 0")
    products = products or _SymProducts(pm)
    r, n = pm.r, pm.n
    gens = []
    if t >= 1:
        basis = sym_power_basis(r, nu + t)
        idx = basis.index()
        ws = sym_power_basis(r, t - 1).basis
        for J in itertools.combinations_with_replacement(range(n), nu + 1):
            prod = products.get(J)
            for w in ws:
                gens.append({(idx[tuple(a + b for a, b in zip(al, w))], m): c
                             for (al, m), c in prod.items()})
    else:
        basis = sym_power_basis(r, nu)
        idx = basis.index()
        zero_t = (0,) * r
        minors = [{(zero_t, m): c for m, c in delta.terms.items()} for delta in pm.fitting_ideal]
        for delta in minors:
            for J in itertools.combinations_with_replacement(range(n), nu):
                prod = _s_mul(delta, products.get(J), products.red)
                prod = _s_reduce(prod, pm.ring)
                gens.append({(idx[al], m): c for (al, m), c in prod.items()})
    return GradedPiecePresentation(nu, t, basis, gens, _piece_shifts(pm, basis))


def generator_count(n: int, r: int, nu: int, t: int) -> int:
    if t >= 1:
        return binomial(n + nu, nu + 1) * binomial(t - 1 + r - 1, r - 1)
    return binomial(n, r) * binomial(n + nu - 1, nu)


def graded_piece_length(pm: ParameterModule, nu: int, t: int, order=GREVLEX,
                        products: _SymProducts | None = None) -> int:
    """lambda(nu, t) = length of S_{nu+t} / N^{nu+1} S_{t-1}."""
    piece = graded_piece(pm, nu, t, products)
    gb = buchberger(piece.generators, pm.ring, order, rank=piece.ambient_rank, shifts=piece.shifts)
    length = standard_monomials(gb)
    if length == INFINITE:
        raise BRError(f"lambda({nu},{t}) is infinite: the module was not a parameter module")
    return length


def piece_quotient_length(pm: ParameterModule, nu: int, t: int) -> int:
    """Length of N^nu S_t / N^{nu+1} S_{t-1} computed directly as a subquotient (nu >= 1)."""
    if nu < 1:
        raise ValueError("need nu >= 1")
    products = _SymProducts(pm)
    big = graded_piece(pm, nu - 1, t + 1, products)
    small = graded_piece(pm, nu, t, products)
    return subquotient_length(big.generators, small.generators, big.ambient_rank, pm.ring, big.shifts)


def ideal_power_colength(ring: QuotientRing, gens, power: int) -> int:
    """Length of A / Q^power for an ideal Q given by polynomial generators.

    Builds Q^power from ordinary polynomial products, independently of the
    symmetric-algebra expansion used by :func:`graded_piece_length`.
    """
    gens = [g for g in gens if not g.is_zero()]
    powers = []
    for J in itertools.combinations_with_replacement(range(len(gens)), power):
        p = ring.poly_ring.one()
        for j in J:
            p = p * gens[j]
        powers.append(ring.reduce(p))
    return module_length(powers, 1, ring)
