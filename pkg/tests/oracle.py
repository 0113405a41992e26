"""Brute-force reference computations that share no code with brim's engine.

Everything here is plain linear algebra over GF(P): graded pieces of a
finitely generated graded module are written out degree by degree as
Macaulay matrices and their ranks are taken by Gaussian elimination. The
symmetric-algebra products, maximal minors and row weights are rebuilt
from scratch as well.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

P = 32003


def to_int_poly(poly, p=P) -> dict:
    """Coefficient dict of a brim Polynomial (GF or QQ) as residues mod p."""
    out = {}
    for m, c in poly.terms.items():
        if isinstance(c, Fraction):
            c = c.numerator * pow(c.denominator, -1, p)
        c %= p
        if c:
            out[m] = c
    return out


def monomials(nvars: int, deg: int) -> list:
    if deg < 0:
        return []
    out = []
    for bars in itertools.combinations(range(deg + nvars - 1), nvars - 1):
        prev, e = -1, []
        for b in bars:
            e.append(b - prev - 1)
            prev = b
        e.append(deg + nvars - 2 - prev)
        out.append(tuple(e))
    return out


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mul(f: dict, g: dict, p=P) -> dict:
    out = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            m = _add(m1, m2)
            out[m] = (out.get(m, 0) + c1 * c2) % p
    return {m: c for m, c in out.items() if c}


def rank_mod_p(rows, p=P) -> int:
    """Rank of sparse rows (dicts column -> coefficient)."""
    pivots = {}
    rank = 0
    for row in rows:
        row = {k: v % p for k, v in row.items() if v % p}
        while row:
            col = min(row)
            if col not in pivots:
                inv = pow(row[col], -1, p)
                pivots[col] = {k: v * inv % p for k, v in row.items()}
                rank += 1
                break
            piv = pivots[col]
            f = row[col]
            for k, v in piv.items():
                nv = (row.get(k, 0) - f * v) % p
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return rank


def graded_quotient_length(nvars, ambient_weights, gens, relations, p=P, limit=200):
    """dim_k of (+_i k[x](-w_i)) / (gens + relations * each component).

    ``gens`` are dicts (i, monomial) -> coefficient, homogeneous for the
    weight deg(monomial) + w_i. Returns None if the quotient has not died
    out by weight ``limit``.
    """
    def weight(v):
        (i, m) = next(iter(v))
        return sum(m) + ambient_weights[i]

    pieces = [g for g in gens if g]
    for f in relations:
        for i in range(len(ambient_weights)):
            pieces.append({(i, m): c for m, c in f.items()})
    weighted = [(weight(g), g) for g in pieces]
    lo = min(ambient_weights)
    hi = max(ambient_weights)
    total = 0
    for delta in range(lo, limit):
        cols = {}
        for i, w in enumerate(ambient_weights):
            for m in monomials(nvars, delta - w):
                cols[(i, m)] = len(cols)
        rows = []
        for w, g in weighted:
            for u in monomials(nvars, delta - w):
                rows.append({cols[(i, _add(m, u))]: c for (i, m), c in g.items()})
        q = len(cols) - rank_mod_p(rows, p)
        total += q
        if q == 0 and delta >= hi:
            return total
    return None


def in_span(nvars, rank, gens, relations, element, p=P) -> bool:
    """Membership of a homogeneous element of k[x]^rank in the graded span."""
    def deg(v):
        return sum(next(iter(v))[1])
    if not element:
        return True
    delta = deg(element)
    cols = {}
    for i in range(rank):
        for m in monomials(nvars, delta):
            cols[(i, m)] = len(cols)
    pieces = [g for g in gens if g]
    for f in relations:
        for i in range(rank):
            pieces.append({(i, m): c for m, c in f.items()})
    rows = []
    for g in pieces:
        for u in monomials(nvars, delta - deg(g)):
            rows.append({cols[(i, _add(m, u))]: c for (i, m), c in g.items()})
    before = rank_mod_p(rows, p)
    after = rank_mod_p(rows + [{cols[k]: c for k, c in element.items()}], p)
    return before == after


def row_weights(matrix) -> list:
    """Integer weights w_i with deg(c_ij) + w_i independent of i in each column."""
    r, n = len(matrix), len(matrix[0])
    w = [None] * r
    for start in range(r):
        if w[start] is not None:
            continue
        w[start] = 0
        changed = True
        while changed:
            changed = False
            for j in range(n):
                known = [(i, sum(next(iter(matrix[i][j]))) + w[i])
                         for i in range(r) if matrix[i][j] and w[i] is not None]
                if not known:
                    continue
                target = known[0][1]
                for i in range(r):
                    if matrix[i][j] and w[i] is None:
                        w[i] = target - sum(next(iter(matrix[i][j])))
                        changed = True
    low = min(w)
    return [x - low for x in w]


def _det(rows, p=P) -> dict:
    """Leibniz expansion; rows of polynomial dicts."""
    k = len(rows)
    out = {}
    for perm in itertools.permutations(range(k)):
        inversions = sum(1 for a in range(k) for b in range(a + 1, k) if perm[a] > perm[b])
        prod = None
        for i in range(k):
            e = rows[i][perm[i]]
            if not e:
                prod = {}
                break
            prod = e if prod is None else mul(prod, e, p)
        if not prod:
            continue
        sign = -1 if inversions % 2 else 1
        for m, c in prod.items():
            out[m] = (out.get(m, 0) + sign * c) % p
    return {m: c for m, c in out.items() if c}


def maximal_minors(matrix, p=P) -> list:
    r, n = len(matrix), len(matrix[0])
    out = []
    for J in itertools.combinations(range(n), r):
        d = _det([[matrix[i][j] for j in J] for i in range(r)], p)
        if d:
            out.append(d)
    return out


def lam(nvars, relations, matrix, nu, t, p=P):
    """lambda(nu, t) = length of S_{nu+t} / N^{nu+1} S_{t-1} (t = 0: I(N) N^nu).

    ``matrix`` is r rows of n coefficient dicts over k[x]; ``relations`` are
    coefficient dicts. S-elements are dicts keyed by (t-exponent, x-monomial).
    """
    r, n = len(matrix), len(matrix[0])
    w = row_weights(matrix)
    zero_x = (0,) * nvars
    cols = []
    for j in range(n):
        g = {}
        for i in range(r):
            e = tuple(int(k == i) for k in range(r))
            for m, c in matrix[i][j].items():
                g[(e, m)] = c
        cols.append(g)

    def smul(a, b):
        out = {}
        for (a1, m1), c1 in a.items():
            for (a2, m2), c2 in b.items():
                key = (_add(a1, a2), _add(m1, m2))
                out[key] = (out.get(key, 0) + c1 * c2) % p
        return {k: c for k, c in out.items() if c}

    def power_product(J):
        acc = {((0,) * r, zero_x): 1}
        for j in J:
            acc = smul(acc, cols[j])
        return acc

    if t >= 1:
        degree = nu + t
        seeds = [power_product(J) for J in itertools.combinations_with_replacement(range(n), nu + 1)]
        fillers = [{(b, zero_x): 1} for b in monomials(r, t - 1)]
    else:
        degree = nu
        seeds = [power_product(J) for J in itertools.combinations_with_replacement(range(n), nu)]
        fillers = [{((0,) * r, m): c for m, c in delta.items()} for delta in maximal_minors(matrix, p)]
    basis = monomials(r, degree)
    index = {a: k for k, a in enumerate(basis)}
    ambient = [sum(a * s for a, s in zip(alpha, w)) for alpha in basis]
    gens = []
    for s in seeds:
        for f in fillers:
            prod = smul(s, f)
            gens.append({(index[a], m): c for (a, m), c in prod.items()})
    return graded_quotient_length(nvars, ambient, gens, relations, p)


def fit_by_differences(values: list, D: int) -> list:
    """e_0..e_D with values[nu] = sum (-1)^i e_i C(nu + D - i, D - i) at the tail.

    Uses iterated backward differences at the last table entry: the
    (D - k)-th difference equals sum_{j <= k} (-1)^j e_j C(nu + k - j, k - j).
    """
    nu = len(values) - 1
    diffs = [list(values)]
    for _ in range(D):
        prev = diffs[-1]
        diffs.append([b - a for a, b in zip(prev, prev[1:])])
    e = []
    for k in range(D + 1):
        level = diffs[D - k][-1]
        known = sum((-1) ** j * e[j] * comb(nu + k - j, k - j) for j in range(k))
        e.append((level - known) * (-1) ** k)
    return e
