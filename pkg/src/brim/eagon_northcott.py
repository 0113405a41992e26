"""The Eagon-Northcott complex of an r x n matrix and its homology.

K_0 = A and, for p >= 1, K_p has basis e_J (x) u^alpha with |J| = r + p - 1
and |alpha| = p - 1, alpha in N^r. The divided-power dual basis elements
u^alpha only ever get an exponent decremented, so exponent tuples are all
that is stored.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import BRError
from .groebner import _syzygy_vecs, module_length, subquotient_length
from .modules import ParameterModule, _exponents, determinant
from .poly import GREVLEX, binomial


@dataclass
class ENComplex:
    pm: ParameterModule
    bases: list  # bases[p] = list of (J, alpha) labels; bases[0] = [((), ())]
    differentials: list  # differentials[p-1] = row-major matrix of d_p : K_p -> K_{p-1}

    @property
    def length(self) -> int:
        return len(self.differentials)

    @property
    def ranks(self) -> list:
        return [len(b) for b in self.bases]

    def d(self, p: int) -> list:
        return self.differentials[p - 1]

    def column_vecs(self, p: int) -> list:
        mat = self.d(p)
        rows, cols = len(mat), len(mat[0]) if mat else 0
        return [{(i, m): c for i in range(rows) for m, c in mat[i][j].terms.items()}
                for j in range(cols)]


@dataclass
class HomologyReport:
    lengths: list
    euler_char: int


def en_rank(n: int, r: int, p: int) -> int:
    if p == 0:
        return 1
    return binomial(n, r + p - 1) * binomial(p - 1 + r - 1, r - 1)


def _matmul(a, b, ring) -> list:
    zero = ring.poly_ring.zero()
    inner = len(b)
    out = []
    for row in a:
        new = []
        for j in range(len(b[0]) if b else 0):
            acc = zero
            for k in range(inner):
                if not row[k].is_zero() and not b[k][j].is_zero():
                    acc = acc + row[k] * b[k][j]
            new.append(ring.reduce(acc))
        out.append(new)
    return out


def build_en_complex(pm: ParameterModule, check: bool = True) -> ENComplex:
    """Eagon-Northcott complex of the presentation matrix of ``pm``.

    d_1(e_J) is the minor on columns J; for p >= 2,
    d_p(e_J u^a) = sum_{k, i: a_i > 0} (-1)^k c_{i, J[k]} e_{J - J[k]} u^{a - eps_i}.
    """
    ring, r, n = pm.ring, pm.r, pm.n
    zero = ring.poly_ring.zero()
    length = n - r + 1
    bases = [[((), ())]]
    for p in range(1, length + 1):
        bases.append([(J, a) for J in itertools.combinations(range(n), r + p - 1)
                      for a in sorted(_exponents(r, p - 1), key=GREVLEX.mono_key)])
    c = pm.matrix
    diffs = []
    d1 = [[ring.reduce(determinant([[c[i][j] for j in J] for i in range(r)])) for J, _ in bases[1]]]
    diffs.append(d1)
    for p in range(2, length + 1):
        target = {lab: k for k, lab in enumerate(bases[p - 1])}
        mat = [[zero] * len(bases[p]) for _ in bases[p - 1]]
        for col, (J, a) in enumerate(bases[p]):
            for k, j in enumerate(J):
                rest = J[:k] + J[k + 1:]
                for i in range(r):
                    if a[i] == 0 or c[i][j].is_zero():
                        continue
                    a2 = a[:i] + (a[i] - 1,) + a[i + 1:]
                    row = target[(rest, a2)]
                    entry = c[i][j] if k % 2 == 0 else -c[i][j]
                    mat[row][col] = mat[row][col] + entry
        diffs.append(mat)
    cx = ENComplex(pm, bases, diffs)
    if check and not is_complex(cx):
        raise BRError("Eagon-Northcott construction failed: d^2 != 0")
    return cx


def is_complex(cx: ENComplex) -> bool:
    """Exact check that every composite d_p d_{p+1} vanishes in A."""
    ring = cx.pm.ring
    for p in range(1, cx.length):
        prod = _matmul(cx.d(p), cx.d(p + 1), ring)
        if any(not e.is_zero() for row in prod for e in row):
            return False
    return True


def homology_lengths(cx: ENComplex) -> HomologyReport:
    ring = cx.pm.ring
    lengths = [module_length(cx.column_vecs(1), 1, ring)]
    for p in range(1, cx.length + 1):
        rank_below = cx.ranks[p - 1]
        kernel = _syzygy_vecs(cx.column_vecs(p), rank_below, ring)
        image = cx.column_vecs(p + 1) if p < cx.length else []
        lengths.append(subquotient_length(kernel, image, cx.ranks[p], ring))
    if any(not isinstance(x, int) for x in lengths):
        raise BRError(f"Eagon-Northcott homology has infinite length: {lengths}")
    chi = sum((-1) ** p * x for p, x in enumerate(lengths))
    return HomologyReport(lengths, chi)


def br_multiplicity_via_chi(pm: ParameterModule) -> int:
    """Buchsbaum-Rim multiplicity as the Euler characteristic of K(N)."""
    return homology_lengths(build_en_complex(pm)).euler_char
