"""Minimal graded free resolutions and the depth-based Cohen-Macaulay test.

The resolution is of k[x]/I over the ambient polynomial ring, so that the
Auslander-Buchsbaum formula gives depth A = D - pd(A).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import BudgetExceeded
from .groebner import (
    QuotientRing,
    _syzygy_vecs,
    minimal_generators,
    vec_degree,
)
from .poly import Polynomial


@dataclass
class FreeResolution:
    """``differentials[i]`` is the row-major matrix of F_{i+1} -> F_i."""

    differentials: list
    degrees: list  # degrees[i] = generator degrees of F_i
    nvars: int

    @property
    def length(self) -> int:
        return len(self.differentials)

    pd = length

    @property
    def betti(self) -> list:
        """Graded Betti numbers as one ``{degree: count}`` per homological index."""
        return [dict(sorted(Counter(d).items())) for d in self.degrees]

    @property
    def depth(self) -> int:
        return self.nvars - self.length

    def is_minimal(self) -> bool:
        """No differential entry has a nonzero constant term."""
        zero = (0,) * self.nvars
        return all(zero not in p.terms for mat in self.differentials for row in mat for p in row)


def _vecs_to_rows(vecs, nrows, ring):
    pr = ring.poly_ring
    return [[Polynomial(pr, {m: c for (pos, m), c in v.items() if pos == i}, _trusted=True)
             for v in vecs] for i in range(nrows)]


def free_resolution(ring: QuotientRing, budget: int | None = None) -> FreeResolution:
    """Minimal graded free resolution of ``ring`` over its ambient polynomial ring."""
    D = ring.nvars
    budget = D if budget is None else budget
    if budget < D:
        raise ValueError(f"budget {budget} is below the number of variables {D}")
    ambient = QuotientRing(ring.field, ring.variables)
    gens = minimal_generators(list(ring.relations), ambient, rank=1)
    differentials = []
    degrees = [[0]]
    if not gens:
        return FreeResolution(differentials, degrees, D)
    current = [{(0, m): c for m, c in g.terms.items()} for g in gens]
    nrows = 1
    while current:
        if len(differentials) >= budget:
            raise BudgetExceeded(f"resolution longer than {budget}",
                                 partial=FreeResolution(differentials, degrees, D))
        differentials.append(_vecs_to_rows(current, nrows, ambient))
        shifts = degrees[-1]
        degrees.append([vec_degree(v, shifts) for v in current])
        syz = _syzygy_vecs(current, nrows, ambient, shifts)
        nrows = len(current)
        current = minimal_generators(syz, ambient, rank=nrows, shifts=degrees[-1]) if syz else []
    return FreeResolution(differentials, degrees, D)


def depth(ring: QuotientRing) -> int:
    return free_resolution(ring).depth


def is_cohen_macaulay(ring: QuotientRing, budget: int | None = None) -> bool:
    return free_resolution(ring, budget).depth == ring.krull_dim
