"""Shared fixtures-in-code for the test suite."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass
from functools import lru_cache

from brim import GF, QQ, PolyRing, QuotientRing, validate_parameter_module
from brim.cli import build, corpus_files
from brim.parser import parse_problem

import oracle

# (criterion, title, passed, seconds, limit, detail) in execution order
ACCEPTANCE: list = []


@contextmanager
def criterion(number: int, title: str, limit: float):
    """Time a block, record a pass/fail line, and fail on an exceeded limit."""
    start = time.perf_counter()
    info = {"detail": ""}
    try:
        yield info
    except BaseException as exc:
        ACCEPTANCE.append((number, title, False, time.perf_counter() - start, limit,
                           f"{type(exc).__name__}: {exc}"[:200]))
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < limit
    ACCEPTANCE.append((number, title, ok, elapsed, limit, info["detail"]))
    assert ok, f"criterion {number} took {elapsed:.2f}s, limit {limit}s"


@dataclass
class Case:
    name: str
    spec: object
    ring: QuotientRing
    pm: object
    meta: dict

    @property
    def cm(self) -> bool:
        return self.meta["cm"]

    def oracle_matrix(self):
        return [[oracle.to_int_poly(e) for e in row] for row in self.pm.matrix]

    def oracle_relations(self):
        return [oracle.to_int_poly(g) for g in self.ring.relations]

    def oracle_lambda(self, nu, t):
        return oracle.lam(self.ring.nvars, self.oracle_relations(), self.oracle_matrix(), nu, t)


def load_case(path) -> Case:
    spec = parse_problem(path.read_text())
    ring, rows = build(spec)
    pm = validate_parameter_module(ring, spec.rank, rows)
    return Case(path.name, spec, ring, pm, spec.meta)


@lru_cache(maxsize=None)
def corpus() -> tuple:
    return tuple(load_case(p) for p in corpus_files())


def ring_of(variables="x,y", relations=(), field=None):
    """QuotientRing from strings, e.g. ring_of("x,y", ["x^2", "x*y"])."""
    field = field or GF(32003)
    names = tuple(v.strip() for v in variables.split(","))
    pr = PolyRing(field, names)
    rels = [parse_poly(pr, s) for s in relations]
    return QuotientRing(field, names, rels)


def parse_poly(pr: PolyRing, text: str):
    env = {v: pr.var(v) for v in pr.variables}
    return pr.const(0) + eval(text.replace("^", "**"), {"__builtins__": {}}, env)


def matrix_of(ring: QuotientRing, rows):
    pr = ring.poly_ring
    return [[parse_poly(pr, str(e)) for e in row] for row in rows]


def pm_of(variables, relations, rows, field=None):
    ring = ring_of(variables, relations, field)
    return validate_parameter_module(ring, len(rows), matrix_of(ring, rows))


__all__ = ["ACCEPTANCE", "criterion", "Case", "corpus", "ring_of", "parse_poly", "matrix_of",
           "pm_of", "QQ", "GF"]
