"""Reader and writer for problem files.

    # comments run to end of line
    ring { field GF(32003) ; vars x, y ; relations x^2, x*y }
    module { rank 1 ; columns [y] }
    options { nu_max 5 ; t 0, 1 }
    meta { name "non-CM line"; cm false; e0 1; e1 -1 }

Polynomials use integers, variable names, ``+ - * ^`` and parentheses;
juxtaposition is not multiplication. Only ``ring`` and ``module`` are
required.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

from .errors import NonHomogeneousRelation, ProblemSyntaxError, UnknownVariable
from .field import Field, QQ
from .poly import PolyRing, Polynomial

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<string>"[^"\n]*")
  | (?P<sym>[{}\[\](),;+\-*^])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    out = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ProblemSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind not in ("ws", "comment"):
                out.append(Token(kind, s, line, col))
            col += len(s)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


@dataclass
class ProblemSpec:
    """A parsed problem; polynomials are kept over QQ with integer coefficients."""

    variables: tuple
    relations: list
    rank: int
    columns: list  # n columns, each a list of r polynomials
    field: Field | None = None
    options: dict = dc_field(default_factory=dict)
    meta: dict = dc_field(default_factory=dict)

    @property
    def rational_ring(self) -> PolyRing:
        return PolyRing(QQ, self.variables)

    def matrix_rows(self) -> list:
        return [[col[i] for col in self.columns] for i in range(self.rank)]


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.ring: PolyRing | None = None

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg, *expected, tok=None):
        tok = tok or self.tok
        shown = tok.text or "end of input"
        raise ProblemSyntaxError(f"{msg}, found {shown!r}", tok.line, tok.col, expected)

    def accept(self, kind, text=None):
        t = self.tok
        if t.kind == kind and (text is None or t.text == text):
            self.i += 1
            return t
        return None

    def expect(self, kind, text=None, what=None):
        t = self.accept(kind, text)
        if t is None:
            self.error("syntax error", what or repr(text) if text else (what or kind))
        return t

    # -- blocks --------------------------------------------------------------

    def parse(self) -> ProblemSpec:
        ring_block = module_block = None
        options, meta = {}, {}
        while self.tok.kind != "eof":
            name = self.expect("ident", what="block name")
            self.expect("sym", "{")
            if name.text == "ring":
                ring_block = self.ring_block()
            elif name.text == "module":
                if ring_block is None:
                    self.error("module block before ring block", tok=name)
                module_block = self.module_block()
            elif name.text == "options":
                options = self.options_block()
            elif name.text == "meta":
                meta = self.meta_block()
            else:
                self.error("unknown block", "ring", "module", "options", "meta", tok=name)
        if ring_block is None:
            self.error("missing ring block", "ring")
        if module_block is None:
            self.error("missing module block", "module")
        fld, variables, relations = ring_block
        rank, columns = module_block
        return ProblemSpec(variables, relations, rank, columns, fld, options, meta)

    def statements(self, handlers: dict):
        while not self.accept("sym", "}"):
            if self.accept("sym", ";"):
                continue
            key = self.expect("ident", what="keyword")
            handler = handlers.get(key.text)
            if handler is None:
                self.error("unknown keyword", *handlers, tok=key)
            handler()
            if not (self.tok.kind == "sym" and self.tok.text in ";}"):
                self.error("syntax error", "';'", "'}'")

    def field_spec(self) -> Field:
        t = self.expect("ident", what="QQ or GF(p)")
        if t.text == "QQ":
            return QQ
        if t.text == "GF":
            self.expect("sym", "(")
            p = self.expect("int", what="prime")
            self.expect("sym", ")")
            try:
                return Field(int(p.text))
            except ValueError as exc:
                raise ProblemSyntaxError(str(exc), p.line, p.col) from None
        self.error("unknown field", "QQ", "GF(p)", tok=t)

    def ring_block(self):
        state = {"field": None, "vars": None, "relations": []}

        def do_field():
            state["field"] = self.field_spec()

        def do_vars():
            names = [self.expect("ident", what="variable name")]
            while self.accept("sym", ","):
                names.append(self.expect("ident", what="variable name"))
            seen = set()
            for n in names:
                if n.text in seen:
                    raise ProblemSyntaxError(f"duplicate variable {n.text!r}", n.line, n.col)
                seen.add(n.text)
            state["vars"] = tuple(n.text for n in names)
            self.ring = PolyRing(QQ, state["vars"])

        def do_relations():
            if self.ring is None:
                self.error("relations before vars", "vars")
            rels = []
            if not (self.tok.kind == "sym" and self.tok.text in ";}"):
                rels.append(self.relation())
                while self.accept("sym", ","):
                    rels.append(self.relation())
            state["relations"] = rels

        self.statements({"field": do_field, "vars": do_vars, "relations": do_relations})
        if state["vars"] is None:
            self.error("ring block without vars", "vars")
        return state["field"], state["vars"], state["relations"]

    def relation(self) -> Polynomial:
        start = self.tok
        p = self.poly()
        if not p.is_homogeneous():
            degs = sorted({sum(m) for m in p.terms})
            raise NonHomogeneousRelation(f"relation {p} mixes degrees {degs}", start.line, start.col)
        return p

    def module_block(self):
        state = {"rank": None, "columns": None}

        def do_rank():
            t = self.expect("int", what="rank")
            if int(t.text) < 1:
                raise ProblemSyntaxError("rank must be positive", t.line, t.col)
            state["rank"] = int(t.text)

        def do_columns():
            cols = [self.column()]
            while self.accept("sym", ","):
                cols.append(self.column())
            state["columns"] = cols

        start = self.tok
        self.statements({"rank": do_rank, "columns": do_columns})
        if state["columns"] is None:
            raise ProblemSyntaxError("module block without columns", start.line, start.col)
        cols = state["columns"]
        rank = state["rank"] if state["rank"] is not None else len(cols[0])
        for c in cols:
            if len(c) != rank:
                raise ProblemSyntaxError(f"column of length {len(c)} but rank is {rank}",
                                         start.line, start.col)
        return rank, cols

    def column(self) -> list:
        self.expect("sym", "[")
        entries = [self.poly()]
        while self.accept("sym", ","):
            entries.append(self.poly())
        self.expect("sym", "]")
        return entries

    def options_block(self) -> dict:
        opts = {}

        def do_nu_max():
            opts["nu_max"] = int(self.expect("int", what="integer").text)

        def do_t():
            ts = [int(self.expect("int", what="integer").text)]
            while self.accept("sym", ","):
                ts.append(int(self.expect("int", what="integer").text))
            opts["t"] = ts

        def do_field():
            opts["field"] = self.field_spec()

        self.statements({"nu_max": do_nu_max, "t": do_t, "field": do_field})
        return opts

    def signed_int(self) -> int:
        neg = bool(self.accept("sym", "-"))
        v = int(self.expect("int", what="integer").text)
        return -v if neg else v

    def meta_block(self) -> dict:
        meta = {}

        def text_value(key):
            def run():
                meta[key] = self.expect("string", what="quoted string").text[1:-1]
            return run

        def int_value(key):
            def run():
                meta[key] = self.signed_int()
            return run

        def do_cm():
            t = self.expect("ident", what="true or false")
            if t.text not in ("true", "false"):
                self.error("expected boolean", "true", "false", tok=t)
            meta["cm"] = t.text == "true"

        self.statements({"name": text_value("name"), "note": text_value("note"), "cm": do_cm,
                         "e0": int_value("e0"), "e1": int_value("e1"),
                         "colength": int_value("colength")})
        return meta

    # -- polynomials -----------------------------------------------------------

    def poly(self) -> Polynomial:
        if self.ring is None:
            self.error("polynomial before vars", "vars")
        p = self.term()
        while True:
            if self.accept("sym", "+"):
                p = p + self.term()
            elif self.accept("sym", "-"):
                p = p - self.term()
            else:
                return p

    def term(self) -> Polynomial:
        p = self.unary()
        while self.accept("sym", "*"):
            p = p * self.unary()
        if self.tok.kind in ("ident", "int") or (self.tok.kind == "sym" and self.tok.text == "("):
            self.error("implicit multiplication is not allowed", "'*'")
        return p

    def unary(self) -> Polynomial:
        if self.accept("sym", "-"):
            return -self.unary()
        if self.accept("sym", "+"):
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.accept("sym", "^"):
            e = self.expect("int", what="exponent")
            return base ** int(e.text)
        return base

    def atom(self) -> Polynomial:
        t = self.tok
        if self.accept("int"):
            return self.ring.const(int(t.text))
        if self.accept("ident"):
            if t.text not in self.ring.variables:
                raise UnknownVariable(f"unknown variable {t.text!r}", t.line, t.col)
            return self.ring.var(t.text)
        if self.accept("sym", "("):
            p = self.poly()
            self.expect("sym", ")")
            return p
        self.error("syntax error", "integer", "variable", "'('")


def parse_problem(text: str) -> ProblemSpec:
    return _Parser(text).parse()


def _poly_text(p: Polynomial) -> str:
    return str(p)


def serialize_problem(spec: ProblemSpec) -> str:
    """Inverse of :func:`parse_problem` up to whitespace and comments."""
    lines = []
    ring = []
    if spec.field is not None:
        ring.append(f"field {spec.field}")
    ring.append("vars " + ", ".join(spec.variables))
    if spec.relations:
        ring.append("relations " + ", ".join(_poly_text(p) for p in spec.relations))
    lines.append("ring { " + " ; ".join(ring) + " }")
    cols = ", ".join("[" + ", ".join(_poly_text(p) for p in c) + "]" for c in spec.columns)
    lines.append(f"module {{ rank {spec.rank} ; columns {cols} }}")
    if spec.options:
        opts = []
        if "field" in spec.options:
            opts.append(f"field {spec.options['field']}")
        if "nu_max" in spec.options:
            opts.append(f"nu_max {spec.options['nu_max']}")
        if "t" in spec.options:
            opts.append("t " + ", ".join(str(t) for t in spec.options["t"]))
        lines.append("options { " + " ; ".join(opts) + " }")
    if spec.meta:
        meta = []
        for k in ("name", "note"):
            if k in spec.meta:
                meta.append(f'{k} "{spec.meta[k]}"')
        if "cm" in spec.meta:
            meta.append("cm " + ("true" if spec.meta["cm"] else "false"))
        for k in ("e0", "e1", "colength"):
            if k in spec.meta:
                meta.append(f"{k} {spec.meta[k]}")
        lines.append("meta { " + " ; ".join(meta) + " }")
    return "\n".join(lines) + "\n"
