"""Command-line front end.

    brim verify --input problem.br
    brim table --input problem.br --t 0,1,2 --nu-max 6 --format structured
    brim corpus

Exit status: 0 when everything ran and every theorem check is consistent,
1 for input errors (syntax, invalid parameter module, budget), 2 when a
check that must hold failed, which points at an engine bug.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

from .analyzer import (
    STABLE,
    first_coefficient_check,
    fit_with_retries,
    remarks_suite,
    verify_main_theorem,
)
from .eagon_northcott import build_en_complex, homology_lengths
from .errors import (
    BRError,
    BudgetExceeded,
    FitInconclusive,
    MultiplicitiesDisagree,
    ParameterModuleError,
    ProblemError,
)
from .field import DEFAULT_FIELD, Field
from .groebner import QuotientRing, module_length
from .modules import validate_parameter_module
from .parser import ProblemSpec, parse_problem
from .poly import PolyRing, Polynomial
from .resolution import free_resolution

log = logging.getLogger("brim")

SCHEMA_VERSION = "1"
COMMANDS = ("validate", "length", "table", "multiplicity", "coefficients", "en", "verify",
            "remarks", "corpus")
FIELD_ENV = "BRIM_FIELD"

EXIT_OK, EXIT_INPUT, EXIT_THEOREM = 0, 1, 2


class Budget:
    """Cooperative wall-clock budget, polled between expensive steps."""

    def __init__(self, seconds: float | None):
        self.deadline = None if seconds is None else time.monotonic() + seconds

    def __call__(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded("time budget exhausted")


def default_field() -> Field:
    env = os.environ.get(FIELD_ENV)
    return Field.parse(env) if env else DEFAULT_FIELD


def build(spec: ProblemSpec, field_override: Field | None = None):
    """QuotientRing and matrix rows for ``spec`` over the chosen field."""
    fld = field_override or spec.options.get("field") or spec.field or default_field()
    pr = PolyRing(fld, spec.variables)
    ring = QuotientRing(fld, spec.variables, [Polynomial(pr, p.terms) for p in spec.relations])
    rows = [[Polynomial(pr, p.terms) for p in row] for row in spec.matrix_rows()]
    return ring, rows


def _num(v):
    """Integers as decimal strings; containers recursively."""
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _num(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_num(x) for x in v]
    return v


def _table_record(verdict) -> dict:
    return {
        "t": verdict.t,
        "lambda": verdict.table.values,
        "bound": verdict.bounds,
        "inequality_ok": verdict.inequality_ok,
        "equality_at": verdict.equality_at,
        "consistent": verdict.consistent,
        "notes": verdict.notes,
    }


def _fit_record(fit) -> dict:
    return {"e": [int(x) if x.__class__ is int else str(x) for x in fit.e], "status": fit.status,
            "stable_from": fit.stable_from, "degree": fit.degree}


class _Run:
    """One command invocation: accumulates report fields and the exit status."""

    def __init__(self, spec: ProblemSpec, args):
        self.spec = spec
        self.args = args
        self.report: dict = {"schema_version": SCHEMA_VERSION, "command": args.command}
        self.timings: dict = {}
        self.code = EXIT_OK
        self.budget = Budget(args.budget)

    def timed(self, name, fn, *a, **kw):
        t0 = time.perf_counter()
        try:
            return fn(*a, **kw)
        finally:
            self.timings[name] = round(time.perf_counter() - t0, 4)

    def fail(self, message):
        self.code = EXIT_THEOREM
        self.report.setdefault("failures", []).append(message)

    def setup(self):
        field_override = Field.parse(self.args.field) if self.args.field else None
        ring, rows = build(self.spec, field_override)
        self.ring = ring
        self.report["input"] = {
            "field": str(ring.field),
            "vars": list(ring.variables),
            "relations": [str(p) for p in ring.relations],
            "rank": self.spec.rank,
            "columns": [[str(p) for p in col] for col in zip(*rows)] if rows else [],
        }
        if self.spec.meta:
            self.report["input"]["meta"] = self.spec.meta
        d = ring.krull_dim
        self.report.update({"d": d, "r": self.spec.rank, "n": len(self.spec.columns)})
        try:
            self.pm = self.timed("validate", validate_parameter_module, ring, self.spec.rank, rows)
        except ParameterModuleError as exc:
            self.report["validation"] = {"valid": False, "condition": exc.condition, "message": str(exc)}
            raise
        c = self.pm.conditions
        self.report["validation"] = {
            "valid": True,
            "colength": c["colength"],
            "mu": c["mu"],
            "conditions": {"finite_colength": c["finite_colength"],
                           "in_maximal_ideal": c["in_maximal_ideal"],
                           "minimal": c["minimal"], "column_count": c["column_count"]},
        }

    @property
    def nu_max(self) -> int:
        if self.args.nu_max is not None:
            return self.args.nu_max
        return self.spec.options.get("nu_max", self.pm.d + self.pm.r + 3)

    @property
    def t_values(self) -> list:
        if self.args.t:
            return [int(x) for x in self.args.t.split(",") if x.strip()]
        return self.spec.options.get("t", [1])

    def cm(self):
        if not hasattr(self, "_cm"):
            res = self.timed("resolution", free_resolution, self.ring)
            self._cm = res.depth == self.ring.krull_dim
            self.report["cohen_macaulay"] = {"cm": self._cm, "depth": res.depth,
                                             "pd": res.length, "betti": res.betti}
        return self._cm

    def homology(self):
        if not hasattr(self, "_hom"):
            cx = self.timed("en_complex", build_en_complex, self.pm)
            hom = self.timed("homology", homology_lengths, cx)
            self._cx, self._hom = cx, hom
            self.report["eagon_northcott"] = {"ranks": cx.ranks, "homology_lengths": hom.lengths,
                                              "chi": hom.euler_char}
            if self.args.dump_en:
                self.report["eagon_northcott"]["differentials"] = [
                    [[str(e) for e in row] for row in cx.d(p)] for p in range(1, cx.length + 1)]
        return self._hom

    def fit(self):
        if not hasattr(self, "_fit"):
            fit, table = self.timed("fit", fit_with_retries, self.pm, self.nu_max,
                                    max(self.args.max_nu, self.nu_max), self.budget)
            self._fit, self._fit_table = fit, table
            self.report["coefficients"] = _fit_record(fit)
        return self._fit

    def check_meta(self, e0=None, e1=None, cm=None):
        meta = self.spec.meta
        for key, got in (("e0", e0), ("e1", e1), ("cm", cm), ("colength", self.pm.conditions["colength"])):
            if key in meta and got is not None and meta[key] != got:
                self.fail(f"expected {key} = {meta[key]} from the problem file, computed {got}")

    # -- commands ------------------------------------------------------------

    def cmd_validate(self):
        pass

    def cmd_length(self):
        self.report["length"] = {
            "colength": self.pm.colength,
            "fitting_colength": module_length(self.pm.fitting_ideal, 1, self.ring),
            "fitting_ideal": [str(p) for p in self.pm.fitting_ideal],
        }

    def cmd_table(self):
        from .analyzer import br_table
        tables = {}
        for t in self.t_values:
            tab = self.timed(f"table_t{t}", br_table, self.pm, self.nu_max, t, self.budget)
            tables[t] = tab.values
        self.report["tables"] = tables

    def cmd_multiplicity(self):
        hom = self.homology()
        self.report["multiplicity"] = hom.euler_char

    def cmd_en(self):
        self.homology()

    def cmd_coefficients(self):
        fit = self.fit()
        if fit.status != STABLE:
            raise FitInconclusive(f"fit did not stabilise up to nu = {self._fit_table.nu_max}")
        e1, ok = first_coefficient_check(self.pm, fit=fit)
        self.report["e1_nonpositive"] = ok
        if not ok:
            self.fail(f"first coefficient e1 = {e1} is positive")

    def cmd_verify(self):
        hom = self.homology()
        e0 = hom.euler_char
        cm = self.cm()
        fit = self.fit()
        if fit.status == STABLE:
            if fit.e0 != e0:
                raise MultiplicitiesDisagree(f"chi = {e0} but fitted e0 = {fit.e0}")
            self.report["e1_nonpositive"] = fit.e1 <= 0
            if fit.e1 > 0:
                self.fail(f"first coefficient e1 = {fit.e1} is positive")
        else:
            self.report["e1_nonpositive"] = None
            log.warning("fit inconclusive; e1 not checked")
        if cm:
            hv = all(x == 0 for x in hom.lengths[1:])
            self.report["cm_checks"] = {"higher_homology_vanishes": hv,
                                        "chi_equals_fitting_colength": e0 == hom.lengths[0]}
            if not hv or e0 != hom.lengths[0]:
                self.fail("Cohen-Macaulay ring with non-acyclic Eagon-Northcott complex")
        verdicts = []
        for t in self.t_values:
            v = self.timed(f"verify_t{t}", verify_main_theorem, self.pm, self.nu_max, t,
                           e0=e0, cm=cm, fit=fit if fit.status == STABLE else None,
                           budget=self.budget)
            verdicts.append(_table_record(v))
            if not v.consistent:
                self.fail(f"t = {t}: " + "; ".join(v.notes))
        self.report["verdicts"] = verdicts
        self.check_meta(e0=e0, e1=fit.e1 if fit.status == STABLE else None, cm=cm)
        self.report["consistent"] = self.code == EXIT_OK

    def cmd_remarks(self):
        if not self.cm():
            raise BRError("remarks need a Cohen-Macaulay base ring")
        e0 = self.homology().euler_char
        nu_max = self.args.nu_max if self.args.nu_max is not None else 2
        rep = self.timed("remarks", remarks_suite, self.pm, nu_max, None, e0=e0, cm=True)
        out = {
            "e0": e0,
            "lambda_at_nu0": {t: lam for t, (lam, _) in rep.zero_nu.items()},
            "nu0_equality": rep.remark_zero_ok,
            "above_d": [{"nu": nu, "lambda": lam, "bound": b, "strict": s} for nu, lam, b, s in rep.above_d],
            "exploratory": {f"{nu},{t}": eq for (nu, t), eq in rep.exploratory.items()},
        }
        if rep.d_equals_two:
            out["d2_t2"] = [{"nu": nu, "lambda": lam, "bound": b, "equal": e} for nu, lam, b, e in rep.d_equals_two]
        self.report["remarks"] = out
        if not rep.remark_zero_ok:
            self.fail("lambda(0, t) != e0 for some 0 <= t <= d")
        if rep.d_equals_two and not rep.d_two_ok:
            self.fail("d = 2 equality at t = 2 failed")
        if self.pm.r >= 2 and not rep.above_d_strict:
            self.fail("equality at t = d + 1")


def _finish(run: _Run) -> dict:
    report = run.report
    body = json.dumps(_num(report), sort_keys=True, separators=(",", ":"))
    report["digest"] = hashlib.sha256(body.encode()).hexdigest()
    report["timings"] = run.timings
    return report


def run_command(command: str, spec: ProblemSpec, args) -> tuple[dict, int]:
    """Run one subcommand on a parsed problem; returns (report, exit code)."""
    if command not in COMMANDS or command == "corpus":
        raise ValueError(f"not a per-problem command: {command}")
    args.command = command
    run = _Run(spec, args)
    try:
        run.setup()
        getattr(run, f"cmd_{command}")()
    except ParameterModuleError as exc:
        run.report["error"] = {"type": exc.condition, "message": str(exc)}
        run.code = EXIT_INPUT
    except MultiplicitiesDisagree as exc:
        run.fail(str(exc))
        run.report["error"] = {"type": "MultiplicitiesDisagree", "message": str(exc)}
    except (BudgetExceeded, FitInconclusive, BRError) as exc:
        run.report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        run.code = EXIT_INPUT
    return _finish(run), run.code


# ---------------------------------------------------------------------------
# rendering


def render_structured(report: dict) -> str:
    return json.dumps(_num(report), indent=2, sort_keys=True) + "\n"


def _row(cells, widths):
    return "  ".join(str(c).rjust(w) for c, w in zip(cells, widths))


def render_table(report: dict) -> str:
    out = []
    inp = report.get("input", {})
    if inp:
        rel = ", ".join(inp["relations"]) or "0"
        out.append(f"ring    {inp['field']}[{', '.join(inp['vars'])}]/({rel})")
        cols = "  ".join("[" + ", ".join(c) + "]" for c in inp["columns"])
        out.append(f"module  rank {inp['rank']}  columns {cols}")
    if "d" in report:
        out.append(f"d = {report['d']}  r = {report['r']}  n = {report['n']}")
    val = report.get("validation")
    if val:
        if val["valid"]:
            out.append(f"valid parameter module  colength = {val['colength']}  mu = {val['mu']}")
        else:
            out.append(f"INVALID: {val['condition']}: {val['message']}")
    if "length" in report:
        L = report["length"]
        out.append(f"l(F/N) = {L['colength']}   l(A/I(N)) = {L['fitting_colength']}")
        out.append("I(N) = (" + ", ".join(L["fitting_ideal"]) + ")")
    if "cohen_macaulay" in report:
        c = report["cohen_macaulay"]
        out.append(f"depth = {c['depth']}  pd = {c['pd']}  Cohen-Macaulay: {'yes' if c['cm'] else 'no'}")
    if "eagon_northcott" in report:
        en = report["eagon_northcott"]
        out.append(f"Eagon-Northcott ranks {en['ranks']}  homology lengths {en['homology_lengths']}"
                   f"  chi = {en['chi']}")
        for p, mat in enumerate(en.get("differentials", []), start=1):
            out.append(f"  d_{p} =")
            for row in mat:
                out.append("    [" + ", ".join(row) + "]")
    if "coefficients" in report:
        co = report["coefficients"]
        es = "  ".join(f"e{i} = {e}" for i, e in enumerate(co["e"]))
        out.append(f"{es}   ({co['status']}, from nu = {co['stable_from']})")
    if "tables" in report:
        for t, vals in report["tables"].items():
            out.append(f"lambda(nu, {t}) for nu = 0..{len(vals) - 1}: " + " ".join(str(v) for v in vals))
    for v in report.get("verdicts", []):
        out.append(f"t = {v['t']}")
        widths = [4, 12, 12, 6]
        out.append(_row(["nu", "lambda", "bound", "rel"], widths))
        for nu, (lam, b) in enumerate(zip(v["lambda"], v["bound"])):
            rel = "=" if lam == b else (">" if lam > b else "<")
            out.append(_row([nu, lam, b, rel], widths))
        out.append(f"  consistent: {'yes' if v['consistent'] else 'NO'}" +
                   (f"  ({'; '.join(v['notes'])})" if v["notes"] else ""))
    if "remarks" in report:
        rm = report["remarks"]
        out.append(f"lambda(0, t) for t <= d: {rm['lambda_at_nu0']}  (e0 = {rm['e0']})")
        for a in rm["above_d"]:
            out.append(f"  t = d+1, nu = {a['nu']}: {a['lambda']} vs {a['bound']}"
                       f" {'strict' if a['strict'] else 'EQUAL'}")
        for a in rm.get("d2_t2", []):
            out.append(f"  t = 2, nu = {a['nu']}: {a['lambda']} vs {a['bound']}"
                       f" {'equal' if a['equal'] else 'DIFFERENT'}")
    if "e1_nonpositive" in report and report["e1_nonpositive"] is not None:
        out.append(f"e1 <= 0: {'yes' if report['e1_nonpositive'] else 'NO'}")
    if "error" in report:
        out.append(f"error: {report['error']['type']}: {report['error']['message']}")
    for f in report.get("failures", []):
        out.append(f"FAILED: {f}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# corpus


def corpus_files() -> list:
    root = resources.files("brim") / "corpus"
    return sorted((p for p in root.iterdir() if p.name.endswith(".br")), key=lambda p: p.name)


def _corpus_one(path_and_args):
    path, args = path_and_args
    text = Path(str(path)).read_text()
    try:
        spec = parse_problem(text)
    except ProblemError as exc:
        return Path(str(path)).name, {"error": {"type": type(exc).__name__, "message": str(exc)}}, EXIT_INPUT
    report, code = run_command("verify", spec, argparse.Namespace(**vars(args)))
    return Path(str(path)).name, report, code


def run_corpus(args) -> tuple[dict, int]:
    items = [(p, args) for p in corpus_files()]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_corpus_one, items))
    else:
        results = [_corpus_one(i) for i in items]
    code = max((c for _, _, c in results), default=EXIT_OK)
    report = {"schema_version": SCHEMA_VERSION, "command": "corpus",
              "entries": {name: rep for name, rep, _ in results},
              "exit_codes": {name: c for name, _, c in results}}
    return report, code


def render_corpus_table(report: dict) -> str:
    out = []
    for name, rep in report["entries"].items():
        code = report["exit_codes"][name]
        fit = rep.get("coefficients", {})
        cm = rep.get("cohen_macaulay", {}).get("cm")
        status = {0: "ok", 1: "input-error", 2: "INCONSISTENT"}[code]
        out.append(f"{name:32s} d={rep.get('d')} r={rep.get('r')} cm={cm!s:5s} "
                   f"e={fit.get('e')} {status}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="brim", description="Buchsbaum-Rim functions of parameter modules")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", "-i", help="problem file ('-' for stdin)")
    ap.add_argument("--nu-max", type=int, default=None)
    ap.add_argument("--t", default=None, help="comma-separated t values")
    ap.add_argument("--field", default=None, help="GF(p) or QQ, overrides the file")
    ap.add_argument("--format", choices=("table", "structured"), default="table")
    ap.add_argument("--out", default=None, help="write the report here instead of stdout")
    ap.add_argument("--budget", type=float, default=None, help="wall-clock seconds")
    ap.add_argument("--dump-en", action="store_true", help="include Eagon-Northcott differentials")
    ap.add_argument("--max-nu", type=int, default=32, help="ceiling when refitting inconclusive tables")
    ap.add_argument("--jobs", type=int, default=1, help="parallel corpus entries")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "corpus":
        report, code = run_corpus(args)
        text = render_structured(report) if args.format == "structured" else render_corpus_table(report)
    else:
        if not args.input:
            print("error: --input is required", file=sys.stderr)
            return EXIT_INPUT
        try:
            source = sys.stdin.read() if args.input == "-" else Path(args.input).read_text(encoding="utf-8")
            spec = parse_problem(source)
        except (OSError, ProblemError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        report, code = run_command(args.command, spec, args)
        text = render_structured(report) if args.format == "structured" else render_table(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
