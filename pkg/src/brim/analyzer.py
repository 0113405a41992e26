"""Buchsbaum-Rim tables, polynomial fits, and checks of the length bound.

The lower bound is lambda(nu, t) >= e0 * C(nu+d+r-1, d+r-1), with equality
for some nu (and 0 <= t <= d) exactly when A is Cohen-Macaulay. e0 comes
from the Eagon-Northcott Euler characteristic and is cross-checked against
the polynomial fitted to the t = 1 table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .eagon_northcott import br_multiplicity_via_chi
from .errors import BRError, FitInconclusive, MultiplicitiesDisagree
from .modules import ParameterModule, _SymProducts, graded_piece_length
from .poly import binomial
from .resolution import is_cohen_macaulay

STABLE = "Stable"
INCONCLUSIVE = "Inconclusive"


@dataclass
class BRTable:
    t: int
    entries: list  # [(nu, lambda(nu, t))]

    @property
    def values(self) -> list:
        return [v for _, v in self.entries]

    @property
    def nu_max(self) -> int:
        return self.entries[-1][0] if self.entries else -1


@dataclass
class BRCoefficients:
    degree: int
    e: list
    stable_from: int | None
    status: str

    @property
    def e0(self) -> int:
        return self.e[0]

    @property
    def e1(self) -> int | None:
        return self.e[1] if len(self.e) > 1 else None

    def polynomial(self, nu: int):
        return br_polynomial(self.e, nu)


@dataclass
class TheoremVerdict:
    t: int
    e0: int
    table: BRTable
    bounds: list
    inequality_ok: list
    equality_at: list
    cm_oracle: bool
    consistent: bool
    fit: BRCoefficients | None = None
    notes: list = field(default_factory=list)


def br_polynomial(e: list, nu: int):
    """P(nu) = sum (-1)^i e_i C(nu + D - i, D - i) with D = len(e) - 1."""
    D = len(e) - 1
    return sum((-1) ** i * ei * binomial(nu + D - i, D - i) for i, ei in enumerate(e))


def br_table(pm: ParameterModule, nu_max: int, t: int = 1, budget=None) -> BRTable:
    """lambda(nu, t) for nu = 0..nu_max.

    ``budget`` is an optional callable invoked before each entry so callers
    can abort long runs.
    """
    if nu_max < 0 or t < 0:
        raise ValueError("need nu_max >= 0 and t >= 0")
    products = _SymProducts(pm)
    entries = []
    for nu in range(nu_max + 1):
        if budget:
            budget()
        try:
            entries.append((nu, graded_piece_length(pm, nu, t, products=products)))
        except BRError as exc:
            raise BRError(f"lambda({nu},{t}) failed: {exc}") from exc
    return BRTable(t, entries)


def _solve_exact(mat: list, rhs: list) -> list:
    """Gauss-Jordan elimination over the rationals for a square system."""
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(mat, rhs)]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [a[i][n] for i in range(n)]


def fit_coefficients(table: BRTable, d: int, r: int) -> BRCoefficients:
    """Fit e_0..e_{d+r-1} from the last d+r entries of ``table``.

    Stable when the fit also reproduces the entry just before the window
    and the top finite difference over the trailing d+r+1 entries is
    constant. Raises :class:`FitInconclusive` on tables that are too short.
    """
    D = d + r - 1
    nus = [nu for nu, _ in table.entries]
    vals = table.values
    if len(vals) < D + 2:
        raise FitInconclusive(f"need at least {D + 2} table entries, got {len(vals)}")
    window = table.entries[-(D + 1):]
    mat = [[(-1) ** i * binomial(nu + D - i, D - i) for i in range(D + 1)] for nu, _ in window]
    sol = _solve_exact(mat, [v for _, v in window])
    integral = all(x.denominator == 1 for x in sol)
    e = [int(x) if x.denominator == 1 else x for x in sol]
    diffs = vals[-(D + 2):]
    for _ in range(D):
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    top_constant = len(set(diffs)) == 1
    look_back = br_polynomial(e, table.entries[-(D + 2)][0]) == vals[-(D + 2)]
    stable = integral and top_constant and look_back and e[0] >= 1
    stable_from = None
    if stable:
        stable_from = nus[-1]
        for nu, v in reversed(table.entries):
            if br_polynomial(e, nu) != v:
                break
            stable_from = nu
    return BRCoefficients(D, e, stable_from, STABLE if stable else INCONCLUSIVE)


def theorem_bound(e0: int, nu: int, d: int, r: int) -> int:
    """e0 * C(nu+d+r-1, d+r-1)."""
    return e0 * binomial(nu + d + r - 1, d + r - 1)


def fit_with_retries(pm: ParameterModule, nu_max: int | None = None, max_nu: int = 64,
                     budget=None) -> tuple[BRCoefficients, BRTable]:
    """Fit the t = 1 table, doubling nu_max while the fit is inconclusive."""
    d, r = pm.d, pm.r
    nu_max = d + r + 3 if nu_max is None else max(nu_max, d + r)
    while True:
        table = br_table(pm, nu_max, 1, budget)
        fit = fit_coefficients(table, d, r)
        if fit.status == STABLE or nu_max >= max_nu:
            return fit, table
        nu_max = min(2 * nu_max, max_nu)


def verify_main_theorem(pm: ParameterModule, nu_max: int, t: int = 1, *, e0: int | None = None,
                        cm: bool | None = None, fit: BRCoefficients | None = None,
                        budget=None) -> TheoremVerdict:
    """Check the length bound on lambda(., t) and its Cohen-Macaulay equivalence.

    For 0 <= t <= d the verdict is consistent iff equality at some nu implies
    CM, and (for t in {0, 1}, or t = 2 = d) CM implies equality at every
    tested nu. For t > d only the inequality is enforced; any equalities are
    recorded in ``notes``. e0 is the Euler characteristic unless supplied.
    """
    d, r = pm.d, pm.r
    if e0 is None:
        e0 = br_multiplicity_via_chi(pm)
    if cm is None:
        cm = is_cohen_macaulay(pm.ring)
    table = br_table(pm, nu_max, t, budget)
    if fit is None and t == 1 and len(table.entries) >= d + r + 1:
        fit = fit_coefficients(table, d, r)
    if fit is not None and fit.status == STABLE and fit.e0 != e0:
        raise MultiplicitiesDisagree(f"Euler characteristic {e0} != fitted e0 {fit.e0}")
    bounds = [theorem_bound(e0, nu, d, r) for nu, _ in table.entries]
    ineq = [lam >= b for (_, lam), b in zip(table.entries, bounds)]
    equal = [nu for (nu, lam), b in zip(table.entries, bounds) if lam == b]
    notes = []
    consistent = all(ineq)
    if not consistent:
        notes.append("length bound violated")
    if t <= d:
        if equal and not cm:
            consistent = False
            notes.append("equality on a non-Cohen-Macaulay ring")
        forced = t in (0, 1) or (t == 2 and d == 2)
        if cm and forced and len(equal) != len(table.entries):
            consistent = False
            notes.append("Cohen-Macaulay ring without equality at every nu")
        if cm and not forced and 0 not in equal:
            consistent = False
            notes.append("Cohen-Macaulay ring without equality at nu = 0")
    elif equal:
        notes.append(f"equality at nu in {equal} although t > d")
    return TheoremVerdict(t, e0, table, bounds, ineq, equal, cm, consistent, fit, notes)


def first_coefficient_check(pm: ParameterModule, nu_max: int | None = None,
                            fit: BRCoefficients | None = None) -> tuple[int, bool]:
    """(e1, e1 <= 0) from a stable fit of the t = 1 table."""
    if fit is None:
        fit, _ = fit_with_retries(pm, nu_max)
    if fit.status != STABLE:
        raise FitInconclusive("Buchsbaum-Rim polynomial did not stabilise")
    return fit.e1, fit.e1 <= 0


@dataclass
class RemarksReport:
    e0: int
    d: int
    r: int
    zero_nu: dict  # t -> (lambda(0, t), lambda(0, t) == e0) for 0 <= t <= d
    above_d: list  # [(nu, lambda(nu, d+1), bound, strict)]
    d_equals_two: list  # [(nu, lambda(nu, 2), bound, equal)] when d == 2
    exploratory: dict  # (nu, t) -> equality flag for 2 <= t <= d, nu > 0

    @property
    def remark_zero_ok(self) -> bool:
        return all(ok for _, ok in self.zero_nu.values())

    @property
    def above_d_strict(self) -> bool:
        return all(s for *_, s in self.above_d)

    @property
    def d_two_ok(self) -> bool:
        return all(eq for *_, eq in self.d_equals_two)


def remarks_suite(pm: ParameterModule, nu_max: int = 2, t_range=None, *, e0: int | None = None,
                  cm: bool | None = None) -> RemarksReport:
    """Equalities expected on a Cohen-Macaulay ring beyond t = 1.

    * lambda(0, t) = e0 for 0 <= t <= d;
    * for d = 2, lambda(nu, 2) = e0 * C(nu+r+1, r+1);
    * lambda(nu, d+1) compared with the bound (expected strict when r >= 2).
    """
    if cm is None:
        cm = is_cohen_macaulay(pm.ring)
    if not cm:
        raise BRError("remarks apply to Cohen-Macaulay base rings only")
    if e0 is None:
        e0 = br_multiplicity_via_chi(pm)
    d, r = pm.d, pm.r
    t_range = list(range(d + 2)) if t_range is None else list(t_range)
    products = _SymProducts(pm)
    zero_nu, above, two, explore = {}, [], [], {}
    for t in t_range:
        if t <= d:
            lam = graded_piece_length(pm, 0, t, products=products)
            zero_nu[t] = (lam, lam == e0)
        if t == d + 1:
            for nu in range(nu_max + 1):
                lam = graded_piece_length(pm, nu, t, products=products)
                b = theorem_bound(e0, nu, d, r)
                above.append((nu, lam, b, lam > b))
        if d == 2 and t == 2:
            for nu in range(nu_max + 1):
                lam = graded_piece_length(pm, nu, 2, products=products)
                b = e0 * binomial(nu + r + 1, r + 1)
                two.append((nu, lam, b, lam == b))
        elif 2 <= t <= d:
            for nu in range(1, nu_max + 1):
                lam = graded_piece_length(pm, nu, t, products=products)
                explore[(nu, t)] = lam == theorem_bound(e0, nu, d, r)
    return RemarksReport(e0, d, r, zero_nu, above, two, explore)
