"""Exact rational feasibility for systems ``A x = b, x >= 0``.

The pipeline is: presolve (zero-fixing, homogeneous doubleton substitution,
duplicate rows), then a sparse phase-I simplex over gmpy2 rationals. Every
answer is re-checked against the original system in exact arithmetic before
it is returned: witnesses by substitution, infeasibility by a Farkas vector
``y`` with ``y^T A >= 0`` and ``y^T b < 0``.

Systems that stay large after presolve first try a floating-point guide
(HiGHS through scipy): its point or dual ray is rounded to nearby rationals
and kept only if it passes the same exact check; otherwise the exact simplex
runs as usual.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

log = logging.getLogger(__name__)

ZERO = mpq(0)
ONE = mpq(1)
UNBOUNDED = "unbounded"
DEGENERATE_STREAK = 50
GUIDE_ROWS = 300  # reduced row count above which the float guide is tried first
GUIDE_DENOMINATORS = (10**2, 10**3, 10**4, 10**6)


class InfeasibleError(ValueError):
    pass


class VerificationError(AssertionError):
    """A witness or certificate failed the exact re-check (an internal bug)."""


def to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def fmt(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class LinearSystem:
    """Named nonnegative variables and rational equality rows."""

    def __init__(self, variables: Iterable[str] = ()):
        self.variables: list[str] = []
        self.index: dict[str, int] = {}
        self.rows: list[dict[int, object]] = []
        self.rhs: list[object] = []
        self.labels: list[str] = []
        for v in variables:
            self.var(v)

    def var(self, name: str) -> int:
        idx = self.index.get(name)
        if idx is None:
            idx = len(self.variables)
            self.variables.append(name)
            self.index[name] = idx
        return idx

    def add_row(self, coeffs: Mapping | Iterable, rhs=0, label: str = "") -> None:
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        row: dict[int, object] = {}
        nvars = len(self.variables)
        for key, c in items:
            if isinstance(key, str):
                if key not in self.index:
                    raise ValueError(f"row references undeclared variable {key!r}")
                j = self.index[key]
            else:
                j = key
                if not 0 <= j < nvars:
                    raise ValueError(f"row references undeclared variable index {j}")
            row[j] = row.get(j, 0) + c
        self.rows.append({j: c for j, c in row.items() if c})
        self.rhs.append(rhs)
        self.labels.append(label)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.variables)

    def nonzeros(self) -> int:
        return sum(len(r) for r in self.rows)

    def first_violation(self, values: Mapping[str, object] | Sequence) -> int | None:
        """Index of the first row (or -1 for a negative value) the assignment violates."""
        x = [mpq(v) for v in self._dense(values)]
        if any(v < 0 for v in x):
            return -1
        for i, (row, b) in enumerate(zip(self.rows, self.rhs)):
            if sum((mpq(c) * x[j] for j, c in row.items()), mpq(0)) != mpq(b):
                return i
        return None

    def satisfied_by(self, values) -> bool:
        return self.first_violation(values) is None

    def _dense(self, values) -> list[Fraction]:
        if isinstance(values, Mapping):
            x = [Fraction(0)] * len(self.variables)
            for name, v in values.items():
                x[self.index[name]] = Fraction(v)
            return x
        return [Fraction(v) for v in values]

    def dump(self) -> str:
        out = [f"# {len(self.rows)} rows, {len(self.variables)} variables, all variables >= 0"]
        for i, (row, b) in enumerate(zip(self.rows, self.rhs)):
            name = self.labels[i] or f"r{i}"
            terms = " + ".join(f"{fmt(c)}*{self.variables[j]}" for j, c in sorted(row.items())) or "0"
            out.append(f"{name}: {terms} = {fmt(b)}")
        return "\n".join(out) + "\n"


@dataclass(frozen=True)
class FeasibilityResult:
    status: str
    witness: dict[str, Fraction] | None = None
    certificate: dict[int, Fraction] | None = None
    reduced_shape: tuple[int, int] = (0, 0)
    method: str = "exact"

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"


def check_certificate(sys: LinearSystem, y: Mapping[int, object]) -> bool:
    """True iff y^T A >= 0 componentwise and y^T b < 0."""
    col = [ZERO] * len(sys.variables)
    yb = ZERO
    for i, yi in y.items():
        yi = mpq(yi)
        if not yi:
            continue
        yb += yi * mpq(sys.rhs[i])
        for j, c in sys.rows[i].items():
            col[j] += yi * mpq(c)
    return yb < 0 and all(v >= 0 for v in col)


# presolve


class _Reduction:
    """Presolve with enough bookkeeping to map solutions and Farkas vectors back."""

    def __init__(self, sys: LinearSystem):
        self.sys = sys
        m, n = sys.shape
        self.rows = [{j: mpq(c) for j, c in r.items()} for r in sys.rows]
        self.rhs = [mpq(b) for b in sys.rhs]
        self.active = [True] * m
        self.cols: list[set[int]] = [set() for _ in range(n)]
        for i, r in enumerate(self.rows):
            for j in r:
                self.cols[j].add(i)
        self.status: list = [None] * n  # None active, 0 fixed at zero, (rep, mult)
        self.comp: dict[int, dict[int, mpq]] = {}
        self.stages: list = []
        self.conflict: dict[int, mpq] | None = None

    def _comp(self, j: int) -> dict[int, mpq]:
        return self.comp.get(j) or {j: ONE}

    def _deactivate(self, i: int) -> None:
        self.active[i] = False
        for j in self.rows[i]:
            self.cols[j].discard(i)

    def run(self) -> None:
        m = len(self.rows)
        work = deque(range(m))
        queued = [True] * m
        rows, rhs, cols = self.rows, self.rhs, self.cols

        def push(r):
            if not queued[r]:
                queued[r] = True
                work.append(r)

        while work:
            i = work.popleft()
            queued[i] = False
            if not self.active[i]:
                continue
            row, b = rows[i], rhs[i]
            if not row:
                if b == 0:
                    self._deactivate(i)
                    continue
                self.conflict = {i: ONE if b < 0 else -ONE}
                return
            pos = neg = False
            for c in row.values():
                if c > 0:
                    pos = True
                else:
                    neg = True
                if pos and neg:
                    break
            if not (pos and neg):
                s = ONE if pos else -ONE
                if s * b < 0:
                    self.conflict = {i: s}
                    return
                if b == 0:
                    items = [(j, c, self._comp(j)) for j, c in row.items()]
                    self.stages.append(("zero", i, s, items))
                    self._deactivate(i)
                    for j, _, _ in items:
                        for r in cols[j]:
                            del rows[r][j]
                            push(r)
                        cols[j] = set()
                        self.status[j] = 0
                continue
            if len(row) == 2 and b == 0:
                (v, av), (u, au) = sorted(row.items())
                c = -av / au
                self.stages.append(("sub", i, u, au, self._comp(u)))
                self._deactivate(i)
                for r in cols[u]:
                    a = rows[r].pop(u)
                    nv = rows[r].get(v, ZERO) + c * a
                    if nv:
                        rows[r][v] = nv
                        cols[v].add(r)
                    else:
                        rows[r].pop(v, None)
                        cols[v].discard(r)
                    push(r)
                cols[u] = set()
                self.status[u] = (v, c)
                merged = dict(self._comp(v))
                for w, mult in self._comp(u).items():
                    merged[w] = merged.get(w, ZERO) + c * mult
                self.comp[v] = merged
        self._dedupe()

    def _dedupe(self) -> None:
        seen: dict = {}
        for i, row in enumerate(self.rows):
            if not self.active[i]:
                continue
            first = row[min(row)]
            key = tuple(sorted((j, c / first) for j, c in row.items()))
            b = self.rhs[i] / first
            if key in seen:
                i0, b0, f0 = seen[key]
                if b == b0:
                    self._deactivate(i)
                    continue
                d = b0 - b
                s = -ONE if d > 0 else ONE
                self.conflict = {i0: s / f0, i: -s / first}
                return
            seen[key] = (i, b, first)

    def resolve(self, j: int) -> tuple[int | None, mpq]:
        mult = ONE
        while True:
            st = self.status[j]
            if st is None:
                return j, mult
            if st == 0:
                return None, ZERO
            j, c = st
            mult *= c

    def lift_solution(self, x: Mapping[int, mpq]) -> list[mpq]:
        out = []
        for j in range(len(self.status)):
            rep, mult = self.resolve(j)
            out.append(ZERO if rep is None else mult * x.get(rep, ZERO))
        return out

    def lift_certificate(self, y: dict[int, mpq]) -> dict[int, mpq]:
        y = dict(y)
        orig_cols: dict[int, list] = {}

        def column(w):
            col = orig_cols.get(w)
            if col is None:
                col = [(i, self.rows_orig[i][w]) for i in self.sys_cols[w]]
                orig_cols[w] = col
            return col

        def ytA(comp):
            tot = ZERO
            for w, mult in comp.items():
                acc = ZERO
                for i, a in column(w):
                    yi = y.get(i)
                    if yi:
                        acc += yi * a
                tot += mult * acc
            return tot

        self.rows_orig = [{j: mpq(c) for j, c in r.items()} for r in self.sys.rows]
        self.sys_cols = [[] for _ in self.sys.variables]
        for i, r in enumerate(self.sys.rows):
            for j in r:
                self.sys_cols[j].append(i)
        for stage in reversed(self.stages):
            if stage[0] == "zero":
                _, i, s, items = stage
                tau = ZERO
                for _, a, comp in items:
                    need = -ytA(comp) / (s * a)
                    if need > tau:
                        tau = need
                if tau:
                    y[i] = y.get(i, ZERO) + s * tau
            else:
                _, i, u, au, comp = stage
                t = -ytA(comp) / au
                if t:
                    y[i] = y.get(i, ZERO) + t
        return {i: v for i, v in y.items() if v}

    def reduced(self):
        row_ids = [i for i, a in enumerate(self.active) if a]
        col_ids = [j for j, st in enumerate(self.status) if st is None]
        cpos = {j: p for p, j in enumerate(col_ids)}
        rows = [{cpos[j]: c for j, c in self.rows[i].items()} for i in row_ids]
        rhs = [self.rhs[i] for i in row_ids]
        return row_ids, col_ids, rows, rhs


# simplex


class _Simplex:
    """Sparse tableau simplex. Columns 0..n-1 are structural, n+i is the artificial of row i."""

    def __init__(self, rows: list[dict[int, mpq]], rhs: list[mpq], n: int):
        self.n = n
        self.m = len(rows)
        self.sign = []
        self.T: list[dict[int, mpq]] = []
        self.b: list[mpq] = []
        self.colrows: dict[int, set[int]] = {}
        for i, (r, bi) in enumerate(zip(rows, rhs)):
            if bi < 0:
                r = {j: -c for j, c in r.items()}
                bi = -bi
                self.sign.append(-ONE)
            else:
                r = dict(r)
                self.sign.append(ONE)
            r[n + i] = ONE
            self.T.append(r)
            self.b.append(bi)
            for j in r:
                self.colrows.setdefault(j, set()).add(i)
        self.basis = [n + i for i in range(self.m)]
        self.live = [True] * self.m
        obj: dict[int, mpq] = {}
        for r in self.T:
            for j, c in r.items():
                if j < n:
                    obj[j] = obj.get(j, ZERO) - c
        self.obj = {j: c for j, c in obj.items() if c}
        self.z = sum(self.b, ZERO)
        self.pivots = 0

    def pivot(self, r: int, j: int, obj: dict | None) -> None:
        T, colrows = self.T, self.colrows
        row = T[r]
        p = row[j]
        if p != 1:
            inv = 1 / p
            for c in row:
                row[c] *= inv
            self.b[r] *= inv
        br = self.b[r]
        for i in list(colrows[j]):
            if i == r:
                continue
            Ti = T[i]
            f = Ti[j]
            for c, v in row.items():
                old = Ti.get(c)
                if old is None:
                    Ti[c] = -f * v
                    colrows.setdefault(c, set()).add(i)
                else:
                    nv = old - f * v
                    if nv:
                        Ti[c] = nv
                    else:
                        del Ti[c]
                        colrows[c].discard(i)
            if br:
                self.b[i] -= f * br
        if obj is not None:
            f = obj.get(j)
            if f:
                for c, v in row.items():
                    nv = obj.get(c, ZERO) - f * v
                    if nv:
                        obj[c] = nv
                    else:
                        obj.pop(c, None)
                self.z += f * br
        self.basis[r] = j
        self.pivots += 1

    def _entering(self, obj: dict, bland: bool) -> int | None:
        n = self.n
        best, best_val = None, ZERO
        for j, d in obj.items():
            if d < 0 and j < n:
                if bland:
                    if best is None or j < best:
                        best = j
                elif d < best_val or (d == best_val and j < best):
                    best, best_val = j, d
        return best

    def _leaving(self, j: int) -> int | None:
        best, ratio = None, None
        T, b, basis = self.T, self.b, self.basis
        for i in self.colrows.get(j, ()):
            a = T[i][j]
            if a > 0:
                q = b[i] / a
                if ratio is None or q < ratio or (q == ratio and basis[i] < basis[best]):
                    best, ratio = i, q
        return best

    def run(self, obj: dict, stop_at_zero: bool = False) -> tuple[str, int | None]:
        """Minimise until optimal; returns ('optimal', None) or ('unbounded', column)."""
        streak = 0
        while True:
            if stop_at_zero and self.z == 0:
                return "optimal", None
            j = self._entering(obj, streak >= DEGENERATE_STREAK)
            if j is None:
                return "optimal", None
            r = self._leaving(j)
            if r is None:
                return "unbounded", j
            streak = streak + 1 if self.b[r] == 0 else 0
            self.pivot(r, j, obj)

    def phase1(self) -> bool:
        self.run(self.obj, stop_at_zero=True)
        return self.z == 0

    def farkas(self) -> dict[int, mpq]:
        """Reduced-row multipliers y with y^T A >= 0 and y^T b < 0 after a failed phase I."""
        y = {}
        for i in range(self.m):
            d = self.obj.get(self.n + i, ZERO)
            yi = -(ONE - d) * self.sign[i]
            if yi:
                y[i] = yi
        return y

    def solution(self) -> dict[int, mpq]:
        return {bv: self.b[r] for r, bv in enumerate(self.basis) if self.live[r] and bv < self.n and self.b[r]}

    def drop_artificials(self) -> None:
        """After a successful phase I: pivot artificials out of the basis or drop redundant rows."""
        n = self.n
        for r in range(self.m):
            if not self.live[r] or self.basis[r] < n:
                continue
            cand = [c for c in self.T[r] if c < n]
            if cand:
                self.pivot(r, min(cand), None)
            else:
                self.live[r] = False
                for c in self.T[r]:
                    self.colrows[c].discard(r)
                self.T[r] = {}
                self.b[r] = ZERO
        for r in range(self.m):
            row = self.T[r]
            for c in [c for c in row if c >= n]:
                del row[c]
        for c in [c for c in self.colrows if c >= n]:
            del self.colrows[c]
        self.obj = {}

    def maximize(self, v: int) -> tuple[str, dict[int, mpq]]:
        """Maximise x_v from the current feasible basis (warm start)."""
        obj: dict[int, mpq] = {}
        self.z = ZERO
        for r, bv in enumerate(self.basis):
            if self.live[r] and bv == v:
                obj = {c: a for c, a in self.T[r].items() if c != v}
                self.z = -self.b[r]
                break
        else:
            obj = {v: -ONE}
        status, j = self.run(obj)
        x = self.solution()
        if status == "unbounded":
            ray = {j: ONE}
            for i in self.colrows.get(j, ()):
                if self.live[i]:
                    ray[self.basis[i]] = -self.T[i][j]
            for c, a in ray.items():
                x[c] = x.get(c, ZERO) + a
            return UNBOUNDED, x
        return "optimal", x


# public entry points


class _Solver:
    def __init__(self, sys: LinearSystem):
        self.sys = sys
        self.red = _Reduction(sys)
        self.red.run()
        self.simplex = None
        self.col_ids: list[int] = []

    def solve(self) -> FeasibilityResult:
        red = self.red
        if red.conflict is not None:
            return self._infeasible(red.conflict, (0, 0))
        row_ids, col_ids, rows, rhs = red.reduced()
        self.col_ids = col_ids
        sx = _Simplex(rows, rhs, len(col_ids))
        self.simplex = sx
        shape = (len(row_ids), len(col_ids))
        log.debug("LP %s reduced to %s", self.sys.shape, shape)
        if sx.phase1():
            return FeasibilityResult("feasible", self._witness(sx.solution()), None, shape)
        y = {row_ids[i]: v for i, v in sx.farkas().items()}
        return self._infeasible(y, shape)

    def _infeasible(self, y, shape) -> FeasibilityResult:
        cert = self.red.lift_certificate(y)
        if not check_certificate(self.sys, cert):
            raise VerificationError("Farkas certificate failed the exact check")
        return FeasibilityResult("infeasible", None, {i: to_fraction(v) for i, v in cert.items()}, shape)

    def lift(self, x_red: Mapping[int, mpq]) -> list[mpq]:
        return self.red.lift_solution({self.col_ids[j]: v for j, v in x_red.items()})

    def _witness(self, x_red) -> dict[str, Fraction]:
        x = self.lift(x_red)
        witness = {name: to_fraction(v) for name, v in zip(self.sys.variables, x)}
        bad = self.sys.first_violation(witness)
        if bad is not None:
            raise VerificationError(f"witness violates row {bad}")
        return witness


def _rounded(values, limit: int) -> list[Fraction]:
    return [Fraction(float(v)).limit_denominator(limit) for v in values]


def guided_feasible(sys: LinearSystem) -> FeasibilityResult | None:
    """Float solve, round to rationals, keep only what passes the exact check."""
    try:
        import numpy as np
        from scipy.optimize import linprog
        from scipy.sparse import csr_matrix
    except ImportError:
        return None
    m, n = sys.shape
    ri, ci, vals = [], [], []
    for i, row in enumerate(sys.rows):
        for j, a in row.items():
            ri.append(i)
            ci.append(j)
            vals.append(float(a))
    A = csr_matrix((vals, (ri, ci)), shape=(m, n))
    b = np.array([float(v) for v in sys.rhs])
    for method in ("highs-ipm", "highs-ds"):
        res = linprog(np.zeros(n), A_eq=A, b_eq=b, bounds=(0, None), method=method)
        if res.status == 0:
            for limit in GUIDE_DENOMINATORS:
                x = [max(v, Fraction(0)) for v in _rounded(res.x, limit)]
                if sys.first_violation(x) is None:
                    return FeasibilityResult("feasible", dict(zip(sys.variables, x)), None, (m, n), "guided")
        elif res.status == 2:
            ray = linprog(np.zeros(m), A_ub=-A.T, b_ub=np.zeros(n), A_eq=b.reshape(1, -1), b_eq=[-1.0],
                          bounds=(None, None), method=method)
            if ray.status == 0:
                for limit in GUIDE_DENOMINATORS:
                    y = {i: v for i, v in enumerate(_rounded(ray.x, limit)) if v}
                    if check_certificate(sys, y):
                        return FeasibilityResult("infeasible", None, y, (m, n), "guided")
    log.info("float guide gave nothing verifiable for a %s system; running the exact simplex", sys.shape)
    return None


def feasible(sys: LinearSystem, guide: bool | str = "auto") -> FeasibilityResult:
    """Exact decision with a re-verified witness or Farkas certificate.

    ``guide="auto"`` tries the float guide when more than GUIDE_ROWS rows
    survive presolve; True always tries it, False never does.
    """
    solver = _Solver(sys)
    if guide and solver.red.conflict is None:
        if guide is True or sum(solver.red.active) > GUIDE_ROWS:
            res = guided_feasible(sys)
            if res is not None:
                return res
    return solver.solve()


def _prepare(sys: LinearSystem) -> _Solver:
    solver = _Solver(sys)
    res = solver.solve()
    if not res.feasible:
        raise InfeasibleError("system is infeasible")
    solver.simplex.drop_artificials()
    return solver


def maximize(sys: LinearSystem, objective: str):
    """Exact maximum of one variable, or UNBOUNDED."""
    solver = _prepare(sys)
    rep, mult = solver.red.resolve(sys.index[objective])
    if rep is None:
        return Fraction(0)
    pos = solver.col_ids.index(rep)
    status, x = solver.simplex.maximize(pos)
    if status == UNBOUNDED:
        return UNBOUNDED
    return to_fraction(mult * x.get(pos, ZERO))


def max_support_solution(sys: LinearSystem, variables: Iterable[str] | None = None
                         ) -> tuple[dict[str, Fraction], frozenset[str]]:
    """A feasible point whose support is maximal over the requested variables.

    Each candidate variable not already positive in an earlier probe is
    maximised from the previous optimal basis; the witness is the equal-weight
    average of the probe solutions.
    """
    solver = _prepare(sys)
    sx = solver.simplex
    pos_of = {j: p for p, j in enumerate(solver.col_ids)}
    names = sys.variables if variables is None else list(variables)
    probes = [sx.solution()]
    positive = set(probes[0])
    for name in names:
        rep, _ = solver.red.resolve(sys.index[name])
        if rep is None:
            continue
        p = pos_of[rep]
        if p in positive:
            continue
        _, x = sx.maximize(p)
        if x.get(p, ZERO) > 0:
            probes.append(x)
            positive.update(x)
    avg: dict[int, mpq] = {}
    w = mpq(1, len(probes))
    for x in probes:
        for j, v in x.items():
            avg[j] = avg.get(j, ZERO) + w * v
    witness = solver._witness(avg)
    support = frozenset(name for name, v in witness.items() if v)
    return witness, support
