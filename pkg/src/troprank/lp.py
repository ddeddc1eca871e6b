"""Exact linear programming over the rationals.

Three solvers, all exact:

* a Fourier-Motzkin eliminator for feasibility of small systems (used for
  ambient dimension <= 6),
* a two-phase rational simplex with Bland's rule (terminating, any size),
* a Bellman-Ford check for difference-constraint systems, the shape that
  tropical argmin conditions produce.

Constraints are (vector, offset) pairs meaning <a, x> + b  (=, >=, >)  0.
Offsets are zero for cones; affine cells carry genuine offsets.
"""

from fractions import Fraction

from .linalg import Fraction as _F  # noqa: F401  (re-export convenience)
from .linalg import dot, is_zero_vec, primitive, vec

FM_DIM_LIMIT = 6


# ---------------------------------------------------------------------------
# Fourier-Motzkin

def _fm_normalize(rows):
    """Dedupe rows by primitive vector, keeping the strict version if both a
    weak and a strict copy of the same halfspace occur."""
    seen = {}
    for v, strict in rows:
        key = primitive(v)
        if is_zero_vec(key):
            if strict:
                return None  # 0 > 0 is a contradiction
            continue
        seen[key] = seen.get(key, False) or strict
    return [(k, s) for k, s in seen.items()]


def fm_feasible(dim, equalities, weak, strict):
    """Feasibility of a homogeneous system by Fourier-Motzkin elimination.

    equalities/weak/strict are lists of length-dim rational vectors.  Exact;
    intended for dim <= FM_DIM_LIMIT, above which the simplex is cheaper.
    """
    eqs = [vec(e) for e in equalities]
    rows = [(vec(v), False) for v in weak] + [(vec(v), True) for v in strict]

    # substitute equalities away
    live = list(range(dim))
    while eqs:
        e = eqs.pop()
        pivot = next((i for i in live if e[i] != 0), None)
        if pivot is None:
            continue  # 0 = 0
        coeff = e[pivot]

        def subst(v):
            f = v[pivot] / coeff
            return tuple(a - f * b for a, b in zip(v, e))

        eqs = [subst(x) for x in eqs]
        rows = [(subst(v), s) for v, s in rows]
        live.remove(pivot)

    rows = _fm_normalize(rows)
    if rows is None:
        return False

    while live:
        # eliminate the variable producing the fewest combinations
        best, best_cost = None, None
        for i in live:
            pos = sum(1 for v, _ in rows if v[i] > 0)
            neg = sum(1 for v, _ in rows if v[i] < 0)
            cost = pos * neg - pos - neg
            if best_cost is None or cost < best_cost:
                best, best_cost = i, cost
        i = best
        pos = [(v, s) for v, s in rows if v[i] > 0]
        neg = [(v, s) for v, s in rows if v[i] < 0]
        zero = [(v, s) for v, s in rows if v[i] == 0]
        new = zero
        for p, ps in pos:
            for q, qs in neg:
                comb = tuple(-q[i] * a + p[i] * b for a, b in zip(p, q))
                new.append((comb, ps or qs))
        rows = _fm_normalize(new)
        if rows is None:
            return False
        live.remove(i)
    return True


# ---------------------------------------------------------------------------
# Simplex

class _Tableau:
    """Dense exact simplex tableau; Bland's rule, so it always terminates."""

    def __init__(self, rows, basis, ncols):
        self.rows = rows      # m rows of length ncols+1 (rhs last)
        self.basis = basis    # basic variable per row
        self.ncols = ncols

    def pivot(self, r, c):
        row = self.rows[r]
        inv = 1 / row[c]
        self.rows[r] = [a * inv for a in row]
        for i, other in enumerate(self.rows):
            if i != r and other[c] != 0:
                f = other[c]
                self.rows[i] = [a - f * b for a, b in zip(other, self.rows[r])]
        self.basis[r] = c

    def minimize(self, cost):
        """Minimize cost (length ncols) over the current basic feasible
        tableau.  Returns (value, solution) or None if unbounded."""
        z = list(cost) + [Fraction(0)]
        for r, b in enumerate(self.basis):
            if z[b] != 0:
                f = z[b]
                z = [a - f * c for a, c in zip(z, self.rows[r] + [])]
        while True:
            enter = next((j for j in range(self.ncols) if z[j] < 0), None)
            if enter is None:
                break
            leave, best = None, None
            for r, row in enumerate(self.rows):
                if row[enter] > 0:
                    ratio = row[-1] / row[enter]
                    if best is None or ratio < best or (
                            ratio == best and self.basis[r] < self.basis[leave]):
                        leave, best = r, ratio
            if leave is None:
                return None
            f = z[enter]
            self.pivot(leave, enter)
            z = [a - f * c for a, c in zip(z, self.rows[leave])]
        x = [Fraction(0)] * self.ncols
        for r, b in enumerate(self.basis):
            x[b] = self.rows[r][-1]
        return -z[-1], x


def _standard_form(nvars, eqs, ineqs):
    """Build phase-1 tableau for {<a,x>+b = 0} u {<a,x>+b >= 0} with x free.

    Free x is split as x = u - w; each inequality gets a slack.  Returns
    (tableau, extract) where extract maps a standard-form solution back to x.
    """
    m = len(eqs) + len(ineqs)
    nslack = len(ineqs)
    ncols = 2 * nvars + nslack + m  # + artificials
    rows = []
    all_cons = [(a, b, None) for a, b in eqs] + \
               [(a, b, k) for k, (a, b) in enumerate(ineqs)]
    for r, (a, b, slack) in enumerate(all_cons):
        a = vec(a)
        rhs = -Fraction(b)
        row = list(a) + [-x for x in a] + [Fraction(0)] * (nslack + m)
        if slack is not None:
            row[2 * nvars + slack] = Fraction(-1)  # <a,x> - s = -b
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        row[2 * nvars + nslack + r] = Fraction(1)
        rows.append(row + [rhs])
    basis = [2 * nvars + nslack + r for r in range(m)]
    return _Tableau(rows, basis, ncols), nvars, nslack, m


def lp_solve(nvars, objective, eqs, ineqs, maximize=False):
    """Optimize <objective, x> over {eqs hold, ineqs hold}, x free.

    eqs and ineqs are lists of (vector, offset) with the convention
    <a,x> + b = 0 resp. >= 0.  Returns (status, x, value) with status one of
    "optimal", "infeasible", "unbounded".
    """
    tab, nv, nslack, m = _standard_form(nvars, eqs, ineqs)
    art0 = 2 * nv + nslack
    phase1 = [Fraction(0)] * art0 + [Fraction(1)] * m
    res = tab.minimize(phase1)
    if res is None or res[0] > 0:
        return "infeasible", None, None
    # drive remaining artificials out of the basis
    for r in range(m):
        if tab.basis[r] >= art0:
            c = next((j for j in range(art0) if tab.rows[r][j] != 0), None)
            if c is not None:
                tab.pivot(r, c)
    keep = [r for r in range(m) if tab.basis[r] < art0]
    tab.rows = [[v for j, v in enumerate(row) if j < art0 or j == len(row) - 1]
                for r, row in enumerate(tab.rows) if r in keep]
    tab.basis = [tab.basis[r] for r in keep]
    tab.ncols = art0

    sign = -1 if maximize else 1
    cost = [sign * Fraction(c) for c in objective]
    cost = cost + [-c for c in cost] + [Fraction(0)] * nslack
    res = tab.minimize(cost)
    if res is None:
        return "unbounded", None, None
    value, y = res
    x = tuple(y[i] - y[nv + i] for i in range(nv))
    return "optimal", x, sign * value


def feasible_point(nvars, eqs, weak, strict):
    """A point satisfying eqs, weak inequalities, and strict inequalities
    strictly, or None.  Maximizes the margin on the strict constraints."""
    if not strict:
        status, x, _ = lp_solve(nvars, [Fraction(0)] * nvars, eqs, weak)
        return x if status == "optimal" else None
    # variables (x, t): maximize t with <a,x> + b - t >= 0 on stricts, t <= 1
    eqs2 = [(tuple(a) + (Fraction(0),), b) for a, b in eqs]
    ineqs2 = [(tuple(a) + (Fraction(0),), b) for a, b in weak]
    ineqs2 += [(vec(a) + (Fraction(-1),), b) for a, b in strict]
    ineqs2.append((tuple([Fraction(0)] * nvars) + (Fraction(-1),), Fraction(1)))
    obj = [Fraction(0)] * nvars + [Fraction(1)]
    status, xt, value = lp_solve(nvars + 1, obj, eqs2, ineqs2, maximize=True)
    if status != "optimal" or value <= 0:
        return None
    return xt[:nvars]


def system_feasible(nvars, eqs, weak, strict):
    """Feasibility of an affine system, routed to FM below FM_DIM_LIMIT.

    The FM path homogenizes with an extra coordinate s and demands s > 0.
    """
    if nvars <= FM_DIM_LIMIT:
        heqs = [vec(a) + (Fraction(b),) for a, b in eqs]
        hweak = [vec(a) + (Fraction(b),) for a, b in weak]
        hstrict = [vec(a) + (Fraction(b),) for a, b in strict]
        s_pos = tuple([Fraction(0)] * nvars) + (Fraction(1),)
        return fm_feasible(nvars + 1, heqs, hweak, hstrict + [s_pos])
    return feasible_point(nvars, eqs, weak, strict) is not None


# ---------------------------------------------------------------------------
# Difference-constraint systems

def diff_feasible(nnodes, constraints):
    """Feasibility of {x_i - x_j <= c} / {x_i - x_j < c} constraints.

    constraints: iterable of (i, j, c, strict).  Infeasible exactly when some
    cycle has negative total weight, or zero total weight through a strict
    edge; detected by Bellman-Ford on (weight, strict-count) labels.
    """
    edges = [(j, i, Fraction(c), 1 if strict else 0)
             for i, j, c, strict in constraints]
    dist = [(Fraction(0), 0)] * nnodes
    for _ in range(nnodes):
        changed = False
        for u, v, c, s in edges:
            cand = (dist[u][0] + c, dist[u][1] - s)
            if cand < dist[v]:
                dist[v] = cand
                changed = True
        if not changed:
            return True
    return False  # still relaxing after nnodes rounds: bad cycle
