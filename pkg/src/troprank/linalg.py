"""Exact rational linear algebra on tuples of Fractions.

Vectors are tuples of Fraction, matrices are lists/tuples of such rows.
Everything here is exact; nothing ever touches floats.
"""

from fractions import Fraction
from math import gcd


def vec(xs):
    return tuple(Fraction(x) for x in xs)


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u):
    c = Fraction(c)
    return tuple(c * a for a in u)


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def is_zero_vec(u):
    return all(a == 0 for a in u)


def primitive(u):
    """Scale a rational vector by a positive rational so its entries become
    coprime integers; returns a tuple of ints.  Zero stays zero."""
    if is_zero_vec(u):
        return tuple(0 for _ in u)
    den = 1
    for a in u:
        a = Fraction(a)
        den = den * a.denominator // gcd(den, a.denominator)
    ints = [int(Fraction(a) * den) for a in u]
    g = 0
    for a in ints:
        g = gcd(g, a)
    return tuple(a // g for a in ints)


def rref(rows):
    """Reduced row echelon form.

    Returns (reduced_rows, pivot_columns).  Zero rows are dropped, pivots are
    normalized to 1, and pivot columns are cleared above and below, so the
    output is a canonical basis of the row space.
    """
    m = [list(vec(r)) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [a * inv for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(rows):
    return len(rref(rows)[0])


def reduce_mod_rowspace(u, reduced_rows, pivots):
    """Subtract row-space multiples so the pivot coordinates of u vanish.

    With reduced_rows in RREF this picks a canonical coset representative of
    u modulo the row space.
    """
    u = list(vec(u))
    for row, c in zip(reduced_rows, pivots):
        if u[c] != 0:
            f = u[c]
            u = [a - f * b for a, b in zip(u, row)]
    return tuple(u)


def kernel_basis(rows, ncols):
    """Basis of {x : rows @ x = 0}, via RREF back-substitution."""
    red, pivots = rref(rows)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, c in zip(red, pivots):
            x[c] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(rows, rhs):
    """One exact solution of rows @ x = rhs, or None if inconsistent."""
    if not rows:
        return None if any(b != 0 for b in rhs) else ()
    ncols = len(rows[0])
    aug = [list(vec(r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    x = [Fraction(0)] * ncols
    for row, c in zip(red, pivots):
        if c == ncols:
            return None  # pivot in the augmented column: inconsistent
        x[c] = row[ncols]
    return tuple(x)


def affine_rank(points):
    """Dimension of the affine hull of a set of rational points."""
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return rank([vsub(p, p0) for p in points[1:]])


def int_rref(rows):
    """Canonical reduced echelon of integer rows, in integer arithmetic.

    Output rows are primitive with positive pivot entries and zeros in the
    other pivot columns, sorted by pivot column: the unique such basis of
    the row space, identical to RREF-over-Q scaled primitive.  Returns
    (rows, pivots).
    """
    red = []  # [pivot column, row-as-list]
    for row in rows:
        r = list(row)
        for c, pr in red:
            if r[c]:
                g = gcd(pr[c], r[c])
                ma, mb = pr[c] // g, r[c] // g
                r = [ma * x - mb * y for x, y in zip(r, pr)]
        piv = next((i for i, x in enumerate(r) if x), None)
        if piv is None:
            continue
        g = 0
        for x in r:
            g = gcd(g, x)
        if r[piv] < 0:
            g = -g
        r = [x // g for x in r]
        for entry in red:
            c, pr = entry
            if pr[piv]:
                g = gcd(r[piv], pr[piv])
                ma, mb = r[piv] // g, pr[piv] // g  # ma > 0: pivot signs kept
                npr = [ma * x - mb * y for x, y in zip(pr, r)]
                g2 = 0
                for x in npr:
                    g2 = gcd(g2, x)
                entry[1] = [x // g2 for x in npr]
        red.append([piv, r])
    red.sort()
    return [tuple(r) for _, r in red], [c for c, _ in red]


def int_reduce_ineq(row, red, pivots):
    """Canonical coset representative of an integer inequality row modulo an
    int_rref row space: pivot coordinates cleared using positive scalings
    only (so the halfspace is unchanged), then made primitive."""
    r = list(row)
    for c, pr in zip(pivots, red):
        if r[c]:
            g = gcd(pr[c], r[c])
            mp, mb = pr[c] // g, r[c] // g  # mp > 0
            r = [mp * x - mb * y for x, y in zip(r, pr)]
    g = 0
    for x in r:
        g = gcd(g, x)
    if g == 0:
        return tuple(r)
    return tuple(x // g for x in r)


class Echelon:
    """Incremental row echelon, for building independent row sets cheaply."""

    def __init__(self):
        self.rows = {}  # pivot column -> row (pivot normalized to 1)

    def reduce(self, row):
        row = list(vec(row))
        for c, r in self.rows.items():
            if row[c] != 0:
                f = row[c]
                row = [a - f * b for a, b in zip(row, r)]
        return row

    def add(self, row):
        """Insert if independent; returns True when the rank grew."""
        red = self.reduce(row)
        piv = next((c for c, a in enumerate(red) if a != 0), None)
        if piv is None:
            return False
        inv = 1 / red[piv]
        self.rows[piv] = tuple(a * inv for a in red)
        return True

    @property
    def rank(self):
        return len(self.rows)
