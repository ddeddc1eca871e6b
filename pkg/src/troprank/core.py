"""Min-plus matrix core: tropical determinants, rank, minors, initial forms.

All values are exact rationals.  A square matrix is tropically singular when
the assignment minimum over permutations is attained at least twice; the
tropical rank of a matrix is the largest r such that some r x r submatrix is
nonsingular.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError

BRUTE_FORCE_LIMIT = 6
TROP_DET_LIMIT = 12
RANK_SEARCH_LIMIT = 6


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class TropicalMatrix:
    """A d x n grid of finite exact rationals."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.entries)
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged rows")
        object.__setattr__(self, "entries", rows)

    @property
    def d(self):
        return len(self.entries)

    @property
    def n(self):
        return len(self.entries[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def submatrix(self, rows, cols):
        return TropicalMatrix(tuple(tuple(self.entries[i][j] for j in cols)
                                    for i in rows))

    def transpose(self):
        return TropicalMatrix(tuple(zip(*self.entries)))

    def flatten(self):
        """Row-major coordinate vector in R^(d*n), the weight-space order
        used by minors()."""
        return tuple(x for row in self.entries for x in row)

    def trop_mul(self, other):
        """Min-plus matrix product."""
        if self.n != other.d:
            raise ValueError("shape mismatch")
        return TropicalMatrix(tuple(
            tuple(min(self.entries[i][k] + other.entries[k][j]
                      for k in range(self.n)) for j in range(other.n))
            for i in range(self.d)))


@dataclass(frozen=True)
class SignedTropPolynomial:
    """Terms (sign, coefficient valuation, exponent vector), no repeats.

    Models polynomials whose coefficients are +-t^v: enough for minors, whose
    lifted coefficients are +-1, and for linear forms with shifted weights.
    """

    nvars: int
    terms: tuple  # of (sign, Fraction, tuple-of-int exponents)

    def __post_init__(self):
        terms = tuple(sorted((int(s), Fraction(c), tuple(int(e) for e in a))
                             for s, c, a in self.terms))
        if len({a for _, _, a in terms}) != len(terms):
            raise ValueError("repeated exponent vector")
        for s, _, a in terms:
            if s not in (1, -1):
                raise ValueError("signs must be +-1")
            if any(e < 0 for e in a):
                raise ValueError("exponents must be nonnegative")
            if len(a) != self.nvars:
                raise ValueError("exponent length mismatch")
        object.__setattr__(self, "terms", terms)

    @property
    def is_monomial(self):
        return len(self.terms) == 1

    def weight(self, term, omega):
        s, c, a = term
        return c + sum(w * e for w, e in zip(omega, a) if e)

    def min_terms(self, omega):
        """The terms of minimal omega-degree."""
        weighted = [(self.weight(t, omega), t) for t in self.terms]
        m = min(w for w, _ in weighted)
        return m, [t for w, t in weighted if w == m]


def minors(d, n, k):
    """All k x k minors of a d x n matrix of variables, as signed tropical
    polynomials in d*n variables (row-major)."""
    if not (1 <= k <= min(d, n)):
        raise PreconditionError(f"need 1 <= k <= min({d},{n})")
    out = []
    for rows in itertools.combinations(range(d), k):
        for cols in itertools.combinations(range(n), k):
            terms = []
            for perm in itertools.permutations(range(k)):
                expo = [0] * (d * n)
                for r in range(k):
                    expo[rows[r] * n + cols[perm[r]]] = 1
                terms.append((_perm_sign(perm), Fraction(0), tuple(expo)))
            out.append(SignedTropPolynomial(d * n, tuple(terms)))
    return out


@dataclass(frozen=True)
class TropDetResult:
    value: Fraction
    optimal_count: int
    optimal_permutations: tuple = ()
    count_exact: bool = True


def _require_square(m):
    if m.d != m.n:
        raise PreconditionError("tropical determinant needs a square matrix")
    if m.d > TROP_DET_LIMIT:
        raise PreconditionError(f"supported up to {TROP_DET_LIMIT}x{TROP_DET_LIMIT}")


def _brute_force_det(m):
    k = m.d
    best = None
    perms = []
    for perm in itertools.permutations(range(k)):
        v = sum(m.entries[i][perm[i]] for i in range(k))
        if best is None or v < best:
            best, perms = v, [perm]
        elif v == best:
            perms.append(perm)
    return TropDetResult(best, len(perms), tuple(perms), True)


def trop_det(m: TropicalMatrix) -> TropDetResult:
    """Minimum assignment value with exact multiplicity accounting.

    Brute force up to BRUTE_FORCE_LIMIT; above that an augmenting-path
    assignment solver gives the value and an exact unique/not-unique flag
    (optimal_count is then 1 or 2 and count_exact is False).
    """
    _require_square(m)
    if m.d <= BRUTE_FORCE_LIMIT:
        return _brute_force_det(m)
    value, assignment = _assignment(m.entries)
    unique = True
    for i in range(m.d):
        alt, _ = _assignment(m.entries, forbidden=(i, assignment[i]))
        if alt == value:
            unique = False
            break
    return TropDetResult(value, 1 if unique else 2, (), False)


def _assignment(cost, forbidden=None):
    """Exact min-cost perfect assignment (value, col-of-row list)."""
    k = len(cost)
    big = Fraction(1) + 2 * k * max(abs(x) for row in cost for x in row)
    c = [[cost[i][j] + (big if forbidden == (i, j) else 0) for j in range(k)]
         for i in range(k)]
    u = [Fraction(0)] * (k + 1)
    v = [Fraction(0)] * (k + 1)
    match = [k] * (k + 1)
    for i in range(k):
        match[k] = i
        j0 = k
        minv = [None] * k
        src = [None] * k
        used = [False] * (k + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            delta, j1 = None, None
            for j in range(k):
                if used[j]:
                    continue
                cur = c[i0][j] - u[i0] - v[j]
                if minv[j] is None or cur < minv[j]:
                    minv[j] = cur
                    src[j] = j0
                if delta is None or minv[j] < delta:
                    delta, j1 = minv[j], j
            for j in range(k + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                elif minv[j] is not None:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == k:
                break
        while j0 != k:
            j1 = src[j0]
            match[j0] = match[j1]
            j0 = j1
    assign = [None] * k
    for j in range(k):
        if match[j] != k:
            assign[match[j]] = j
    value = sum(cost[i][assign[i]] for i in range(k))
    return value, assign


def is_trop_singular(m: TropicalMatrix) -> bool:
    """True when the assignment minimum is attained by >= 2 permutations."""
    return trop_det(m).optimal_count >= 2


def tropical_rank(m: TropicalMatrix) -> int:
    """Largest r with a tropically nonsingular r x r submatrix.

    Enumerates sizes from small to large and stops at the first size with no
    nonsingular submatrix.
    """
    top = min(m.d, m.n)
    if top > RANK_SEARCH_LIMIT:
        raise PreconditionError(
            f"exhaustive submatrix search supported up to min(d,n) = {RANK_SEARCH_LIMIT}")
    rank = 0
    for r in range(1, top + 1):
        found = False
        for rows in itertools.combinations(range(m.d), r):
            for cols in itertools.combinations(range(m.n), r):
                if not is_trop_singular(m.submatrix(rows, cols)):
                    found = True
                    break
            if found:
                break
        if not found:
            return rank
        rank = r
    return rank


def nonsingular_submatrix(m: TropicalMatrix, r: int):
    """Lex-first r x r tropically nonsingular submatrix as (rows, cols),
    or None."""
    for rows in itertools.combinations(range(m.d), r):
        for cols in itertools.combinations(range(m.n), r):
            if not is_trop_singular(m.submatrix(rows, cols)):
                return rows, cols
    return None


def initial_form(f: SignedTropPolynomial, omega) -> SignedTropPolynomial:
    """Terms of minimal omega-degree, with the t-power stripped.

    The result keeps the signs of the surviving terms and zeroes their
    coefficient valuations (the residue of +-t^v at t ~ 0 is +-1).
    """
    if not f.terms:
        raise PreconditionError("empty polynomial")
    omega = tuple(Fraction(w) for w in omega)
    if len(omega) != f.nvars:
        raise PreconditionError("weight vector has wrong length")
    _, best = f.min_terms(omega)
    return SignedTropPolynomial(
        f.nvars, tuple((s, Fraction(0), a) for s, _, a in best))
