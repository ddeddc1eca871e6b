"""Exact polyhedral engine.

Cells are given by H-representations whose constraint rows are rational
vectors with a trailing affine offset: a row (a, b) means <a, x> + b  in
relation (=, >=, >) 0.  Offsets are all zero for honest cones; tropical
hypersurfaces of polynomials with nonzero coefficient valuations produce
translated cells, which is why offsets exist at all.

Newton polytopes, their face lattices (via exact double description for the
facets plus a closure BFS on vertex-facet incidences), inner normal fans,
tropical hypersurface complexes, common refinements with half-open pruning,
f-vectors and Euler characteristics all live here.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import lp
from .errors import InternalInvariantError, PreconditionError
from .linalg import (Echelon, affine_rank, dot, int_reduce_ineq, int_rref,
                     is_zero_vec, kernel_basis, primitive, rank,
                     reduce_mod_rowspace, rref, solve, vec, vsub)


def _as_row(ambient_dim, v):
    """Accept a length-N vector (offset 0) or length-N+1 vector (trailing
    offset); return (vector, offset)."""
    v = vec(v)
    if len(v) == ambient_dim:
        return v, Fraction(0)
    if len(v) == ambient_dim + 1:
        return v[:-1], v[-1]
    raise PreconditionError("constraint length does not match ambient dimension")


def _row_value(row, x):
    a, b = row
    return dot(a, x) + b


def _homogenize(rows):
    return [a + (b,) for a, b in rows]


class HalfOpenCone:
    """H-represented cell with strict-inequality flags.

    equalities/weak_ineqs/strict_ineqs are stored as (vector, offset) pairs.
    """

    def __init__(self, ambient_dim, equalities=(), weak_ineqs=(), strict_ineqs=()):
        self.ambient_dim = ambient_dim
        self.equalities = tuple(_as_row(ambient_dim, v) for v in equalities)
        self.weak_ineqs = tuple(_as_row(ambient_dim, v) for v in weak_ineqs)
        self.strict_ineqs = tuple(_as_row(ambient_dim, v) for v in strict_ineqs)
        self._feasible = None
        self._canonical = None

    @property
    def is_conic(self):
        return all(b == 0 for _, b in
                   self.equalities + self.weak_ineqs + self.strict_ineqs)

    def is_feasible(self):
        if self._feasible is None:
            if self.is_conic:
                n = self.ambient_dim
                if n <= lp.FM_DIM_LIMIT:
                    ok = lp.fm_feasible(n, [a for a, _ in self.equalities],
                                        [a for a, _ in self.weak_ineqs],
                                        [a for a, _ in self.strict_ineqs])
                else:
                    ok = lp.feasible_point(n, list(self.equalities),
                                           list(self.weak_ineqs),
                                           list(self.strict_ineqs)) is not None
            else:
                ok = lp.system_feasible(self.ambient_dim, list(self.equalities),
                                        list(self.weak_ineqs),
                                        list(self.strict_ineqs))
            self._feasible = ok
        return self._feasible

    def contains(self, x):
        x = vec(x)
        return (all(_row_value(r, x) == 0 for r in self.equalities)
                and all(_row_value(r, x) >= 0 for r in self.weak_ineqs)
                and all(_row_value(r, x) > 0 for r in self.strict_ineqs))

    def closure(self):
        return Cone(self.ambient_dim,
                    [a + (b,) for a, b in self.equalities],
                    [a + (b,) for a, b in self.weak_ineqs
                     + self.strict_ineqs])


class Cone(HalfOpenCone):
    """Closed cell: a polyhedral cone when all offsets are zero.

    Canonical form: implicit equalities moved into the equality block, the
    equality block replaced by the primitive RREF basis of its span, the
    remaining inequalities reduced modulo that span, made primitive integer,
    stripped of redundancy by exact LP, and sorted.  Set-equal cells get
    syntactically equal canonical keys, which is what deduplication and orbit
    identification compare.
    """

    def __init__(self, ambient_dim, equalities=(), weak_ineqs=(), canonical=None):
        super().__init__(ambient_dim, equalities, weak_ineqs, ())
        self._canonical = canonical

    # -- canonical form ----------------------------------------------------

    def canonical_key(self):
        if self._canonical is None:
            self._canonical = _canonicalize_rows(
                self.ambient_dim,
                _homogenize(self.equalities),
                _homogenize(self.weak_ineqs),
                conic=self.is_conic)
        return self._canonical

    def __eq__(self, other):
        return (isinstance(other, Cone)
                and self.ambient_dim == other.ambient_dim
                and self.canonical_key() == other.canonical_key())

    def __hash__(self):
        return hash((self.ambient_dim, self.canonical_key()))

    def canonical(self):
        """A Cone rebuilt from the canonical key (irredundant H-form)."""
        eqs, ineqs = self.canonical_key()
        return Cone(self.ambient_dim, eqs, ineqs, canonical=(eqs, ineqs))

    def dim(self):
        eqs, _ = self.canonical_key()
        return self.ambient_dim - len(eqs)

    def lineality_dim(self):
        rows = [a for a, _ in self.equalities + self.weak_ineqs]
        return self.ambient_dim - rank(rows)

    def relative_interior(self):
        """The relint of the canonical form as a HalfOpenCone."""
        eqs, ineqs = self.canonical_key()
        return HalfOpenCone(self.ambient_dim, eqs, (), ineqs)


def _canonicalize_rows(ambient_dim, eq_rows, ineq_rows, conic):
    """Canonical (equalities, inequalities) key for a nonempty cell.

    Rows are homogenized length-(N+1) vectors.  Affine cells are treated as
    their homogenization cone with the extra row s >= 0; conic cells keep the
    offset coordinate around too (it is identically zero there), so keys of
    conic and affine cells never collide by accident.
    """
    n = ambient_dim + 1
    eq_rows = [vec(r) for r in eq_rows]
    ineq_rows = [vec(r) for r in ineq_rows]
    if not conic:
        s_row = tuple([Fraction(0)] * ambient_dim + [Fraction(1)])
        ineq_rows = ineq_rows + [s_row]

    def strict_feasible(extra_strict, among):
        dim_ok = n <= lp.FM_DIM_LIMIT + 1
        if dim_ok:
            return lp.fm_feasible(n, eq_rows, among, [extra_strict])
        eqs = [(r, 0) for r in eq_rows]
        weak = [(r, 0) for r in among]
        return lp.feasible_point(n, eqs, weak, [(extra_strict, 0)]) is not None

    # implicit equalities: a >= 0 with no point a > 0 is forced to zero
    forced, kept = [], []
    for a in ineq_rows:
        if strict_feasible(a, ineq_rows):
            kept.append(a)
        else:
            forced.append(a)
    eq_red, pivots = rref(eq_rows + forced)
    eq_key = tuple(primitive(r) for r in eq_red)

    seen = {}
    for a in kept:
        r = primitive(reduce_mod_rowspace(a, eq_red, pivots))
        if not is_zero_vec(r):
            seen[r] = True
    ineqs = sorted(seen)

    irredundant = []
    for i, a in enumerate(ineqs):
        others = irredundant + ineqs[i + 1:]
        neg = tuple(-x for x in a)
        if strict_feasible(neg, others):
            irredundant.append(a)
    return eq_key, tuple(irredundant)


def permute_canonical_key(key, perm):
    """Apply a coordinate permutation to a canonical key and recanonicalize.

    perm maps coordinate i to perm[i]; the trailing offset coordinate stays
    put.  Permuting an irredundant H-form keeps it irredundant, so this needs
    only linear algebra, no LP.
    """
    eq_rows, ineq_rows = key

    def act(row):
        out = [Fraction(0)] * len(row)
        for i, v in enumerate(row[:-1]):
            out[perm[i]] = v
        out[-1] = row[-1]
        return tuple(out)

    eq_red, pivots = rref([act(r) for r in eq_rows])
    eq_key = tuple(primitive(r) for r in eq_red)
    ineqs = sorted({primitive(reduce_mod_rowspace(act(r), eq_red, pivots))
                    for r in ineq_rows})
    return eq_key, tuple(ineqs)


def lp_feasible(cell):
    """Exact nonemptiness of a half-open cell."""
    return cell.is_feasible()


def cone_dim(cell):
    return cell.dim()


def cone_contains(cell, x):
    return cell.contains(x)


def relative_interior_point(cell):
    """A rational point strictly inside every non-equality facet."""
    eqs, ineqs = cell.canonical_key()
    n = cell.ambient_dim
    eq_pairs = [(r[:-1], r[-1]) for r in eqs]
    strict_pairs = [(r[:-1], r[-1]) for r in ineqs]
    x = lp.feasible_point(n, eq_pairs, [], strict_pairs)
    if x is None:
        raise PreconditionError("cell is empty")
    return x


# ---------------------------------------------------------------------------
# Polytopes and face lattices

@dataclass(frozen=True)
class Polytope:
    """V-representation; redundant points are allowed unless filtered."""

    vertices: tuple

    def __post_init__(self):
        pts = tuple(vec(p) for p in self.vertices)
        if not pts:
            raise PreconditionError("empty point set")
        object.__setattr__(self, "vertices", pts)

    @property
    def ambient_dim(self):
        return len(self.vertices[0])

    def dim(self):
        return affine_rank(self.vertices)


def is_vertex(points, idx):
    """Exact test: points[idx] is not a convex combination of the rest."""
    p = points[idx]
    others = [q for i, q in enumerate(points) if i != idx]
    if not others:
        return True
    m = len(others)
    eqs = []
    for c in range(len(p)):
        eqs.append((tuple(q[c] for q in others), -p[c]))
    eqs.append((tuple(Fraction(1) for _ in others), Fraction(-1)))
    weak = [(tuple(Fraction(1 if j == i else 0) for j in range(m)), Fraction(0))
            for i in range(m)]
    return lp.feasible_point(m, eqs, weak, []) is None


def newton_polytope(f):
    """Convex hull of the exponent vectors, with non-vertices removed."""
    if not f.terms:
        raise PreconditionError("empty polynomial")
    points = [vec(a) for _, _, a in f.terms]
    keep = [p for i, p in enumerate(points) if is_vertex(points, i)]
    return Polytope(tuple(keep))


def _extreme_rays_pointed(constraints, dim):
    """Extreme rays of a pointed cone {z : <c, z> >= 0 for c in constraints}
    by incremental double description with the combinatorial adjacency test.

    The constraint rows must have rank = dim.
    """
    # initial simplicial subcone from dim independent rows
    chosen, chosen_idx = [], []
    ech = Echelon()
    for i, c in enumerate(constraints):
        if ech.add(c):
            chosen.append(c)
            chosen_idx.append(i)
            if len(chosen) == dim:
                break
    if len(chosen) < dim:
        raise InternalInvariantError("cone is not pointed")
    rays = []
    for j in range(dim):
        rhs = [Fraction(1 if k == j else 0) for k in range(dim)]
        r = solve(chosen, rhs)
        rays.append(primitive(r))

    def tight_set(r, upto):
        return frozenset(i for i in upto if dot(constraints[i], r) == 0)

    processed = list(chosen_idx)
    for idx, h in enumerate(constraints):
        if idx in chosen_idx:
            continue
        vals = [dot(h, r) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > 0]
        zero = [r for r, v in zip(rays, vals) if v == 0]
        neg = [(r, v) for r, v in zip(rays, vals) if v < 0]
        if neg:
            tights = {r: tight_set(r, processed) for r in rays}
            new = []
            for rp in pos:
                vp = dot(h, rp)
                for rn, vn in neg:
                    common = tights[rp] & tights[rn]
                    adjacent = not any(
                        t != rp and t != rn and common <= tights[t]
                        for t in rays)
                    if adjacent:
                        cand = tuple(vp * a - vn * b for a, b in zip(rn, rp))
                        new.append(primitive(cand))
            rays = pos + zero + sorted(set(new))
        processed.append(idx)
    return sorted(set(rays))


def polytope_facets(poly):
    """Facet data of conv(points), exactly.

    Returns (facets, reduced) where facets is a list of
    (vertex_index_frozenset, reduced_normal, offset) and reduced holds the
    affine-coordinate data (origin, basis) used to express normals.
    Points that are not vertices still show up in the incidence sets, which
    is what argmin cells need.
    """
    pts = [vec(p) for p in poly.vertices]
    p0 = pts[0]
    basis = []
    ech = Echelon()
    for p in pts[1:]:
        diff = vsub(p, p0)
        if ech.add(diff):
            basis.append(diff)
    d = len(basis)
    if d == 0:
        return [], (p0, [])
    bt = list(zip(*basis))  # rows of the (N x d) basis matrix, transposed
    coords = []
    for p in pts:
        y = solve(bt, vsub(p, p0))
        coords.append(vec(y))
    duals = [y + (Fraction(1),) for y in coords]
    rays = _extreme_rays_pointed(duals, d + 1)
    facets = []
    for r in rays:
        a, b = r[:-1], r[-1]
        inc = frozenset(i for i, y in enumerate(coords) if dot(a, y) + b == 0)
        facets.append((inc, a, b))
    facets.sort(key=lambda t: sorted(t[0]))
    return facets, (p0, basis)


def face_lattice(poly):
    """All nonempty faces of conv(points) as point-index sets.

    Returns (faces, covers) where faces maps frozenset -> dimension and
    covers maps each face to the list of faces one dimension up containing
    it.  The polytope itself is included; the empty face is not.
    """
    m = len(poly.vertices)
    top = frozenset(range(m))
    dim_top = poly.dim()
    facets, _ = polytope_facets(poly)
    facet_sets = [inc for inc, _, _ in facets]
    faces = {top: dim_top}
    covers = {top: []}
    level = [top]
    depth = dim_top
    while level and depth > 0:
        nxt = {}
        for face in level:
            children = set()
            for g in facet_sets:
                c = face & g
                if c and c != face:
                    children.add(c)
            maximal = [c for c in children
                       if not any(c < o for o in children if o != c)]
            for c in maximal:
                nxt.setdefault(c, []).append(face)
        for c, parents in nxt.items():
            faces[c] = depth - 1
            covers.setdefault(c, [])
            for p in parents:
                covers[c].append(p)
        level = list(nxt)
        depth -= 1
    return faces, covers


# ---------------------------------------------------------------------------
# Fans and hypersurface complexes

@dataclass(frozen=True)
class FVector:
    """Cell counts per dimension, counting up from the smallest cell.

    For a fan the smallest cell is the lineality space and the leading count
    is 1.
    """

    counts: tuple
    start_dim: int

    def __iter__(self):
        return iter(self.counts)

    def as_tuple(self):
        return self.counts


class Fan:
    """A finite collection of cells grouped by dimension.

    For genuinely conic input this is a fan in the usual sense; refinements
    of translated hypersurfaces reuse the same container with offset cells.
    """

    def __init__(self, ambient_dim, cells, rays=None, cell_rays=None):
        self.ambient_dim = ambient_dim
        self.cells = list(cells)
        self.rays = rays            # optional primitive ray generators
        self.cell_rays = cell_rays  # optional per-cell ray index tuples
        self._by_dim = None

    def cells_by_dim(self):
        if self._by_dim is None:
            by = {}
            for c in self.cells:
                by.setdefault(c.dim(), []).append(c)
            self._by_dim = dict(sorted(by.items()))
        return self._by_dim

    @property
    def lineality_dim(self):
        rows = []
        for c in self.cells:
            rows.extend(a for a, _ in c.equalities + c.weak_ineqs)
        return self.ambient_dim - rank(rows)

    def max_cells(self):
        by = self.cells_by_dim()
        return by[max(by)] if by else []

    def support_contains(self, x):
        return any(c.contains(x) for c in self.cells)

    def f_vector(self):
        by = self.cells_by_dim()
        if not by:
            return FVector((), 0)
        lo, hi = min(by), max(by)
        return FVector(tuple(len(by.get(d, ())) for d in range(lo, hi + 1)), lo)

    def half_open_decomposition(self):
        """The relative interiors of all cells: pairwise disjoint half-open
        cells whose union is the support."""
        return [c.relative_interior() for c in self.cells]


def f_vector(fan):
    return fan.f_vector()


def euler_characteristic(fv, lineality_dim):
    """Alternating sum over cells above the lineality space.

    Cells of dimension lineality_dim + 1 + k count with sign (-1)^k: each is
    a k-cell of the induced spherical complex.
    """
    counts = list(fv.counts) if isinstance(fv, FVector) else list(fv)
    start = fv.start_dim if isinstance(fv, FVector) else lineality_dim
    total = 0
    for i, c in enumerate(counts):
        d = start + i
        if d >= lineality_dim + 1:
            total += (-1) ** (d - lineality_dim - 1) * c
    return total


def _face_cone(points, face, covers_of_face, lift=None):
    """H-representation of the (inner) normal cone of a face.

    points are the polytope points, face a point-index frozenset; one
    inequality per covering face.  With lift, rows carry the lift offsets
    (the argmin-cell form used by hypersurface complexes).
    """
    idx = sorted(face)
    v0 = idx[0]

    def row(u):
        a = vsub(points[u], points[v0])
        b = (lift[u] - lift[v0]) if lift is not None else Fraction(0)
        return a + (b,)

    eq_rows = []
    ech = Echelon()
    for u in idx[1:]:
        r = row(u)
        if ech.add(r):
            eq_rows.append(r)
    ineq_rows = []
    for parent in covers_of_face:
        u = min(parent - face)
        ineq_rows.append(row(u))
    return eq_rows, ineq_rows


def _conic_cell(ambient_dim, eq_rows, ineq_rows):
    """Cone from homogenized rows with zero offsets, with its canonical key
    precomputed combinatorially (valid for normal-fan cells: the face gives
    a relative interior point, so there are no implicit equalities, and one
    inequality per cover is already irredundant)."""
    eq_red, pivots = rref(eq_rows)
    eq_key = tuple(primitive(r) for r in eq_red)
    ineqs = tuple(sorted({primitive(reduce_mod_rowspace(r, eq_red, pivots))
                          for r in ineq_rows}))
    return Cone(ambient_dim, eq_rows, ineq_rows, canonical=(eq_key, ineqs))


def normal_fan(poly, ambient_dim):
    """Inner normal fan: the cone of a face F collects the weight vectors
    minimized on the polytope exactly at F."""
    if ambient_dim != poly.ambient_dim:
        raise PreconditionError("ambient dimension mismatch")
    pts = list(poly.vertices)
    if len(pts) == 1:
        whole = Cone(ambient_dim, [], [], canonical=((), ()))
        return Fan(ambient_dim, [whole], rays=[], cell_rays=[()])
    faces, covers = face_lattice(poly)
    facets, reduction = polytope_facets(poly)
    ray_vectors, facet_faces = _fan_rays(facets, reduction, ambient_dim)
    cells, cell_rays = [], []
    for face, _ in sorted(faces.items(), key=lambda kv: (kv[1], sorted(kv[0]))):
        eq_rows, ineq_rows = _face_cone(pts, face, covers[face])
        cells.append(_conic_cell(ambient_dim, eq_rows, ineq_rows))
        cell_rays.append(tuple(i for i, ff in enumerate(facet_faces)
                               if face <= ff))
    return Fan(ambient_dim, cells, rays=ray_vectors, cell_rays=cell_rays)


def _fan_rays(facets, reduction, ambient_dim):
    """Primitive ray generators of the normal fan, one per polytope facet,
    expressed in the original coordinates (inside span(P - P))."""
    p0, basis = reduction
    rays, faces = [], []
    if not basis:
        return rays, faces
    gram = [[dot(u, v) for v in basis] for u in basis]
    for inc, a, _ in facets:
        u = solve(gram, a)
        w = tuple(sum(u[k] * basis[k][i] for k in range(len(basis)))
                  for i in range(ambient_dim))
        rays.append(primitive(w))
        faces.append(inc)
    return rays, faces


def hypersurface_fan(f):
    """Cells of {omega : the omega-degree minimum of f is attained twice}.

    With all coefficient valuations zero this is the codimension-one
    skeleton of the inner normal fan of the Newton polytope; nonzero
    valuations translate the cells, realized by lifting the exponents by
    their valuations and slicing the lifted normal cones at lift-weight 1.
    """
    if len(f.terms) < 2:
        raise PreconditionError("hypersurface of a monomial is empty")
    n = f.nvars
    points = [vec(a) for _, _, a in f.terms]
    lift = [c for _, c, _ in f.terms]
    conic = all(c == 0 for c in lift)
    poly = Polytope(tuple(points))
    if poly.dim() == 0:
        raise PreconditionError("all exponents equal: hypersurface is empty")
    faces, covers = face_lattice(poly if conic else
                                 Polytope(tuple(p + (c,) for p, c in
                                                zip(points, lift))))
    facets, reduction = (polytope_facets(poly) if conic else (None, None))
    cells, cell_rays = [], []
    ray_vectors, facet_faces = (_fan_rays(facets, reduction, n)
                                if conic else ([], []))
    for face, fdim in sorted(faces.items(), key=lambda kv: (kv[1], sorted(kv[0]))):
        if fdim < 1:
            continue
        if conic:
            eq_rows, ineq_rows = _face_cone(points, face, covers[face])
            cells.append(_conic_cell(n, eq_rows, ineq_rows))
            cell_rays.append(tuple(i for i, ff in enumerate(facet_faces)
                                   if face <= ff))
        else:
            eq_rows, ineq_rows = _face_cone(points, face, covers[face],
                                            lift=lift)
            cell = Cone(n, eq_rows, ineq_rows)
            probe = HalfOpenCone(n, eq_rows, (), ineq_rows)
            if probe.is_feasible():  # lower faces only
                cells.append(cell.canonical())
    if conic:
        return Fan(n, cells, rays=ray_vectors, cell_rays=cell_rays)
    return Fan(n, cells)


def common_refinement(fans, domain=None):
    """All nonempty intersections of one cell per fan (and the domain).

    Every fan must be face-complete.  The search walks relative interiors,
    pruning any branch whose half-open partial intersection is empty; each
    surviving tuple contributes the closed intersection of the chosen cells,
    deduplicated by canonical form.
    """
    if not fans:
        raise PreconditionError("need at least one fan")
    n = fans[0].ambient_dim
    if any(f.ambient_dim != n for f in fans):
        raise PreconditionError("ambient dimension mismatch")
    base_eq, base_weak = [], []
    if domain is not None:
        if domain.ambient_dim != n:
            raise PreconditionError("domain dimension mismatch")
        base_eq = list(domain.equalities)
        base_weak = list(domain.weak_ineqs)

    fan_cells = []
    for f in fans:
        cells = sorted(f.cells, key=lambda c: c.canonical_key())
        fan_cells.append([(c, c.canonical_key()) for c in cells])

    out = {}

    def walk(level, eqs, stricts):
        if level == len(fan_cells):
            closed = Cone(n,
                          [a + (b,) for a, b in base_eq + eqs],
                          [a + (b,) for a, b in base_weak]
                          + [a + (b,) for a, b in stricts])
            out.setdefault(closed.canonical_key(), closed)
            return
        for cell, key in fan_cells[level]:
            ek, ik = key
            eqs2 = eqs + [(r[:-1], r[-1]) for r in ek]
            stricts2 = stricts + [(r[:-1], r[-1]) for r in ik]
            if lp.system_feasible(n, base_eq + eqs2, base_weak, stricts2):
                walk(level + 1, eqs2, stricts2)

    walk(0, [], [])
    return Fan(n, [c.canonical() for c in out.values()])
