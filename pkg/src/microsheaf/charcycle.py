"""Constructible functions, local Morse groups, and characteristic cycles.

The Euler integral is the alternating sum over open cells; a sheaf's
shadow is its stalkwise Euler function.  Local Morse groups at a cell are
relative section complexes of the exactly-subdivided closed star against
the open below-region of a generic covector; their Euler characteristics
are the microlocal multiplicities.

The index check sums vertex local Morse characteristics against the global
sections (vertex-only intersections: the test covector is linear and the
cells are linear).  Dimension-one conormal cycles are stored as zero-
section multiplicities per edge plus ray multiplicities per (vertex,
toward-edge) chamber; the ray value is

    m(v, toward e) = chi(stalk at v) - chi(stalk at the opposite edge),

pinned by the constant sheaf on the circle having multiplicity +1 on the
zero section and no rays, and validated against the open-embedding limit
formula (rays added toward the removed boundary).
"""

from __future__ import annotations

import itertools
import random as _random
from fractions import Fraction

from .chaincore import Cohomology, CochainComplex, GradedSpace
from .homs import RhomCache, global_sections
from .rational import ONE, ZERO, QMatrix, as_q
from .sheaves import CellularSheaf, tensor_sheaf
from .simplicial import CellUnion, CutComplex, SimplicialComplex


class ConstructibleFunction:
    def __init__(self, complex_: SimplicialComplex, values=None):
        self.complex = complex_
        self.values = {}
        for cell, v in (values or {}).items():
            if v:
                self.values[tuple(cell)] = int(v)

    def __call__(self, cell) -> int:
        return self.values.get(tuple(cell), 0)

    def __mul__(self, other) -> "ConstructibleFunction":
        out = {}
        for cell, v in self.values.items():
            w = other(cell)
            if w:
                out[cell] = v * w
        return ConstructibleFunction(self.complex, out)

    def __add__(self, other) -> "ConstructibleFunction":
        out = dict(self.values)
        for cell, v in other.values.items():
            out[cell] = out.get(cell, 0) + v
        return ConstructibleFunction(self.complex, out)

    def __eq__(self, other):
        return isinstance(other, ConstructibleFunction) and \
            self.values == other.values


def euler_integral(phi: ConstructibleFunction) -> int:
    return sum((-1) ** (len(cell) - 1) * v for cell, v in phi.values.items())


def stalk_function(F: CellularSheaf) -> ConstructibleFunction:
    vals = {}
    for s in F.complex.simplices:
        chi = F.value(s).euler()
        if chi:
            vals[s] = chi
    return ConstructibleFunction(F.complex, vals)


def indicator(K: SimplicialComplex, cells) -> ConstructibleFunction:
    return ConstructibleFunction(K, {tuple(c): 1 for c in cells})


# ---------------------------------------------------------------------------
# covector samples and local Morse groups


class CovectorSample:
    """A linear functional xi on the ambient coordinates with base cell
    sigma: xi is constant (= level) on sigma's vertices and distinct from
    the level on every other vertex of the closed star (the genericity
    certificate)."""

    def __init__(self, K: SimplicialComplex, sigma, xi):
        if K.coords is None:
            raise ValueError("covector samples need an embedded complex")
        self.complex = K
        self.sigma = tuple(sigma)
        self.xi = tuple(as_q(x) for x in xi)
        vals = {}
        for cell in K.closed_star(self.sigma):
            for v in cell:
                vals[v] = self.value(v)
        levels = {vals[v] for v in self.sigma}
        if len(levels) != 1:
            raise ValueError("xi is not constant on the base cell")
        self.level = levels.pop()
        for v, x in vals.items():
            if v not in self.sigma and x == self.level:
                raise ValueError(
                    f"genericity fails: vertex {v} sits at the level")
        self.star_values = vals

    def value(self, vertex) -> Fraction:
        p = self.complex.coords[vertex]
        if len(p) != len(self.xi):
            raise ValueError("covector dimension mismatch")
        return sum((a * b for a, b in zip(self.xi, p)), ZERO)


def star_subcomplex(K: SimplicialComplex, sigma) -> SimplicialComplex:
    cells = K.closed_star(sigma)
    verts = sorted({v for c in cells for v in c}, key=K.vertex_order.get)
    coords = {v: K.coords[v] for v in verts} if K.coords else None
    return SimplicialComplex(verts, cells, coords)


class LocalMorseGroup:
    """Relative sections of (closed star, below-region) after the exact cut."""

    def __init__(self, F: CellularSheaf, sample: CovectorSample,
                 chi_only=False):
        K = F.complex
        star = star_subcomplex(K, sample.sigma)
        values = {v: sample.star_values[v] for v in star.vertices}
        cut = CutComplex(star, values, sample.level)
        # the pair is (open star of sigma, its strictly-below part), both
        # up-sets of the subdivided closed star; using the open star keeps
        # the group local (far boundary stalks cancel out of the germ), and
        # derived sections over up-sets go through the nerve formula -- the
        # naive stalk sum over an open region computes compactly supported
        # cohomology, which is the wrong functor here
        sigma = sample.sigma
        region = {c for c in cut.complex.simplices
                  if set(sigma) <= set(cut.carrier[c])}
        below = {c for c in cut.below_cells() if c in region}
        self.cut = cut
        self.region = region
        self.below = below
        euler = lambda c: F.value(cut.carrier[c]).euler()
        chi_star = _up_set_sections_euler(cut.complex, region, euler)
        chi_below = _up_set_sections_euler(cut.complex, below, euler)
        self.chi = chi_star - chi_below
        self.complex_pair = None
        if not chi_only:
            self.complex_pair = self._build_complex(F, cut, region, below)

    def _build_complex(self, F, cut, region, below):
        """cone(sections(star region) -> sections(below))[-1] via
        resolutions of the pulled-back sheaf."""
        from .chaincore import ChainMap, cone

        from .resolution import resolve

        K2 = cut.complex
        values = {c: F.value(cut.carrier[c]) for c in K2.simplices}
        maps = {}
        for s in K2.simplices:
            for t in K2.cofaces(s):
                maps[(s, t)] = F.restriction(cut.carrier[s], cut.carrier[t])
        F2 = CellularSheaf(K2, values, maps, check=False)
        J = resolve(F2)
        star_cx, kept_star = J.sections(CellUnion(K2, region, "open"))
        below_cx, kept_below = J.sections(CellUnion(K2, below, "open"))
        mats = {}
        for n in star_cx.space.dims:
            rows = kept_below.get(n, [])
            pos = {i: a for a, i in enumerate(rows)}
            m = QMatrix.zero(len(rows), star_cx.dim(n))
            for a, i in enumerate(kept_star.get(n, [])):
                b = pos.get(i)
                if b is not None:
                    m[b, a] = ONE
            mats[n] = m
        restr = ChainMap(star_cx, below_cx, mats, check=False)
        rel = cone(restr).complex.shift(-1)
        if Cohomology(rel).space.euler() != self.chi:
            raise AssertionError("relative sections chi mismatch")
        return rel


def _up_set_sections_euler(K: SimplicialComplex, cells, stalk_euler) -> int:
    """chi of derived sections over an up-set: the nerve (holim) sum
    sum over chains c_0 < ... < c_p inside the set of (-1)^p chi(F(c_p))."""
    cells = sorted(cells, key=K.sort_key)
    above = {c: [d for d in cells if c != d and set(c) <= set(d)]
             for c in cells}
    total = 0

    # chains c_0 < ... < c_p contribute (-1)^p chi(F(c_p))
    def walk(top, parity):
        nonlocal total
        for nxt in above[top]:
            total += (-parity) * stalk_euler(nxt)
            walk(nxt, -parity)

    for c in cells:
        total += stalk_euler(c)
        walk(c, 1)
    return total


def local_morse_group(F: CellularSheaf, sample: CovectorSample,
                      chi_only=False) -> LocalMorseGroup:
    return LocalMorseGroup(F, sample, chi_only=chi_only)


def sample_generic_covector(K: SimplicialComplex, sigma, seed=0,
                            tries=200) -> CovectorSample:
    """Rejection-sample a rational covector generic for the given cell."""
    if K.coords is None:
        raise ValueError("need an embedded complex")
    rng = _random.Random(seed)
    ndim = len(next(iter(K.coords.values())))
    sigma = tuple(sigma)
    for _ in range(tries):
        xi = [Fraction(rng.randint(-20, 20), rng.randint(1, 7))
              for _ in range(ndim)]
        if len(sigma) > 1:
            # project xi to be constant on sigma: subtract the affine part
            base = K.coords[sigma[0]]
            dirs = [tuple(x - b for x, b in zip(K.coords[v], base))
                    for v in sigma[1:]]
            m = QMatrix.from_rows(dirs)
            vec = m.apply(list(xi))
            if any(vec):
                # solve for a correction in the row space: xi' = xi - m^T a
                mt = m.transpose()
                sol = (m * mt).solve(vec)
                if sol is None:
                    continue
                corr = mt.apply(sol)
                xi = [x - c for x, c in zip(xi, corr)]
        try:
            return CovectorSample(K, sigma, xi)
        except ValueError:
            continue
    raise ValueError(f"no generic covector found for {sigma}")


def vertex_generic_covector(K: SimplicialComplex, seed=0, tries=200):
    """One covector generic at every vertex simultaneously."""
    rng = _random.Random(seed)
    ndim = len(next(iter(K.coords.values())))
    for t in range(tries):
        xi = [Fraction(rng.randint(-20, 20), rng.randint(1, 7))
              for _ in range(ndim)]
        try:
            return {v: CovectorSample(K, (v,), xi) for v in K.vertices}
        except ValueError:
            continue
    raise ValueError("no globally generic covector found")


# ---------------------------------------------------------------------------
# index and product formulas


def index_check(F: CellularSheaf, seed=0, cache: RhomCache | None = None):
    """(lhs, rhs): chi of derived global sections against the sum of vertex
    local Morse characteristics for a generic linear covector."""
    cache = cache or RhomCache()
    lhs = Cohomology(global_sections(F, cache)).space.euler()
    samples = vertex_generic_covector(F.complex, seed=seed)
    rhs = 0
    for v in F.complex.vertices:
        rhs += local_morse_group(F, samples[v], chi_only=True).chi
    return lhs, rhs


def product_check(F1: CellularSheaf, F2: CellularSheaf,
                  cache: RhomCache | None = None):
    """(lhs, rhs): chi of sections of the stalkwise tensor against the
    Euler integral of the product of the stalk functions."""
    cache = cache or RhomCache()
    T = tensor_sheaf(F1, F2)
    lhs = Cohomology(global_sections(T, cache)).space.euler()
    rhs = euler_integral(stalk_function(F1) * stalk_function(F2))
    return lhs, rhs


# ---------------------------------------------------------------------------
# dimension-one conormal cycles


class ConormalData:
    """zero[edge] and ray[(vertex, label)] integer multiplicities; labels
    are ("toward", e) per incident edge and, at valence-one vertices,
    ("away", e)."""

    def __init__(self, complex_: SimplicialComplex, zero=None, ray=None):
        self.complex = complex_
        self.zero = {tuple(e): int(v) for e, v in (zero or {}).items() if v}
        self.ray = {(tuple(v), (lab[0], tuple(lab[1]))): int(c)
                    for (v, lab), c in (ray or {}).items() if c}

    def zero_mult(self, e) -> int:
        return self.zero.get(tuple(e), 0)

    def ray_mult(self, v, lab) -> int:
        return self.ray.get((tuple(v), (lab[0], tuple(lab[1]))), 0)

    def __eq__(self, other):
        return isinstance(other, ConormalData) and \
            self.zero == other.zero and self.ray == other.ray

    def __repr__(self):
        return f"ConormalData(zero={self.zero}, ray={self.ray})"

    def is_cycle(self) -> bool:
        """Boundary cancellation at each vertex: the corner values
        ray(v, toward e) + sum of zero multiplicities of the other edges
        agree for all incident edges."""
        K = self.complex
        for v in K.cells(0):
            edges = [e for e in K.simplices if len(e) == 2 and v[0] in e]
            corners = []
            for e in edges:
                others = sum(self.zero_mult(e2) for e2 in edges if e2 != e)
                corners.append(self.ray_mult(v, ("toward", e)) + others)
            if corners and len(set(corners)) != 1:
                return False
        return True


def _check_dim1(K: SimplicialComplex):
    if K.dim() != 1:
        raise ValueError("conormal cycle arithmetic is dimension-1 only")
    for v in K.cells(0):
        valence = len(K.cofaces(v))
        if valence > 2:
            raise ValueError(f"vertex {v} has valence {valence} > 2")


def cc_dim1(F_or_phi) -> ConormalData:
    """Conormal cycle of a sheaf (or of stalk data) on a one-manifold
    complex: zero-section multiplicity = stalk chi on each edge, ray
    multiplicity = chi(vertex stalk) - chi(opposite edge stalk)."""
    if isinstance(F_or_phi, CellularSheaf):
        phi = stalk_function(F_or_phi)
        K = F_or_phi.complex
    else:
        phi = F_or_phi
        K = phi.complex
    _check_dim1(K)
    zero = {}
    ray = {}
    for e in K.cells(1):
        m = phi(e)
        if m:
            zero[e] = m
    for v in K.cells(0):
        a = phi(v)
        edges = K.cofaces(v)
        if len(edges) == 2:
            e1, e2 = edges
            ray[(v, ("toward", e1))] = a - phi(e2)
            ray[(v, ("toward", e2))] = a - phi(e1)
        elif len(edges) == 1:
            e = edges[0]
            ray[(v, ("toward", e))] = a
            ray[(v, ("away", e))] = a - phi(e)
    return ConormalData(K, zero, ray)


def pair_dim1(a: ConormalData, b: ConormalData) -> int:
    """Intersection number of two dimension-one conormal cycles, evaluated
    corner-by-corner with a deterministic edge selector."""
    K = a.complex
    total = 0
    for v in K.cells(0):
        edges = K.cofaces(v)
        if not edges:
            continue
        e_sel = edges[0]
        others = [e for e in edges if e != e_sel]
        ca = a.ray_mult(v, ("toward", e_sel)) + \
            sum(a.zero_mult(e) for e in others)
        cb = b.ray_mult(v, ("toward", e_sel)) + \
            sum(b.zero_mult(e) for e in others)
        total += ca * cb
    for e in K.cells(1):
        total -= a.zero_mult(e) * b.zero_mult(e)
    return total


def limit_cycle_dim1(U: CellUnion, rank: int = 1) -> ConormalData:
    """CC of the pushforward of the rank-`rank` constant system on an open
    union in a one-manifold: the zero section over U plus, at each boundary
    vertex, rays toward the adjacent U-edges (the open-embedding limit)."""
    K = U.complex
    _check_dim1(K)
    if U.kind != "open":
        raise ValueError("limit cycle needs an open union")
    zero = {}
    ray = {}
    u_edges = {e for e in U.cells if len(e) == 2}
    for e in u_edges:
        zero[e] = rank
    boundary = {v for e in u_edges for v in
                [(e[0],), (e[1],)] if v not in U.cells}
    for v in K.cells(0):
        edges = K.cofaces(v)
        if v in U.cells:
            # interior: a = rank, opposite edges are U edges too when the
            # vertex is interior to U; rays vanish
            for e in edges:
                opp = [e2 for e2 in edges if e2 != e]
                a = rank
                gap = a - (rank if (opp and opp[0] in u_edges) else 0)
                if len(edges) == 1:
                    ray[(v, ("toward", e))] = a
                    ray[(v, ("away", e))] = a - rank
                elif gap:
                    ray[(v, ("toward", e))] = gap
        elif v in boundary:
            for e in edges:
                if e in u_edges:
                    ray[(v, ("toward", e))] = rank
    return ConormalData(K, zero, ray)
