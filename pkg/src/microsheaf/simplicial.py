"""Finite simplicial complexes, cell unions, and exact subdivisions.

Cells are sorted tuples of vertex ids; the face poset is ordered by
inclusion, so "open" cell unions are up-closed sets (unions of open stars)
and "closed" ones are down-closed.  Optional rational coordinates support
the hyperplane cuts used by the characteristic-cycle layer; all geometry
is exact.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .rational import ONE, ZERO, QMatrix, as_q


class SimplicialComplex:
    def __init__(self, vertices, simplices, coords=None):
        self.vertices = list(vertices)
        self.vertex_order = {v: i for i, v in enumerate(self.vertices)}
        if len(self.vertex_order) != len(self.vertices):
            raise ValueError("duplicate vertices")
        cells = set()
        for s in simplices:
            t = tuple(sorted(s, key=self.vertex_order.get))
            if len(set(t)) != len(t):
                raise ValueError(f"degenerate simplex {s}")
            for v in t:
                if v not in self.vertex_order:
                    raise ValueError(f"simplex {s} references unknown vertex {v}")
            cells.add(t)
        for v in self.vertices:
            cells.add((v,))
        # close under faces
        stack = list(cells)
        while stack:
            t = stack.pop()
            for i in range(len(t)):
                f = t[:i] + t[i + 1:]
                if f and f not in cells:
                    cells.add(f)
                    stack.append(f)
        self.simplices = cells
        self.coords = None
        if coords is not None:
            self.coords = {v: tuple(as_q(x) for x in coords[v])
                           for v in self.vertices}
            dims = {len(c) for c in self.coords.values()}
            if len(dims) > 1:
                raise ValueError("inconsistent coordinate dimensions")
            self._check_affine_independence()

    def _check_affine_independence(self):
        for s in self.simplices:
            if len(s) < 2:
                continue
            base = self.coords[s[0]]
            mat = QMatrix.from_rows(
                [[x - b for x, b in zip(self.coords[v], base)] for v in s[1:]])
            if mat.rank() != len(s) - 1:
                raise ValueError(f"simplex {s} is affinely degenerate")

    # -- combinatorics -----------------------------------------------------

    def dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def sort_key(self, s):
        return (len(s), tuple(self.vertex_order[v] for v in s))

    def cells(self, d=None):
        if d is None:
            return sorted(self.simplices, key=self.sort_key)
        return sorted((s for s in self.simplices if len(s) - 1 == d),
                      key=self.sort_key)

    def has_cell(self, s) -> bool:
        return tuple(s) in self.simplices

    def faces(self, s, codim=1):
        s = tuple(s)
        k = len(s) - codim
        if k < 1:
            return []
        return [f for f in itertools.combinations(s, k)]

    def cofaces(self, s):
        """Codimension-1 cofaces."""
        s = tuple(s)
        out = []
        for t in self.simplices:
            if len(t) == len(s) + 1 and set(s) <= set(t):
                out.append(t)
        return sorted(out, key=self.sort_key)

    def star(self, s):
        """Open star: all cells having s as a face (including s)."""
        s = set(s)
        return {t for t in self.simplices if s <= set(t)}

    def closed_star(self, s):
        """Cells gamma with gamma (union) s spanning a cell of the complex."""
        s = tuple(s)
        out = set()
        for t in self.simplices:
            u = tuple(sorted(set(t) | set(s), key=self.vertex_order.get))
            if u in self.simplices:
                out.add(t)
        return out

    def closure(self, cells):
        out = set()
        for s in cells:
            s = tuple(s)
            for k in range(1, len(s) + 1):
                out.update(itertools.combinations(s, k))
        return out & self.simplices

    def incidence(self, tau, sigma) -> Fraction:
        """[tau : sigma] for sigma a codim-1 face of tau: (-1)^i where the
        removed vertex sits at position i of tau."""
        tau, sigma = tuple(tau), tuple(sigma)
        if len(tau) != len(sigma) + 1 or not set(sigma) <= set(tau):
            return ZERO
        missing = (set(tau) - set(sigma)).pop()
        i = tau.index(missing)
        return -ONE if i % 2 else ONE

    def leq(self, a, b) -> bool:
        return set(a) <= set(b)

    def barycenter(self, s):
        if self.coords is None:
            raise ValueError("no embedding available")
        pts = [self.coords[v] for v in s]
        n = len(pts)
        return tuple(sum(p[i] for p in pts) / n for i in range(len(pts[0])))

    def euler(self) -> int:
        return sum((-1) ** (len(s) - 1) for s in self.simplices)

    # simplicial cochain complex of the whole complex (constant Q)
    def cochain_complex(self):
        from .chaincore import CochainComplex, GradedSpace

        by_dim = {}
        for s in self.simplices:
            by_dim.setdefault(len(s) - 1, []).append(s)
        for d in by_dim:
            by_dim[d].sort()
        dims = {d: len(v) for d, v in by_dim.items()}
        diff = {}
        for d in sorted(dims):
            if not dims.get(d + 1):
                continue
            m = QMatrix.zero(dims[d + 1], dims[d])
            pos_lo = {s: i for i, s in enumerate(by_dim[d])}
            for j, t in enumerate(by_dim[d + 1]):
                for f in itertools.combinations(t, d + 1):
                    if f in pos_lo:
                        m[j, pos_lo[f]] = m[j, pos_lo[f]] + self.incidence(t, f)
            diff[d] = m
        return CochainComplex(GradedSpace(dims), diff)


class CellUnion:
    """Subset of cells flagged open (up-closed), closed (down-closed), or
    locally_closed (an interval in the face poset)."""

    KINDS = ("open", "closed", "locally_closed")

    def __init__(self, complex_: SimplicialComplex, cells, kind):
        if kind not in self.KINDS:
            raise ValueError(f"unknown kind {kind!r}")
        self.complex = complex_
        self.cells = frozenset(tuple(c) for c in cells)
        for c in self.cells:
            if c not in complex_.simplices:
                raise ValueError(f"cell {c} not in the complex")
        self.kind = kind
        w = self.verify()
        if w is not None:
            raise ValueError(f"cell union is not {kind}: witness {w}")

    def verify(self):
        K = self.complex
        if self.kind == "open":
            for s in self.cells:
                for t in K.cofaces(s):
                    if t not in self.cells:
                        return (s, t)
            return None
        if self.kind == "closed":
            for s in self.cells:
                for f in K.faces(s):
                    if f not in self.cells:
                        return (s, f)
            return None
        # interval: sigma <= tau <= rho with sigma, rho in S forces tau in S
        for rho in self.cells:
            for sigma in self.cells:
                if not set(sigma) <= set(rho):
                    continue
                for k in range(len(sigma), len(rho) + 1):
                    for tau in itertools.combinations(rho, k):
                        if set(sigma) <= set(tau) and K.has_cell(tau) \
                                and tau not in self.cells:
                            return (sigma, tau, rho)
        return None

    def is_interval(self) -> bool:
        return True  # construction validated

    def __contains__(self, cell):
        return tuple(cell) in self.cells

    def __iter__(self):
        return iter(sorted(self.cells, key=self.complex.sort_key))

    def __len__(self):
        return len(self.cells)


def open_union(K, cells) -> CellUnion:
    return CellUnion(K, cells, "open")


def closed_union(K, cells) -> CellUnion:
    return CellUnion(K, cells, "closed")


def locally_closed_union(K, cells) -> CellUnion:
    return CellUnion(K, cells, "locally_closed")


def whole_space(K) -> CellUnion:
    return CellUnion(K, K.simplices, "open")


def star_union(K, s) -> CellUnion:
    return CellUnion(K, K.star(s), "open")


def complement(U: CellUnion) -> CellUnion:
    kind = {"open": "closed", "closed": "open"}.get(U.kind)
    if kind is None:
        raise ValueError("complement defined for open/closed unions")
    return CellUnion(U.complex, U.complex.simplices - U.cells, kind)


# ---------------------------------------------------------------------------
# barycentric models


def barycentric_model(S) -> SimplicialComplex:
    """Order complex of the induced subposet on the cells of S.

    Vertices are the cells themselves; a k-simplex is a strict chain
    sigma_0 < ... < sigma_k inside S.  For S an interval set this is the
    full subcomplex of the barycentric subdivision on the barycenters of S
    (homotopy faithfulness is cross-checked by tests, not assumed).
    """
    if isinstance(S, CellUnion):
        base = S.complex
        cells = sorted(S.cells, key=base.sort_key)
    else:
        raise ValueError("barycentric_model expects a CellUnion")
    verts = list(cells)
    cellset = set(cells)
    # maximal chains by DFS over the inclusion order
    leq = {c: [d for d in cells if c != d and set(c) <= set(d)] for c in cells}
    simplices = set()

    def extend(chain):
        simplices.add(tuple(chain))
        for nxt in leq[chain[-1]]:
            extend(chain + [nxt])

    for c in cells:
        extend([c])
    coords = None
    if base.coords is not None:
        coords = {c: base.barycenter(c) for c in cells}
    return SimplicialComplex(verts, simplices, coords)


def model_is_subcomplex(smaller: SimplicialComplex, bigger: SimplicialComplex):
    return all(s in bigger.simplices for s in smaller.simplices)


# ---------------------------------------------------------------------------
# exact hyperplane cut


class CutComplex:
    """Subdivision of a complex along a rational level set xi = c.

    Attributes:
        complex: the subdivided SimplicialComplex (new vertices get fresh
            ids ("cut", i)), with exact coordinates.
        carrier: dict new cell -> original cell whose open face contains it.
        value: dict new vertex -> xi-value (exact).
    """

    def __init__(self, K: SimplicialComplex, values: dict, level):
        level = as_q(level)
        verts = list(K.vertices)
        pos = {v: i for i, v in enumerate(verts)}
        vals = {v: as_q(values[v]) for v in K.vertices}
        coords = dict(K.coords) if K.coords is not None else None
        simplices = set(K.simplices)
        # every cut point lies on an *original* edge: stellar subdivision
        # only creates edges through the (level-set) point, which never
        # cross the level again
        vertex_carrier = {v: (v,) for v in K.vertices}
        counter = itertools.count()

        def crossing_edge():
            for s in simplices:
                if len(s) != 2:
                    continue
                a, b = s
                if (vals[a] - level) * (vals[b] - level) < 0:
                    return s
            return None

        while True:
            e = crossing_edge()
            if e is None:
                break
            a, b = e
            t = (level - vals[a]) / (vals[b] - vals[a])
            m = ("cut", next(counter))
            verts.append(m)
            pos[m] = len(verts) - 1
            vals[m] = level
            carrier_e = tuple(sorted(set(vertex_carrier[a])
                                     | set(vertex_carrier[b]),
                                     key=K.vertex_order.get))
            vertex_carrier[m] = carrier_e
            if coords is not None:
                pa, pb = coords[a], coords[b]
                coords[m] = tuple(x + t * (y - x) for x, y in zip(pa, pb))
            new_simplices = set()
            for s in simplices:
                if not set(e) <= set(s):
                    new_simplices.add(s)
                    continue
                for drop in e:
                    keep = tuple(sorted((v for v in s if v != drop),
                                        key=pos.get)) + (m,)
                    new_simplices.add(keep)
                    for k in range(1, len(keep)):
                        new_simplices.update(itertools.combinations(keep, k))
            simplices = new_simplices
        norm = {tuple(sorted(s, key=pos.get)) for s in simplices}
        final = SimplicialComplex(verts, norm, coords)
        carrier = {}
        for s in final.simplices:
            union = set()
            for v in s:
                union.update(vertex_carrier[v])
            gamma = tuple(sorted(union, key=K.vertex_order.get))
            if gamma not in K.simplices:
                raise AssertionError("carrier is not an original cell")
            carrier[s] = gamma
        self.complex = final
        self.carrier = carrier
        self.value = vals
        self.level = level

    def below_cells(self):
        """Open region xi < level: cells having a vertex strictly below.

        After the cut no cell crosses the level, so this is an up-set."""
        out = set()
        for s in self.complex.simplices:
            if any(self.value[v] < self.level for v in s):
                out.add(s)
        return out

    def strictly_above_cells(self):
        out = set()
        for s in self.complex.simplices:
            if any(self.value[v] > self.level for v in s):
                out.add(s)
        return out
