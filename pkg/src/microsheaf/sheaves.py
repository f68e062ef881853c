"""Cellular sheaves: complexes of vector spaces on the face poset.

A sheaf assigns a cochain complex to each cell and a chain map to each
codimension-one coface relation; squares commute exactly, so restriction
along any chain is well defined.  Standard objects of locally closed cell
unions carry the sections-over-stars values (cochains of the barycentric
model of st(gamma) & Y), costandard objects extend local systems by zero.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .chaincore import ChainMap, CochainComplex, Cohomology, GradedSpace, \
    cone, single, zero_complex
from .rational import ONE, ZERO, QMatrix, as_q
from .simplicial import CellUnion, SimplicialComplex, barycentric_model


class LocalSystem:
    """Rank-r system in one degree on the cells of a union.

    transports[(sigma, tau)] (codim-1 coface pairs inside the support) are
    invertible matrices; composites along any two chains must agree (checked
    on demand by CellularSheaf validation when converted to a sheaf).
    """

    def __init__(self, union: CellUnion, rank=1, degree=0, transports=None):
        self.union = union
        self.rank = rank
        self.degree = degree
        self.transports = {}
        K = union.complex
        for s in union.cells:
            for t in K.cofaces(s):
                if t in union.cells:
                    m = (transports or {}).get((s, t))
                    if m is None:
                        m = QMatrix.identity(rank)
                    if m.nrows != rank or m.ncols != rank:
                        raise ValueError("transport shape mismatch")
                    inv = m.solve_matrix(QMatrix.identity(rank))
                    if inv is None:
                        raise ValueError(
                            f"transport {s}->{t} is not invertible")
                    self.transports[(s, t)] = m

    def fiber_dim(self, cell) -> int:
        return self.rank if tuple(cell) in self.union.cells else 0

    def transport(self, s, t) -> QMatrix:
        return self.transports[(tuple(s), tuple(t))]

    def transport_chain(self, chain) -> QMatrix:
        m = QMatrix.identity(self.rank)
        for a, b in zip(chain, chain[1:]):
            m = self.transport(a, b) * m
        return m


def trivial_system(union: CellUnion, rank=1, degree=0) -> LocalSystem:
    return LocalSystem(union, rank, degree)


class CellularSheaf:
    """values: dict cell -> CochainComplex; maps: dict (sigma, tau) -> dict
    degree -> QMatrix for codim-1 coface pairs (zero maps may be omitted)."""

    def __init__(self, complex_: SimplicialComplex, values, maps, check=True):
        self.complex = complex_
        self.values = {}
        for s in complex_.simplices:
            v = values.get(tuple(s))
            self.values[tuple(s)] = v if v is not None else zero_complex()
        self.maps = {}
        for (s, t), comp in maps.items():
            s, t = tuple(s), tuple(t)
            self.maps[(s, t)] = {k: m for k, m in comp.items()
                                 if not m.is_zero()}
        self._chain_cache = {}
        if check:
            self.validate()

    def value(self, cell) -> CochainComplex:
        return self.values[tuple(cell)]

    def map_component(self, s, t, k) -> QMatrix:
        comp = self.maps.get((tuple(s), tuple(t)), {})
        m = comp.get(k)
        if m is None:
            m = QMatrix.zero(self.value(t).dim(k), self.value(s).dim(k))
        return m

    def validate(self):
        K = self.complex
        for s in K.simplices:
            Vs = self.value(s)
            for t in K.cofaces(s):
                Vt = self.value(t)
                for k in set(Vs.space.dims) | {d - 0 for d in Vt.space.dims}:
                    # chain map condition
                    lhs = Vt.d(k) * self.map_component(s, t, k)
                    rhs = self.map_component(s, t, k + 1) * Vs.d(k)
                    if lhs != rhs:
                        raise ValueError(
                            f"restriction {s}->{t} not a chain map at {k}")
        # commuting squares: both routes s -> u for codim-2 pairs agree
        for s in K.simplices:
            meets = {}
            for t in K.cofaces(s):
                for u in K.cofaces(t):
                    meets.setdefault(u, []).append(t)
            for u, mids in meets.items():
                if len(mids) < 2:
                    continue
                comps = []
                for t in mids:
                    comp = {}
                    for k in self.value(s).space.dims:
                        comp[k] = self.map_component(t, u, k) * \
                            self.map_component(s, t, k)
                    comps.append(comp)
                first = comps[0]
                for other in comps[1:]:
                    for k in set(first) | set(other):
                        a = first.get(k)
                        b = other.get(k)
                        za = a is None or a.is_zero()
                        zb = b is None or b.is_zero()
                        if za and zb:
                            continue
                        if za != zb or a != b:
                            raise ValueError(
                                f"restriction squares {s}->{u} disagree")

    def restriction(self, s, t):
        """Full restriction {degree: matrix} along any s <= t."""
        s, t = tuple(s), tuple(t)
        key = (s, t)
        if key in self._chain_cache:
            return self._chain_cache[key]
        if s == t:
            out = {k: QMatrix.identity(self.value(s).dim(k))
                   for k in self.value(s).space.dims}
        else:
            # walk up one codimension at a time (any route; squares commute)
            step = None
            for u in self.complex.cofaces(s):
                if set(u) <= set(t):
                    step = u
                    break
            if step is None:
                raise ValueError(f"{s} is not a face of {t}")
            tail = self.restriction(step, t)
            out = {}
            for k in self.value(s).space.dims:
                mtail = tail.get(k, QMatrix.zero(self.value(t).dim(k),
                                                 self.value(step).dim(k)))
                out[k] = mtail * self.map_component(s, step, k)
        self._chain_cache[key] = out
        return out

    def stalk(self, cell) -> CochainComplex:
        return self.value(cell)

    def stalk_euler(self, cell) -> int:
        return self.value(cell).euler()

    def support(self):
        return {s for s in self.complex.simplices
                if self.value(s).total_dim()}

    def total_dims(self):
        return {s: self.value(s).space.dims for s in self.complex.cells()}


class SheafMap:
    """Degree-0 map of cellular sheaves: per-cell chain maps commuting with
    the restriction maps."""

    def __init__(self, source: CellularSheaf, target: CellularSheaf,
                 components, check=True):
        self.source = source
        self.target = target
        self.components = {}
        for cell, comp in components.items():
            self.components[tuple(cell)] = {k: m for k, m in comp.items()
                                            if not m.is_zero()}
        if check:
            self.validate()

    def component(self, cell, k) -> QMatrix:
        comp = self.components.get(tuple(cell), {})
        m = comp.get(k)
        if m is None:
            m = QMatrix.zero(self.target.value(cell).dim(k),
                             self.source.value(cell).dim(k))
        return m

    def validate(self):
        K = self.source.complex
        for s in K.simplices:
            Vs, Ws = self.source.value(s), self.target.value(s)
            for k in set(Vs.space.dims) | set(Ws.space.dims):
                lhs = Ws.d(k) * self.component(s, k)
                rhs = self.component(s, k + 1) * Vs.d(k)
                if lhs != rhs:
                    raise ValueError(f"component at {s} not a chain map")
            for t in K.cofaces(s):
                for k in Vs.space.dims:
                    lhs = self.component(t, k) * \
                        self.source.map_component(s, t, k)
                    rhs = self.target.map_component(s, t, k) * \
                        self.component(s, k)
                    if lhs != rhs:
                        raise ValueError(f"naturality fails at {s} -> {t}")

    def cell_chain_map(self, cell) -> ChainMap:
        return ChainMap(self.source.value(cell), self.target.value(cell),
                        self.components.get(tuple(cell), {}), check=False)

    def is_stalkwise_qis(self) -> bool:
        for s in self.source.complex.simplices:
            cn = cone(self.cell_chain_map(s)).complex
            if Cohomology(cn).space.total_dim():
                return False
        return True


# ---------------------------------------------------------------------------
# constructors


def constant_sheaf(K: SimplicialComplex, stalk: CochainComplex | None = None
                   ) -> CellularSheaf:
    if stalk is None:
        stalk = single(0)
    values = {s: stalk for s in K.simplices}
    maps = {}
    for s in K.simplices:
        for t in K.cofaces(s):
            maps[(s, t)] = {k: QMatrix.identity(stalk.dim(k))
                            for k in stalk.space.dims}
    return CellularSheaf(K, values, maps, check=False)


def skyscraper(K: SimplicialComplex, cell, stalk: CochainComplex | None = None
               ) -> CellularSheaf:
    if stalk is None:
        stalk = single(0)
    values = {tuple(cell): stalk}
    return CellularSheaf(K, values, {}, check=False)


def zero_sheaf(K: SimplicialComplex) -> CellularSheaf:
    return CellularSheaf(K, {}, {}, check=False)


def _model_cochains(model: SimplicialComplex, system: LocalSystem | None,
                    fiber_at):
    """Cochain complex of an order complex with local-system coefficients.

    model vertices are cells of the base; a k-simplex is a chain
    c = (s_0 < ... < s_k) and its coefficient space is the fiber at s_0,
    transported up when the bottom face is dropped.
    fiber_at(cell) -> rank; system provides transports (None = trivial).
    """
    chains = {d: model.cells(d) for d in range(model.dim() + 1)}
    dims = {}
    index = {}
    for d, lst in chains.items():
        n = 0
        for c in lst:
            r = fiber_at(c[0])
            index[c] = (d, n, r)
            n += r
        dims[d] = n
    diff = {}
    for d in sorted(chains):
        if not dims.get(d, 0) or not dims.get(d + 1, 0):
            continue
        m = QMatrix(dims[d + 1], dims[d],
                    storage="sparse" if max(dims[d + 1], dims[d]) > 64
                    else "dense")
        for c1 in chains[d + 1]:
            _, row0, r1 = index[c1]
            for i in range(len(c1)):
                face = c1[:i] + c1[i + 1:]
                if face not in index:
                    continue
                _, col0, r0 = index[face]
                sign = -ONE if i % 2 else ONE
                if i == 0:
                    # dropped the bottom: transport fiber s_1 <- s_0 inverse?
                    # cochain convention: (d phi)(c1) = sum (-1)^i phi(face);
                    # phi(face) lives at fiber(face[0]) = fiber(c1[1]); move
                    # it to fiber(c1[0])-coordinates via inverse transport.
                    if system is None:
                        tr = QMatrix.identity(r1)
                    else:
                        fwd = _system_transport(system, c1[0], c1[1])
                        tr = fwd.solve_matrix(QMatrix.identity(fwd.nrows))
                    blk = tr
                else:
                    blk = QMatrix.identity(r1)
                for (a, b), v in blk.items():
                    m[row0 + a, col0 + b] = m[row0 + a, col0 + b] + sign * v
        diff[d] = m
    return CochainComplex(GradedSpace(dims), diff), index


def _system_transport(system: LocalSystem, s, t) -> QMatrix:
    """Transport along any chain from s up to t inside the support."""
    if s == t:
        return QMatrix.identity(system.rank)
    K = system.union.complex
    # greedy path: raise one vertex at a time
    for u in K.cofaces(s):
        if set(u) <= set(t) and u in system.union.cells:
            return _system_transport(system, u, t) * system.transport(s, u)
    raise ValueError(f"no transport path {s} -> {t}")


def standard(Y: CellUnion, system: LocalSystem | None = None) -> CellularSheaf:
    """Standard object i_* L of a locally closed union.

    Value at gamma: cochains of barycentric_model(st(gamma) & Y) with L
    coefficients; restriction maps are cochain restrictions.
    """
    K = Y.complex
    if system is not None and not set(system.union.cells) <= set(Y.cells):
        raise ValueError("local system support exceeds Y")
    if system is not None and set(system.union.cells) != set(Y.cells):
        raise ValueError("local system must be supported on all of Y")
    values = {}
    indices = {}
    models = {}
    for g in K.simplices:
        zone = sorted((set(K.star(g)) & Y.cells),
                      key=K.sort_key)
        if not zone:
            continue
        # an up-set intersected with an interval set is an interval set
        sub = CellUnion(K, zone, "locally_closed")
        model = barycentric_model(sub)
        fiber = (lambda cell: system.rank) if system else (lambda cell: 1)
        cplx, index = _model_cochains(model, system, fiber)
        values[g] = cplx
        indices[g] = index
        models[g] = model
    maps = {}
    for g in K.simplices:
        if g not in values:
            continue
        for t in K.cofaces(g):
            if t not in values:
                continue
            src_idx, tgt_idx = indices[g], indices[t]
            comp = {}
            for chain, (d, col0, r) in src_idx.items():
                if chain in tgt_idx:
                    d2, row0, r2 = tgt_idx[chain]
                    m = comp.setdefault(d, QMatrix.zero(
                        values[t].dim(d), values[g].dim(d)))
                    for a in range(r):
                        m[row0 + a, col0 + a] = ONE
            maps[(g, t)] = comp
    F = CellularSheaf(K, values, maps, check=False)
    F._standard_data = (Y, system, indices, models)
    return F


def standard_min(Y: CellUnion, system: LocalSystem | None = None
                 ) -> CellularSheaf:
    """Minimum-fiber model of the standard object, valid when every
    nonempty zone st(gamma) & Y has a minimal cell (then the zone is a cone
    and its sections are the fiber at the minimum; evaluation at minima is
    strictly functorial).  Raises ValueError otherwise."""
    K = Y.complex
    rank = system.rank if system else 1
    minima = {}
    for g in K.simplices:
        zone = set(K.star(g)) & Y.cells
        if not zone:
            continue
        mins = [c for c in zone
                if not any(set(d) < set(c) for d in zone)]
        if len(mins) != 1:
            raise ValueError(
                f"zone at {g} has {len(mins)} minimal cells; "
                "use the full model")
        minima[g] = mins[0]
    values = {g: single(system.degree if system else 0, rank)
              for g in minima}
    maps = {}
    for g in minima:
        for t in K.cofaces(g):
            if t not in minima:
                continue
            if system is None:
                tr = QMatrix.identity(rank)
            else:
                tr = _system_transport(system, minima[g], minima[t])
            maps[(g, t)] = {system.degree if system else 0: tr}
    return CellularSheaf(K, values, maps, check=False)


def costandard(Y: CellUnion, system: LocalSystem | None = None
               ) -> CellularSheaf:
    """Extension by zero of a local system on an interval set."""
    K = Y.complex
    rank = system.rank if system else 1
    degree = system.degree if system else 0
    values = {}
    for s in Y.cells:
        values[s] = single(degree, rank)
    maps = {}
    for s in Y.cells:
        for t in K.cofaces(s):
            if t in Y.cells:
                tr = system.transport(s, t) if system \
                    else QMatrix.identity(rank)
                maps[(s, t)] = {degree: tr}
    return CellularSheaf(K, values, maps, check=False)


def star_standard(K: SimplicialComplex, sigma) -> CellularSheaf:
    """Minimal model of standard(st(sigma)): value Q on the cells gamma with
    gamma (union) sigma spanning, identity restrictions."""
    sigma = tuple(sigma)
    support = K.closed_star(sigma)
    values = {s: single(0) for s in support}
    maps = {}
    for s in support:
        for t in K.cofaces(s):
            if t in support:
                maps[(s, t)] = {0: QMatrix.identity(1)}
    return CellularSheaf(K, values, maps, check=False)


def tensor_sheaf(F: CellularSheaf, G: CellularSheaf) -> CellularSheaf:
    from .chaincore import tensor, tensor_basis

    K = F.complex
    values = {}
    for s in K.simplices:
        values[s] = tensor(F.value(s), G.value(s))
    maps = {}
    for s in K.simplices:
        for t in K.cofaces(s):
            bas_s = tensor_basis(F.value(s), G.value(s))
            bas_t = tensor_basis(F.value(t), G.value(t))
            pos_t = {k: {b: n for n, b in enumerate(v)}
                     for k, v in bas_t.items()}
            comp = {}
            for k, basis in bas_s.items():
                if not values[t].dim(k) or not values[s].dim(k):
                    continue
                m = QMatrix.zero(values[t].dim(k), values[s].dim(k))
                fF = {d: F.map_component(s, t, d)
                      for d in F.value(s).space.dims}
                fG = {d: G.map_component(s, t, d)
                      for d in G.value(s).space.dims}
                for col, (a, i, j) in enumerate(basis):
                    b = k - a
                    mF = fF.get(a)
                    mG = fG.get(b)
                    if mF is None or mG is None:
                        continue
                    for (r1, c1), v1 in mF.items():
                        if c1 != i:
                            continue
                        for (r2, c2), v2 in mG.items():
                            if c2 != j:
                                continue
                            row = pos_t[k].get((a, r1, r2))
                            if row is not None:
                                m[row, col] = m[row, col] + v1 * v2
                comp[k] = m
            maps[(s, t)] = comp
    return CellularSheaf(K, values, maps, check=False)


def sheaf_shift(F: CellularSheaf, n: int) -> CellularSheaf:
    values = {s: F.value(s).shift(n) for s in F.complex.simplices}
    maps = {}
    for (s, t), comp in F.maps.items():
        maps[(s, t)] = {k - n: m for k, m in comp.items()}
    return CellularSheaf(F.complex, values, maps, check=False)


def sheaf_cone(phi: SheafMap) -> tuple[CellularSheaf, SheafMap, SheafMap]:
    """cone(phi) with the canonical maps target -> cone -> source[1]."""
    F, G = phi.source, phi.target
    K = F.complex
    values = {}
    for s in K.simplices:
        values[s] = cone(phi.cell_chain_map(s)).complex
    maps = {}
    for s in K.simplices:
        for t in K.cofaces(s):
            comp = {}
            for k in values[s].space.dims:
                rows = [F.value(t).dim(k + 1), G.value(t).dim(k)]
                cols = [F.value(s).dim(k + 1), G.value(s).dim(k)]
                if not sum(rows) or not sum(cols):
                    continue
                comp[k] = QMatrix.block(
                    [[F.map_component(s, t, k + 1), None],
                     [None, G.map_component(s, t, k)]], rows, cols)
            maps[(s, t)] = comp
    C = CellularSheaf(K, values, maps, check=False)
    inc = {}
    for s in K.simplices:
        comp = {}
        for k in G.value(s).space.dims:
            m = QMatrix.zero(values[s].dim(k), G.value(s).dim(k))
            off = F.value(s).dim(k + 1)
            for i in range(G.value(s).dim(k)):
                m[off + i, i] = ONE
            comp[k] = m
        inc[s] = comp
    include = SheafMap(G, C, inc, check=False)
    shifted = sheaf_shift(F, 1)
    onto = {}
    for s in K.simplices:
        comp = {}
        for k in values[s].space.dims:
            nF = F.value(s).dim(k + 1)
            if not nF:
                continue
            m = QMatrix.zero(nF, values[s].dim(k))
            for i in range(nF):
                m[i, i] = ONE
            comp[k] = m
        onto[s] = comp
    project = SheafMap(C, shifted, onto, check=False)
    return C, include, project


# ---------------------------------------------------------------------------
# standard triangles


def recollement_triangle(F: CellularSheaf, U: CellUnion):
    """j_! j^* F -> F -> i_* i^* F for U open with closed complement.

    Returns (lower, alpha, upper, beta): degreewise split exact on every
    cell."""
    if U.kind != "open":
        raise ValueError("recollement needs an open union")
    K = F.complex
    lower_vals = {s: (F.value(s) if s in U.cells else zero_complex())
                  for s in K.simplices}
    lower_maps = {}
    for (s, t), comp in F.maps.items():
        if s in U.cells and t in U.cells:
            lower_maps[(s, t)] = comp
    lower = CellularSheaf(K, lower_vals, lower_maps, check=False)
    upper_vals = {s: (F.value(s) if s not in U.cells else zero_complex())
                  for s in K.simplices}
    upper_maps = {}
    for (s, t), comp in F.maps.items():
        if s not in U.cells and t not in U.cells:
            upper_maps[(s, t)] = comp
    upper = CellularSheaf(K, upper_vals, upper_maps, check=False)
    alpha = SheafMap(lower, F, {
        s: {k: QMatrix.identity(F.value(s).dim(k))
            for k in F.value(s).space.dims}
        for s in U.cells}, check=False)
    beta = SheafMap(F, upper, {
        s: {k: QMatrix.identity(F.value(s).dim(k))
            for k in F.value(s).space.dims}
        for s in K.simplices if s not in U.cells}, check=False)
    return lower, alpha, upper, beta


def truncation_triangle(F: CellularSheaf, ell: int):
    """tau_{<=ell} F -> F -> tau_{>ell} F (stalkwise truncations).

    tau_{<=ell}: ... -> F^{ell-1} -> ker(d_ell) -> 0;
    tau_{>ell}:  0 -> im(d_ell) -> F^{ell+1} -> ...  (im placed in degree
    ell).  Returns (lower, include, upper, project)."""
    K = F.complex
    low_vals, low_maps = {}, {}
    up_vals, up_maps = {}, {}
    inc_comp, proj_comp = {}, {}
    ker_bases = {}
    im_bases = {}
    for s in K.simplices:
        V = F.value(s)
        kb = V.d(ell).kernel_basis() if V.dim(ell) else []
        ker_bases[s] = QMatrix.from_columns(kb, nrows=V.dim(ell)) if kb \
            else QMatrix.zero(V.dim(ell), 0)
        piv = V.d(ell).column_space_pivots()
        ib = [V.d(ell).col(j) for j in piv]
        im_bases[s] = QMatrix.from_columns(ib, nrows=V.dim(ell + 1)) if ib \
            else QMatrix.zero(V.dim(ell + 1), 0)
    for s in K.simplices:
        V = F.value(s)
        dims = {}
        diff = {}
        for k, ddim in V.space.dims.items():
            if k < ell:
                dims[k] = ddim
            elif k == ell:
                dims[k] = ker_bases[s].ncols
        for k in dims:
            if k < ell - 1 and dims.get(k + 1):
                diff[k] = V.d(k)
            elif k == ell - 1 and dims.get(ell):
                # corestrict d_{ell-1} to ker(d_ell)
                m = ker_bases[s].solve_matrix(V.d(ell - 1))
                diff[k] = m
        low_vals[s] = CochainComplex(GradedSpace(dims), diff, check=False)
        updims = {}
        updiff = {}
        for k, ddim in V.space.dims.items():
            if k > ell:
                updims[k] = ddim
        if im_bases[s].ncols:
            updims[ell] = im_bases[s].ncols
        for k in updims:
            if k == ell:
                updiff[k] = im_bases[s]
            elif updims.get(k + 1):
                updiff[k] = V.d(k)
        up_vals[s] = CochainComplex(GradedSpace(updims), updiff, check=False)
        inc_comp[s] = {}
        for k in dims:
            if k < ell:
                inc_comp[s][k] = QMatrix.identity(V.dim(k))
            else:
                inc_comp[s][k] = ker_bases[s]
        proj_comp[s] = {}
        for k in updims:
            if k > ell:
                proj_comp[s][k] = QMatrix.identity(V.dim(k))
            else:
                m = im_bases[s].solve_matrix(V.d(ell))
                proj_comp[s][k] = m
    for s in K.simplices:
        for t in K.cofaces(s):
            comp = F.maps.get((s, t), {})
            lc = {k: m for k, m in comp.items() if k < ell}
            uc = {k: m for k, m in comp.items() if k > ell}
            if ker_bases[s].ncols and ker_bases[t].ncols:
                m = F.map_component(s, t, ell) * ker_bases[s]
                sol = ker_bases[t].solve_matrix(m)
                if sol is None:
                    raise AssertionError("kernel corestriction failed")
                lc[ell] = sol
            if im_bases[s].ncols and im_bases[t].ncols:
                m = F.map_component(s, t, ell + 1) * im_bases[s]
                sol = im_bases[t].solve_matrix(m)
                if sol is None:
                    raise AssertionError("image corestriction failed")
                uc[ell] = sol
            low_maps[(s, t)] = lc
            up_maps[(s, t)] = uc
    lower = CellularSheaf(K, low_vals, low_maps, check=False)
    upper = CellularSheaf(K, up_vals, up_maps, check=False)
    include = SheafMap(lower, F, inc_comp, check=False)
    project = SheafMap(F, upper, proj_comp, check=False)
    return lower, include, upper, project
