"""The generation theorem as an algorithm.

Every sheaf on a supported complex is expressed as a twisted complex of
(shifted) standard objects of open stars and punctured stars, with a
certificate: an explicit strict sheaf map from the input sheaf to the
realization of the twisted complex inducing isomorphisms on every stalk
cohomology.

Route: resolve F by elementary injectives [sigma]; replace each summand by
a copy of the cone gadget

    E_sigma = cone( I(std(st sigma)) --restriction--> I(std(st sigma - sigma)) )

shifted so its only stalk cohomology ([sigma], in the link degree c - 1)
lands where the summand sits.  The differential of the resolution then
lifts through the per-copy collapses by a triangular sweep of linear
solves; every system lives in a hom complex into a bounded complex of
injectives, where strict homs compute derived homs, so each solve is
unobstructed.  A homotopy inverse of the total collapse composed with the
augmentation is the certificate.

Supported complexes: every punctured star empty or a rational sphere
(closed-manifold-like).  Boundary cells genuinely break generation by
standard objects (the skyscraper at an interval endpoint is not generated),
so unsupported inputs are rejected loudly.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .chaincore import Cohomology
from .homs import hom_complex, rhom_into
from .rational import ONE, ZERO, QMatrix
from .resolution import InjectiveComplex, resolve
from .sheaves import CellularSheaf, SheafMap, standard
from .simplicial import CellUnion, SimplicialComplex, barycentric_model, \
    star_union


class UnsupportedSpace(ValueError):
    pass


def punctured_star_union(K: SimplicialComplex, sigma) -> CellUnion:
    sigma = tuple(sigma)
    cells = [t for t in K.star(sigma) if t != sigma]
    return CellUnion(K, cells, "open")


def link_degree(K: SimplicialComplex, sigma) -> int:
    """c such that the reduced cohomology of the punctured star is Q in
    degree c - 1 (c = 0 for maximal cells); raises UnsupportedSpace
    otherwise."""
    sigma = tuple(sigma)
    punct = [t for t in K.star(sigma) if t != sigma]
    if not punct:
        return 0
    m = barycentric_model(CellUnion(K, punct, "open"))
    h = Cohomology(m.cochain_complex()).space
    reduced = dict(h.dims)
    reduced[0] = reduced.get(0, 0) - 1
    nonzero = {k: v for k, v in reduced.items() if v}
    if len(nonzero) != 1 or list(nonzero.values()) != [1]:
        raise UnsupportedSpace(
            f"punctured star of {sigma} is not a rational sphere: {h.dims}")
    return list(nonzero)[0] + 1


def check_generation_supported(K: SimplicialComplex):
    for s in K.cells():
        link_degree(K, s)


# ---------------------------------------------------------------------------
# sparse block maps on realizations
#
# A "map" from complex P to complex Q is a dict (q_addr, p_addr) -> coeff
# where addresses are (degree, index) pairs; validity requires
# cell(q) <= cell(p) and deg(q) = deg(p) + map_degree.


def compose_maps(f, g):
    """f o g as sparse dicts keyed (to, from)."""
    by_from = {}
    for (to, frm), c in f.items():
        by_from.setdefault(frm, []).append((to, c))
    out = {}
    for (mid, frm), c in g.items():
        hits = by_from.get(mid)
        if not hits:
            continue
        for to, c2 in hits:
            key = (to, frm)
            out[key] = out.get(key, ZERO) + c * c2
    return {k: v for k, v in out.items() if v}


def map_add(f, g, scale=ONE):
    out = dict(f)
    for k, v in g.items():
        out[k] = out.get(k, ZERO) + scale * v
    return {k: v for k, v in out.items() if v}


def diff_map(J: InjectiveComplex):
    out = {}
    for n, entries in J.diff.items():
        for (j, i), c in entries.items():
            if c:
                out[((n + 1, j), (n, i))] = c
    return out


# ---------------------------------------------------------------------------
# gadgets


class StarGadget:
    """Shifted cone of resolutions I(std st sigma) -> I(std punctured st),
    as one InjectiveComplex `cone`, with:

    * entry_of: address -> "star" | "punct" (for the twisted export);
    * collapse: sparse map cone -> [sigma]-single at degree c - 1, a chain
      map hitting the stalk class;
    * section: sparse map single -> cone with collapse o section = 1 in
      cohomology (solved exactly: scalar 1).
    """

    def __init__(self, K: SimplicialComplex, sigma, cache):
        sigma = tuple(sigma)
        self.sigma = sigma
        self.c = link_degree(K, sigma)
        star_obj = cache.setdefault(("std", ("star", sigma)),
                                    standard(star_union(K, sigma)))
        self.star_sheaf = star_obj
        J_star = cache.setdefault(("res", ("star", sigma)),
                                  resolve(star_obj))
        punct_cells = [t for t in K.star(sigma) if t != sigma]
        self.has_punct = bool(punct_cells)
        if self.has_punct:
            punct_obj = cache.setdefault(
                ("std", ("punct", sigma)),
                standard(punctured_star_union(K, sigma)))
            J_punct = cache.setdefault(("res", ("punct", sigma)),
                                       resolve(punct_obj))
            rhat = _lift_restriction(star_obj, punct_obj, J_star, J_punct)
        else:
            punct_obj = None
            J_punct = None
            rhat = {}
        self.J_star, self.J_punct = J_star, J_punct
        self.rhat = rhat
        # assemble cone: star shifted by +1 (internal differential negated),
        # punct unshifted, rhat as the connecting block
        summands = {}
        addr = {}
        entry_of = {}
        for n, cells in J_star.summands.items():
            d = n - 1
            lst = summands.setdefault(d, [])
            for i, cl in enumerate(cells):
                addr[("star", n, i)] = (d, len(lst))
                entry_of[(d, len(lst))] = ("star", n, i)
                lst.append(cl)
        if self.has_punct:
            for n, cells in J_punct.summands.items():
                d = n
                lst = summands.setdefault(d, [])
                for i, cl in enumerate(cells):
                    addr[("punct", n, i)] = (d, len(lst))
                    entry_of[(d, len(lst))] = ("punct", n, i)
                    lst.append(cl)
        diff = {}

        def put(a1, a2, c):
            (d1, p1), (d2, p2) = addr[a1], addr[a2]
            assert d2 == d1 + 1
            diff.setdefault(d1, {})[(p2, p1)] = \
                diff.get(d1, {}).get((p2, p1), ZERO) + c

        for n, entries in J_star.diff.items():
            for (j, i), c in entries.items():
                put(("star", n, i), ("star", n + 1, j), -c)
        if self.has_punct:
            for n, entries in J_punct.diff.items():
                for (j, i), c in entries.items():
                    put(("punct", n, i), ("punct", n + 1, j), c)
            for ((n1, i1), (n2, i2)), c in rhat.items():
                put(("star", n1, i1), ("punct", n2, i2), c)
        self.cone = InjectiveComplex(
            K, summands, {n: {k: v for k, v in m.items() if v}
                          for n, m in diff.items()}, check=False)
        self.addr = addr
        self.entry_of = entry_of
        if not _dsq_zero(self.cone):
            raise AssertionError("gadget cone differential fails d^2 = 0")
        self._solve_collapse_and_section(K)

    def _solve_collapse_and_section(self, K):
        C = self.cone
        want = self.c - 1
        stalk, kept = C.stalk(self.sigma)
        coh = Cohomology(stalk)
        if coh.space.dims != {want: 1}:
            raise UnsupportedSpace(
                f"gadget stalk at {self.sigma}: {coh.space.dims}, expected "
                f"Q in degree {want}")
        T = InjectiveComplex(K, {want: [self.sigma]}, {}, check=False)
        self.target = T
        rep = coh.reps[want][0]
        cond = {}
        for a, idx in enumerate(kept.get(want, [])):
            if rep[a]:
                cond[((want, idx), (want, 0))] = rep[a]
        sol = _solve_chain_class(C, T, 0, [(cond, ONE)])
        if sol is None:
            raise AssertionError(f"collapse solve failed at {self.sigma}")
        self.collapse = {((n2, i2), (n1, i1)): c
                         for ((n1, i1), (n2, i2)), c in sol.items()}
        # section: single -> cone, cocycle, with collapse o section = 1
        sol2 = _solve_section(C, T, self.collapse, kept, coh)
        if sol2 is None:
            raise AssertionError(f"section solve failed at {self.sigma}")
        self.section = sol2


def _dsq_zero(J: InjectiveComplex) -> bool:
    for n in J.degrees():
        if not (J.diff_matrix(n + 1) * J.diff_matrix(n)).is_zero():
            return False
    return True


def _solve_chain_class(J1, J2, degree, conditions):
    """Degree-`degree` cocycle of Hom(J1, J2) meeting affine conditions.

    conditions: list of (dict label->coeff, rhs)."""
    C, labels = hom_complex(J1, J2)
    lst = labels.get(degree, [])
    nn = len(lst)
    pos = {lab: i for i, lab in enumerate(lst)}
    dmat = C.d(degree)
    rows = dmat.nrows + len(conditions)
    m = QMatrix(rows, nn,
                storage="sparse" if max(rows, nn, 1) > 64 else "dense")
    for (r, c), v in dmat.items():
        m[r, c] = v
    rhs = [ZERO] * dmat.nrows
    for t, (coeffs, b) in enumerate(conditions):
        for lab, c in coeffs.items():
            i = pos.get(lab)
            if i is not None and c:
                m[dmat.nrows + t, i] = m[dmat.nrows + t, i] + c
        rhs.append(b)
    sol = m.solve(rhs)
    if sol is None:
        return None
    return {lab: sol[pos[lab]] for lab in lst if sol[pos[lab]]}


def _solve_section(C, T, collapse, kept, coh):
    """Cocycle theta: T -> C with (collapse o theta) = identity scalar."""
    Chom, labels = hom_complex(T, C)
    lst = labels.get(0, [])
    pos = {lab: i for i, lab in enumerate(lst)}
    dmat = Chom.d(0)
    # composite scalar: sum over addresses collapse[(tgt),(addr)] theta[(addr),(src)]
    comp_row = {}
    for ((tdeg, tidx), (addr)), c in collapse.items():
        lab = ((tdeg, tidx), addr)
        i = pos.get(((tdeg, tidx), addr))
        if i is not None:
            comp_row[i] = comp_row.get(i, ZERO) + c
    rows = dmat.nrows + 1
    nn = len(lst)
    m = QMatrix(rows, nn,
                storage="sparse" if max(rows, nn, 1) > 64 else "dense")
    for (r, c), v in dmat.items():
        m[r, c] = v
    for i, c in comp_row.items():
        m[dmat.nrows, i] = c
    rhs = [ZERO] * dmat.nrows + [ONE]
    sol = m.solve(rhs)
    if sol is None:
        return None
    return {(lab[1], lab[0]): sol[pos[lab]] for lab in lst if sol[pos[lab]]}


def _lift_restriction(Fs, Fp, Js, Jp):
    """Cocycle in Hom^0(Js, Jp) lifting the model-cochain restriction
    std(st) -> std(punctured st) through the augmentations."""
    r = _standard_restriction(Fs, Fp)
    target = _sheafmap_then_aug(r, Jp)
    sol = _solve_lift_through_aug(Fs, Js, Jp, target, degree=0)
    if sol is None:
        raise AssertionError("restriction lift failed")
    return sol


def _standard_restriction(Fs: CellularSheaf, Fp: CellularSheaf) -> SheafMap:
    comp = {}
    _, _, idx_s, _ = Fs._standard_data
    _, _, idx_p, _ = Fp._standard_data
    for cell, index_p in idx_p.items():
        if cell not in idx_s:
            continue
        index_s = idx_s[cell]
        mats = {}
        for chain, (d, col0, r) in index_s.items():
            if chain in index_p:
                d2, row0, r2 = index_p[chain]
                m = mats.setdefault(d, QMatrix.zero(
                    Fp.value(cell).dim(d), Fs.value(cell).dim(d)))
                for a in range(r):
                    m[row0 + a, col0 + a] = ONE
        comp[cell] = mats
    return SheafMap(Fs, Fp, comp, check=False)


def _sheafmap_then_aug(r: SheafMap, Jp: InjectiveComplex):
    out = {}
    Fs = r.source
    for n, cells in Jp.summands.items():
        for i, cellv in enumerate(cells):
            lam = Jp.aug[n][i]
            rmat = r.component(cellv, n)
            func = [ZERO] * Fs.value(cellv).dim(n)
            for (rr, cc), v in rmat.items():
                if lam[rr]:
                    func[cc] += lam[rr] * v
            out[(n, i)] = func
    return out


def rhom_into_labels(G: CellularSheaf, J: InjectiveComplex):
    labels: dict[int, list] = {}
    for n, cells in J.summands.items():
        for i, sigma in enumerate(cells):
            V = G.value(sigma)
            for k in V.space.dims:
                deg = n - k
                for b in range(V.dim(k)):
                    labels.setdefault(deg, []).append(((n, i), k, b))
    return labels


def _aug_pullback_matrix(Fs, Js, Jp, degree, labels, into_labels):
    lst = labels.get(degree, [])
    into_lst = into_labels.get(degree, [])
    into_pos = {lab: i for i, lab in enumerate(into_lst)}
    m = QMatrix(len(into_lst), len(lst),
                storage="sparse" if max(len(into_lst), len(lst), 1) > 64
                else "dense")
    for col, ((n1, i1), (n2, i2)) in enumerate(lst):
        cell1 = Js.summands[n1][i1]
        cell2 = Jp.summands[n2][i2]
        lam = Js.aug[n1][i1]
        rho = Fs.restriction(cell2, cell1).get(
            n1, QMatrix.zero(Fs.value(cell1).dim(n1),
                             Fs.value(cell2).dim(n1)))
        for (rr, cc), v in rho.items():
            if lam[rr]:
                lab = ((n2, i2), n1, cc)
                row = into_pos.get(lab)
                if row is not None:
                    m[row, col] = m[row, col] + lam[rr] * v
    return m


def _solve_lift_through_aug(Fs, Js, Jp, target, degree):
    Chom, labels = hom_complex(Js, Jp)
    lst = labels.get(degree, [])
    pos = {lab: i for i, lab in enumerate(lst)}
    n_x = len(lst)
    Cinto = rhom_into(Fs, Jp)
    into_labels = rhom_into_labels(Fs, Jp)
    into_lst = into_labels.get(degree, [])
    into_pos = {lab: i for i, lab in enumerate(into_lst)}
    augmat = _aug_pullback_matrix(Fs, Js, Jp, degree, labels, into_labels)
    dy = Cinto.d(degree - 1)
    n_y = dy.ncols
    dx = Chom.d(degree)
    tvec = [ZERO] * len(into_lst)
    for (n, i), func in target.items():
        for b, v in enumerate(func):
            if v:
                lab = ((n, i), n - degree, b)
                tvec[into_pos[lab]] = v
    rows = dx.nrows + len(into_lst)
    cols = n_x + n_y
    m = QMatrix(rows, cols,
                storage="sparse" if max(rows, cols, 1) > 64 else "dense")
    for (r, c), v in dx.items():
        m[r, c] = v
    for (r, c), v in augmat.items():
        m[dx.nrows + r, c] = v
    for (r, c), v in dy.items():
        m[dx.nrows + r, n_x + c] = -v
    rhs = [ZERO] * dx.nrows + tvec
    sol = m.solve(rhs)
    if sol is None:
        return None
    return {lab: sol[pos[lab]] for lab in lst if sol[pos[lab]]}


# ---------------------------------------------------------------------------
# the assembled realization


class GenerationResult:
    """entries: [((kind, sigma), shift)]; realization: InjectiveComplex
    carrying the twisted differential; delta: its sparse map, block-indexed
    by copies; certificate: strict SheafMap F -> sheaf(realization),
    stalkwise qis (verified flag in `certified`)."""

    def __init__(self, entries, realization, delta, certificate, certified):
        self.entries = entries
        self.realization = realization
        self.delta = delta
        self.certificate = certificate
        self.certified = certified


def generate_twisted(F: CellularSheaf, cache=None, presolved=None
                     ) -> GenerationResult:
    K = F.complex
    check_generation_supported(K)
    cache = cache if cache is not None else {}
    J = resolve(F)

    short = _detect_star_standard(F, J, cache)
    if short is not None:
        return short

    gadgets = {}
    for n, cells in J.summands.items():
        for sigma in cells:
            if sigma not in gadgets:
                gadgets[sigma] = StarGadget(K, sigma, cache)

    # copies: one gadget copy per J summand; global addresses (e, d, p)
    copies = []
    for n in sorted(J.summands):
        for i, sigma in enumerate(J.summands[n]):
            copies.append((sigma, n, i))

    # global summand table
    g_sum: dict[int, list] = {}
    g_addr = {}     # (copy_idx, local (d,p)) -> global (deg, pos)
    entries_out = []
    for e, (sigma, n, i) in enumerate(copies):
        g = gadgets[sigma]
        shift = (g.c - 1) - n    # local degree d sits at global d - shift
        for d, cells in g.cone.summands.items():
            gd = d - shift
            lst = g_sum.setdefault(gd, [])
            for p, cl in enumerate(cells):
                g_addr[(e, (d, p))] = (gd, len(lst))
                lst.append(cl)
        entries_out.append(((("star", sigma), -(shift - 1)),
                            (("punct", sigma), -shift) if g.has_punct
                            else None))

    def to_global(e, local_map, sgn=ONE):
        out = {}
        for (to, frm), c in local_map.items():
            out[(g_addr[(e, to)], g_addr[(e, frm)])] = sgn * c
        return out

    # diagonal differential: gadget cones, shifted (sign (-1)^shift)
    D = {}
    collapse0 = {}   # copy slot maps: global addr -> ((n,i) of J)
    section0 = {}
    for e, (sigma, n, i) in enumerate(copies):
        g = gadgets[sigma]
        shift = (g.c - 1) - n
        sgn = -ONE if shift % 2 else ONE
        for (to, frm), c in diff_map(g.cone).items():
            D[(g_addr[(e, to)], g_addr[(e, frm)])] = sgn * c
        for (tgt, frm), c in g.collapse.items():
            # tgt = (c-1, 0) in the gadget target; lands on J slot (n, i)
            collapse0[((n, i), g_addr[(e, frm)])] = \
                collapse0.get(((n, i), g_addr[(e, frm)]), ZERO) + c
        for (frm2, tgt2), c in g.section.items():
            section0[(g_addr[(e, frm2)], (n, i))] = \
                section0.get((g_addr[(e, frm2)], (n, i)), ZERO) + c

    copy_of_slot = {(n, i): e for e, (s, n, i) in enumerate(copies)}
    DJ = diff_map(J)

    # triangular solve for Delta (copy-to-copy, J-degree increasing) and
    # Phi corrections (copy to J slots)
    delta_blocks, phi = _solve_connecting(K, J, copies, gadgets, g_addr,
                                          g_sum, D, collapse0, DJ)
    Dfull = dict(D)
    for blk in delta_blocks.values():
        for k, v in blk.items():
            Dfull[k] = Dfull.get(k, ZERO) + v
    R = _as_injective(K, g_sum, Dfull)
    if not _dsq_zero(R):
        raise AssertionError("realization d^2 != 0")
    # total collapse must be a chain map: checked inside the solver; now
    # build the homotopy section Psi: J -> R and the certificate
    psi = _solve_section_total(K, J, copies, gadgets, g_addr, g_sum, Dfull,
                               section0, DJ)
    cert = _certificate_map(F, J, R, psi)
    certified = cert.is_stalkwise_qis()
    entries = []
    for pair in entries_out:
        entries.append(pair[0])
        if pair[1] is not None:
            entries.append(pair[1])
    return GenerationResult(entries, R, delta_blocks, cert, certified)


def _as_injective(K, g_sum, D):
    diff = {}
    for ((d2, p2), (d1, p1)), c in D.items():
        if not c:
            continue
        if d2 != d1 + 1:
            raise AssertionError("differential block with wrong degree")
        diff.setdefault(d1, {})[(p2, p1)] = c
    return InjectiveComplex(K, g_sum, diff, check=False)


def _hom_positions(K, g_sum, src_addrs, tgt_addrs, degree):
    """Valid unknown positions (to, frm) with cell(to) <= cell(frm) and
    deg(to) = deg(frm) + degree."""
    leq = K.leq
    out = []
    for frm in src_addrs:
        (d1, p1) = frm
        cell1 = g_sum[d1][p1]
        for to in tgt_addrs:
            (d2, p2) = to
            if d2 != d1 + degree:
                continue
            if leq(g_sum[d2][p2], cell1):
                out.append((to, frm))
    return out


def _copy_addrs(g_addr, e):
    return [g for (ee, loc), g in g_addr.items() if ee == e]


def _solve_connecting(K, J, copies, gadgets, g_addr, g_sum, D, collapse0, DJ):
    """Solve Delta blocks and Phi corrections layer by layer.

    Returns (delta_blocks: dict (e_src, e_tgt) -> sparse map, phi: total
    collapse sparse map global-addr -> J slots)."""
    addrs_of = {e: _copy_addrs(g_addr, e) for e in range(len(copies))}
    nJ = {e: copies[e][1] for e in range(len(copies))}
    slots_of = {e: (copies[e][1], copies[e][2]) for e in range(len(copies))}
    delta_blocks = {}
    phi_blocks = {0: dict(collapse0)}   # by layer
    max_diff = (max(nJ.values()) - min(nJ.values())) if copies else 0

    def delta_total():
        out = {}
        for blk in delta_blocks.values():
            out.update(blk)
        return out

    for k in range(1, max_diff + 1):
        # accumulate known parts
        Dlt = delta_total()
        phi_total = {}
        for layer in phi_blocks.values():
            phi_total = map_add(phi_total, layer)
        # A_k = - sum_{0<i<k} Delta_i Delta_{k-i}, per (a,b) pair, computed
        # globally then restricted
        sq = compose_maps(Dlt, Dlt)
        dsq = map_add(compose_maps(D, Dlt), compose_maps(Dlt, D))
        need = map_add(sq, dsq)          # must cancel with d(new Delta_k)
        # W: chain defect of phi so far: DJ o phi - phi o (D + Delta)
        lhs = compose_maps(DJ, phi_total)
        rhs = map_add(compose_maps(phi_total, D),
                      compose_maps(phi_total, Dlt))
        W = map_add(lhs, rhs, scale=-ONE)
        for e_src in range(len(copies)):
            for e_tgt in range(len(copies)):
                if nJ[e_tgt] - nJ[e_src] != k:
                    continue
                # unknown Delta block e_src -> e_tgt (degree +1) and Phi
                # correction e_src -> slot(e_tgt) (degree 0 on J-degrees)
                du = _hom_positions(K, g_sum, addrs_of[e_src],
                                    addrs_of[e_tgt], 1)
                slot = slots_of[e_tgt]
                pu = []
                leq = K.leq
                for frm in addrs_of[e_src]:
                    (d1, p1) = frm
                    if d1 != slot[0]:
                        continue
                    if leq(J.summands[slot[0]][slot[1]], g_sum[d1][p1]):
                        pu.append((slot, frm))
                sol = _solve_layer_block(K, g_sum, D, collapse0, need, W,
                                         addrs_of[e_src], addrs_of[e_tgt],
                                         du, pu, slot)
                if sol is None:
                    raise AssertionError(
                        f"connecting solve failed at layer {k}")
                dblk, pblk = sol
                if dblk:
                    delta_blocks.setdefault((e_src, e_tgt), {}).update(dblk)
                if pblk:
                    phi_blocks.setdefault(k, {}).update(pblk)
    phi_total = {}
    for layer in phi_blocks.values():
        phi_total = map_add(phi_total, layer)
    # final check: total collapse is a chain map
    Dlt = delta_total()
    Dfull = map_add(D, Dlt)
    defect = map_add(compose_maps(DJ, phi_total),
                     compose_maps(phi_total, Dfull), scale=-ONE)
    if defect:
        raise AssertionError("total collapse is not a chain map")
    return delta_blocks, phi_total


def _solve_layer_block(K, g_sum, D, collapse0, need, W, src_addrs, tgt_addrs,
                       delta_unknowns, phi_unknowns, slot):
    """One (source copy, target copy) block: find Delta-block X (degree +1)
    and Phi-block Y (into the J slot) with

        D X + X D = -need|_{block}
        collapse0|tgt o X + Y o D = W|_{block}
    """
    nX = len(delta_unknowns)
    nY = len(phi_unknowns)
    posX = {u: i for i, u in enumerate(delta_unknowns)}
    posY = {u: nX + i for i, u in enumerate(phi_unknowns)}
    rows = {}
    rhs = {}

    def row_add(key, col, v):
        rows.setdefault(key, {})
        rows[key][col] = rows[key].get(col, ZERO) + v

    src_set = set(src_addrs)
    tgt_set = set(tgt_addrs)
    # equation 1: (D X + X D)[(to2, frm)] = -need[(to2, frm)]
    # enumerate via unknowns: for X[(to, frm)]: D-entries out of `to` and
    # into `frm`.
    D_by_from = {}
    D_by_to = {}
    for (to, frm), c in D.items():
        D_by_from.setdefault(frm, []).append((to, c))
        D_by_to.setdefault(to, []).append((frm, c))
    for (to, frm), i in posX.items():
        for (to2, c) in D_by_from.get(to, []):
            row_add(("E1", to2, frm), i, c)
        for (frm2, c) in D_by_to.get(frm, []):
            row_add(("E1", to, frm2), i, c)
    for (to2, frm), c in need.items():
        if frm in src_set and to2 in tgt_set:
            key = ("E1", to2, frm)
            rhs[key] = rhs.get(key, ZERO) - c
            rows.setdefault(key, {})
    # equation 2: (collapse o X)[(slot, frm)] + (Y D)[(slot, frm)]
    #            = W[(slot, frm)]
    col_map = {}
    for (s2, addr), c in collapse0.items():
        col_map.setdefault(addr, []).append((s2, c))
    for (to, frm), i in posX.items():
        for (s2, c) in col_map.get(to, []):
            if s2 == slot:
                row_add(("E2", frm), i, c)
    for (s2, frm), idx in posY.items():
        for (frm2, c) in D_by_to.get(frm, []):
            row_add(("E2", frm2), idx, c)
    for (s2, frm), c in W.items():
        if s2 == slot and frm in src_set:
            rhs[("E2", frm)] = rhs.get(("E2", frm), ZERO) + c
            rows.setdefault(("E2", frm), {})
    keys = sorted(rows, key=repr)
    m = QMatrix(len(keys), nX + nY,
                storage="sparse" if max(len(keys), nX + nY, 1) > 64
                else "dense")
    for r, key in enumerate(keys):
        for cidx, v in rows[key].items():
            m[r, cidx] = v
    b = [rhs.get(key, ZERO) for key in keys]
    sol = m.solve(b)
    if sol is None:
        return None
    dblk = {}
    pblk = {}
    for u, i in posX.items():
        if sol[i]:
            dblk[u] = sol[i]
    for u, i in posY.items():
        if sol[i]:
            pblk[u] = sol[i]
    return dblk, pblk


def _solve_section_total(K, J, copies, gadgets, g_addr, g_sum, Dfull,
                         section0, DJ):
    """Psi: J -> R chain map, triangular with the per-copy sections on the
    diagonal: solve layer by layer in the J-degree difference."""
    nJ = {e: copies[e][1] for e in range(len(copies))}
    addrs_of = {e: _copy_addrs(g_addr, e) for e in range(len(copies))}
    slots_of = {e: (copies[e][1], copies[e][2]) for e in range(len(copies))}
    psi_layers = {0: dict(section0)}
    max_diff = (max(nJ.values()) - min(nJ.values())) if copies else 0
    leq = K.leq
    D_by_to = {}
    for (to, frm), c in Dfull.items():
        D_by_to.setdefault(to, []).append((frm, c))
    for k in range(1, max_diff + 1):
        psi_total = {}
        for layer in psi_layers.values():
            psi_total = map_add(psi_total, layer)
        # defect V = Dfull o psi - psi o DJ, layer k blocks
        V = map_add(compose_maps(Dfull, psi_total),
                    compose_maps(psi_total, DJ), scale=-ONE)
        for e_tgt in range(len(copies)):
            for e_src_slot in range(len(copies)):
                if nJ[e_tgt] - nJ[e_src_slot] != k:
                    continue
                slot = slots_of[e_src_slot]
                cell_slot = J.summands[slot[0]][slot[1]]
                unknowns = []
                for to in addrs_of[e_tgt]:
                    if to[0] == slot[0] and leq(g_sum[to[0]][to[1]],
                                                cell_slot):
                        unknowns.append((to, slot))
                pos = {u: i for i, u in enumerate(unknowns)}
                tgt_addr_set = set(addrs_of[e_tgt])
                rows = {}
                rhs = {}
                for (to, s), i in pos.items():
                    for (to2, c) in _d_from(Dfull, to):
                        if to2 not in tgt_addr_set:
                            continue  # higher layers handled later
                        rows.setdefault(("V", to2, s), {})
                        rows[("V", to2, s)][i] = \
                            rows[("V", to2, s)].get(i, ZERO) + c
                for (to2, s), c in V.items():
                    if s == slot and to2 in tgt_addr_set:
                        key = ("V", to2, s)
                        rhs[key] = rhs.get(key, ZERO) - c
                        rows.setdefault(key, {})
                keys = sorted(rows, key=repr)
                m = QMatrix(len(keys), len(unknowns),
                            storage="sparse"
                            if max(len(keys), len(unknowns), 1) > 64
                            else "dense")
                for r, key in enumerate(keys):
                    for ci, v in rows[key].items():
                        m[r, ci] = v
                b = [rhs.get(key, ZERO) for key in keys]
                sol = m.solve(b)
                if sol is None:
                    raise AssertionError(f"section solve failed, layer {k}")
                layer = psi_layers.setdefault(k, {})
                for u, i in pos.items():
                    if sol[i]:
                        layer[u] = sol[i]
    psi_total = {}
    for layer in psi_layers.values():
        psi_total = map_add(psi_total, layer)
    defect = map_add(compose_maps(Dfull, psi_total),
                     compose_maps(psi_total, DJ), scale=-ONE)
    if defect:
        raise AssertionError("section is not a chain map")
    return psi_total


def _d_from(D, frm):
    out = []
    for (to, f2), c in D.items():
        if f2 == frm:
            out.append((to, c))
    return out


def _detect_star_standard(F, J, cache):
    data = getattr(F, "_standard_data", None)
    if data is None:
        return None
    Y = data[0]
    K = F.complex
    for sigma in K.simplices:
        if set(Y.cells) == set(K.star(sigma)):
            psi = {((n, i), (n, i)): ONE
                   for n, cells in J.summands.items()
                   for i in range(len(cells))}
            cert = _certificate_map(F, J, J, psi)
            return GenerationResult([(("star", tuple(sigma)), 0)], J, {},
                                    cert, cert.is_stalkwise_qis())
    return None


def _certificate_map(F, J, R, psi):
    """(psi o aug) as a strict SheafMap F -> sheaf(R)."""
    sheafR = injective_to_sheaf(R)
    idx = sheafR._stalk_index
    comp = {}
    by_slot = {}
    for (to, s), c in psi.items():
        by_slot.setdefault(s, []).append((to, c))
    for cell in F.complex.simplices:
        mats = {}
        kept = idx[cell]
        pos = {(n, i): a for n, lst in kept.items() for a, i in enumerate(lst)}
        for n, lst in J.summands.items():
            for i, sigma in enumerate(lst):
                if not set(cell) <= set(sigma):
                    continue
                lam = J.aug[n][i]
                rho = F.restriction(cell, sigma).get(
                    n, QMatrix.zero(F.value(sigma).dim(n),
                                    F.value(cell).dim(n)))
                func = [ZERO] * F.value(cell).dim(n)
                for (rr, cc), v in rho.items():
                    if lam[rr]:
                        func[cc] += lam[rr] * v
                if all(not x for x in func):
                    continue
                for (to, c) in by_slot.get((n, i), []):
                    (dto, pto) = to
                    a = pos.get((dto, pto))
                    if a is None:
                        continue
                    m = mats.setdefault(dto, QMatrix.zero(
                        sheafR.value(cell).dim(dto),
                        F.value(cell).dim(dto)))
                    for cc, v in enumerate(func):
                        if v:
                            m[a, cc] = m[a, cc] + c * v
        comp[cell] = mats
    return SheafMap(F, sheafR, comp, check=False)


def injective_to_sheaf(J: InjectiveComplex) -> CellularSheaf:
    """Realize a complex of elementary injectives as a cellular sheaf."""
    K = J.complex
    leq = K.leq
    values = {}
    stalk_index = {}
    for cell in K.simplices:
        kept = {n: [i for i, c in enumerate(v) if leq(cell, c)]
                for n, v in J.summands.items()}
        cplx, _ = J._subcomplex(kept)
        values[cell] = cplx
        stalk_index[cell] = kept
    maps = {}
    for s in K.simplices:
        for t in K.cofaces(s):
            comp = {}
            for n in values[s].space.dims:
                ks = stalk_index[s].get(n, [])
                kt = stalk_index[t].get(n, [])
                post = {i: a for a, i in enumerate(kt)}
                m = QMatrix.zero(values[t].dim(n), values[s].dim(n))
                for a, i in enumerate(ks):
                    b = post.get(i)
                    if b is not None:
                        m[b, a] = ONE
                comp[n] = m
            maps[(s, t)] = comp
    sh = CellularSheaf(K, values, maps, check=False)
    sh._stalk_index = stalk_index
    return sh
