"""Twisted complexes over an A-infinity category.

A twisted complex is a formal sum of shifted objects (X_e, k_e) with a
degree-one connecting datum delta whose blocks strictly decrease a
filtration, so every composition series is finite.  Morphism blocks
phi: X_e[k_e] -> X_f[k_f] of twisted degree D carry underlying elements of
hom_A(X_e, X_f) in degree r = D + k_f - k_e.

Compositions follow the additive-enlargement rule

    mu_Sigma(A_1, ..., A_D) = (-1)^eps  (shift part) (x) mu_A(a_1, ..., a_D),
    eps = sum_{i<j} |x_i| (r_j - 1),   |x_i| = k(src_i) - k(tgt_i),

and the twisted composition inserts delta blocks in all slots:

    mu_Tw^d(A_1,...,A_d) = sum  mu_Sigma(delta^{j_0}, A_1, delta^{j_1}, ...,
                                         A_d, delta^{j_d}).

Both conventions are validated operationally: the relation checker must
pass on twisted categories whenever it passes on the base.
"""

from __future__ import annotations

from .ainfty import AInfCategory, Elt, basis_elt, elt, elt_add, elt_scale, \
    hom_basis_labels
from .chaincore import CochainComplex, GradedSpace
from .rational import ONE, ZERO, QMatrix


class TwistedComplex:
    """entries: list of (object, shift); delta: dict (e, f) -> Elt.

    delta[(e, f)] is the component from entry e to entry f, an underlying
    element of hom_A(X_e, X_f) of degree 1 + k_f - k_e.  filtration: ints
    per entry; nonzero delta (e -> f) requires filtration[f] < filtration[e].
    """

    def __init__(self, A: AInfCategory, entries, delta=None, filtration=None,
                 check=True):
        self.A = A
        self.entries = [(obj, int(k)) for obj, k in entries]
        self.delta = {}
        for (e, f), v in (delta or {}).items():
            if v is None:
                continue
            want = 1 + self.entries[f][1] - self.entries[e][1]
            if v[0] != want:
                raise ValueError(
                    f"delta block {e}->{f} has degree {v[0]}, expected {want}")
            self.delta[(e, f)] = v
        if filtration is None:
            filtration = self._infer_filtration()
        self.filtration = list(filtration)
        if check:
            self._check_strict()

    def _infer_filtration(self):
        # topological order of the delta digraph; raises on cycles
        n = len(self.entries)
        succ = {e: set() for e in range(n)}
        for (e, f) in self.delta:
            succ[e].add(f)
        rank = {}

        def visit(v, stack):
            if v in rank:
                return rank[v]
            if v in stack:
                raise ValueError("delta is not strictly triangular (cycle)")
            stack.add(v)
            r = 0
            for w in succ[v]:
                r = max(r, visit(w, stack) + 1)
            stack.discard(v)
            rank[v] = r
            return r

        for v in range(n):
            visit(v, set())
        # delta must strictly decrease the filtration value
        return [rank[v] for v in range(n)]

    def _check_strict(self):
        for (e, f) in self.delta:
            if not self.filtration[f] < self.filtration[e]:
                raise ValueError(
                    f"delta block {e}->{f} does not decrease the filtration")

    def nentries(self) -> int:
        return len(self.entries)

    def shifted(self, s: int) -> "TwistedComplex":
        return TwistedComplex(
            self.A, [(obj, k + s) for obj, k in self.entries],
            dict(self.delta), list(self.filtration), check=False)


class TwElt:
    """Block morphism between twisted complexes, homogeneous of degree D."""

    __slots__ = ("src", "tgt", "degree", "blocks")

    def __init__(self, src: TwistedComplex, tgt: TwistedComplex, degree: int,
                 blocks: dict):
        self.src = src
        self.tgt = tgt
        self.degree = degree
        self.blocks = {}
        for (e, f), v in blocks.items():
            if v is None:
                continue
            want = degree + tgt.entries[f][1] - src.entries[e][1]
            if v[0] != want:
                raise ValueError(
                    f"block {e}->{f} degree {v[0]}, expected {want}")
            self.blocks[(e, f)] = v

    def is_zero(self):
        return not self.blocks


def _delta_elt(T: TwistedComplex) -> TwElt:
    return TwElt(T, T, 1, dict(T.delta))


def mu_sigma(A: AInfCategory, tws: list[TwistedComplex],
             args: list[TwElt]) -> TwElt | None:
    """Composition in the additive enlargement (no delta insertions)."""
    D = len(args)
    if D == 0 or D > A.max_arity:
        return None
    out_deg = sum(a.degree for a in args) + 2 - D
    out_blocks: dict[tuple, Elt | None] = {}
    src_tw, tgt_tw = tws[0], tws[-1]

    def rec(pos, path_entries, elements, sign_data):
        # sign_data: running list of (shift_deg, reduced_underlying)
        if pos == D:
            e0 = path_entries[0]
            eD = path_entries[-1]
            obj_path = tuple(
                tws[i].entries[path_entries[i]][0] for i in range(D + 1))
            val = A.mu(obj_path, elements)
            if val is None:
                return
            eps = 0
            for i in range(D):
                xi = sign_data[i][0]
                if xi % 2:
                    for j in range(i + 1, D):
                        eps += sign_data[j][1]
            if eps % 2:
                val = elt_scale(-1, val)
            key = (e0, eD)
            out_blocks[key] = elt_add(out_blocks.get(key), val)
            return
        cur = path_entries[-1]
        a = args[pos]
        for (e, f), v in a.blocks.items():
            if e != cur:
                continue
            ks = a.src.entries[e][1]
            kt = a.tgt.entries[f][1]
            rec(pos + 1, path_entries + [f], elements + [v],
                sign_data + [(ks - kt, v[0] - 1)])

    for e0 in range(src_tw.nentries()):
        rec(0, [e0], [], [])
    blocks = {k: v for k, v in out_blocks.items() if v is not None}
    if not blocks:
        return None
    return TwElt(src_tw, tgt_tw, out_deg, blocks)


def tw_mu(A: AInfCategory, tws: list[TwistedComplex],
          args: list[TwElt]) -> TwElt | None:
    """mu_Tw with delta insertions in every slot."""
    d = len(args)
    if d == 0:
        return None
    budget = A.max_arity - d
    out: TwElt | None = None
    deltas = [_delta_elt(t) for t in tws]

    def insertions(slot, remaining):
        if slot == d:
            yield [remaining]
            return
        for j in range(remaining + 1):
            for rest in insertions(slot + 1, remaining - j):
                yield [j] + rest

    out_deg = sum(a.degree for a in args) + 2 - d
    acc: dict[tuple, Elt | None] = {}
    for total in range(0, max(budget, 0) + 1):
        for jvec in insertions(0, total):
            seq_tws = []
            seq_args = []
            for i in range(d + 1):
                seq_tws.extend([tws[i]] * jvec[i])
                seq_args.extend([deltas[i]] * jvec[i])
                if i < d:
                    seq_tws.append(tws[i])
                    seq_args.append(args[i])
            seq_tws.append(tws[d])
            term = mu_sigma(A, seq_tws, seq_args)
            if term is None:
                continue
            for k, v in term.blocks.items():
                acc[k] = elt_add(acc.get(k), v)
    blocks = {k: v for k, v in acc.items() if v is not None}
    if not blocks:
        return None
    return TwElt(tws[0], tws[-1], out_deg, blocks)


def check_mc(T: TwistedComplex):
    """Maurer-Cartan residual: sum_D mu_Sigma(delta^D).  Empty dict = pass."""
    delta = _delta_elt(T)
    acc: dict[tuple, Elt | None] = {}
    max_chain = len(set(T.filtration))
    for D in range(1, min(T.A.max_arity, max_chain) + 1):
        term = mu_sigma(T.A, [T] * (D + 1), [delta] * D)
        if term is None:
            continue
        for k, v in term.blocks.items():
            acc[k] = elt_add(acc.get(k), v)
    return {k: v for k, v in acc.items() if v is not None}


def embed(A: AInfCategory, obj, shift=0) -> TwistedComplex:
    """iota: one-entry twisted complex with zero delta."""
    return TwistedComplex(A, [(obj, shift)], {}, [0])


def tw_shift(T: TwistedComplex, s: int) -> TwistedComplex:
    return T.shifted(s)


def tw_cone(f: TwElt) -> TwistedComplex:
    """Cone of a degree-0 closed morphism of twisted complexes."""
    if f.degree != 0:
        raise ValueError("cone needs a degree-0 morphism")
    res = tw_mu(f.src.A, [f.src, f.tgt], [f])
    if res is not None:
        raise ValueError("cone of a non-closed morphism (mu^1_Tw f != 0)")
    S, T = f.src, f.tgt
    nS = S.nentries()
    entries = [(obj, k + 1) for obj, k in S.entries] + list(T.entries)
    delta = {}
    for (e, g), v in S.delta.items():
        delta[(e, g)] = v
    for (e, g), v in T.delta.items():
        delta[(nS + e, nS + g)] = v
    for (e, g), v in f.blocks.items():
        delta[(e, nS + g)] = v
    base = max(T.filtration, default=-1) + 1
    filtration = [r + base + max(S.filtration, default=0) + 1
                  for r in S.filtration] + list(T.filtration)
    # S-entries all sit strictly above T-entries
    return TwistedComplex(f.src.A, entries, delta, filtration)


# ---------------------------------------------------------------------------
# twisted categories: twisted complexes as objects of a new A-infinity cat


def _delta_reachability(T: TwistedComplex):
    """reach[f] = set of entries reachable from f along delta blocks."""
    n = T.nentries()
    succ = {e: set() for e in range(n)}
    for (e, f) in T.delta:
        succ[e].add(f)
    reach = {}
    for v in range(n):
        seen = set()
        stack = [v]
        while stack:
            w = stack.pop()
            for u in succ[w]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        reach[v] = seen
    return reach


def tw_hom_labels(A: AInfCategory, S: TwistedComplex, T: TwistedComplex):
    """Basis labels of hom_Tw(S, T): dict D -> [(e, f, r, i)]."""
    out: dict[int, list[tuple]] = {}
    for e, (Xe, ke) in enumerate(S.entries):
        for f, (Xf, kf) in enumerate(T.entries):
            h = A.hom(Xe, Xf)
            for r in h.degrees():
                D = r + ke - kf
                lst = out.setdefault(D, [])
                for i in range(h.dim(r)):
                    lst.append((e, f, r, i))
    return out


def twisted_category(A: AInfCategory, tws: dict, name="Tw") -> AInfCategory:
    """A-infinity category whose objects are the given twisted complexes."""
    labels_cache: dict[tuple, dict] = {}

    def labels(XY):
        if XY not in labels_cache:
            labels_cache[XY] = tw_hom_labels(A, tws[XY[0]], tws[XY[1]])
        return labels_cache[XY]

    def hom(X, Y):
        labs = labels((X, Y))
        S, T = tws[X], tws[Y]
        dims = {D: len(v) for D, v in labs.items() if v}
        sp = GradedSpace(dims)
        diff = {}
        for D in sorted(dims):
            if not dims.get(D + 1):
                continue
            m = QMatrix.zero(dims[D + 1], dims[D])
            tgt_pos = {lab: nn for nn, lab in enumerate(labs[D + 1])}
            for col, (e, f, r, i) in enumerate(labs[D]):
                h = A.hom(S.entries[e][0], T.entries[f][0])
                one = basis_elt(h, r, i)
                x = TwElt(S, T, D, {(e, f): one})
                dx = tw_mu(A, [S, T], [x])
                if dx is None:
                    continue
                for (e2, f2), v in dx.blocks.items():
                    for ii, c in enumerate(v[1]):
                        if c:
                            m[tgt_pos[(e2, f2, v[0], ii)], col] = c
            diff[D] = m
        return CochainComplex(sp, diff)

    def to_twelt(path_pair, x):
        S, T = tws[path_pair[0]], tws[path_pair[1]]
        labs = labels(path_pair)
        D, vec = x
        blocks: dict[tuple, list] = {}
        for lab, c in zip(labs.get(D, []), vec):
            if not c:
                continue
            e, f, r, i = lab
            h = A.hom(S.entries[e][0], T.entries[f][0])
            cur = blocks.setdefault((e, f), [ZERO] * h.dim(r))
            cur[i] = c
        out = {}
        for (e, f), v in blocks.items():
            r = D + T.entries[f][1] - S.entries[e][1]
            out[(e, f)] = elt(r, v)
        return TwElt(S, T, D, {k: v for k, v in out.items() if v is not None})

    def from_twelt(path_pair, y: TwElt | None, out_deg):
        labs = labels(path_pair).get(out_deg, [])
        vec = [ZERO] * len(labs)
        if y is not None:
            pos = {lab: nn for nn, lab in enumerate(labs)}
            for (e, f), v in y.blocks.items():
                for i, c in enumerate(v[1]):
                    if c:
                        vec[pos[(e, f, v[0], i)]] = c
        return elt(out_deg, vec)

    pair_tables: dict[tuple, dict] = {}

    def pair_table(path):
        """mu^2_Tw on basis label pairs, full signs included."""
        if path not in pair_tables:
            if A.max_arity <= 2:
                pair_tables[path] = _dg_pair_table(path)
            else:
                pair_tables[path] = _generic_pair_table(path)
        return pair_tables[path]

    def _generic_pair_table(path):
        t = {}
        S, M, T = tws[path[0]], tws[path[1]], tws[path[2]]
        labsA = labels((path[0], path[1]))
        labsB = labels((path[1], path[2]))
        reach = _delta_reachability(M)
        for Da, lstA in labsA.items():
            for ia, (e, f, r, i) in enumerate(lstA):
                hA = A.hom(S.entries[e][0], M.entries[f][0])
                ea = TwElt(S, M, Da, {(e, f): basis_elt(hA, r, i)})
                for Db, lstB in labsB.items():
                    for ib, (e2, f2, r2, i2) in enumerate(lstB):
                        if e2 != f and e2 not in reach[f]:
                            continue
                        hB = A.hom(M.entries[e2][0], T.entries[f2][0])
                        eb = TwElt(M, T, Db, {(e2, f2): basis_elt(hB, r2, i2)})
                        out = tw_mu(A, [S, M, T], [ea, eb])
                        val = from_twelt((path[0], path[2]), out, Da + Db)
                        if val is not None:
                            t[((Da, ia), (Db, ib))] = val
        return t

    def _dg_pair_table(path):
        # dg base: arity budget kills all delta insertions in mu^2_Tw, so
        # the table is the base composition table re-indexed with the
        # additive-enlargement sign eps = |x_1| (r_2 - 1).
        t = {}
        S, M, T = tws[path[0]], tws[path[1]], tws[path[2]]
        labsA = labels((path[0], path[1]))
        labsB = labels((path[1], path[2]))
        labsC = labels((path[0], path[2]))
        posA = {D: {lab: nn for nn, lab in enumerate(lst)}
                for D, lst in labsA.items()}
        posB = {D: {lab: nn for nn, lab in enumerate(lst)}
                for D, lst in labsB.items()}
        posC = {D: {lab: nn for nn, lab in enumerate(lst)}
                for D, lst in labsC.items()}
        for Da, lstA in labsA.items():
            for ia, (e, f, r, i) in enumerate(lstA):
                Xe, ke = S.entries[e]
                Xf, kf = M.entries[f]
                hA = A.hom(Xe, Xf)
                ea = basis_elt(hA, r, i)
                for Db, lstB in labsB.items():
                    out_len = len(labsC.get(Da + Db, []))
                    if not out_len:
                        continue
                    for ib, (e2, f2, r2, i2) in enumerate(lstB):
                        if e2 != f:
                            continue
                        Xg, kg = T.entries[f2]
                        hB = A.hom(Xf, Xg)
                        val = A.mu((Xe, Xf, Xg),
                                   [ea, basis_elt(hB, r2, i2)])
                        if val is None:
                            continue
                        eps = ((ke - kf) * (r2 - 1)) % 2
                        vec = [ZERO] * out_len
                        pc = posC[Da + Db]
                        for ii, c in enumerate(val[1]):
                            if c:
                                vec[pc[(e, f2, val[0], ii)]] = -c if eps else c
                        out = elt(Da + Db, vec)
                        if out is not None:
                            t[((Da, ia), (Db, ib))] = out
        return t

    def mu_fn(path, args):
        d = len(args)
        if d == 1:
            C = cat_box[0].hom(path[0], path[1])
            deg, vec = args[0]
            return elt(deg + 1, C.d(deg).apply(list(vec)))
        if d == 2:
            from .ainfty import _bilinear
            t = pair_table(tuple(path))
            a, b = args
            sup_a = [(i, ca) for i, ca in enumerate(a[1]) if ca]
            sup_b = [(j, cb) for j, cb in enumerate(b[1]) if cb]
            return _bilinear(t, a[0], sup_a, b[0], sup_b)
        seq = [tws[X] for X in path]
        targs = [to_twelt((path[i], path[i + 1]), args[i]) for i in range(d)]
        out = tw_mu(A, seq, targs)
        out_deg = sum(a[0] for a in args) + 2 - d
        return from_twelt((path[0], path[-1]), out, out_deg)

    def support(m, path):
        if m == 2:
            for (la, lb), v in pair_table(tuple(path)).items():
                yield (la, lb), v
            return
        cat = cat_box[0]
        if m == 1:
            C = cat.hom(path[0], path[1])
            for (k, i) in hom_basis_labels(C):
                out = elt(k + 1, C.d(k).col(i))
                if out is not None:
                    yield ((k, i),), out
            return
        # dense fallback for higher arities (small transferred homs only)
        homs = [cat.hom(path[i], path[i + 1]) for i in range(m)]
        labels_all = [hom_basis_labels(h) for h in homs]
        if any(not ls for ls in labels_all):
            return
        from itertools import product as _iproduct
        for tup in _iproduct(*labels_all):
            args = [basis_elt(homs[i], *tup[i]) for i in range(m)]
            out = cat.mu(path, args)
            if out is not None:
                yield tup, out

    cat_box = []
    cat = AInfCategory(list(tws), hom, mu_fn, max_arity=A.max_arity,
                       d_max=A.d_max, mu_support_fn=support, name=name,
                       memoize=True)
    cat.memo_min_arity = 3   # mu^1, mu^2 are table lookups already
    cat_box.append(cat)
    return cat
