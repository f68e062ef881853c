"""Injective resolutions of cellular sheaves and their minimization.

Elementary injectives are the down-set sheaves [sigma] (value Q on the
faces of sigma, identity restrictions); Hom(F, [sigma]) = F(sigma)^*, so a
complex of injectives is stored as lists of cells per degree plus sparse
generator-coefficient matrices (an entry from a [sigma]-summand to a
[tau]-summand requires tau <= sigma).

The resolution is the normalized coinduction (Godement) coresolution

    J^{p,k} = (+)_{tau_0 < ... < tau_p} [tau_0] (x) F^k(tau_p),

totalized, which is then crushed by exact Gaussian elimination of
same-cell invertible entries; the augmentation is transported through
every elimination, and stalkwise quasi-isomorphism is checked by tests.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .chaincore import ChainMap, CochainComplex, Cohomology, GradedSpace, cone
from .rational import ONE, ZERO, QMatrix, as_q
from .sheaves import CellularSheaf
from .simplicial import CellUnion, SimplicialComplex


class InjectiveComplex:
    """Bounded complex of sums of elementary injectives, with a recorded
    augmentation from an underlying sheaf.

    summands[n]: list of cells; diff[n]: dict (row_j, col_i) -> coeff with
    cell(row) <= cell(col); aug[n]: list (per summand) of functionals on
    F^n(cell) (lists of Fractions), or None when detached.
    """

    def __init__(self, complex_: SimplicialComplex, summands, diff,
                 sheaf: CellularSheaf | None = None, aug=None, check=True):
        self.complex = complex_
        self.summands = {n: list(v) for n, v in summands.items() if v}
        self.diff = {n: dict(m) for n, m in diff.items()}
        self.sheaf = sheaf
        self.aug = aug
        if check:
            self.validate()

    def degrees(self):
        return sorted(self.summands)

    def dim(self, n):
        return len(self.summands.get(n, []))

    def total_size(self):
        return sum(len(v) for v in self.summands.values())

    def validate(self):
        leq = self.complex.leq
        for n, entries in self.diff.items():
            cells_lo = self.summands.get(n, [])
            cells_hi = self.summands.get(n + 1, [])
            for (j, i), c in entries.items():
                if not c:
                    continue
                if not leq(cells_hi[j], cells_lo[i]):
                    raise ValueError(
                        f"invalid generator {cells_lo[i]} -> {cells_hi[j]}")
        # d o d = 0
        for n in self.degrees():
            m1 = self.diff_matrix(n)
            m2 = self.diff_matrix(n + 1)
            if not (m2 * m1).is_zero():
                raise ValueError(f"d^2 != 0 at degree {n}")

    def diff_matrix(self, n) -> QMatrix:
        rows = self.dim(n + 1)
        cols = self.dim(n)
        m = QMatrix(rows, cols,
                    storage="sparse" if max(rows, cols, 1) > 64 else "dense")
        for (j, i), c in self.diff.get(n, {}).items():
            if c:
                m[j, i] = c
        return m

    # -- evaluation --------------------------------------------------------

    def sections(self, U: CellUnion):
        """Sections over an open union: the U-supported summand subcomplex.

        Returns (CochainComplex, kept) with kept[n] = list of summand
        indices retained."""
        if U.kind != "open":
            raise ValueError("sections need an open union")
        kept = {n: [i for i, c in enumerate(v) if c in U.cells]
                for n, v in self.summands.items()}
        return self._subcomplex(kept)

    def stalk(self, cell):
        """Stalk at a cell: summands whose cell dominates it."""
        cell = tuple(cell)
        leq = self.complex.leq
        kept = {n: [i for i, c in enumerate(v) if leq(cell, c)]
                for n, v in self.summands.items()}
        return self._subcomplex(kept)

    def _subcomplex(self, kept):
        dims = {n: len(v) for n, v in kept.items() if v}
        pos = {n: {i: a for a, i in enumerate(v)} for n, v in kept.items()}
        diff = {}
        for n in dims:
            if not dims.get(n + 1):
                continue
            m = QMatrix(dims[n + 1], dims[n],
                        storage="sparse" if max(dims[n + 1], dims[n]) > 64
                        else "dense")
            pn, pn1 = pos[n], pos[n + 1]
            for (j, i), c in self.diff.get(n, {}).items():
                if c and i in pn and j in pn1:
                    m[pn1[j], pn[i]] = c
            diff[n] = m
        return CochainComplex(GradedSpace(dims), diff), kept

    def stalk_aug_map(self, cell) -> ChainMap:
        """The augmentation F(cell) -> stalk(J, cell) as a chain map."""
        if self.sheaf is None or self.aug is None:
            raise ValueError("no augmentation recorded")
        F = self.sheaf
        cell = tuple(cell)
        stalk, kept = self.stalk(cell)
        mats = {}
        for n, idxs in kept.items():
            if not idxs or F.value(cell).dim(n) == 0:
                continue
            m = QMatrix.zero(len(idxs), F.value(cell).dim(n))
            for a, i in enumerate(idxs):
                sigma = self.summands[n][i]
                lam = self.aug[n][i]
                rho = F.restriction(cell, sigma).get(
                    n, QMatrix.zero(F.value(sigma).dim(n),
                                    F.value(cell).dim(n)))
                # functional lam o rho
                for col in range(rho.ncols):
                    acc = ZERO
                    for (r, c2), v in rho.items():
                        if c2 == col and lam[r]:
                            acc += lam[r] * v
                    if acc:
                        m[a, col] = acc
            mats[n] = m
        return ChainMap(F.value(cell), stalk, mats, check=False)

    def is_resolution_of(self, F: CellularSheaf | None = None) -> bool:
        """Stalkwise quasi-isomorphism of the augmentation, checked exactly."""
        F = F or self.sheaf
        for cell in self.complex.simplices:
            cm = self.stalk_aug_map(cell)
            cn = cone(cm).complex
            if Cohomology(cn).space.total_dim():
                return False
        return True


# ---------------------------------------------------------------------------
# Godement coresolution


def _strict_chains(K: SimplicialComplex):
    cells = K.cells()
    above = {c: [d for d in cells if c != d and set(c) <= set(d)]
             for c in cells}
    chains = []

    def extend(chain):
        chains.append(tuple(chain))
        for nxt in above[chain[-1]]:
            extend(chain + [nxt])

    for c in cells:
        extend([c])
    return chains


def godement_resolution(F: CellularSheaf) -> InjectiveComplex:
    K = F.complex
    chains = _strict_chains(K)
    # summand labels: (chain, k, basis index of F^k(top))
    labels: dict[int, list] = {}
    for chain in chains:
        p = len(chain) - 1
        top = chain[-1]
        V = F.value(top)
        for k in V.space.dims:
            n = p + k
            lst = labels.setdefault(n, [])
            for b in range(V.dim(k)):
                lst.append((chain, k, b))
    index = {n: {lab: i for i, lab in enumerate(v)}
             for n, v in labels.items()}
    cellset = K.simplices
    diff: dict[int, dict] = {}
    for n, lst in labels.items():
        target = index.get(n + 1, {})
        if not target:
            continue
        entries = diff.setdefault(n, {})
        for i, (chain, k, b) in enumerate(lst):
            p = len(chain) - 1
            top = chain[-1]
            # internal differential: (-1)^p d_F
            V = F.value(top)
            dmat = V.d(k)
            sgn_p = -ONE if p % 2 else ONE
            for (r, c), v in dmat.items():
                if c == b:
                    j = target.get((chain, k + 1, r))
                    if j is not None:
                        entries[(j, i)] = entries.get((j, i), ZERO) + sgn_p * v
            # Cech differential: insert a cell into the chain
            for cell in cellset:
                if cell in chain:
                    continue
                for pos in range(p + 2):
                    lo_ok = pos == 0 or set(chain[pos - 1]) < set(cell)
                    hi_ok = pos == p + 1 or set(cell) < set(chain[pos])
                    if not (lo_ok and hi_ok):
                        continue
                    new_chain = chain[:pos] + (cell,) + chain[pos:]
                    sgn = -ONE if pos % 2 else ONE
                    if pos <= p:
                        j = target.get((new_chain, k, b))
                        if j is not None:
                            entries[(j, i)] = entries.get((j, i), ZERO) + sgn
                    else:
                        # new top: transport the coefficient along rho
                        rho = F.map_component(top, cell, k) \
                            if cell in K.cofaces(top) else None
                        if rho is None:
                            rho = F.restriction(top, cell).get(
                                k, QMatrix.zero(F.value(cell).dim(k),
                                                F.value(top).dim(k)))
                        for (r, c), v in rho.items():
                            if c == b:
                                j = target.get((new_chain, k, r))
                                if j is not None:
                                    entries[(j, i)] = \
                                        entries.get((j, i), ZERO) + sgn * v
    summands = {n: [lab[0][0] for lab in v] for n, v in labels.items()}
    # augmentation: F^n(gamma) -> (+)_{tau >= gamma} F^n(tau): the p = 0
    # summands carry the dual-basis functionals
    aug = {}
    for n, lst in labels.items():
        row = []
        for (chain, k, b) in lst:
            if len(chain) == 1 and k == n:
                lam = [ZERO] * F.value(chain[0]).dim(k)
                lam[b] = ONE
                row.append(lam)
            else:
                row.append([ZERO] * F.value(chain[0]).dim(n))
        aug[n] = row
    J = InjectiveComplex(K, summands, {n: _clean(m) for n, m in diff.items()},
                         sheaf=F, aug=aug, check=False)
    return J


def _clean(entries):
    return {k: v for k, v in entries.items() if v}


# ---------------------------------------------------------------------------
# minimization


def minimize(J: InjectiveComplex) -> InjectiveComplex:
    """Split off invertible same-cell generator entries until none remain.

    Exact Gaussian reductions; the augmentation is transported through the
    reduction projection at every step."""
    summands = {n: list(v) for n, v in J.summands.items()}
    rows: dict[int, dict] = {}
    cols: dict[int, dict] = {}
    for n, entries in J.diff.items():
        r = rows.setdefault(n, {})
        c = cols.setdefault(n, {})
        for (j, i), v in entries.items():
            if v:
                r.setdefault(j, {})[i] = v
                c.setdefault(i, {})[j] = v
    aug = None
    if J.aug is not None:
        aug = {n: [list(l) for l in v] for n, v in J.aug.items()}
    alive = {n: [True] * len(v) for n, v in summands.items()}

    def entry_del(n, j, i):
        rows[n].get(j, {}).pop(i, None)
        cols[n].get(i, {}).pop(j, None)

    def entry_set(n, j, i, v):
        if v:
            rows.setdefault(n, {}).setdefault(j, {})[i] = v
            cols.setdefault(n, {}).setdefault(i, {})[j] = v
        else:
            entry_del(n, j, i)

    progress = True
    while progress:
        progress = False
        for n in sorted(summands):
            if n + 1 not in summands:
                continue
            cand = None
            for j, rw in rows.get(n, {}).items():
                if not alive[n + 1][j]:
                    continue
                for i, v in rw.items():
                    if alive[n][i] and v and \
                            summands[n + 1][j] == summands[n][i]:
                        cand = (j, i, v)
                        break
                if cand:
                    break
            if not cand:
                continue
            j, x, u = cand
            progress = True
            uinv = ONE / u
            col_x = dict(cols.get(n, {}).get(x, {}))   # rows b with D[b,x]
            row_y = dict(rows.get(n, {}).get(j, {}))   # cols a with D[y,a]
            # reduce: D'[b,a] = D[b,a] - D[b,x] u^-1 D[y,a]
            for b, vbx in col_x.items():
                if b == j or not alive[n + 1][b]:
                    continue
                for a, vya in row_y.items():
                    if a == x or not alive[n][a]:
                        continue
                    old = rows.get(n, {}).get(b, {}).get(a, ZERO)
                    entry_set(n, b, a, old - vbx * uinv * vya)
            # transported augmentation at degree n+1:
            # aug'[b] += -D[b,x] u^-1 aug[y]
            if aug is not None and n + 1 in aug:
                # Psi_{n+1}(y) = -gamma u^-1: the y-functional corrects the
                # b-functionals through the generator [cell_y] -> [cell_b]
                lam_y = aug[n + 1][j]
                for b, vbx in col_x.items():
                    if b == j or not alive[n + 1][b]:
                        continue
                    corr = _functional_correction(J.sheaf, summands[n + 1][b],
                                                  summands[n + 1][j], n + 1,
                                                  lam_y)
                    if corr is None:
                        continue
                    tgt = aug[n + 1][b]
                    f = vbx * uinv
                    for idx2, v2 in enumerate(corr):
                        if v2:
                            tgt[idx2] -= f * v2
            # drop x (degree n) and y = j (degree n+1)
            alive[n][x] = False
            alive[n + 1][j] = False
            for b in list(cols.get(n, {}).get(x, {})):
                entry_del(n, b, x)
            for a in list(rows.get(n, {}).get(j, {})):
                entry_del(n, j, a)
            for rmap, cmap, deg, kill_row in (
                    (rows.get(n - 1, {}), cols.get(n - 1, {}), n - 1, True),
                    (rows.get(n + 1, {}), cols.get(n + 1, {}), n + 1, False)):
                if kill_row:
                    rw = dict(rmap.get(x, {}))
                    for a in rw:
                        rmap.get(x, {}).pop(a, None)
                        cmap.get(a, {}).pop(x, None)
                else:
                    cl = dict(cmap.get(j, {}))
                    for b in cl:
                        cmap.get(j, {}).pop(b, None)
                        rmap.get(b, {}).pop(j, None)
    # compact
    keep = {n: [i for i, a in enumerate(alive[n]) if a] for n in summands}
    pos = {n: {i: a for a, i in enumerate(v)} for n, v in keep.items()}
    new_summands = {n: [summands[n][i] for i in keep[n]] for n in summands}
    new_diff = {}
    for n in summands:
        entries = {}
        for j, rw in rows.get(n, {}).items():
            if n + 1 not in pos or j not in pos[n + 1]:
                continue
            for i, v in rw.items():
                if i in pos[n] and v:
                    entries[(pos[n + 1][j], pos[n][i])] = v
        if entries:
            new_diff[n] = entries
    new_aug = None
    if aug is not None:
        new_aug = {n: [aug[n][i] for i in keep[n]] for n in summands
                   if n in aug}
    return InjectiveComplex(J.complex, new_summands, new_diff,
                            sheaf=J.sheaf, aug=new_aug, check=False)


def _functional_correction(F, cell_b, cell_y, n, lam_y):
    """lam_y o rho_{cell_b -> cell_y} as a functional on F^n(cell_b).

    Nonzero only when cell_b <= cell_y (the generator direction)."""
    if F is None:
        return None
    if not set(cell_b) <= set(cell_y):
        return None
    rho = F.restriction(cell_b, cell_y).get(
        n, QMatrix.zero(F.value(cell_y).dim(n), F.value(cell_b).dim(n)))
    out = [ZERO] * F.value(cell_b).dim(n)
    for (r, c), v in rho.items():
        if lam_y[r]:
            out[c] += lam_y[r] * v
    return out


def resolve(F: CellularSheaf, minimize_result=True) -> InjectiveComplex:
    J = godement_resolution(F)
    if minimize_result:
        J = minimize(J)
    return J
