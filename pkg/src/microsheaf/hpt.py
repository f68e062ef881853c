"""Homological perturbation transfer along an idempotent contraction.

Input: a dg category B together with, for each hom complex, a degree-0
idempotent pi, a degree -1 homotopy T with  i pi - id = d T + T d  (i the
inclusion of the image of pi), optionally satisfying the side conditions
T i = 0, pi T = 0, T T = 0.  Output: an A-infinity structure on the images
plus quasi-equivalence functors in both directions.

The construction runs the basic perturbation lemma on the reduced tensor
coalgebra of the hom complexes: with

    I  = (+) i^{(x)n},   P = (+) pi-coords^{(x)n},
    Th = sum_j 1^{(x)j} (x) T (x) (i pi)^{(x)rest},
    delta = the coderivation of mu^2_B,

the transferred operations, inclusion functor and projection functor are
the cogenerator components of

    mu_A = P delta (1 - Th delta)^{-1} I      (plus the restricted mu^1),
    i_d  = [(1 - Th delta)^{-1} I]_d,
    p_d  = [P (1 - delta Th)^{-1}]_d.

Every sum is finite because delta lowers tensor length.  Side conditions
are enforced first by the standard normalization t -> (1-ip) t (1-ip),
t -> t d t.  Each output is validated downstream by the relation and
functor checkers; the same numbers are recomputed by an independent
planar-tree evaluator in the tests.
"""

from __future__ import annotations

from fractions import Fraction

from .ainfty import (
    AInfCategory,
    AInfFunctor,
    Elt,
    basis_elt,
    elt,
    elt_add,
    elt_scale,
    hom_basis_labels,
)
from .chaincore import CochainComplex, GradedSpace
from .rational import ONE, ZERO, QMatrix


class Contraction:
    """Contraction data on a dg category.

    pi[(X, Y)][k], t[(X, Y)][k]: per-degree matrices on hom_B(X, Y); the
    image basis, inclusion i and coordinate projection p are derived from
    pi (i p = pi exactly).
    """

    def __init__(self, B: AInfCategory, pi: dict, t: dict):
        if B.max_arity > 2:
            raise ValueError("contractions are defined over dg categories")
        self.B = B
        self.pi = pi
        self.t = t
        self._image = {}

    def pi_mat(self, X, Y, k) -> QMatrix:
        m = self.pi.get((X, Y), {}).get(k)
        if m is None:
            n = self.B.hom(X, Y).dim(k)
            m = QMatrix.zero(n, n)
        return m

    def t_mat(self, X, Y, k) -> QMatrix:
        m = self.t.get((X, Y), {}).get(k)
        if m is None:
            C = self.B.hom(X, Y)
            m = QMatrix.zero(C.dim(k - 1), C.dim(k))
        return m

    def image_data(self, X, Y):
        """(dims, include, project): basis of im(pi) with i p = pi."""
        key = (X, Y)
        if key not in self._image:
            C = self.B.hom(X, Y)
            dims = {}
            inc = {}
            proj = {}
            for k in C.degrees():
                m = self.pi_mat(X, Y, k)
                piv = m.column_space_pivots()
                cols = [m.col(j) for j in piv]
                dims[k] = len(cols)
                if not cols:
                    continue
                inc_k = QMatrix.from_columns(cols, nrows=C.dim(k))
                # solve inc * proj = pi  (consistent since im pi = span cols)
                proj_k = inc_k.solve_matrix(m)
                if proj_k is None:
                    raise ValueError("pi is not idempotent-compatible")
                inc[k] = inc_k
                proj[k] = proj_k
            self._image[key] = (dims, inc, proj)
        return self._image[key]


class ContractionReport:
    def __init__(self):
        self.failures = []      # (pair, identity, degree)
        self.side_conditions = []  # failed optional conditions

    @property
    def ok(self):
        return not self.failures

    def __repr__(self):
        return (f"ContractionReport(ok={self.ok}, "
                f"failures={self.failures[:3]}, side={self.side_conditions[:3]})")


def verify_contraction(c: Contraction) -> ContractionReport:
    """Check pi pi = pi, degrees, and i pi - id = d T + T d, exactly.

    The side conditions T T = 0, T i = 0, pi T = 0 are checked and reported
    but not required.
    """
    rep = ContractionReport()
    B = c.B
    for X in B.objects:
        for Y in B.objects:
            C = B.hom(X, Y)
            for k in C.degrees():
                p = c.pi_mat(X, Y, k)
                if p * p != p:
                    rep.failures.append(((X, Y), "pi^2 = pi", k))
                # chain map: d pi = pi d
                if C.d(k) * p != c.pi_mat(X, Y, k + 1) * C.d(k):
                    rep.failures.append(((X, Y), "pi chain map", k))
                t_dn = c.t_mat(X, Y, k)       # C^k -> C^{k-1}
                t_up = c.t_mat(X, Y, k + 1)   # C^{k+1} -> C^k
                lhs = p - QMatrix.identity(C.dim(k))
                rhs = t_up * C.d(k) + C.d(k - 1) * t_dn
                if lhs != rhs:
                    rep.failures.append(((X, Y), "i pi - id = dT + Td", k))
                # optional side conditions
                if not (c.t_mat(X, Y, k - 1) * t_dn).is_zero():
                    rep.side_conditions.append(((X, Y), "T T = 0", k))
                if not (t_dn * p).is_zero():
                    rep.side_conditions.append(((X, Y), "T i = 0", k))
                if not (c.pi_mat(X, Y, k - 1) * t_dn).is_zero():
                    rep.side_conditions.append(((X, Y), "pi T = 0", k))
    return rep


def normalize_contraction(c: Contraction) -> Contraction:
    """Rebuild T so the side conditions hold.

    ker(pi) is a contractible subcomplex (the homotopy identity restricts
    to a contraction of it); an adapted-basis contracting homotopy there,
    extended by zero on im(pi), satisfies T T = 0, T i = 0, pi T = 0 and
    d T + T d = pi - 1 on the nose.
    """
    from .chaincore import homology_retract

    B = c.B
    new_t = {}
    for X in B.objects:
        for Y in B.objects:
            C = B.hom(X, Y)
            if C.total_dim() == 0:
                continue
            incl = {}
            proj = {}
            kdims = {}
            for k in C.degrees():
                p = c.pi_mat(X, Y, k)
                kb = p.kernel_basis()
                kdims[k] = len(kb)
                if not kb:
                    continue
                inc_k = QMatrix.from_columns(kb, nrows=C.dim(k))
                incl[k] = inc_k
                # coordinates along ker(pi) in the im(pi) (+) ker(pi) split:
                # q = 1 - pi factors as inc_k o proj_k
                q = QMatrix.identity(C.dim(k)) - p
                pr = inc_k.solve_matrix(q)
                if pr is None:
                    raise ValueError("pi is not an idempotent chain map")
                proj[k] = pr
            kdiff = {}
            for k in sorted(kdims):
                if kdims.get(k) and kdims.get(k + 1):
                    kdiff[k] = proj[k + 1] * C.d(k) * incl[k]
            K = CochainComplex(GradedSpace(kdims), kdiff)
            r = homology_retract(K)
            if r.h.space.total_dim() != 0:
                raise ValueError(
                    "ker(pi) is not acyclic; contraction identity must fail")
            tk = {}
            for k in C.degrees():
                if not (kdims.get(k) and kdims.get(k - 1)):
                    continue
                m = incl[k - 1] * r.t.mat(k) * proj[k]
                if not m.is_zero():
                    tk[k] = m
            new_t[(X, Y)] = tk
    return Contraction(B, c.pi, new_t)


# ---------------------------------------------------------------------------
# planar trees


def count_trees(d: int) -> int:
    """Binary planar rooted trees with d leaves: Catalan(d-1)."""
    if d < 1:
        raise ValueError("need d >= 1")
    from math import comb
    n = d - 1
    return comb(2 * n, n) // (n + 1)


def planar_trees(d: int):
    """All binary planar rooted trees with d leaves.

    A tree is either an int (leaf position is implicit) encoded as
    ("leaf",) or ("node", left, right).
    """
    if d == 1:
        yield ("leaf",)
        return
    for l_size in range(1, d):
        for left in planar_trees(l_size):
            for right in planar_trees(d - l_size):
                yield ("node", left, right)


def tree_leaves(tree) -> int:
    if tree[0] == "leaf":
        return 1
    return tree_leaves(tree[1]) + tree_leaves(tree[2])


# ---------------------------------------------------------------------------
# tensor-coalgebra perturbation expansion

# Words are tuples of (pair_path, Elt): a word w = (a_1, ..., a_n) along a
# path X_0 -> ... -> X_n stores each a_j with its (X_{j-1}, X_j).  States
# are dicts word-key -> coefficient applied to formal basis words; since we
# always act on one initial word, we keep lists of (coeff, [elements], path).


class _Word:
    __slots__ = ("path", "elts")

    def __init__(self, path, elts):
        self.path = tuple(path)
        self.elts = list(elts)


def _apply_delta(B: AInfCategory, word: _Word):
    """Coderivation of mu^2_B: merge adjacent letters with prefix signs."""
    out = []
    n = len(word.elts)
    for slot in range(n - 1):
        a, b = word.elts[slot], word.elts[slot + 1]
        merged = B.mu(word.path[slot:slot + 3], [a, b])
        if merged is None:
            continue
        # b^2 has reduced degree +1; crossing the prefix costs its reduced
        # degrees
        sign = sum(word.elts[j][0] - 1 for j in range(slot)) % 2
        if sign:
            merged = elt_scale(-1, merged)
        new_path = word.path[:slot + 1] + word.path[slot + 2:]
        out.append((_Word(new_path, word.elts[:slot] + [merged]
                          + word.elts[slot + 2:]), ONE))
    return out


def _apply_mu1(B: AInfCategory, word: _Word):
    """Coderivation of mu^1_B (the tensor differential with prefix signs)."""
    out = []
    for slot in range(len(word.elts)):
        a = word.elts[slot]
        da = B.mu(word.path[slot:slot + 2], [a])
        if da is None:
            continue
        sign = sum(word.elts[j][0] - 1 for j in range(slot)) % 2
        if sign:
            da = elt_scale(-1, da)
        out.append((_Word(word.path, word.elts[:slot] + [da]
                          + word.elts[slot + 1:]), ONE))
    return out


class Transfer:
    """Transferred A-infinity category plus the two functors."""

    def __init__(self, contraction: Contraction, d_max: int = 6,
                 enforce_side_conditions: bool = True, check: bool = True):
        rep = verify_contraction(contraction)
        if not rep.ok:
            raise ValueError(f"invalid contraction: {rep.failures[:3]}")
        if rep.side_conditions and enforce_side_conditions:
            contraction = normalize_contraction(contraction)
            rep2 = verify_contraction(contraction)
            if not rep2.ok or rep2.side_conditions:
                raise ValueError("side-condition normalization failed")
        self.contraction = contraction
        self.B = contraction.B
        self.d_max = d_max
        self._build_category()

    # -- letterwise operators ------------------------------------------

    def _i_letter(self, pair, a: Elt | None) -> Elt | None:
        """Inclusion of the image complex into B (on image coordinates)."""
        if a is None:
            return None
        X, Y = pair
        dims, inc, proj = self.contraction.image_data(X, Y)
        k, vec = a
        m = inc.get(k)
        if m is None:
            return None
        return elt(k, m.apply(list(vec)))

    def _p_letter(self, pair, a: Elt | None) -> Elt | None:
        if a is None:
            return None
        X, Y = pair
        dims, inc, proj = self.contraction.image_data(X, Y)
        k, vec = a
        m = proj.get(k)
        if m is None:
            return None
        return elt(k, m.apply(list(vec)))

    def _pi_letter(self, pair, a: Elt | None) -> Elt | None:
        if a is None:
            return None
        X, Y = pair
        k, vec = a
        return elt(k, self.contraction.pi_mat(X, Y, k).apply(list(vec)))

    def _t_letter(self, pair, a: Elt | None) -> Elt | None:
        if a is None:
            return None
        X, Y = pair
        k, vec = a
        return elt(k - 1, self.contraction.t_mat(X, Y, k).apply(list(vec)))

    def _apply_that(self, word: _Word):
        """T-hat = sum_j 1^j (x) T (x) (i p)^{rest}, with Koszul signs for
        the odd operator T crossing the prefix."""
        out = []
        n = len(word.elts)
        for j in range(n):
            sign = sum(word.elts[s][0] - 1 for s in range(j)) % 2
            elts = list(word.elts)
            ta = self._t_letter((word.path[j], word.path[j + 1]), elts[j])
            if ta is None:
                continue
            elts[j] = ta
            dead = False
            for s in range(j + 1, n):
                pa = self._pi_letter((word.path[s], word.path[s + 1]), elts[s])
                if pa is None:
                    dead = True
                    break
                elts[s] = pa
            if dead:
                continue
            out.append((_Word(word.path, elts), -ONE if sign else ONE))
        return out

    # -- the expansion ----------------------------------------------------

    def _series_tdelta(self, items):
        """sum_{k>=0} (T-hat delta)^k applied to items (list of (word, c))."""
        out = list(items)
        frontier = list(items)
        while frontier:
            nxt = []
            for word, c in frontier:
                for w1, c1 in _apply_delta(self.B, word):
                    for w2, c2 in self._apply_that(w1):
                        nxt.append((w2, c * c1 * c2))
            out.extend(nxt)
            frontier = nxt
        return out

    def _series_deltat(self, items):
        """sum_{k>=0} (delta T-hat)^k applied to items."""
        out = list(items)
        frontier = list(items)
        while frontier:
            nxt = []
            for word, c in frontier:
                for w1, c1 in self._apply_that(word):
                    for w2, c2 in _apply_delta(self.B, w1):
                        nxt.append((w2, c * c1 * c2))
            out.extend(nxt)
            frontier = nxt
        return out

    def _include_word(self, path, args):
        elts = []
        for s, a in enumerate(args):
            ia = self._i_letter((path[s], path[s + 1]), a)
            if ia is None:
                return None
            elts.append(ia)
        return _Word(path, elts)

    def transferred_mu(self, path, args):
        """mu_A^d on image coordinates (d >= 2); mu^1 handled by caller."""
        word = self._include_word(path, args)
        if word is None:
            return None
        acc = None
        for w, c in self._series_tdelta([(word, ONE)]):
            for w1, c1 in _apply_delta(self.B, w):
                if len(w1.elts) != 1:
                    continue
                pa = self._p_letter((w1.path[0], w1.path[-1]), w1.elts[0])
                if pa is None:
                    continue
                acc = elt_add(acc, elt_scale(c * c1, pa))
        return acc

    def functor_i_comp(self, path, args):
        """i_d: image coords -> B element; i_1 = inclusion."""
        if len(args) == 1:
            return self._i_letter((path[0], path[1]), args[0])
        word = self._include_word(path, args)
        if word is None:
            return None
        acc = None
        for w, c in self._series_tdelta([(word, ONE)]):
            if len(w.elts) != 1:
                continue
            acc = elt_add(acc, elt_scale(c, w.elts[0]))
        return acc

    def functor_p_comp(self, path, args):
        """p_d: B elements -> image coords; p_1 = projection."""
        if len(args) == 1:
            return self._p_letter((path[0], path[1]), args[0])
        word = _Word(path, list(args))
        acc = None
        for w, c in self._series_deltat([(word, ONE)]):
            if len(w.elts) != 1:
                continue
            pa = self._p_letter((w.path[0], w.path[-1]), w.elts[0])
            if pa is None:
                continue
            acc = elt_add(acc, elt_scale(c, pa))
        return acc

    # -- assembled category ------------------------------------------------

    def _build_category(self):
        contraction = self.contraction
        B = self.B

        def hom(X, Y):
            dims, inc, proj = contraction.image_data(X, Y)
            C = B.hom(X, Y)
            sp = GradedSpace(dims)
            diff = {}
            for k in sorted(d for d in dims if dims[d]):
                if not dims.get(k + 1):
                    continue
                # mu^1_A = p o d o i on image coordinates
                m = proj[k + 1] * C.d(k) * inc[k]
                diff[k] = m
            return CochainComplex(sp, diff)

        def mu_fn(path, args):
            d = len(args)
            if d == 1:
                C = self.category.hom(path[0], path[1])
                deg, vec = args[0]
                return elt(deg + 1, C.d(deg).apply(list(vec)))
            if d > self.d_max:
                return None
            return self.transferred_mu(path, args)

        self.category = AInfCategory(
            B.objects, hom, mu_fn, max_arity=self.d_max, d_max=self.d_max,
            name=f"transfer({B.name})", memoize=True)
        self.include = AInfFunctor(
            self.category, B, lambda X: X,
            lambda path, args: self.functor_i_comp(path, args),
            max_arity=self.d_max, name="i")
        self.project = AInfFunctor(
            B, self.category, lambda X: X,
            lambda path, args: self.functor_p_comp(path, args),
            max_arity=self.d_max, name="p")


def transfer(contraction: Contraction, d_max: int = 6) -> Transfer:
    return Transfer(contraction, d_max=d_max)


def complex_as_category(C: CochainComplex) -> AInfCategory:
    """Two-object dg category with hom(a, b) = C and no compositions; lets
    contraction data on a bare complex reuse the category machinery."""
    from .chaincore import zero_complex

    zero = zero_complex()

    def hom(X, Y):
        return C if (X, Y) == ("a", "b") else zero

    def compose_table(path):
        return {}

    from .ainfty import dg_category

    return dg_category(["a", "b"], hom, compose_table_fn=compose_table,
                       name="single")


def single_complex_contraction(C: CochainComplex, pi_mats, t_mats
                               ) -> Contraction:
    B = complex_as_category(C)
    return Contraction(B, {("a", "b"): pi_mats}, {("a", "b"): t_mats})


def contraction_from_retracts(B: AInfCategory) -> Contraction:
    """Canonical contraction of every hom complex onto its cohomology,
    built from the adapted-basis retract of chaincore."""
    from .chaincore import homology_retract

    pi = {}
    t = {}
    for X in B.objects:
        for Y in B.objects:
            C = B.hom(X, Y)
            if C.total_dim() == 0:
                continue
            r = homology_retract(C)
            ip = r.i.compose(r.p)
            pi[(X, Y)] = {k: ip.mat(k) for k in C.degrees()}
            t[(X, Y)] = {k: r.t.mat(k) for k in C.degrees()
                         if not r.t.mat(k).is_zero()}
    return Contraction(B, pi, t)


# ---------------------------------------------------------------------------
# independent route for cross-checking transferred entries


def mu_via_functor_equation(tr: Transfer, path, args):
    """Recompute i_1(mu_A^d(args)) from the A-infinity functor equation for
    the inclusion functor, using only mu_B, the i_d components, and the
    *lower* transferred products: solve

        i_1 mu_A^d(a) = sum_{r, splits} mu_B^r(i^{s_1}(...), ...)
                        - sum_{(m,n) != (d,0)} (-1)^stars i^{d-m+1}(..., mu_A^m(...), ...)

    then project with p_1.  Independent of the coalgebra expansion for the
    top product (it reuses lower-order data only)."""
    from .ainfty import _compositions

    A = tr.category
    B = tr.B
    d = len(args)
    lhs = None
    for splits in _compositions(d):
        if len(splits) > B.max_arity:
            continue
        pieces = []
        off = 0
        ok = True
        for s in splits:
            sub = tr.include.comp(path[off:off + s + 1], args[off:off + s])
            if sub is None:
                ok = False
                break
            pieces.append(sub)
            off += s
        if not ok:
            continue
        pts = [0]
        for s in splits:
            pts.append(pts[-1] + s)
        fpath = tuple(path[i] for i in pts)
        lhs = elt_add(lhs, B.mu(fpath, pieces))
    rhs_lower = None
    for m in range(1, d + 1):
        for n in range(0, d - m + 1):
            if m == d:
                continue  # the top term i_1(mu_A^d) is the unknown
            inner = A.mu(path[n:n + m + 1], args[n:n + m])
            if inner is None:
                continue
            outer_args = list(args[:n]) + [inner] + list(args[n + m:])
            outer_path = path[:n + 1] + path[n + m:]
            term = tr.include.comp(outer_path, outer_args)
            if term is None:
                continue
            sign = sum(args[j][0] - 1 for j in range(n)) % 2
            if sign:
                term = elt_scale(-1, term)
            rhs_lower = elt_add(rhs_lower, term)
    residual = elt_add(lhs, elt_scale(-1, rhs_lower))
    if residual is None:
        return None
    return tr._p_letter((path[0], path[-1]), residual)
