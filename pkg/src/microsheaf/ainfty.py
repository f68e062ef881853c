"""A-infinity categories with finitely supported composition maps.

Conventions (the single source of truth is ``check_relations``):

* composition maps mu^d take arguments in diagrammatic order,
  a_1: X_0 -> X_1, ..., a_d: X_{d-1} -> X_d, and have degree 2 - d;
* the quadratic relation checked is

      sum_{m,n} (-1)^{stars_n} mu^{d-m+1}(a_1,...,a_n,
                      mu^m(a_{n+1},...,a_{n+m}), a_{n+m+1},...,a_d) = 0

  with stars_n = sum_{j<=n} (|a_j| - 1)  (reduced degrees);
* a dg category realizes this with mu^1 = d and
  mu^2(a, b) = (-1)^{|a|(|b|+1)} b o a,
  and its cohomological category composes classes by
  [b] . [a] = (-1)^{|a|(|b|+1)} [mu^2(a, b)]  =  [b o a].

Elements of hom complexes are homogeneous pairs ``(degree, coeff tuple)``;
``None`` stands for zero.
"""

from __future__ import annotations

from fractions import Fraction

from .chaincore import CochainComplex, Cohomology, GradedSpace
from .rational import ONE, ZERO, QMatrix, as_q

Elt = tuple  # (degree, tuple_of_Fractions)

_MISS = object()


def elt(degree: int, vec) -> Elt | None:
    vec = tuple(as_q(x) for x in vec)
    if all(not x for x in vec):
        return None
    return (degree, vec)


def elt_add(a: Elt | None, b: Elt | None) -> Elt | None:
    if a is None:
        return b
    if b is None:
        return a
    if a[0] != b[0] or len(a[1]) != len(b[1]):
        raise ValueError("inhomogeneous sum")
    return elt(a[0], tuple(x + y for x, y in zip(a[1], b[1])))


def elt_scale(c, a: Elt | None) -> Elt | None:
    if a is None:
        return None
    c = as_q(c)
    if not c:
        return None
    return (a[0], tuple(c * x for x in a[1]))


def basis_elt(C: CochainComplex, degree: int, i: int) -> Elt:
    vec = [ZERO] * C.dim(degree)
    vec[i] = ONE
    return (degree, tuple(vec))


def hom_basis_labels(C: CochainComplex):
    """All (degree, index) labels of a hom complex, sorted."""
    out = []
    for k in C.degrees():
        for i in range(C.dim(k)):
            out.append((k, i))
    return out


class AInfCategory:
    """A-infinity category presented by hom complexes and a mu evaluator.

    Args:
        objects: finite list of hashable object keys.
        hom_fn: hom_fn(X, Y) -> CochainComplex.
        mu_fn: mu_fn(path, args) -> Elt | None where path = (X_0,...,X_d)
            and args is the list of d homogeneous elements; must be
            multilinear and vanish for d > d_max.
        max_arity: largest d with mu^d not structurally zero (2 for dg).
        d_max: support bound used by consumers (default 6).
        mu_support_fn: optional sparse iterator
            mu_support_fn(m, path) -> iterable of (label_tuple, Elt)
            over basis label tuples with nonzero mu^m.
    """

    def __init__(self, objects, hom_fn, mu_fn, max_arity, d_max=6,
                 mu_support_fn=None, name="", memoize=False):
        self.objects = list(objects)
        self._hom_fn = hom_fn
        self._mu_fn = mu_fn
        self.max_arity = max_arity
        self.d_max = d_max
        self._mu_support_fn = mu_support_fn
        self.name = name
        self.memoize = memoize
        self.memo_min_arity = 1
        self._hom_cache: dict[tuple, CochainComplex] = {}
        self._coho_cache: dict[tuple, Cohomology] = {}
        self._mu_memo: dict[tuple, Elt | None] = {}
        self._support_cache: dict[tuple, list] = {}

    def hom(self, X, Y) -> CochainComplex:
        key = (X, Y)
        if key not in self._hom_cache:
            self._hom_cache[key] = self._hom_fn(X, Y)
        return self._hom_cache[key]

    def hom_cohomology(self, X, Y) -> Cohomology:
        key = (X, Y)
        if key not in self._coho_cache:
            self._coho_cache[key] = Cohomology(self.hom(X, Y))
        return self._coho_cache[key]

    def mu(self, path, args) -> Elt | None:
        d = len(args)
        if d != len(path) - 1:
            raise ValueError("path/arity mismatch")
        if d > self.d_max:
            return None
        if any(a is None for a in args):
            return None
        # memoization pays only for expensive evaluators on small vectors;
        # hashing long coefficient tuples costs more than a table lookup
        if not self.memoize or d < self.memo_min_arity or \
                sum(len(a[1]) for a in args) > 48:
            return self._mu_fn(tuple(path), list(args))
        key = (tuple(path), tuple(args))
        hit = self._mu_memo.get(key, _MISS)
        if hit is not _MISS:
            return hit
        out = self._mu_fn(tuple(path), list(args))
        self._mu_memo[key] = out
        return out

    def mu_support(self, m, path):
        """(label_tuple, out_elt) pairs with nonzero mu^m on basis tuples;
        cached per (m, path)."""
        key = (m, tuple(path))
        hit = self._support_cache.get(key)
        if hit is None:
            hit = list(self._mu_support_uncached(m, tuple(path)))
            self._support_cache[key] = hit
        return hit

    def _mu_support_uncached(self, m, path):
        if self._mu_support_fn is not None:
            yield from self._mu_support_fn(m, path)
            return
        homs = [self.hom(path[i], path[i + 1]) for i in range(m)]
        labels = [hom_basis_labels(h) for h in homs]
        if any(not ls for ls in labels):
            return
        idx = [0] * m
        while True:
            tup = tuple(labels[i][idx[i]] for i in range(m))
            args = [basis_elt(homs[i], *tup[i]) for i in range(m)]
            out = self.mu(path, args)
            if out is not None:
                yield tup, out
            j = m - 1
            while j >= 0:
                idx[j] += 1
                if idx[j] < len(labels[j]):
                    break
                idx[j] = 0
                j -= 1
            if j < 0:
                return

    def all_paths(self, d):
        def rec(prefix):
            if len(prefix) == d + 1:
                yield tuple(prefix)
                return
            for X in self.objects:
                yield from rec(prefix + [X])
        yield from rec([])


class RelationReport:
    """Outcome of check_relations: empty ``violations`` means pass."""

    def __init__(self):
        self.violations = []     # (d, path, labels, residual Elt)
        self.checked_tuples = 0
        self.structural = []     # orders discharged with no enumeration

    @property
    def ok(self):
        return not self.violations

    def summary(self):
        if self.ok:
            return (f"all relations hold ({self.checked_tuples} tuples, "
                    f"structural orders {self.structural})")
        d, path, labels, res = self.violations[0]
        return (f"{len(self.violations)} violations; first at order {d}, "
                f"path {path}, tuple {labels}, residual degree {res[0]}")


def check_relations(A: AInfCategory, order: int, paths=None) -> RelationReport:
    """Verify the quadratic A-infinity relations up to the given order.

    Enumeration is sparse: only tuples supporting some inner composition are
    visited; orders where every term contains a structurally vanishing mu
    are discharged without enumeration.
    """
    report = RelationReport()
    for d in range(1, order + 1):
        terms = [(m, n) for m in range(1, d + 1) for n in range(0, d - m + 1)
                 if m <= A.max_arity and (d - m + 1) <= A.max_arity]
        if not terms:
            report.structural.append(d)
            continue
        if d == 3 and A.max_arity == 2:
            # dg associativity layer: both terms are mu^2 o mu^2; enumerate
            # composable support pairs via indexes instead of free labels
            for path in paths_of_length(A, d, paths):
                _check_d3_dg(A, path, report)
            continue
        path_list = list(paths_of_length(A, d, paths))
        for path in path_list:
            acc: dict[tuple, list] = {}
            homs = [A.hom(path[i], path[i + 1]) for i in range(d)]
            if any(h.total_dim() == 0 for h in homs):
                continue
            all_labels = [hom_basis_labels(h) for h in homs]
            basis_cache = [
                {lab: basis_elt(homs[s], *lab) for lab in all_labels[s]}
                for s in range(d)
            ]
            for (m, n) in terms:
                inner_path = path[n:n + m + 1]
                for inner_tup, inner_out in A.mu_support(m, inner_path):
                    outer_path = path[:n + 1] + path[n + m:]
                    free_slots = list(range(0, n)) + list(range(n + m, d))
                    for free in _product(all_labels, free_slots):
                        full = {}
                        for s, lab in zip(free_slots, free):
                            full[s] = lab
                        for t, lab in enumerate(inner_tup):
                            full[n + t] = lab
                        labels = tuple(full[s] for s in range(d))
                        outer_args = (
                            [basis_cache[s][labels[s]] for s in range(n)]
                            + [inner_out]
                            + [basis_cache[s][labels[s]]
                               for s in range(n + m, d)]
                        )
                        term = A.mu(outer_path, outer_args)
                        if term is None:
                            continue
                        sign_exp = sum(labels[j][0] - 1 for j in range(n))
                        neg = sign_exp % 2
                        cur = acc.get(labels)
                        if cur is None:
                            acc[labels] = [term[0],
                                           [-x for x in term[1]] if neg
                                           else list(term[1])]
                        else:
                            row = cur[1]
                            if neg:
                                for t, x in enumerate(term[1]):
                                    if x:
                                        row[t] -= x
                            else:
                                for t, x in enumerate(term[1]):
                                    if x:
                                        row[t] += x
            for labels, (deg, row) in acc.items():
                report.checked_tuples += 1
                if any(row):
                    report.violations.append((d, path, labels,
                                              (deg, tuple(row))))
    return report


def _bilinear(table, deg_a, sup_a, deg_b, sup_b):
    """sum ca*cb*table[((deg_a,i),(deg_b,j))] accumulated in a mutable list."""
    acc = None
    deg_out = None
    for i, ca in sup_a:
        ka = (deg_a, i)
        for j, cb in sup_b:
            hit = table.get((ka, (deg_b, j)))
            if hit is None:
                continue
            c = ca * cb
            if acc is None:
                deg_out = hit[0]
                acc = [c * x if x else ZERO for x in hit[1]]
            else:
                for t, x in enumerate(hit[1]):
                    if x:
                        acc[t] += c * x
    if acc is None:
        return None
    return elt(deg_out, acc)


def _check_d3_dg(A, path, report):
    X0, X1, X2, X3 = path
    acc: dict[tuple, list] = {}
    outer_left = A.mu_support(2, (X0, X2, X3))    # mu^2(inner, c)
    idx_first = {}
    for ((la, lb), out) in outer_left:
        idx_first.setdefault(la, []).append((lb, out))
    outer_right = A.mu_support(2, (X0, X1, X3))   # mu^2(a, inner)
    idx_second = {}
    for ((la, lb), out) in outer_right:
        idx_second.setdefault(lb, []).append((la, out))

    def bump(labels, deg, vec, scale):
        cur = acc.get(labels)
        if cur is None:
            acc[labels] = [deg, [scale * x for x in vec]]
        else:
            row = cur[1]
            for t, x in enumerate(vec):
                if x:
                    row[t] += scale * x

    # (m = 2, n = 0): + mu^2(mu^2(a, b), c)
    for ((la, lb), out) in A.mu_support(2, (X0, X1, X2)):
        deg_o = out[0]
        for i_o, coeff in enumerate(out[1]):
            if not coeff:
                continue
            for (lc, out2) in idx_first.get((deg_o, i_o), []):
                bump((la, lb, lc), out2[0], out2[1], coeff)
    # (m = 2, n = 1): (-1)^{|a| - 1} mu^2(a, mu^2(b, c))
    for ((lb, lc), out) in A.mu_support(2, (X1, X2, X3)):
        deg_o = out[0]
        for i_o, coeff in enumerate(out[1]):
            if not coeff:
                continue
            for (la, out2) in idx_second.get((deg_o, i_o), []):
                sgn = -coeff if (la[0] - 1) % 2 else coeff
                bump((la, lb, lc), out2[0], out2[1], sgn)
    for labels, (deg, row) in acc.items():
        report.checked_tuples += 1
        if any(row):
            report.violations.append((3, path, labels, (deg, tuple(row))))


def paths_of_length(A, d, paths):
    if paths is not None:
        for p in paths:
            if len(p) == d + 1:
                yield tuple(p)
        return
    yield from A.all_paths(d)


def _product(all_labels, slots):
    if not slots:
        yield ()
        return
    first, rest = slots[0], slots[1:]
    for lab in all_labels[first]:
        for tail in _product(all_labels, rest):
            yield (lab,) + tail


# ---------------------------------------------------------------------------
# cohomological category


class CohomologyCategory:
    """Graded category with composition induced by mu^2 on cohomology."""

    def __init__(self, A: AInfCategory):
        rep = check_relations(A, min(3, A.d_max))
        if not rep.ok:
            raise ValueError(f"relations fail, refusing: {rep.summary()}")
        self.A = A
        self.objects = list(A.objects)
        self.coho = {(X, Y): A.hom_cohomology(X, Y)
                     for X in A.objects for Y in A.objects}

    def hom_dims(self, X, Y) -> GradedSpace:
        return self.coho[(X, Y)].space

    def compose_classes(self, X, Y, Z, a_cls, b_cls):
        """[b] . [a] for a: X->Y of class (deg p, coords), b: Y->Z.

        Returns (degree, coords) in the chosen basis of H(hom(X, Z)), using
        the sign (-1)^{p(q+1)} that makes the result associative and unital.
        """
        (p, avec) = a_cls
        (q, bvec) = b_cls
        ha, hb = self.coho[(X, Y)], self.coho[(Y, Z)]
        hc = self.coho[(X, Z)]
        arep = _lift(ha, p, avec)
        brep = _lift(hb, q, bvec)
        if arep is None or brep is None:
            return (p + q, tuple([ZERO] * hc.dim(p + q)))
        out = self.A.mu((X, Y, Z), [arep, brep])
        sign = -ONE if (p * (q + 1)) % 2 else ONE
        if out is None:
            return (p + q, tuple([ZERO] * hc.dim(p + q)))
        cls = hc.class_of(out[0], list(out[1]))
        return (out[0], tuple(sign * c for c in cls))

    def composition_table(self, X, Y, Z):
        """All products of basis classes: dict ((p,i),(q,j)) -> (deg, coords)."""
        ha, hb = self.coho[(X, Y)], self.coho[(Y, Z)]
        table = {}
        for p in ha.space.degrees():
            for i in range(ha.dim(p)):
                for q in hb.space.degrees():
                    for j in range(hb.dim(q)):
                        a = (p, tuple(ONE if t == i else ZERO
                                      for t in range(ha.dim(p))))
                        b = (q, tuple(ONE if t == j else ZERO
                                      for t in range(hb.dim(q))))
                        table[((p, i), (q, j))] = \
                            self.compose_classes(X, Y, Z, a, b)
        return table


def _lift(coho: Cohomology, degree: int, coords):
    """Representative cocycle of a class, as an Elt."""
    reps = coho.reps.get(degree, [])
    if not reps:
        return None
    n = coho.complex.dim(degree)
    vec = [ZERO] * n
    for c, r in zip(coords, reps):
        if c:
            vec = [x + c * y for x, y in zip(vec, r)]
    return elt(degree, vec)


def cohomology_category(A: AInfCategory) -> CohomologyCategory:
    return CohomologyCategory(A)


# ---------------------------------------------------------------------------
# cohomological unitality


class UnitWitness:
    def __init__(self, obj, degree, cocycle):
        self.obj = obj
        self.degree = degree
        self.cocycle = cocycle  # Elt in end(obj)

    def __repr__(self):
        return f"UnitWitness({self.obj!r})"


def check_c_unital(A: AInfCategory):
    """Find degree-0 cohomology classes acting as two-sided identities.

    Returns dict obj -> UnitWitness; raises ValueError when some object has
    no unit class (with the failing object in the message).
    """
    H = cohomology_category(A)
    witnesses = {}
    for X in A.objects:
        hx = A.hom_cohomology(X, X)
        n = hx.dim(0)
        end_zero = A.hom(X, X).total_dim() == 0
        if end_zero:
            # vacuous: no morphisms at all; treat as pass with empty witness
            witnesses[X] = UnitWitness(X, 0, None)
            continue
        rows = {}   # constraint key -> coefficient row over unknowns u_0..u_{n-1}
        rhs = {}
        units = [(0, tuple(ONE if t == k else ZERO for t in range(n)))
                 for k in range(n)]

        def add_constraints(side, Y, hco, out_by_k, q, j):
            for t in range(hco.dim(q)):
                key = (side, Y, q, j, t)
                row = [ZERO] * n
                for k in range(n):
                    row[k] = out_by_k[k][1][t]
                rows[key] = row
                rhs[key] = ONE if t == j else ZERO

        for Y in A.objects:
            hxy = A.hom_cohomology(X, Y)
            for q in hxy.space.degrees():
                for j in range(hxy.dim(q)):
                    b = (q, tuple(ONE if t == j else ZERO
                                  for t in range(hxy.dim(q))))
                    outs = [H.compose_classes(X, X, Y, u, b) for u in units]
                    add_constraints("post", Y, hxy, outs, q, j)
            hyx = A.hom_cohomology(Y, X)
            for q in hyx.space.degrees():
                for j in range(hyx.dim(q)):
                    a = (q, tuple(ONE if t == j else ZERO
                                  for t in range(hyx.dim(q))))
                    outs = [H.compose_classes(Y, X, X, a, u) for u in units]
                    add_constraints("pre", Y, hyx, outs, q, j)
        keys = sorted(rows)
        m = QMatrix(len(keys), n,
                    storage="sparse" if max(len(keys), n) > 64 else "dense")
        for r, key in enumerate(keys):
            for k, v in enumerate(rows[key]):
                if v:
                    m[r, k] = v
        sol = m.solve([rhs[key] for key in keys])
        if sol is None:
            raise ValueError(f"no cohomological unit for object {X!r}")
        witnesses[X] = UnitWitness(X, 0, _lift(hx, 0, sol))
    return witnesses


# ---------------------------------------------------------------------------
# functors


class AInfFunctor:
    """A-infinity functor with object map and multilinear components.

    comp_fn(path, args) -> Elt in hom_B(F X_0, F X_d), degree sum|a| + 1 - d.
    """

    def __init__(self, source: AInfCategory, target: AInfCategory,
                 object_map, comp_fn, max_arity=None, name=""):
        self.source = source
        self.target = target
        self.object_map = object_map
        self._comp_fn = comp_fn
        self.max_arity = max_arity if max_arity is not None else source.d_max
        self.name = name

    def on_object(self, X):
        return self.object_map(X)

    def comp(self, path, args) -> Elt | None:
        if len(args) > self.max_arity or any(a is None for a in args):
            return None
        return self._comp_fn(tuple(path), list(args))


def check_functor(F: AInfFunctor, order: int, paths=None) -> RelationReport:
    """Verify the A-infinity functor equations up to the given order."""
    A, B = F.source, F.target
    report = RelationReport()
    for d in range(1, order + 1):
        for path in paths_of_length(A, d, paths):
            homs = [A.hom(path[i], path[i + 1]) for i in range(d)]
            if any(h.total_dim() == 0 for h in homs):
                continue
            labels_all = [hom_basis_labels(h) for h in homs]
            for labels in _product(labels_all, list(range(d))):
                args = [basis_elt(homs[s], *labels[s]) for s in range(d)]
                lhs = None
                # sum over decompositions d = s_1 + ... + s_r
                for splits in _compositions(d):
                    if len(splits) > B.max_arity:
                        continue
                    pieces = []
                    off = 0
                    ok = True
                    for s in splits:
                        sub = F.comp(path[off:off + s + 1],
                                     args[off:off + s])
                        if sub is None:
                            ok = False
                            break
                        pieces.append(sub)
                        off += s
                    if not ok:
                        continue
                    fpath = tuple(F.on_object(path[i])
                                  for i in _split_points(splits))
                    term = B.mu(fpath, pieces)
                    lhs = elt_add(lhs, term)
                rhs = None
                for m in range(1, min(d, A.max_arity) + 1):
                    for nn in range(0, d - m + 1):
                        if (d - m + 1) > F.max_arity:
                            continue
                        inner = A.mu(path[nn:nn + m + 1], args[nn:nn + m])
                        if inner is None:
                            continue
                        outer_args = args[:nn] + [inner] + args[nn + m:]
                        outer_path = path[:nn + 1] + path[nn + m:]
                        term = F.comp(outer_path, outer_args)
                        if term is None:
                            continue
                        sign_exp = sum(labels[j][0] - 1 for j in range(nn))
                        if sign_exp % 2:
                            term = elt_scale(-1, term)
                        rhs = elt_add(rhs, term)
                diff = elt_add(lhs, elt_scale(-1, rhs))
                report.checked_tuples += 1
                if diff is not None:
                    report.violations.append((d, path, labels, diff))
    return report


def _compositions(d):
    """All ordered tuples of positive ints summing to d."""
    if d == 0:
        yield ()
        return
    for first in range(1, d + 1):
        for rest in _compositions(d - first):
            yield (first,) + rest


def _split_points(splits):
    pts = [0]
    for s in splits:
        pts.append(pts[-1] + s)
    return pts


# ---------------------------------------------------------------------------
# dg categories as A-infinity categories


def dg_category(objects, hom_fn, compose_fn=None, d_max=6, name="",
                compose_table_fn=None) -> AInfCategory:
    """Wrap honest dg data (hom complexes + strictly associative composition)
    as an A-infinity category.

    Provide either ``compose_fn(path, a, b) -> Elt`` returning b o a on
    homogeneous elements, or ``compose_table_fn(path) -> dict`` mapping
    basis label pairs (la, lb) to the raw composition Elt.  No Koszul sign
    in either; the wrapper applies mu^2(a, b) = (-1)^{|a|(|b|+1)} b o a.
    """
    if compose_fn is None and compose_table_fn is None:
        raise ValueError("need compose_fn or compose_table_fn")

    hom_cache: dict = {}
    tables: dict = {}

    def hom(X, Y):
        key = (X, Y)
        if key not in hom_cache:
            hom_cache[key] = hom_fn(X, Y)
        return hom_cache[key]

    def table(path):
        if path not in tables:
            if compose_table_fn is not None:
                tables[path] = compose_table_fn(path)
            else:
                CA = hom(path[0], path[1])
                CB = hom(path[1], path[2])
                t = {}
                for la in hom_basis_labels(CA):
                    ea = basis_elt(CA, *la)
                    for lb in hom_basis_labels(CB):
                        out = compose_fn(path, ea, basis_elt(CB, *lb))
                        if out is not None:
                            t[(la, lb)] = out
                tables[path] = t
        return tables[path]

    def mu_fn(path, args):
        d = len(args)
        if d == 1:
            (deg, vec) = args[0]
            C = hom(path[0], path[1])
            return elt(deg + 1, C.d(deg).apply(list(vec)))
        if d == 2:
            a, b = args
            t = table(tuple(path))
            sup_a = [(i, ca) for i, ca in enumerate(a[1]) if ca]
            sup_b = [(j, cb) for j, cb in enumerate(b[1]) if cb]
            out = _bilinear(t, a[0], sup_a, b[0], sup_b)
            if out is None:
                return None
            sign = -ONE if (a[0] * (b[0] + 1)) % 2 else ONE
            return elt_scale(sign, out)
        return None

    def support(m, path):
        if m == 1:
            C = hom(path[0], path[1])
            for (k, i) in hom_basis_labels(C):
                out = elt(k + 1, C.d(k).col(i))
                if out is not None:
                    yield ((k, i),), out
            return
        if m == 2:
            for (la, lb), comp in table(tuple(path)).items():
                sign = -ONE if (la[0] * (lb[0] + 1)) % 2 else ONE
                out = elt_scale(sign, comp)
                if out is not None:
                    yield (la, lb), out
            return
        return

    return AInfCategory(objects, hom, mu_fn, max_arity=2, d_max=d_max,
                        mu_support_fn=support, name=name)


def complexes_dg_category(objs: dict, d_max=6, name="Ch") -> AInfCategory:
    """The dg category of the given cochain complexes.

    objs: mapping name -> CochainComplex.  Homs are hom complexes, the
    composition is honest composition of graded maps, computed on basis
    matrix units: (a, j, i) o ... composes when sources/targets line up.
    """
    from .chaincore import hom_basis, hom_cx

    def hom(X, Y):
        return hom_cx(objs[X], objs[Y])

    def compose_table(path):
        X, Y, Z = path
        basA = hom_basis(objs[X], objs[Y])   # degree -> [(a, j, i)]
        basB = hom_basis(objs[Y], objs[Z])
        basC = hom_basis(objs[X], objs[Z])
        posC = {k: {t: n for n, t in enumerate(v)} for k, v in basC.items()}
        table = {}
        for p, lstA in basA.items():
            for ia, (a, j, i) in enumerate(lstA):
                for q, lstB in basB.items():
                    target = posC.get(p + q)
                    if target is None:
                        continue
                    for ib, (b, l, mm) in enumerate(lstB):
                        if b != a + p or mm != j:
                            continue
                        vec = [ZERO] * len(basC[p + q])
                        vec[target[(a, l, i)]] = ONE
                        table[((p, ia), (q, ib))] = (p + q, tuple(vec))
        return table

    return dg_category(list(objs), hom, compose_table_fn=compose_table,
                       d_max=d_max, name=name)


def algebra_dg_category(basis_by_degree: dict[int, list[str]],
                        diff: dict[str, dict[str, Fraction]],
                        mult: dict[tuple[str, str], dict[str, Fraction]],
                        d_max=6, name="A") -> AInfCategory:
    """One-object dg category from a dg algebra given on a named basis.

    diff[x] = dict of coefficients of d(x); mult[(x, y)] = coefficients of
    the product x * y (in the algebra order: x then y along the arrow).
    """
    labels = []
    degree_of = {}
    for k in sorted(basis_by_degree):
        for x in basis_by_degree[k]:
            degree_of[x] = k
            labels.append(x)
    by_deg: dict[int, list[str]] = {}
    for x in labels:
        by_deg.setdefault(degree_of[x], []).append(x)
    index = {x: by_deg[degree_of[x]].index(x) for x in labels}
    dims = {k: len(v) for k, v in by_deg.items()}
    dmat = {}
    for k in dims:
        if not dims.get(k + 1):
            continue
        m = QMatrix.zero(dims[k + 1], dims[k])
        for x in by_deg[k]:
            for y, c in diff.get(x, {}).items():
                m[index[y], index[x]] = m[index[y], index[x]] + as_q(c)
        dmat[k] = m
    C = CochainComplex(GradedSpace(dims), dmat)

    def hom(X, Y):
        return C

    def compose(path, a, b):
        # composite "b after a" = algebra product b * a
        p, avec = a
        q, bvec = b
        out = {}
        for i, ca in enumerate(avec):
            if not ca:
                continue
            x = by_deg[p][i]
            for j, cb in enumerate(bvec):
                if not cb:
                    continue
                y = by_deg[q][j]
                for z, cz in mult.get((y, x), {}).items():
                    out[z] = out.get(z, ZERO) + ca * cb * as_q(cz)
        vec = [ZERO] * dims.get(p + q, 0)
        for z, c in out.items():
            if degree_of[z] != p + q:
                raise ValueError("multiplication not graded")
            vec[index[z]] = c
        return elt(p + q, vec)

    return dg_category(["*"], hom, compose, d_max=d_max, name=name)
