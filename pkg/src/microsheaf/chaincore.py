"""Bounded cochain complexes over Q with degree +1 differentials.

Conventions fixed here and inherited everywhere:

* differentials raise degree by one, d_{k}: C^k -> C^{k+1}, and compose to
  zero exactly;
* shift C[n]^k = C^{n+k} with differential (-1)^n d;
* cone(f)^k = A^{k+1} (+) B^k with d(a, b) = (-d a, f a + d b);
* Koszul signs: d(x (x) y) = dx (x) y + (-1)^{|x|} x (x) dy, and on hom
  complexes d(f) = d f - (-1)^{|f|} f d.

``homology_retract`` produces a strong deformation retract of a complex
onto its cohomology (with the side conditions T i = 0, p T = 0, T T = 0),
which is the workhorse for unit searches and perturbation-transfer tests.
"""

from __future__ import annotations

from fractions import Fraction

from .rational import IncrementalBasis, ONE, ZERO, QMatrix, as_q, unit_vec, \
    zero_vec


class GradedSpace:
    """Finitely supported map degree -> dimension."""

    __slots__ = ("dims",)

    def __init__(self, dims: dict[int, int] | None = None):
        self.dims = {}
        if dims:
            for k, d in dims.items():
                if d < 0:
                    raise ValueError("negative dimension")
                if d:
                    self.dims[int(k)] = int(d)

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    def degrees(self) -> list[int]:
        return sorted(self.dims)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def euler(self) -> int:
        return sum((-1) ** k * d for k, d in self.dims.items())

    def shift(self, n: int) -> "GradedSpace":
        return GradedSpace({k - n: d for k, d in self.dims.items()})

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self.dims == other.dims

    def __repr__(self):
        return f"GradedSpace({self.dims})"


class CochainComplex:
    """Graded space plus per-degree differential matrices.

    ``diff[k]`` maps C^k to C^{k+1}; shape (dim C^{k+1}, dim C^k).  Missing
    degrees are zero.  d о d = 0 is checked at construction.
    """

    __slots__ = ("space", "diff")

    def __init__(self, space: GradedSpace, diff: dict[int, QMatrix] | None = None,
                 check: bool = True):
        self.space = space
        self.diff = {}
        diff = diff or {}
        for k, m in diff.items():
            want = (space.dim(k + 1), space.dim(k))
            if (m.nrows, m.ncols) != want:
                raise ValueError(
                    f"differential at degree {k} has shape {m.nrows}x{m.ncols}, "
                    f"expected {want[0]}x{want[1]}"
                )
            if not m.is_zero():
                self.diff[k] = m
        if check:
            self._check_dsq()

    def _check_dsq(self):
        for k in list(self.diff):
            nxt = self.d(k + 1)
            comp = nxt * self.diff[k]
            if not comp.is_zero():
                raise ValueError(f"d o d != 0 between degrees {k} and {k + 2}")

    def dim(self, k: int) -> int:
        return self.space.dim(k)

    def degrees(self) -> list[int]:
        return self.space.degrees()

    def d(self, k: int) -> QMatrix:
        m = self.diff.get(k)
        if m is None:
            m = QMatrix.zero(self.dim(k + 1), self.dim(k))
        return m

    def euler(self) -> int:
        return self.space.euler()

    def total_dim(self) -> int:
        return self.space.total_dim()

    def is_zero(self) -> bool:
        return self.total_dim() == 0

    def shift(self, n: int) -> "CochainComplex":
        """C[n]^k = C^{k+n}, d[n] = (-1)^n d."""
        sp = self.space.shift(n)
        sgn = -ONE if n % 2 else ONE
        diff = {k - n: m.scale(sgn) for k, m in self.diff.items()}
        return CochainComplex(sp, diff, check=False)

    def direct_sum(self, other: "CochainComplex") -> tuple["CochainComplex", "ChainMap", "ChainMap"]:
        """Returns (sum, include_self, include_other)."""
        dims = {}
        for k in set(self.space.dims) | set(other.space.dims):
            dims[k] = self.dim(k) + other.dim(k)
        sp = GradedSpace(dims)
        diff = {}
        for k in dims:
            if self.dim(k) + other.dim(k) and (self.dim(k + 1) + other.dim(k + 1)):
                diff[k] = QMatrix.block(
                    [[self.d(k), None], [None, other.d(k)]],
                    [self.dim(k + 1), other.dim(k + 1)],
                    [self.dim(k), other.dim(k)],
                )
        total = CochainComplex(sp, diff, check=False)
        inc1 = {}
        inc2 = {}
        for k in dims:
            m1 = QMatrix.zero(dims[k], self.dim(k))
            for i in range(self.dim(k)):
                m1[i, i] = ONE
            m2 = QMatrix.zero(dims[k], other.dim(k))
            for i in range(other.dim(k)):
                m2[self.dim(k) + i, i] = ONE
            inc1[k] = m1
            inc2[k] = m2
        return total, ChainMap(self, total, inc1), ChainMap(other, total, inc2)

    def __repr__(self):
        return f"CochainComplex(dims={self.space.dims})"


def zero_complex() -> CochainComplex:
    return CochainComplex(GradedSpace({}))


def single(degree: int, dim: int = 1) -> CochainComplex:
    """Q^dim concentrated in one degree."""
    return CochainComplex(GradedSpace({degree: dim}))


class GradedMap:
    """Degree-r collection of matrices f[k]: C^k -> D^{k+r}."""

    __slots__ = ("source", "target", "degree", "mats")

    def __init__(self, source: CochainComplex, target: CochainComplex,
                 mats: dict[int, QMatrix] | None = None, degree: int = 0):
        self.source = source
        self.target = target
        self.degree = degree
        self.mats = {}
        for k, m in (mats or {}).items():
            want = (target.dim(k + degree), source.dim(k))
            if (m.nrows, m.ncols) != want:
                raise ValueError(
                    f"component at degree {k} has shape {m.nrows}x{m.ncols}, expected {want}"
                )
            if not m.is_zero():
                self.mats[k] = m

    def mat(self, k: int) -> QMatrix:
        m = self.mats.get(k)
        if m is None:
            m = QMatrix.zero(self.target.dim(k + self.degree), self.source.dim(k))
        return m

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats.values())

    def __add__(self, other):
        assert self.degree == other.degree
        out = {}
        for k in set(self.mats) | set(other.mats):
            out[k] = self.mat(k) + other.mat(k)
        return GradedMap(self.source, self.target, out, self.degree)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = as_q(c)
        return GradedMap(self.source, self.target,
                         {k: m.scale(c) for k, m in self.mats.items()}, self.degree)

    def compose(self, first: "GradedMap") -> "GradedMap":
        """self о first (apply ``first``, then ``self``)."""
        if first.target is not self.source and \
                first.target.space.dims != self.source.space.dims:
            raise ValueError("composition mismatch")
        out = {}
        for k in first.source.space.dims:
            m = self.mat(k + first.degree) * first.mat(k)
            if not m.is_zero():
                out[k] = m
        return GradedMap(first.source, self.target, out, self.degree + first.degree)


class ChainMap(GradedMap):
    """Degree-0 graded map commuting with differentials."""

    def __init__(self, source, target, mats=None, check=True):
        super().__init__(source, target, mats, degree=0)
        if check:
            self._check_chain()

    def _check_chain(self):
        for k in set(self.source.space.dims) | set(self.mats):
            lhs = self.target.d(k) * self.mat(k)
            rhs = self.mat(k + 1) * self.source.d(k)
            if lhs != rhs:
                raise ValueError(f"not a chain map at degree {k}")


class Homotopy(GradedMap):
    """Degree -1 graded map."""

    def __init__(self, source, target, mats=None):
        super().__init__(source, target, mats, degree=-1)


def identity_map(C: CochainComplex) -> ChainMap:
    return ChainMap(C, C, {k: QMatrix.identity(C.dim(k)) for k in C.space.dims},
                    check=False)


def zero_map(C: CochainComplex, D: CochainComplex) -> ChainMap:
    return ChainMap(C, D, {}, check=False)


# ---------------------------------------------------------------------------
# cohomology and the canonical retract


class Cohomology:
    """Cohomology of a complex with chosen cocycle representatives.

    Attributes:
        space: GradedSpace of Betti numbers.
        reps[k]: list of representative cocycles (vectors in C^k).
        project[k]: matrix H^k <- C^k; kills coboundaries and the chosen
            complement of the cocycles, restricts to the inverse of the
            representative inclusion on cocycles.
    """

    def __init__(self, complex_: CochainComplex):
        self.complex = complex_
        reps: dict[int, list[list[Fraction]]] = {}
        project: dict[int, QMatrix] = {}
        homotopy: dict[int, QMatrix] = {}
        degs = complex_.degrees()
        # adapted basis per degree: C^k = A (+) B (+) H where
        #   B = boundaries, H a complement of B in the cocycles Z,
        #   A a complement of Z mapping isomorphically onto B^{k+1}.
        a_cols: dict[int, list[int]] = {}
        for k in degs:
            n = complex_.dim(k)
            dk = complex_.d(k)
            z_basis = dk.kernel_basis()
            # boundaries: independent columns of d_{k-1}
            dprev = complex_.d(k - 1)
            b_cols = []
            if complex_.dim(k - 1):
                piv = dprev.column_space_pivots()
                b_cols = [dprev.col(j) for j in piv]
            # extend b_cols to a basis of Z by greedy selection from z_basis
            inc = IncrementalBasis(n)
            for v in b_cols:
                inc.try_add(v)
            h_cols = [v for v in z_basis if inc.try_add(v)]
            # A-part: columns of C^k mapping to independent columns of d_k
            a_idx = dk.column_space_pivots()
            a_cols[k] = a_idx
            a_vecs = [unit_vec(n, j) for j in a_idx]
            # change of basis [A | B | H]
            basis_cols = a_vecs + b_cols + h_cols
            if len(basis_cols) != n:
                raise AssertionError("adapted basis construction failed")
            if n:
                cob = QMatrix.from_columns(basis_cols, nrows=n)
                inv = cob.solve_matrix(QMatrix.identity(n))
                if inv is None:
                    raise AssertionError("adapted basis not invertible")
            else:
                inv = QMatrix.zero(0, 0)
            nh = len(h_cols)
            proj = QMatrix.zero(nh, n)
            for r in range(nh):
                for c in range(n):
                    v = inv[len(a_idx) + len(b_cols) + r, c]
                    if v:
                        proj[r, c] = v
            reps[k] = h_cols
            project[k] = proj
        self.space = GradedSpace({k: len(reps.get(k, [])) for k in degs})
        self.reps = reps
        self.project = project
        self._a_cols = a_cols

    def rep_matrix(self, k: int) -> QMatrix:
        """Columns are the representative cocycles in C^k."""
        r = self.reps.get(k, [])
        return QMatrix.from_columns(r, nrows=self.complex.dim(k)) if r else \
            QMatrix.zero(self.complex.dim(k), 0)

    def dim(self, k: int) -> int:
        return self.space.dim(k)

    def class_of(self, k: int, vec) -> list[Fraction]:
        """Coordinates of a cocycle in the chosen H^k basis."""
        dk = self.complex.d(k)
        if not all(not x for x in dk.apply(vec)):
            raise ValueError("not a cocycle")
        return self.project[k].apply(vec)


def cohomology(C: CochainComplex) -> Cohomology:
    return Cohomology(C)


def betti_numbers(C: CochainComplex) -> dict[int, int]:
    """Cohomology dimensions only, by sparse rank computations."""
    from .rational import sparse_rank

    ranks = {k: sparse_rank(m) for k, m in C.diff.items()}
    out = {}
    for k in C.degrees():
        b = C.dim(k) - ranks.get(k, 0) - ranks.get(k - 1, 0)
        if b:
            out[k] = b
    return out


class Retract:
    """Strong deformation retract of C onto its cohomology.

    h: the cohomology complex (zero differential);
    i: ChainMap h -> C (representatives);
    p: ChainMap C -> h (projection);
    t: Homotopy C -> C with  i p - id = d t + t d,  p i = id,
       and side conditions t i = 0, p t = 0, t t = 0.
    """

    def __init__(self, C: CochainComplex):
        coho = Cohomology(C)
        H = CochainComplex(coho.space)
        i_mats = {k: coho.rep_matrix(k) for k in C.degrees() if coho.dim(k)}
        p_mats = {k: coho.project[k] for k in C.degrees() if coho.dim(k)}
        # homotopy: on C^{k+1}, boundary part b = d(a) with unique a in A-span;
        # t(b) = a; t kills the rest of the adapted basis.
        t_mats: dict[int, QMatrix] = {}
        for k in C.degrees():
            if C.dim(k + 1) == 0 or C.dim(k) == 0:
                continue
            dk = C.d(k)
            a_idx = dk.column_space_pivots()
            if not a_idx:
                continue
            b_cols = [dk.col(j) for j in a_idx]
            # t on C^{k+1}: B-part coordinates in basis b_cols map back to
            # the distinguished preimage units e_a; A', H parts are killed.
            t_mats[k + 1] = _homotopy_component(C, k, a_idx, b_cols)
        self.complex = C
        self.h = H
        self.i = ChainMap(H, C, i_mats, check=False)
        self.p = ChainMap(C, H, p_mats, check=False)
        self.t = Homotopy(C, C, t_mats)


def _homotopy_component(C: CochainComplex, k: int, a_idx: list[int],
                        b_cols: list[list[Fraction]]) -> QMatrix:
    """t: C^{k+1} -> C^k sending d(e_a) -> e_a, killing A', H parts."""
    n1 = C.dim(k + 1)
    n0 = C.dim(k)
    # adapted basis at degree k+1: [A1 | B | H1] where B = b_cols,
    # A1 = preferred preimage columns of d_{k+1}, H1 = cocycle complement.
    dk1 = C.d(k + 1)
    a1_idx = dk1.column_space_pivots()
    a1_vecs = [unit_vec(n1, j) for j in a1_idx]
    z_basis = dk1.kernel_basis()
    inc = IncrementalBasis(n1)
    for v in b_cols:
        inc.try_add(v)
    h_cols = [v for v in z_basis if inc.try_add(v)]
    basis = a1_vecs + b_cols + h_cols
    if len(basis) != n1:
        raise AssertionError("homotopy basis construction failed")
    cob = QMatrix.from_columns(basis, nrows=n1)
    inv = cob.solve_matrix(QMatrix.identity(n1))
    # d t + t d = proj_A + proj_B = id - i p, so negate to satisfy
    # i p - id = d t + t d.
    t = QMatrix.zero(n0, n1)
    for r, a in enumerate(a_idx):
        for c in range(n1):
            v = inv[len(a1_vecs) + r, c]
            if v:
                t[a, c] = t[a, c] - v
    return t


def homology_retract(C: CochainComplex) -> Retract:
    return Retract(C)


# ---------------------------------------------------------------------------
# cone, tensor, hom


class Cone:
    """cone(f)^k = A^{k+1} (+) B^k for f: A -> B, with structure maps.

    Triangle: A --f--> B --into--> cone(f) --onto--> A[1].
    """

    def __init__(self, f: ChainMap):
        A, B = f.source, f.target
        dims = {}
        degs = set(A.space.shift(1).dims) | set(B.space.dims)
        for k in degs:
            dims[k] = A.dim(k + 1) + B.dim(k)
        sp = GradedSpace(dims)
        diff = {}
        for k in dims:
            rows = [A.dim(k + 2), B.dim(k + 1)]
            cols = [A.dim(k + 1), B.dim(k)]
            if sum(rows) and sum(cols):
                diff[k] = QMatrix.block(
                    [[A.d(k + 1).scale(-1), None], [f.mat(k + 1), B.d(k)]],
                    rows, cols,
                )
        self.complex = CochainComplex(sp, diff)
        self.f = f
        into = {k: QMatrix.block([[QMatrix.zero(A.dim(k + 1), B.dim(k))],
                                  [QMatrix.identity(B.dim(k))]],
                                 [A.dim(k + 1), B.dim(k)], [B.dim(k)])
                for k in dims if B.dim(k)}
        self.include = ChainMap(B, self.complex, into, check=False)
        shiftA = A.shift(1)
        onto = {k: QMatrix.block([[QMatrix.identity(A.dim(k + 1)),
                                   QMatrix.zero(A.dim(k + 1), B.dim(k))]],
                                 [A.dim(k + 1)], [A.dim(k + 1), B.dim(k)])
                for k in dims if A.dim(k + 1)}
        self.onto_shift = ChainMap(self.complex, shiftA, onto, check=False)


def cone(f: ChainMap) -> Cone:
    return Cone(f)


def _pair_index(C1: CochainComplex, C2: CochainComplex):
    """Basis of the tensor product by total degree: (k, [(i, a, b)...])."""
    idx: dict[int, list[tuple[int, int, int]]] = {}
    for a in C1.degrees():
        for b in C2.degrees():
            k = a + b
            lst = idx.setdefault(k, [])
            for i in range(C1.dim(a)):
                for j in range(C2.dim(b)):
                    lst.append((a, i, j))
    return idx


def tensor(C1: CochainComplex, C2: CochainComplex) -> CochainComplex:
    """Total complex with d(x (x) y) = dx (x) y + (-1)^{|x|} x (x) dy."""
    idx = _pair_index(C1, C2)
    dims = {k: len(v) for k, v in idx.items()}
    sp = GradedSpace(dims)
    pos: dict[int, dict[tuple[int, int, int], int]] = {
        k: {t: n for n, t in enumerate(v)} for k, v in idx.items()
    }
    diff = {}
    for k, basis in idx.items():
        if not dims.get(k) or not dims.get(k + 1):
            continue
        m = QMatrix.zero(dims[k + 1], dims[k])
        tgt = pos[k + 1]
        for col, (a, i, j) in enumerate(basis):
            b = k - a
            d1 = C1.d(a)
            for (r, c), v in d1.items():
                if c == i:
                    m[tgt[(a + 1, r, j)], col] = m[tgt[(a + 1, r, j)], col] + v
            sgn = -ONE if a % 2 else ONE
            d2 = C2.d(b)
            for (r, c), v in d2.items():
                if c == j:
                    m[tgt[(a, i, r)], col] = m[tgt[(a, i, r)], col] + sgn * v
        diff[k] = m
    return CochainComplex(sp, diff)


def tensor_basis(C1: CochainComplex, C2: CochainComplex):
    return _pair_index(C1, C2)


def hom_cx(C1: CochainComplex, C2: CochainComplex) -> CochainComplex:
    """hom^k = (+)_a Hom(C1^a, C2^{a+k}), d(f) = d f - (-1)^{|f|} f d."""
    idx: dict[int, list[tuple[int, int, int]]] = {}
    for a in C1.degrees():
        for b in C2.degrees():
            k = b - a
            lst = idx.setdefault(k, [])
            for j in range(C2.dim(b)):
                for i in range(C1.dim(a)):
                    lst.append((a, j, i))  # component f: e_i (deg a) -> e_j (deg a+k)
    dims = {k: len(v) for k, v in idx.items()}
    sp = GradedSpace(dims)
    pos = {k: {t: n for n, t in enumerate(v)} for k, v in idx.items()}
    diff = {}
    for k, basis in idx.items():
        if not dims.get(k) or not dims.get(k + 1):
            continue
        m = QMatrix.zero(dims[k + 1], dims[k])
        tgt = pos[k + 1]
        sgn = -ONE if k % 2 else ONE
        for col, (a, j, i) in enumerate(basis):
            # post-compose with d_{C2}
            d2 = C2.d(a + k)
            for (r, c), v in d2.items():
                if c == j:
                    m[tgt[(a, r, i)], col] = m[tgt[(a, r, i)], col] + v
            # pre-compose with d_{C1} at degree a-1: f o d lands as component
            # (a-1, j, i') for d e_{i'} having coefficient at i
            d1 = C1.d(a - 1)
            for (r, c), v in d1.items():
                if r == i:
                    key = (a - 1, j, c)
                    m[tgt[key], col] = m[tgt[key], col] - sgn * v
        diff[k] = m
    return CochainComplex(sp, diff)


def hom_basis(C1: CochainComplex, C2: CochainComplex):
    idx: dict[int, list[tuple[int, int, int]]] = {}
    for a in C1.degrees():
        for b in C2.degrees():
            k = b - a
            lst = idx.setdefault(k, [])
            for j in range(C2.dim(b)):
                for i in range(C1.dim(a)):
                    lst.append((a, j, i))
    return idx


def hom_element_to_map(C1, C2, k, vec) -> GradedMap:
    """Interpret a hom-complex vector as a degree-k graded map."""
    idx = hom_basis(C1, C2)[k]
    mats: dict[int, QMatrix] = {}
    for coeff, (a, j, i) in zip(vec, idx):
        if not coeff:
            continue
        m = mats.get(a)
        if m is None:
            m = QMatrix.zero(C2.dim(a + k), C1.dim(a))
            mats[a] = m
        m[j, i] = m[j, i] + coeff
    return GradedMap(C1, C2, mats, degree=k)


def map_to_hom_element(f: GradedMap) -> list[Fraction]:
    idx = hom_basis(f.source, f.target).get(f.degree, [])
    return [f.mat(a)[j, i] for (a, j, i) in idx]


# ---------------------------------------------------------------------------
# induced maps and exactness checks


def induced_map(f: ChainMap, src_coho: Cohomology | None = None,
                tgt_coho: Cohomology | None = None) -> dict[int, QMatrix]:
    """H^k(f): matrices in the chosen representative bases."""
    src = src_coho or Cohomology(f.source)
    tgt = tgt_coho or Cohomology(f.target)
    out = {}
    for k in set(src.space.dims) | set(tgt.space.dims):
        m = QMatrix.zero(tgt.dim(k), src.dim(k))
        for c, rep in enumerate(src.reps.get(k, [])):
            img = f.mat(k).apply(rep)
            cls = tgt.project[k].apply(img) if tgt.complex.dim(k) else []
            for r, v in enumerate(cls):
                if v:
                    m[r, c] = v
        out[k] = m
    return out


def sequence_exact_ranks(maps: list[QMatrix]) -> bool:
    """Exactness at inner nodes of  V0 -> V1 -> ... -> Vn (matrix list)."""
    for u, v in zip(maps, maps[1:]):
        if not (v * u).is_zero():
            return False
        if u.rank() + v.rank() != u.nrows:
            return False
    return True


def cone_les_exact(f: ChainMap) -> bool:
    """Check the cohomology long exact sequence of the cone triangle."""
    cn = cone(f)
    HA = Cohomology(f.source)
    HB = Cohomology(f.target)
    HC = Cohomology(cn.complex)
    lo = min(f.source.degrees() + f.target.degrees() + [0]) - 1
    hi = max(f.source.degrees() + f.target.degrees() + [0]) + 1
    Hf = induced_map(f, HA, HB)
    Hinc = induced_map(cn.include, HB, HC)
    # connecting map H^k(cone) -> H^{k+1}(A): project a cone cocycle to its
    # A[1] component.
    mats = []
    labels = []
    for k in range(lo, hi + 1):
        mats.append(Hf.get(k, QMatrix.zero(HB.dim(k), HA.dim(k))))
        mats.append(Hinc.get(k, QMatrix.zero(HC.dim(k), HB.dim(k))))
        conn = QMatrix.zero(HA.dim(k + 1), HC.dim(k))
        for c, rep in enumerate(HC.reps.get(k, [])):
            # A[1]-component of the representative, then class in H^{k+1}(A)
            nA = f.source.dim(k + 1)
            avec = rep[:nA]
            if f.source.dim(k + 1):
                cls = HA.project[k + 1].apply(avec)
                for r, v in enumerate(cls):
                    if v:
                        conn[r, c] = v
        mats.append(conn)
    return sequence_exact_ranks(mats)
