import random
from fractions import Fraction

import pytest

from microsheaf.chaincore import Cohomology, CochainComplex, GradedSpace, single
from microsheaf.rational import ONE, QMatrix
from microsheaf.resolution import godement_resolution, minimize, resolve
from microsheaf.sheaves import (
    CellularSheaf,
    LocalSystem,
    SheafMap,
    constant_sheaf,
    costandard,
    recollement_triangle,
    sheaf_cone,
    skyscraper,
    standard,
    star_standard,
    tensor_sheaf,
    truncation_triangle,
)
from microsheaf.simplicial import (
    CellUnion,
    SimplicialComplex,
    open_union,
    star_union,
    whole_space,
)

from test_simplicial import circle, sphere


def arc_union(K):
    """circle minus the vertex 0 (open)."""
    return open_union(K, [s for s in K.simplices if s != (0,)])


def test_constant_and_skyscraper_validate():
    K = circle(3)
    constant_sheaf(K).validate()
    skyscraper(K, (0,)).validate()
    star_standard(K, (0,)).validate()


def test_standard_whole_space_stalks():
    K = circle(3)
    F = standard(whole_space(K))
    F.validate()
    for s in K.simplices:
        h = Cohomology(F.value(s))
        assert h.space.dims == {0: 1}, s  # stars are contractible


def test_standard_arc_stalks():
    K = circle(3)
    U = arc_union(K)
    F = standard(U)
    F.validate()
    # puncture vertex: sections over st(0) minus 0 = two disjoint edges
    h0 = Cohomology(F.value((0,)))
    assert h0.space.dims == {0: 2}
    for s in U.cells:
        assert Cohomology(F.value(s)).space.dims == {0: 1}


def test_standard_stalk_matches_system():
    K = circle(3)
    U = star_union(K, (1,))
    F = standard(U)
    F.validate()
    for s in U.cells:
        assert Cohomology(F.value(s)).space.dims == {0: 1}


def test_star_standard_equivalent_to_standard():
    K = circle(3)
    for v in [(0,), (0, 1)]:
        S_small = star_standard(K, v)
        S_big = standard(star_union(K, v))
        # strict constants-inclusion small -> big, stalkwise qis
        comp = {}
        for s in K.simplices:
            if S_small.value(s).total_dim():
                m = QMatrix.zero(S_big.value(s).dim(0), 1)
                for i in range(m.nrows):
                    m[i, 0] = ONE
                comp[s] = {0: m}
        phi = SheafMap(S_small, S_big, comp)
        assert phi.is_stalkwise_qis()


def test_costandard_arc_euler():
    K = circle(3)
    U = arc_union(K)
    G = costandard(U)
    G.validate()
    total = sum((-1) ** (len(s) - 1) * G.value(s).euler()
                for s in K.simplices)
    assert total == -1  # 2 vertices - 3 edges


def test_costandard_whole_space_equals_standard_stalks():
    K = circle(3)
    G = costandard(whole_space(K))
    F = standard(whole_space(K))
    for s in K.simplices:
        assert Cohomology(G.value(s)).space.euler() == \
            Cohomology(F.value(s)).space.euler()


def test_tensor_sheaf_stalkwise():
    K = circle(3)
    F = standard(arc_union(K))
    G = constant_sheaf(K)
    T = tensor_sheaf(F, G)
    T.validate()
    for s in K.simplices:
        assert T.value(s).euler() == F.value(s).euler() * G.value(s).euler()


def test_recollement_split_exact():
    K = circle(3)
    F = constant_sheaf(K)
    U = arc_union(K)
    lower, alpha, upper, beta = recollement_triangle(F, U)
    lower.validate()
    upper.validate()
    alpha.validate()
    beta.validate()
    for s in K.simplices:
        for k in F.value(s).space.dims:
            assert lower.value(s).dim(k) + upper.value(s).dim(k) == \
                F.value(s).dim(k)
    # U = X: third term zero
    lo2, _, up2, _ = recollement_triangle(F, whole_space(K))
    assert all(up2.value(s).total_dim() == 0 for s in K.simplices)
    # U empty: first term zero
    lo3, _, up3, _ = recollement_triangle(
        F, CellUnion(K, [], "open"))
    assert all(lo3.value(s).total_dim() == 0 for s in K.simplices)


def two_term_sheaf(K):
    """Constant two-term complex Q ->(id) Q in degrees 0, 1... with a
    nontrivial differential on each stalk."""
    stalk = CochainComplex(GradedSpace({0: 1, 1: 1}), {0: QMatrix.identity(1)})
    return constant_sheaf(K, stalk)


def test_truncation_triangle():
    K = circle(3)
    F = two_term_sheaf(K)
    lower, inc, upper, proj = truncation_triangle(F, 0)
    lower.validate()
    upper.validate()
    inc.validate()
    proj.validate()
    for s in K.simplices:
        # stalk cohomology splits at 0
        hl = Cohomology(lower.value(s)).space
        hu = Cohomology(upper.value(s)).space
        hF = Cohomology(F.value(s)).space
        for k in set(hl.dims) | set(hu.dims) | set(hF.dims):
            expect = hl.dim(k) if k <= 0 else hu.dim(k)
            assert hF.dim(k) == expect
    # F concentrated in degree 0, ell = 0: upper term zero
    G = constant_sheaf(K)
    _, _, upG, _ = truncation_triangle(G, 0)
    assert all(upG.value(s).total_dim() == 0 for s in K.simplices)
    # ell below all degrees: lower term zero
    lowG, _, _, _ = truncation_triangle(G, -1)
    assert all(lowG.value(s).total_dim() == 0 for s in K.simplices)


def test_sheaf_cone_stalkwise():
    K = circle(3)
    F = constant_sheaf(K)
    # identity cone is stalk-acyclic
    ident = SheafMap(F, F, {
        s: {0: QMatrix.identity(1)} for s in K.simplices})
    C, inc, proj = sheaf_cone(ident)
    C.validate()
    for s in K.simplices:
        assert Cohomology(C.value(s)).space.total_dim() == 0
