from fractions import Fraction

import pytest

from microsheaf.chaincore import Cohomology
from microsheaf.simplicial import (
    CellUnion,
    CutComplex,
    SimplicialComplex,
    barycentric_model,
    complement,
    open_union,
    star_union,
    whole_space,
)


def circle(n=3):
    vs = list(range(n))
    edges = [(i, (i + 1) % n) for i in range(n)]
    coords = None
    if n == 3:
        coords = {0: (0, 0), 1: (1, 0), 2: (0, 1)}
    return SimplicialComplex(vs, edges, coords)


def sphere():
    vs = [0, 1, 2, 3]
    tris = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    coords = {0: (0, 0, 0), 1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1)}
    return SimplicialComplex(vs, tris, coords)


def test_face_closure_and_incidence():
    K = sphere()
    assert len(K.simplices) == 14  # 4 + 6 + 4
    assert K.euler() == 2
    # incidence square identity: sum over middle faces vanishes
    for t in K.cells(2):
        for v in K.faces(t, codim=2):
            total = 0
            for e in K.faces(t, codim=1):
                total += K.incidence(t, e) * K.incidence(e, v)
            assert total == 0


def test_cell_union_kinds():
    K = circle(3)
    star = star_union(K, (0,))
    assert star.kind == "open"
    Z = complement(star)
    assert Z.kind == "closed"
    with pytest.raises(ValueError):
        CellUnion(K, [(0,), (0, 1), (1,)], "open")  # not up-closed
    # half-open interval {vertex, edge}
    CellUnion(K, [(0,), (0, 1)], "locally_closed")


def test_barycentric_model_star_is_cone():
    K = circle(3)
    m = barycentric_model(star_union(K, (0,)))
    h = Cohomology(m.cochain_complex())
    assert h.space.dims == {0: 1}


def test_barycentric_model_circle():
    K = circle(3)
    m = barycentric_model(whole_space(K))
    assert len(m.cells(0)) == 6 and len(m.cells(1)) == 6
    h = Cohomology(m.cochain_complex())
    assert h.space.dims == {0: 1, 1: 1}


def test_barycentric_model_half_open_edge():
    K = circle(3)
    S = CellUnion(K, [(0,), (0, 1)], "locally_closed")
    m = barycentric_model(S)
    h = Cohomology(m.cochain_complex())
    assert h.space.dims == {0: 1}  # single edge, contractible


def test_model_rejects_non_interval():
    K = sphere()
    with pytest.raises(ValueError):
        CellUnion(K, [(0,), (0, 1, 2)], "locally_closed")


def test_cut_complex_triangle():
    K = sphere()
    # cut the closed star of vertex 0 at level between 0 and 1 of xi = x+y+z
    vals = {0: Fraction(0), 1: Fraction(1), 2: Fraction(1), 3: Fraction(1)}
    cut = CutComplex(K, vals, Fraction(1, 2))
    # no crossing edges remain
    for s in cut.complex.cells(1):
        a, b = s
        va, vb = cut.value[a], cut.value[b]
        assert (va - cut.level) * (vb - cut.level) >= 0
    # carriers are original cells and euler is preserved
    for s in cut.complex.simplices:
        assert cut.carrier[s] in K.simplices
    assert cut.complex.euler() == K.euler()
    below = cut.below_cells()
    # below region is an up-set
    for s in below:
        for t in cut.complex.cofaces(s):
            assert t in below


def test_cut_no_op_when_no_crossing():
    K = circle(3)
    vals = {0: 0, 1: 0, 2: 0}
    cut = CutComplex(K, vals, Fraction(1, 2))
    assert cut.complex.simplices == K.simplices
