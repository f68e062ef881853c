import random
from fractions import Fraction

import pytest

from microsheaf.chaincore import ChainMap, Cohomology, CochainComplex, \
    GradedSpace, cone
from microsheaf.rational import ONE, QMatrix
from microsheaf.resolution import godement_resolution, minimize, resolve
from microsheaf.sheaves import (
    CellularSheaf,
    constant_sheaf,
    costandard,
    skyscraper,
    standard,
    star_standard,
)
from microsheaf.simplicial import open_union, star_union, whole_space

from test_sheaves import arc_union, two_term_sheaf
from test_simplicial import circle, sphere


def sections_cohomology(J, U):
    C, _ = J.sections(U)
    return Cohomology(C).space.dims


def test_skyscraper_at_vertex_is_injective():
    K = circle(3)
    F = skyscraper(K, (0,))
    J = resolve(F)
    assert J.total_size() == 1
    assert J.summands[0] == [(0,)]
    assert J.is_resolution_of()


def test_constant_circle_resolution():
    K = circle(3)
    F = constant_sheaf(K)
    J0 = godement_resolution(F)
    assert J0.is_resolution_of()
    J = minimize(J0)
    assert J.is_resolution_of()
    # minimal resolution: edges then vertices
    sizes = {n: len(v) for n, v in J.summands.items()}
    assert sizes == {0: 3, 1: 3}
    # global sections compute H^*(S^1)
    assert sections_cohomology(J, whole_space(K)) == {0: 1, 1: 1}


def test_constant_interval_resolution_trace():
    # interval: 2 vertices, 1 edge; spec example: total ranks 3 then 2
    K = circle if False else None
    from microsheaf.simplicial import SimplicialComplex
    I = SimplicialComplex([0, 1], [(0, 1)])
    F = constant_sheaf(I)
    J = resolve(F, minimize_result=False)
    assert J.is_resolution_of()
    Jm = minimize(J)
    assert Jm.is_resolution_of()
    sizes = {n: len(v) for n, v in Jm.summands.items()}
    # minimal: [edge] covers, kernel resolved by vertices:
    # 0 -> Q_I -> [e] (+) ? ... sizes (1? or 3 then 2) -- assert ranks shape
    assert sizes[0] >= 1 and sum(sizes.values()) <= 5
    assert sections_cohomology(Jm, whole_space(I)) == {0: 1}


def test_standard_arc_resolution_sections():
    K = circle(3)
    U = arc_union(K)
    F = standard(U)
    J = resolve(F)
    assert J.is_resolution_of()
    # derived sections over X of i_* Q_arc = H^*(arc) = Q in degree 0
    assert sections_cohomology(J, whole_space(K)) == {0: 1}
    # sections over U itself: also H^*(arc)
    assert sections_cohomology(J, U) == {0: 1}


def test_costandard_arc_sections():
    K = circle(3)
    U = arc_union(K)
    G = costandard(U)
    J = resolve(G)
    assert J.is_resolution_of()
    # compactly supported cohomology of the open arc: Q in degree 1
    assert sections_cohomology(J, whole_space(K)) == {1: 1}


def test_two_term_sheaf_resolution():
    K = circle(3)
    F = two_term_sheaf(K)
    J = resolve(F)
    assert J.is_resolution_of()
    assert sections_cohomology(J, whole_space(K)) == {}


def test_sphere_constant_resolution():
    K = sphere()
    F = constant_sheaf(K)
    J = resolve(F)
    assert J.is_resolution_of()
    assert sections_cohomology(J, whole_space(K)) == {0: 1, 2: 1}
    # length <= dim X + internal length
    assert max(J.summands) - min(J.summands) <= 2


def test_stalk_aug_chain_maps_strict():
    K = circle(3)
    for F in [constant_sheaf(K), standard(arc_union(K)),
              costandard(arc_union(K))]:
        J = resolve(F)
        for cell in K.simplices:
            cm = J.stalk_aug_map(cell)
            # re-validate as an honest chain map
            ChainMap(cm.source, cm.target, cm.mats, check=True)


def test_sections_euler_additivity():
    # chi of derived sections equals the stalkwise Euler integral
    K = sphere()
    for F in [constant_sheaf(K), skyscraper(K, (1,)),
              standard(star_union(K, (2,)))]:
        J = resolve(F)
        C, _ = J.sections(whole_space(K))
        lhs = Cohomology(C).space.euler()
        rhs = sum((-1) ** (len(s) - 1) * F.value(s).euler()
                  for s in K.simplices)
        assert lhs == rhs
