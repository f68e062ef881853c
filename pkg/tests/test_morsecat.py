import random
from fractions import Fraction

import pytest

from microsheaf.ainfty import basis_elt, check_functor, check_relations
from microsheaf.chaincore import Cohomology, CochainComplex, GradedSpace
from microsheaf.hpt import single_complex_contraction, verify_contraction
from microsheaf.morsecat import (
    AcyclicMatching,
    MatchingContraction,
    build_matching,
    mor_category,
    morse_differential_paths,
)
from microsheaf.rational import ONE, QMatrix
from microsheaf.simplicial import star_union, whole_space

from test_chaincore import circle_complex, random_complex
from test_sheaves import arc_union
from test_simplicial import circle


def test_matching_on_acyclic_two_term():
    C = CochainComplex(GradedSpace({0: 1, 1: 1}), {0: QMatrix.identity(1)})
    M = build_matching(C)
    assert len(M.pairs) == 1
    assert M.critical() == []


def test_matching_zero_differential():
    C = CochainComplex(GradedSpace({0: 2, 1: 3}))
    M = build_matching(C)
    assert M.pairs == []
    assert len(M.critical()) == 5


def test_circle_matching_two_critical():
    C = circle_complex(3)
    M = build_matching(C)
    crit = M.critical()
    assert len(crit) == 2
    degs = sorted(k for (k, i) in crit)
    assert degs == [0, 1]


def test_matching_contraction_identities():
    rng = random.Random(5)
    for case in range(8):
        C = random_complex(rng)
        M = build_matching(C, seed=case)
        mc = MatchingContraction(C, M)
        contraction = single_complex_contraction(
            C, mc.pi_matrices(), mc.t_matrices())
        rep = verify_contraction(contraction)
        assert rep.ok, (case, rep.failures[:2])
        assert not rep.side_conditions, (case, rep.side_conditions[:2])


def test_empty_matching_contraction_trivial():
    C = circle_complex(3)
    M = AcyclicMatching(C, [])
    mc = MatchingContraction(C, M)
    pis = mc.pi_matrices()
    for k in C.degrees():
        assert pis[k] == QMatrix.identity(C.dim(k))
    assert mc.t_matrices() == {}


def test_perfect_matching_gives_zero_pi():
    C = CochainComplex(GradedSpace({0: 1, 1: 1}), {0: QMatrix.identity(1)})
    M = build_matching(C)
    mc = MatchingContraction(C, M)
    assert all(m.is_zero() for m in mc.pi_matrices().values())


def test_morse_paths_match_reduced_differential():
    rng = random.Random(11)
    for case in range(8):
        C = random_complex(rng)
        M = build_matching(C, seed=case)
        mc = MatchingContraction(C, M)
        entries, ledger = morse_differential_paths(C, M)
        # two-route equality: path sums equal the eliminated differential
        red = {k: v for k, v in mc.reduced_diff.items()}
        assert entries == red, case
        for key, paths in ledger.items():
            assert len(paths) >= 1


def test_cyclic_matching_rejected():
    # two-dim spaces with differential making a closed alternating loop
    d = QMatrix.from_rows([[1, 1], [1, 1]])
    C = CochainComplex(GradedSpace({0: 2, 1: 2}), {0: d})
    with pytest.raises(ValueError):
        AcyclicMatching(C, [((0, 0), (1, 1)), ((0, 1), (1, 0))])


def test_mor_category_circle():
    K = circle(3)
    opens = {"X": whole_space(K), "U": arc_union(K), "S": star_union(K, (1,))}
    mor = mor_category(opens, seed=0)
    A = mor.category
    assert check_relations(A, 4).ok
    # single object X: endomorphism model has exactly 2 generators, zero
    # differential (Betti numbers of the circle)
    hXX = A.hom("X", "X")
    assert hXX.space.total_dim() == 2
    assert hXX.diff == {}
    # hom dims (1,0) one way and (0,1) the other for (X, U)
    assert Cohomology(A.hom("X", "U")).space.dims == {0: 1}
    assert Cohomology(A.hom("U", "X")).space.dims == {1: 1}
    # quasi-equivalence: compressed cohomology equals uncompressed
    for X in A.objects:
        for Y in A.objects:
            hA = Cohomology(A.hom(X, Y)).space.dims
            hB = Cohomology(mor.dg.hom(X, Y)).space.dims
            assert hA == hB, (X, Y)
    # functors satisfy the A-infinity equations
    assert check_functor(mor.transfer.include, 2).ok
    assert check_functor(mor.transfer.project, 2).ok


def test_mor_category_disjoint_supports():
    K = circle(4) if False else None
    from microsheaf.simplicial import SimplicialComplex, open_union

    Kc = SimplicialComplex(list(range(4)),
                           [(0, 1), (1, 2), (2, 3), (0, 3)])
    U1 = star_union(Kc, (0,))
    U2 = star_union(Kc, (2,))
    mor = mor_category({"a": U1, "b": U2}, seed=1)
    # hom(a, b): stars of two opposite vertices of the square intersect in
    # nothing: the closure of U1 misses U2's support... the hom complex is
    # the sections of std(U2) over the closure zone of U1
    # at minimum the compressed and uncompressed cohomologies agree
    for X in mor.category.objects:
        for Y in mor.category.objects:
            hA = Cohomology(mor.category.hom(X, Y)).space.dims
            hB = Cohomology(mor.dg.hom(X, Y)).space.dims
            assert hA == hB
