import random

import pytest

from microsheaf.ainfty import (
    basis_elt,
    check_relations,
    cohomology_category,
    complexes_dg_category,
    elt,
)
from microsheaf.chaincore import Cohomology
from microsheaf.rational import ONE, ZERO
from microsheaf.twisted import (
    TwElt,
    TwistedComplex,
    check_mc,
    embed,
    tw_cone,
    tw_mu,
    tw_shift,
    twisted_category,
)

from test_chaincore import circle_complex, interval_complex, random_complex


def base_category():
    return complexes_dg_category({
        "c": circle_complex(3),
        "i": interval_complex(),
    })


def test_embed_homs_match():
    A = base_category()
    T = embed(A, "c")
    Tw = twisted_category(A, {"tc": T})
    h_tw = Tw.hom("tc", "tc")
    h_a = A.hom("c", "c")
    assert h_tw.space.dims == h_a.space.dims
    for k in h_a.degrees():
        assert h_tw.d(k) == h_a.d(k)


def test_relations_pass_on_shifted_two_entry():
    A = base_category()
    # two-entry twisted complex with a delta: pick a degree-correct cocycle
    # hom element interval -> circle; delta degree r = 1 + k_f - k_e.
    h = A.hom("i", "c")
    k_e, k_f = 0, 0
    r = 1 + k_f - k_e
    # find a mu^1-closed element of degree r
    C = h
    target = None
    ker = C.d(r).kernel_basis() if C.dim(r) else []
    for v in ker:
        target = elt(r, v)
        if target is not None:
            break
    entries = [("i", k_e), ("c", k_f)]
    delta = {}
    if target is not None:
        delta[(0, 1)] = target
    T = TwistedComplex(A, entries, delta, [1, 0])
    assert check_mc(T) == {}
    objs = {"t": T, "e": embed(A, "c", 1), "s": embed(A, "i", -2)}
    Tw = twisted_category(A, objs)
    rep = check_relations(Tw, 3)
    assert rep.ok, rep.summary()


def test_mc_failure_reported():
    A = base_category()
    h = A.hom("i", "c")
    r = 1
    # pick a non-closed element if one exists
    bad = None
    for i in range(h.dim(r)):
        col = h.d(r).col(i)
        if any(col):
            bad = basis_elt(h, r, i)
            break
    if bad is None:
        pytest.skip("no non-closed degree-1 element")
    T = TwistedComplex(A, [("i", 0), ("c", 0)], {(0, 1): bad}, [1, 0])
    assert check_mc(T) != {}


def test_cone_of_identity_acyclic():
    A = base_category()
    T = embed(A, "c")
    Tw0 = twisted_category(A, {"t": T})
    h = Tw0.hom("t", "t")
    # identity морфизм as a TwElt: identity of the underlying hom complex
    hA = A.hom("c", "c")
    idvec = [ZERO] * hA.dim(0)
    # identity graded map = identity matrices per degree: encoded in the
    # hom-complex basis of hom_cx(c, c)
    from microsheaf.chaincore import identity_map, map_to_hom_element
    from test_chaincore import circle_complex as cc
    c = cc(3)
    idelt = elt(0, map_to_hom_element(identity_map(c)))
    f = TwElt(T, T, 0, {(0, 0): idelt})
    cone = tw_cone(f)
    assert check_mc(cone) == {}
    Tw = twisted_category(A, {"cone": cone})
    endo = Tw.hom("cone", "cone")
    hco = Cohomology(endo)
    assert hco.space.dims == {}


def test_cone_triangle_euler_ranks():
    # long-exact-sequence rank bookkeeping for the zero morphism cone:
    # hom(E, cone(0: S -> T)) should have cohomology = hom(E,S[1]) (+) hom(E,T)
    A = base_category()
    S = embed(A, "i")
    T = embed(A, "c")
    zero = TwElt(S, T, 0, {})
    cone = tw_cone(zero)
    Tw = twisted_category(A, {"cone": cone, "E": embed(A, "c"),
                              "S1": tw_shift(S, 1), "T": T})
    hc = Cohomology(Tw.hom("E", "cone")).space
    h1 = Cohomology(Tw.hom("E", "S1")).space
    h2 = Cohomology(Tw.hom("E", "T")).space
    for k in set(hc.dims) | set(h1.dims) | set(h2.dims):
        assert hc.dim(k) == h1.dim(k) + h2.dim(k)


def test_shift_round_trip():
    A = base_category()
    T = embed(A, "c")
    U = tw_shift(tw_shift(T, 1), -1)
    assert U.entries == T.entries
    assert U.delta == T.delta
    Tw = twisted_category(A, {"a": T, "b": U})
    # explicit isomorphism: the identity block is a degree-0 cocycle with
    # invertible cohomology class
    h = Tw.hom("a", "b")
    hco = Cohomology(h)
    assert hco.dim(0) >= 1


def test_two_entry_mc_reduces_to_cocycle_condition():
    # over a dg algebra: MC for a single off-diagonal block delta reduces to
    # mu^1(delta) = 0 plus mu^2(delta, delta) = 0; with one block the square
    # vanishes for triangularity reasons, so MC <=> closedness.  Verified
    # against hand expansion: residual = mu^1-part exactly.
    A = base_category()
    h = A.hom("i", "c")
    r = 1
    for i in range(h.dim(r)):
        e = basis_elt(h, r, i)
        T = TwistedComplex(A, [("i", 0), ("c", 0)], {(0, 1): e}, [1, 0],
                           check=True)
        res = check_mc(T)
        col = h.d(r).col(i)
        expect_zero = not any(col)
        assert (res == {}) == expect_zero
