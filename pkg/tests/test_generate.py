import random
from fractions import Fraction

import pytest

from microsheaf.chaincore import Cohomology
from microsheaf.generate import (
    GenerationResult,
    StarGadget,
    UnsupportedSpace,
    check_generation_supported,
    generate_twisted,
    injective_to_sheaf,
    link_degree,
)
from microsheaf.rational import ONE, ZERO, QMatrix
from microsheaf.resolution import InjectiveComplex, resolve
from microsheaf.sheaves import constant_sheaf, skyscraper, standard
from microsheaf.simplicial import SimplicialComplex, star_union, whole_space

from test_simplicial import circle, sphere


def random_injective_sheaf(K, rng, max_summands=2, degrees=(0, 1, 2)):
    """Random complex of elementary injectives realized as a sheaf (valid
    by construction, stalk dims bounded by the summand count)."""
    cells = K.cells()
    summands = {}
    for n in degrees:
        k = rng.randint(0, max_summands)
        if k:
            summands[n] = [rng.choice(cells) for _ in range(k)]
    if not summands:
        summands = {0: [rng.choice(cells)]}
    degs = sorted(summands)
    diff = {}
    leq = K.leq
    # d(0->1) random valid, d(1->2) solved inside the kernel of composition
    for a, b in zip(degs, degs[1:]):
        if b != a + 1:
            continue
        entries = {}
        for j, cj in enumerate(summands[b]):
            for i, ci in enumerate(summands[a]):
                if leq(cj, ci) and rng.random() < 0.6:
                    entries[(j, i)] = Fraction(rng.randint(-2, 2))
        diff[a] = {k2: v for k2, v in entries.items() if v}
    # enforce d^2 = 0 by zeroing the higher differential where needed
    J = None
    for attempt in range(20):
        try:
            J = InjectiveComplex(K, summands, diff, check=True)
            break
        except ValueError:
            # repair: clear the later differential
            if len(degs) >= 3 and degs[1] in diff:
                diff.pop(degs[1], None)
            else:
                diff = {}
    assert J is not None
    return injective_to_sheaf(J)


def test_link_degrees():
    K = circle(3)
    assert link_degree(K, (0,)) == 1
    assert link_degree(K, (0, 1)) == 0
    S = sphere()
    assert link_degree(S, (0,)) == 2
    assert link_degree(S, (0, 1)) == 1
    assert link_degree(S, (0, 1, 2)) == 0


def test_interval_not_supported():
    I = SimplicialComplex([0, 1], [(0, 1)])
    with pytest.raises(UnsupportedSpace):
        check_generation_supported(I)


def test_gadget_skyscraper_circle():
    K = circle(3)
    cache = {}
    g = StarGadget(K, (0,), cache)
    assert g.c == 1
    # collapse hits the class; cone stalk at other cells is acyclic
    for cell in K.simplices:
        st, _ = g.cone.stalk(cell)
        h = Cohomology(st).space
        if cell == (0,):
            assert h.dims == {0: 1}
        else:
            assert h.total_dim() == 0


def test_generate_star_standard_single_entry():
    K = circle(3)
    F = standard(star_union(K, (1,)))
    res = generate_twisted(F)
    assert res.certified
    assert len(res.entries) == 1
    res.certificate.validate()


def test_generate_skyscraper_two_entries():
    K = circle(3)
    F = skyscraper(K, (0,))
    res = generate_twisted(F)
    assert res.certified
    kinds = sorted(kind for (kind, s), sh in res.entries)
    assert kinds == ["punct", "star"]
    res.certificate.validate()


def test_generate_constant_circle():
    K = circle(3)
    F = constant_sheaf(K)
    res = generate_twisted(F)
    assert res.certified
    res.certificate.validate()
    # realization sections match H^*(S^1)
    C, _ = res.realization.sections(whole_space(K))
    assert Cohomology(C).space.dims == {0: 1, 1: 1}


def test_generate_random_circle():
    K = circle(3)
    rng = random.Random(42)
    for case in range(6):
        F = random_injective_sheaf(K, rng)
        res = generate_twisted(F)
        assert res.certified, case
        res.certificate.validate()


def test_generate_random_sphere():
    K = sphere()
    rng = random.Random(7)
    for case in range(3):
        F = random_injective_sheaf(K, rng)
        res = generate_twisted(F)
        assert res.certified, case
        res.certificate.validate()
