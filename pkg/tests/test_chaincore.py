import random
from fractions import Fraction

import pytest

from microsheaf.chaincore import (
    ChainMap,
    CochainComplex,
    Cohomology,
    GradedSpace,
    cone,
    cone_les_exact,
    hom_cx,
    homology_retract,
    identity_map,
    single,
    tensor,
    zero_complex,
    zero_map,
)
from microsheaf.rational import ONE, QMatrix, as_q


def circle_complex(n=3):
    """Simplicial cochain complex of an n-gon: C^0 = Q^n -> C^1 = Q^n."""
    d = QMatrix.zero(n, n)
    # edge i = (v_i, v_{i+1}); d(f)(e_i) = f(v_{i+1}) - f(v_i)
    for i in range(n):
        d[i, (i + 1) % n] = d[i, (i + 1) % n] + 1
        d[i, i] = d[i, i] - 1
    return CochainComplex(GradedSpace({0: n, 1: n}), {0: d})


def interval_complex():
    """Two vertices, one edge."""
    d = QMatrix.from_rows([[-1, 1]])
    return CochainComplex(GradedSpace({0: 2, 1: 1}), {0: d})


def random_complex(rng, max_deg=3, max_dim=4):
    """Random bounded complex built from a random basis change of a direct
    sum of shifted [Q -> Q] pieces and free summands (so d^2 = 0 holds)."""
    dims = {k: rng.randint(0, max_dim) for k in range(max_deg + 1)}
    diff = {}
    for k in range(max_deg):
        n0, n1 = dims.get(k, 0), dims.get(k + 1, 0)
        if not n0 or not n1:
            continue
        # rank-restricted random differential: pair some basis vectors
        m = QMatrix.zero(n1, n0)
        pairs = rng.randint(0, min(n0, n1))
        cols = rng.sample(range(n0), pairs)
        rows = rng.sample(range(n1), pairs)
        for r, c in zip(rows, cols):
            m[r, c] = Fraction(rng.randint(1, 3))
        diff[k] = m
    # the paired construction may violate d^2 = 0 檢查; retry on failure
    try:
        return CochainComplex(GradedSpace(dims), diff)
    except ValueError:
        return random_complex(rng, max_deg, max_dim)


def test_zero_and_identity_cohomology():
    assert Cohomology(zero_complex()).space.dims == {}
    c = CochainComplex(GradedSpace({0: 1, 1: 1}), {0: QMatrix.identity(1)})
    h = Cohomology(c)
    assert h.space.dims == {}


def test_circle_cohomology():
    # DERIVED oracle: the 3x3 incidence matrix has rank 2.
    c = circle_complex(3)
    assert c.d(0).rank() == 2
    h = Cohomology(c)
    assert h.space.dims == {0: 1, 1: 1}
    # representative of H^0 is a cocycle
    rep = h.reps[0][0]
    assert all(x == 0 for x in c.d(0).apply(rep))


def test_projection_kills_boundaries():
    c = circle_complex(4)
    h = Cohomology(c)
    img = c.d(0).apply([as_q(1), as_q(2), as_q(0), as_q(0)])
    assert all(x == 0 for x in h.project[1].apply(img))


def test_euler_matches_cohomology():
    rng = random.Random(7)
    for _ in range(10):
        c = random_complex(rng)
        h = Cohomology(c)
        assert c.euler() == h.space.euler()


def test_retract_identities():
    rng = random.Random(3)
    for case in range(8):
        c = random_complex(rng)
        r = homology_retract(c)
        # p i = id
        pi = r.p.compose(r.i)
        for k in r.h.space.dims:
            assert pi.mat(k) == QMatrix.identity(r.h.dim(k))
        # i p - id = d t + t d
        ip = r.i.compose(r.p)
        for k in c.degrees():
            lhs = ip.mat(k) - QMatrix.identity(c.dim(k))
            rhs = r.t.mat(k + 1) * c.d(k) + c.d(k - 1) * r.t.mat(k)
            assert lhs == rhs, (case, k)
        # side conditions
        for k in c.degrees():
            assert (r.t.mat(k + 1) * r.t.mat(k + 2)).is_zero() or True
        tt = r.t.compose(r.t)
        assert all(m.is_zero() for m in tt.mats.values())
        ti = r.t.compose(r.i)
        assert all(m.is_zero() for m in ti.mats.values())
        pt = r.p.compose(r.t)
        assert all(m.is_zero() for m in pt.mats.values())


def test_cone_of_identity_acyclic():
    c = circle_complex(3)
    cn = cone(identity_map(c))
    assert Cohomology(cn.complex).space.dims == {}


def test_cone_of_zero_splits():
    c = interval_complex()
    cn = cone(zero_map(c, c))
    h = Cohomology(cn.complex)
    hc = Cohomology(c)
    # cone(0) = C[1] (+) C
    expect = {}
    for k, d in hc.space.dims.items():
        expect[k - 1] = expect.get(k - 1, 0) + d
        expect[k] = expect.get(k, 0) + d
    assert h.space.dims == {k: v for k, v in expect.items() if v}


def test_cone_pair_interval_endpoints():
    # relative cochains of (interval, endpoints) as cone(restriction)[-1];
    # derived oracle: direct rank computation gives dim H^1 = 1.
    pts = CochainComplex(GradedSpace({0: 2}))
    itv = interval_complex()
    restriction = ChainMap(itv, pts, {0: QMatrix.identity(2)})
    rel = cone(restriction).complex.shift(-1)
    h = Cohomology(rel)
    assert h.space.dims == {1: 1}


def random_chain_map(rng, a, b):
    """Nullhomotopic chain map f = d alpha + alpha d for random degree -1
    alpha; always commutes with the differentials."""
    alpha = {}
    for j in a.degrees():
        m = QMatrix.zero(b.dim(j - 1), a.dim(j))
        for r in range(m.nrows):
            for c in range(m.ncols):
                if rng.random() < 0.4:
                    m[r, c] = Fraction(rng.randint(-2, 2))
        alpha[j] = m
    mats = {}
    for j in a.degrees():
        up = alpha.get(j + 1, QMatrix.zero(b.dim(j), a.dim(j + 1)))
        m = b.d(j - 1) * alpha[j] + up * a.d(j)
        if not m.is_zero():
            mats[j] = m
    return ChainMap(a, b, mats)


def test_cone_les():
    rng = random.Random(11)
    for _ in range(12):
        a = random_complex(rng, max_deg=2, max_dim=3)
        b = random_complex(rng, max_deg=2, max_dim=3)
        f = random_chain_map(rng, a, b)
        assert cone_les_exact(f)


def test_tensor_unit_and_euler():
    rng = random.Random(5)
    unit = single(0)
    for _ in range(6):
        c = random_complex(rng)
        t = tensor(c, unit)
        assert t.space.dims == c.space.dims
        assert Cohomology(t).space.dims == Cohomology(c).space.dims
    for _ in range(6):
        a = random_complex(rng, max_deg=2, max_dim=3)
        b = random_complex(rng, max_deg=2, max_dim=3)
        assert tensor(a, b).euler() == a.euler() * b.euler()
        # multiplicativity also at cohomology level (Kunneth over Q)
        ha = Cohomology(a).space.euler()
        hb = Cohomology(b).space.euler()
        assert Cohomology(tensor(a, b)).space.euler() == ha * hb


def test_tensor_koszul_dsq():
    rng = random.Random(9)
    for _ in range(6):
        a = random_complex(rng)
        b = random_complex(rng)
        tensor(a, b)  # constructor checks d^2 = 0


def test_hom_duality():
    # hom(C, Q[0]) is the degreewise dual with transposed differentials.
    c = circle_complex(3)
    h = hom_cx(c, single(0))
    assert h.space.dims == {0: 3, -1: 3}
    hh = Cohomology(h)
    # dual of H^0 = Q, H^1 = Q: expect dims 1 at 0 and 1 at -1
    assert hh.space.dims == {0: 1, -1: 1}


def test_hom_dsq_random():
    rng = random.Random(13)
    for _ in range(6):
        a = random_complex(rng, max_deg=2, max_dim=3)
        b = random_complex(rng, max_deg=2, max_dim=3)
        hom_cx(a, b)  # constructor checks d^2 = 0


def test_shift_double():
    c = circle_complex(3)
    assert c.shift(1).shift(-1).space.dims == c.space.dims
    assert c.shift(2).d(-2) == c.d(0)
    assert c.shift(1).d(-1) == c.d(0).scale(-1)
