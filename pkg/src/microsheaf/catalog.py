"""The shipped test spaces and their open-set and sheaf catalogs.

Spaces: interval, circle3 (and subdivided circles), sphere (the boundary
of the 3-simplex), torus7 (the 7-vertex Csaszar torus, with an exact
integral embedding), mobius5 (the 5-vertex Moebius band).  Every space
carries exact rational coordinates; per-space open-set catalogs drive the
acceptance suite.
"""

from __future__ import annotations

from fractions import Fraction

from .simplicial import CellUnion, SimplicialComplex, closed_union, \
    open_union, star_union, whole_space

SPACE_NAMES = ("interval", "circle3", "sphere", "torus7", "mobius5")


def interval() -> SimplicialComplex:
    return SimplicialComplex([0, 1], [(0, 1)], coords={0: (0,), 1: (1,)})


def circle_n(n: int) -> SimplicialComplex:
    """n-gon circle with vertices on integer-ish rational points."""
    if n < 3:
        raise ValueError("need at least 3 vertices")
    coords = {}
    # rational points roughly on a circle: (cos, sin) surrogates; affine
    # independence per edge is all that matters, so use a convex polygon
    for i in range(n):
        # convex position via the moment curve (i, i^2)
        coords[i] = (Fraction(i), Fraction(i * i))
    # close up convexly: the polygon (moment curve) is convex, edges chord
    return SimplicialComplex(list(range(n)),
                             [(i, (i + 1) % n) for i in range(n)], coords)


def circle3() -> SimplicialComplex:
    return SimplicialComplex([0, 1, 2], [(0, 1), (1, 2), (0, 2)],
                             coords={0: (0, 0), 1: (1, 0), 2: (0, 1)})


def sphere() -> SimplicialComplex:
    return SimplicialComplex(
        [0, 1, 2, 3],
        [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)],
        coords={0: (0, 0, 0), 1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1)})


def torus7() -> SimplicialComplex:
    """Csaszar torus: 7 vertices, 21 edges, 14 triangles, with an exact
    integral embedding in R^3."""
    tris = []
    for i in range(7):
        tris.append(tuple(sorted(((0 + i) % 7, (1 + i) % 7, (3 + i) % 7))))
        tris.append(tuple(sorted(((0 + i) % 7, (2 + i) % 7, (3 + i) % 7))))
    coords = {
        0: (3, -3, 0),
        1: (-3, 3, 0),
        2: (-3, -3, 1),
        3: (3, 3, 1),
        4: (-1, -2, 3),
        5: (1, 2, 3),
        6: (0, 0, 15),
    }
    return SimplicialComplex(list(range(7)), set(tris), coords)


def mobius5() -> SimplicialComplex:
    """Minimal Moebius band: triangles {i, i+1, i+2} mod 5."""
    tris = [tuple(sorted((i, (i + 1) % 5, (i + 2) % 5))) for i in range(5)]
    coords = {0: (2, 0, 0), 1: (0, 2, 1), 2: (-2, 1, 0),
              3: (-1, -2, 1), 4: (1, -2, 0)}
    return SimplicialComplex(list(range(5)), tris, coords)


def space(name: str) -> SimplicialComplex:
    builders = {
        "interval": interval,
        "circle3": circle3,
        "sphere": sphere,
        "torus7": torus7,
        "mobius5": mobius5,
    }
    if name not in builders:
        raise ValueError(f"unknown catalog space {name!r}; "
                         f"choose from {sorted(builders)}")
    return builders[name]()


def punctured(K: SimplicialComplex, v) -> CellUnion:
    return open_union(K, [s for s in K.simplices if s != tuple(v)])


def open_catalog(name: str, K: SimplicialComplex | None = None):
    """Named open unions per space (drives criteria over 'catalog opens')."""
    K = K or space(name)
    if name == "interval":
        return {"X": whole_space(K), "interior": star_union(K, (0, 1)),
                "half": open_union(K, [(1,), (0, 1)])}
    if name == "circle3":
        return {"X": whole_space(K), "arc": punctured(K, (0,)),
                "star": star_union(K, (1,))}
    if name == "sphere":
        return {"X": whole_space(K), "cell": punctured(K, (0,)),
                "star": star_union(K, (1,))}
    if name == "torus7":
        return {"X": whole_space(K), "star": star_union(K, (0,))}
    if name == "mobius5":
        return {"X": whole_space(K), "star": star_union(K, (0,))}
    raise ValueError(f"unknown catalog space {name!r}")


def sheaf_catalog(name: str, K: SimplicialComplex | None = None):
    """Named sheaves per space for the index/product checks."""
    from .sheaves import constant_sheaf, costandard, skyscraper, standard

    K = K or space(name)
    out = {
        "const": constant_sheaf(K),
        "sky": skyscraper(K, (K.vertices[0],)),
    }
    if name == "circle3":
        U = punctured(K, (0,))
        out["stdU"] = standard(U)
        out["cosU"] = costandard(U)
    elif name == "interval":
        out["cos_int"] = costandard(star_union(K, (0, 1)))
    elif name == "sphere":
        U = punctured(K, (0,))
        out["stdU"] = standard(U)
        out["cosU"] = costandard(star_union(K, (0, 1, 2)))
    elif name == "torus7":
        out["std_star"] = standard(star_union(K, (0,)))
    elif name == "mobius5":
        out["std_star"] = standard(star_union(K, (0,)))
    return out


def locally_closed_catalog(name: str, K: SimplicialComplex | None = None):
    """Locally closed pairs for the tube checks."""
    from .simplicial import locally_closed_union

    K = K or space(name)
    if name == "circle3":
        return {
            "vertex": closed_union(K, [(0,)]),
            "X": whole_space(K),
            "arc": punctured(K, (0,)),
            "half": locally_closed_union(K, [(1,), (0, 1)]),
        }
    if name == "interval":
        return {"vertex": closed_union(K, [(0,)]), "X": whole_space(K)}
    if name == "mobius5":
        core = [tuple(sorted((i, (i + 1) % 5))) for i in range(5)]
        return {"core": closed_union(K, core + [(i,) for i in range(5)]),
                "X": whole_space(K)}
    if name == "sphere":
        return {"vertex": closed_union(K, [(0,)]), "X": whole_space(K)}
    return {"X": whole_space(K)}
