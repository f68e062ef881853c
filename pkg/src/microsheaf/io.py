"""JSON document schemas: exact rationals as "p/q" strings, matrices as
row-major arrays, versioned schema ids.  Parsing reports precise errors
(path, expected, found)."""

from __future__ import annotations

import json
from fractions import Fraction

from .chaincore import CochainComplex, GradedSpace
from .rational import QMatrix, as_q
from .sheaves import CellularSheaf
from .simplicial import CellUnion, SimplicialComplex

SCHEMAS = {
    "complex": "microsheaf/complex/v1",
    "cell-union": "microsheaf/cell-union/v1",
    "sheaf": "microsheaf/sheaf/v1",
    "constructible-function": "microsheaf/constructible-function/v1",
    "contraction": "microsheaf/contraction/v1",
    "ainf": "microsheaf/ainf/v1",
    "report": "microsheaf/report/v1",
}


class DocumentError(ValueError):
    def __init__(self, path, expected, found):
        self.path = path
        self.expected = expected
        self.found = found
        super().__init__(f"at {path}: expected {expected}, found {found!r}")


def _rat(s, path):
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise DocumentError(path, "rational 'p/q'", s) from e


def rat_str(x: Fraction) -> str:
    x = as_q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def matrix_to_doc(m: QMatrix):
    return {"rows": m.nrows, "cols": m.ncols,
            "entries": [rat_str(m[i, j]) for i in range(m.nrows)
                        for j in range(m.ncols)]}


def matrix_from_doc(doc, path):
    try:
        rows, cols = int(doc["rows"]), int(doc["cols"])
        entries = doc["entries"]
    except (KeyError, TypeError) as e:
        raise DocumentError(path, "matrix {rows, cols, entries}", doc) from e
    if len(entries) != rows * cols:
        raise DocumentError(path, f"{rows * cols} entries", len(entries))
    m = QMatrix(rows, cols)
    for i in range(rows):
        for j in range(cols):
            v = _rat(entries[i * cols + j], f"{path}.entries[{i * cols + j}]")
            if v:
                m[i, j] = v
    return m


def _cell_key(cell) -> str:
    return ",".join(str(v) for v in cell)


def _parse_cell(key, vertex_ids, path):
    parts = key.split(",") if key else []
    out = []
    for p in parts:
        vid = _coerce_vertex(p, vertex_ids)
        if vid is None:
            raise DocumentError(path, "known vertex id", p)
        out.append(vid)
    return tuple(out)


def _coerce_vertex(p, vertex_ids):
    if p in vertex_ids:
        return p
    try:
        q = int(p)
    except ValueError:
        return None
    return q if q in vertex_ids else None


# -- complex ---------------------------------------------------------------


def complex_to_doc(K: SimplicialComplex):
    verts = []
    for v in K.vertices:
        item = {"id": v}
        if K.coords is not None:
            item["coords"] = [rat_str(x) for x in K.coords[v]]
        verts.append(item)
    return {"schema": SCHEMAS["complex"], "vertices": verts,
            "simplices": [list(s) for s in K.cells()]}


def complex_from_doc(doc):
    if doc.get("schema") != SCHEMAS["complex"]:
        raise DocumentError("schema", SCHEMAS["complex"], doc.get("schema"))
    verts = []
    coords = {}
    has_coords = False
    for i, item in enumerate(doc.get("vertices", [])):
        if "id" not in item:
            raise DocumentError(f"vertices[{i}]", "id field", item)
        verts.append(item["id"])
        if "coords" in item:
            has_coords = True
            coords[item["id"]] = tuple(
                _rat(x, f"vertices[{i}].coords") for x in item["coords"])
    vertex_ids = set(verts)
    simplices = []
    for i, s in enumerate(doc.get("simplices", [])):
        for v in s:
            if v not in vertex_ids:
                raise DocumentError(f"simplices[{i}]", "known vertex", v)
        simplices.append(tuple(s))
    return SimplicialComplex(verts, simplices,
                             coords if has_coords else None)


# -- cell union --------------------------------------------------------------


def cell_union_to_doc(U: CellUnion):
    return {"schema": SCHEMAS["cell-union"],
            "cells": [list(c) for c in U],
            "kind": U.kind}


def cell_union_from_doc(doc, K: SimplicialComplex):
    if doc.get("schema") != SCHEMAS["cell-union"]:
        raise DocumentError("schema", SCHEMAS["cell-union"],
                            doc.get("schema"))
    kind = doc.get("kind")
    if kind not in CellUnion.KINDS:
        raise DocumentError("kind", CellUnion.KINDS, kind)
    return CellUnion(K, [tuple(c) for c in doc.get("cells", [])], kind)


# -- sheaf -------------------------------------------------------------------


def sheaf_to_doc(F: CellularSheaf):
    stalks = {}
    for s in F.complex.cells():
        V = F.value(s)
        if not V.total_dim():
            continue
        stalks[_cell_key(s)] = {
            "dims": {str(k): d for k, d in sorted(V.space.dims.items())},
            "diff": {str(k): matrix_to_doc(m)
                     for k, m in sorted(V.diff.items())},
        }
    maps = {}
    for (s, t), comp in sorted(F.maps.items()):
        if not comp:
            continue
        maps[f"{_cell_key(s)}|{_cell_key(t)}"] = {
            str(k): matrix_to_doc(m) for k, m in sorted(comp.items())}
    return {"schema": SCHEMAS["sheaf"], "stalks": stalks,
            "restrictions": maps}


def sheaf_from_doc(doc, K: SimplicialComplex):
    if doc.get("schema") != SCHEMAS["sheaf"]:
        raise DocumentError("schema", SCHEMAS["sheaf"], doc.get("schema"))
    vertex_ids = set(K.vertices)
    values = {}
    for key, item in doc.get("stalks", {}).items():
        cell = _parse_cell(key, vertex_ids, f"stalks.{key}")
        if cell not in K.simplices:
            raise DocumentError(f"stalks.{key}", "cell of the complex", key)
        dims = {int(k): int(v) for k, v in item.get("dims", {}).items()}
        diff = {int(k): matrix_from_doc(m, f"stalks.{key}.diff[{k}]")
                for k, m in item.get("diff", {}).items()}
        values[cell] = CochainComplex(GradedSpace(dims), diff)
    maps = {}
    for key, comp in doc.get("restrictions", {}).items():
        try:
            a, b = key.split("|")
        except ValueError:
            raise DocumentError(f"restrictions.{key}", "'cell|cell' key", key)
        s = _parse_cell(a, vertex_ids, f"restrictions.{key}")
        t = _parse_cell(b, vertex_ids, f"restrictions.{key}")
        maps[(s, t)] = {int(k): matrix_from_doc(m, f"restrictions.{key}[{k}]")
                        for k, m in comp.items()}
    F = CellularSheaf(K, values, maps, check=False)
    F.validate()
    return F


# -- constructible function ---------------------------------------------------


def function_to_doc(phi):
    return {"schema": SCHEMAS["constructible-function"],
            "values": {_cell_key(c): v
                       for c, v in sorted(phi.values.items())}}


def function_from_doc(doc, K):
    from .charcycle import ConstructibleFunction

    if doc.get("schema") != SCHEMAS["constructible-function"]:
        raise DocumentError("schema", SCHEMAS["constructible-function"],
                            doc.get("schema"))
    vals = {}
    vertex_ids = set(K.vertices)
    for key, v in doc.get("values", {}).items():
        cell = _parse_cell(key, vertex_ids, f"values.{key}")
        vals[cell] = int(v)
    return ConstructibleFunction(K, vals)


# -- contraction (one-object dg algebra plus pi, t) ---------------------------


def contraction_to_doc(basis_by_degree, diff, mult, pi, t):
    return {
        "schema": SCHEMAS["contraction"],
        "algebra": {
            "basis": {str(k): list(v) for k, v in basis_by_degree.items()},
            "diff": {x: {y: rat_str(c) for y, c in d.items()}
                     for x, d in diff.items()},
            "mult": {f"{x}|{y}": {z: rat_str(c) for z, c in m.items()}
                     for (x, y), m in mult.items()},
        },
        "pi": {str(k): matrix_to_doc(m) for k, m in pi.items()},
        "t": {str(k): matrix_to_doc(m) for k, m in t.items()},
    }


def contraction_from_doc(doc):
    from .ainfty import algebra_dg_category
    from .hpt import Contraction

    if doc.get("schema") != SCHEMAS["contraction"]:
        raise DocumentError("schema", SCHEMAS["contraction"],
                            doc.get("schema"))
    alg = doc.get("algebra", {})
    basis = {int(k): list(v) for k, v in alg.get("basis", {}).items()}
    diff = {x: {y: _rat(c, f"algebra.diff.{x}") for y, c in d.items()}
            for x, d in alg.get("diff", {}).items()}
    mult = {}
    for key, m in alg.get("mult", {}).items():
        try:
            x, y = key.split("|")
        except ValueError:
            raise DocumentError(f"algebra.mult.{key}", "'x|y' key", key)
        mult[(x, y)] = {z: _rat(c, f"algebra.mult.{key}")
                        for z, c in m.items()}
    B = algebra_dg_category(basis, diff, mult)
    pi = {("*", "*"): {int(k): matrix_from_doc(m, f"pi[{k}]")
                       for k, m in doc.get("pi", {}).items()}}
    t = {("*", "*"): {int(k): matrix_from_doc(m, f"t[{k}]")
                      for k, m in doc.get("t", {}).items()}}
    return Contraction(B, pi, t)


# -- A-infinity structure (emission for golden files) -------------------------


def ainf_to_doc(A, d_max=None, paths=None):
    from .ainfty import basis_elt, hom_basis_labels

    d_max = d_max or A.d_max
    homs = {}
    for X in A.objects:
        for Y in A.objects:
            C = A.hom(X, Y)
            if C.total_dim():
                homs[f"{X}|{Y}"] = {
                    str(k): d for k, d in sorted(C.space.dims.items())}
    mu = {}
    for d in range(1, d_max + 1):
        level = {}
        for path in A.all_paths(d):
            table = {}
            for labels, out in A.mu_support(d, path):
                key = ";".join(f"{k},{i}" for (k, i) in labels)
                table[key] = {"degree": out[0],
                              "vector": [rat_str(x) for x in out[1]]}
            if table:
                level["|".join(str(x) for x in path)] = table
        if level:
            mu[str(d)] = level
    return {"schema": SCHEMAS["ainf"],
            "objects": [str(x) for x in A.objects],
            "homs": homs, "mu": mu}


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, default=str)
