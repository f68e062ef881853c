"""Discrete Morse compression and the Morse model of the open-set category.

Acyclic matchings on the distinguished basis of a cochain complex play the
role of gradient flows: matched pairs are contractible directions, the
unmatched generators are critical.  The induced contraction (projection
onto the critical span along alternating paths, homotopy summing path
contributions) feeds the homological perturbation transfer, which is how
the Morse-style minimal models and their higher composition tables are
produced.  Per-entry path ledgers are kept so the transferred differential
can be recomputed by direct path enumeration.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .ainfty import AInfCategory, check_relations
from .chaincore import CochainComplex, Cohomology, GradedSpace
from .hpt import Contraction, Transfer, transfer, verify_contraction
from .rational import ONE, ZERO, QMatrix


class AcyclicMatching:
    """Partial matching on basis labels (degree, index) pairing degree k
    with k+1 generators along invertible differential entries, with no
    closed alternating flow."""

    def __init__(self, complex_: CochainComplex, pairs, check=True):
        self.complex = complex_
        self.pairs = list(pairs)   # ((k, i), (k+1, j))
        self.down = {}             # upper -> lower
        self.up = {}
        for (lo, hi) in self.pairs:
            if hi[0] != lo[0] + 1:
                raise ValueError("matching must pair adjacent degrees")
            if lo in self.up or hi in self.down:
                raise ValueError("matching is not a partial matching")
            coeff = complex_.d(lo[0])[hi[1], lo[1]]
            if not coeff:
                raise ValueError(f"matched pair {lo}-{hi} has zero incidence")
            self.up[lo] = hi
            self.down[hi] = lo
        if check and self._has_cycle():
            raise ValueError("matching flow has a directed cycle")

    def critical(self):
        out = []
        for k in self.complex.degrees():
            for i in range(self.complex.dim(k)):
                lab = (k, i)
                if lab not in self.up and lab not in self.down:
                    out.append(lab)
        return out

    def _flow_edges(self, k):
        """Directed graph on degree-k generators: i -> i' when some upper
        coface path V(i) followed by d hits i'."""
        C = self.complex
        d = C.d(k)
        edges = {}
        for i in range(C.dim(k)):
            hi = self.up.get((k, i))
            if hi is None:
                continue
            j = hi[1]
            for i2 in range(C.dim(k)):
                if i2 != i and d[j, i2]:
                    edges.setdefault(i, set()).add(i2)
        return edges

    def _has_cycle(self):
        for k in self.complex.degrees():
            edges = self._flow_edges(k)
            state = {}

            def visit(v):
                state[v] = 1
                for w in edges.get(v, ()):
                    if state.get(w) == 1:
                        return True
                    if state.get(w) is None and visit(w):
                        return True
                state[v] = 2
                return False

            for v in list(edges):
                if state.get(v) is None and visit(v):
                    return True
        return False


def build_matching(C: CochainComplex, seed: int = 0) -> AcyclicMatching:
    """Greedy deterministic acyclic matching; the seed only perturbs tie
    order among candidate pairs."""
    import random as _random

    rng = _random.Random(seed)
    pairs = []
    used_lo = set()
    used_hi = set()
    candidates = []
    for k in C.degrees():
        d = C.d(k)
        for (j, i), v in sorted(d.items()):
            candidates.append((k, i, j))
    rng.shuffle(candidates)
    # keep determinism: shuffle then stable order by degree for sweep
    candidates.sort(key=lambda t: t[0])
    current = []
    for (k, i, j) in candidates:
        lo, hi = (k, i), (k + 1, j)
        if lo in used_lo or hi in used_hi or lo in used_hi or hi in used_lo:
            continue
        trial = current + [(lo, hi)]
        try:
            AcyclicMatching(C, trial, check=True)
        except ValueError:
            continue
        current = trial
        used_lo.add(lo)
        used_hi.add(hi)
    return AcyclicMatching(C, current, check=True)


# ---------------------------------------------------------------------------
# matching -> contraction, by iterated Gaussian elimination with tracked maps


class MatchingContraction:
    """pi, t matrices per degree from eliminating matched pairs one by one.

    Composition of elementary strong deformation retracts; satisfies the
    side conditions by construction (verified downstream)."""

    def __init__(self, C: CochainComplex, M: AcyclicMatching):
        self.complex = C
        self.matching = M
        n_all = {k: C.dim(k) for k in C.degrees()}
        # state: current basis = subset of original labels; differential as
        # sparse dict; maps i_cur: current -> original coordinates,
        # p_cur: original -> current, homotopy t on originals
        labels = {k: [(k, i) for i in range(C.dim(k))] for k in C.degrees()}
        diff = {}
        for k in C.degrees():
            for (j, i), v in C.d(k).items():
                diff[((k + 1, j), (k, i))] = v
        # maps as dicts (to_label, from_label) -> coeff
        incl = {(lab, lab): ONE for k in labels for lab in labels[k]}
        proj = {(lab, lab): ONE for k in labels for lab in labels[k]}
        homo = {}
        alive = {lab for k in labels for lab in labels[k]}
        # eliminate in an order where the current pivot is nonzero; the
        # acyclicity of the matching guarantees such an order exists
        remaining = list(M.pairs)
        ordered = []
        while remaining:
            pick = None
            for idx, (lo, hi) in enumerate(remaining):
                if diff.get((hi, lo)):
                    pick = idx
                    break
            if pick is None:
                raise ValueError("no admissible elimination order")
            ordered.append(remaining.pop(pick))
            lo, hi = ordered[-1]
            u = diff.get((hi, lo))
            uinv = ONE / u
            # neighbors
            row = {frm: c for (to, frm), c in diff.items()
                   if to == hi and frm != lo}
            col = {to: c for (to, frm), c in diff.items()
                   if frm == lo and to != hi}
            # reduced differential
            for frm, cya in row.items():
                for to, cbx in col.items():
                    key = (to, frm)
                    old = diff.get(key, ZERO)
                    new = old - cbx * uinv * cya
                    if new:
                        diff[key] = new
                    else:
                        diff.pop(key, None)
            # update inclusion: theta: new basis -> original;
            # columns through lo acquire corrections: for current-basis
            # elements a with diff[(hi, a)] != 0: i(a) -= u^-1 d[hi,a] i(lo)
            incl_lo = {to: c for (to, frm), c in incl.items() if frm == lo}
            for frm, cya in row.items():
                f = uinv * cya
                for to, c in incl_lo.items():
                    key = (to, frm)
                    incl[key] = incl.get(key, ZERO) - f * c
                    if not incl[key]:
                        incl.pop(key)
            # update projection: p(x) for x with d-entry into hi gets
            # correction along proj rows of hi... rows through hi:
            proj_hi = {frm: c for (to, frm), c in proj.items() if to == hi}
            for to, cbx in col.items():
                f = cbx * uinv
                for frm, c in proj_hi.items():
                    key = (to, frm)
                    proj[key] = proj.get(key, ZERO) - f * c
                    if not proj[key]:
                        proj.pop(key)
            # homotopy: t -= i_cur(lo) u^-1 p_cur(hi), in original coords
            # (on the two-term complex lo -> hi the identity forces
            #  T(hi) = -u^-1 lo)
            for to_orig, c1 in incl_lo.items():
                for frm_orig, c2 in proj_hi.items():
                    key = (to_orig, frm_orig)
                    homo[key] = homo.get(key, ZERO) - c1 * uinv * c2
                    if not homo[key]:
                        homo.pop(key)
            # remove lo, hi
            alive.discard(lo)
            alive.discard(hi)
            for key in [key for key in diff
                        if key[0] in (lo, hi) or key[1] in (lo, hi)]:
                diff.pop(key)
            for key in [key for key in incl if key[1] in (lo, hi)]:
                incl.pop(key)
            for key in [key for key in proj if key[0] in (lo, hi)]:
                proj.pop(key)
        self.critical = sorted(alive)
        self.reduced_diff = diff
        self.incl = incl
        self.proj = proj
        self.homo = homo

    def pi_matrices(self):
        """pi = incl o proj on the original complex, per degree."""
        C = self.complex
        out = {}
        for k in C.degrees():
            n = C.dim(k)
            m = QMatrix.zero(n, n)
            # incl: crit -> orig; proj: orig -> crit
            for (to, mid), c1 in self.incl.items():
                if to[0] != k:
                    continue
                for (mid2, frm), c2 in self.proj.items():
                    if mid2 == mid and frm[0] == k:
                        m[to[1], frm[1]] = m[to[1], frm[1]] + c1 * c2
            out[k] = m
        return out

    def t_matrices(self):
        C = self.complex
        out = {}
        for k in C.degrees():
            m = QMatrix.zero(C.dim(k - 1), C.dim(k))
            for (to, frm), c in self.homo.items():
                if frm[0] == k and to[0] == k - 1:
                    m[to[1], frm[1]] = m[to[1], frm[1]] + c
            if not m.is_zero():
                out[k] = m
        return out


def to_contraction(B: AInfCategory, matchings: dict) -> Contraction:
    """Contraction of a dg category from per-hom acyclic matchings.

    matchings: dict (X, Y) -> AcyclicMatching on hom(X, Y)."""
    pi = {}
    t = {}
    for (X, Y), M in matchings.items():
        mc = MatchingContraction(B.hom(X, Y), M)
        pi[(X, Y)] = mc.pi_matrices()
        t[(X, Y)] = mc.t_matrices()
    for X in B.objects:
        for Y in B.objects:
            if (X, Y) not in pi:
                C = B.hom(X, Y)
                pi[(X, Y)] = {k: QMatrix.identity(C.dim(k))
                              for k in C.degrees()}
    return Contraction(B, pi, t)


# ---------------------------------------------------------------------------
# gradient path ledger (independent route for the Morse differential)


def morse_differential_paths(C: CochainComplex, M: AcyclicMatching):
    """Transferred differential entries as signed sums over alternating
    paths: critical x (deg k) to critical y (deg k+1):

        sum over paths x -> up-face -> matched-down -> up-face ... -> y
        of  d[j0, x] * prod( -d[j_{r+1}, lo_r] / d[j_r, lo_r] )

    Returns dict (y, x) -> coefficient together with the path count ledger.
    """
    crit = set(M.critical())
    entries = {}
    ledger = {}

    def walk(k, i, coeff, path, target_deg):
        d = C.d(k)
        for j in range(C.dim(k + 1)):
            v = d[j, i]
            if not v:
                continue
            hi = (k + 1, j)
            if hi in crit:
                key = (hi, path[0])
                entries[key] = entries.get(key, ZERO) + coeff * v
                ledger.setdefault(key, []).append(tuple(path) + (hi,))
            elif hi in M.down:
                lo = M.down[hi]
                if lo in path:
                    continue
                u = C.d(lo[0])[hi[1], lo[1]]
                walk(lo[0], lo[1], -coeff * v / u, path + [hi, lo],
                     target_deg)

    for (k, i) in sorted(crit):
        walk(k, i, ONE, [(k, i)], k + 1)
    return entries, ledger


# ---------------------------------------------------------------------------
# the Morse category of open sets


class MorseCategory:
    """Compressed model of the sheaf dg category on a set of open unions.

    homs are spanned by critical generators of seeded acyclic matchings on
    the injective-model hom complexes; the A-infinity structure and both
    quasi-equivalence functors come from homological perturbation transfer.
    """

    def __init__(self, opens: dict, seed: int = 0, d_max: int = 6,
                 cache=None):
        from .homs import RhomCache, sheaf_dg_category
        from .sheaves import standard

        self.opens = dict(opens)
        cache = cache or RhomCache()
        self.sheaves = {k: standard(u) for k, u in self.opens.items()}
        self.resolutions = {k: cache.resolution(F)
                            for k, F in self.sheaves.items()}
        self.dg = sheaf_dg_category(self.resolutions, d_max=d_max)
        self.matchings = {}
        for X in self.dg.objects:
            for Y in self.dg.objects:
                C = self.dg.hom(X, Y)
                if C.total_dim():
                    self.matchings[(X, Y)] = build_matching(C, seed=seed)
        self.contraction = to_contraction(self.dg, self.matchings)
        rep = verify_contraction(self.contraction)
        if not rep.ok:
            raise AssertionError(f"matching contraction invalid: {rep}")
        self.transfer = Transfer(self.contraction, d_max=d_max)
        self.category = self.transfer.category

    def generator_table(self):
        out = {}
        for (X, Y), M in self.matchings.items():
            out[(X, Y)] = M.critical()
        return out

    def differential_ledgers(self):
        """Per hom pair: (path entries, ledger) for the Morse differential."""
        out = {}
        for (X, Y), M in self.matchings.items():
            out[(X, Y)] = morse_differential_paths(self.dg.hom(X, Y), M)
        return out


def mor_category(opens: dict, seed: int = 0, d_max: int = 6,
                 cache=None) -> MorseCategory:
    return MorseCategory(opens, seed=seed, d_max=d_max, cache=cache)
