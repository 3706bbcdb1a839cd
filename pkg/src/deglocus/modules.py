"""Finitely presented graded modules over a polynomial ring.

A module is a cokernel: generators with degrees, plus homogeneous relation
rows.  The workhorse is `Span`, a submodule of a free module carrying an
augmented Groebner basis that answers membership with explicit certificates
and produces syzygies; kernels, Hom modules, duals and the natural double
dual map are all built from it.
"""

from __future__ import annotations

import heapq
from itertools import combinations, combinations_with_replacement

from .errors import DegreeGuardExceeded, HypothesisError, ToolkitError
from .ideals import Ideal, _divides, _lcm_exps, _sub_exps, krull_dimension
from .matrices import PolyMatrix, minor_ideal_generators, bareiss_rank
from .rings import Polynomial, PolyRing

Term = tuple[int, tuple[int, ...]]   # (component, exponents)


class FreeCtx:
    """A free module A^n with a module monomial order.

    Position-over-term with lower component index dominating; with
    ``elim_split = k`` every monomial in components < k beats every monomial
    in components >= k, which is the elimination order used for kernels and
    certificates.
    """

    def __init__(self, ring: PolyRing, ncomp: int, degrees=None,
                 elim_split: int | None = None, var_split: int | None = None):
        self.ring = ring
        self.ncomp = ncomp
        self.degrees = tuple(degrees) if degrees is not None else (0,) * ncomp
        if len(self.degrees) != ncomp:
            raise ToolkitError("one degree per component required")
        self.elim_split = elim_split
        rkey = ring.key
        if var_split is not None:
            # eliminate the first var_split ring variables across all components
            vs = var_split

            def key(t):
                c, e = t
                return (sum(e[:vs]),) + tuple(-x for x in reversed(e[:vs])) \
                    + (-c,) + rkey(e)

            self.key = key
        elif elim_split is None:
            self.key = lambda t: (-t[0],) + rkey(t[1])
        else:
            k = elim_split
            self.key = lambda t: ((1 if t[0] < k else 0), -t[0]) + rkey(t[1])

    def zero(self) -> "Vec":
        return Vec(self, {})

    def unit(self, c: int) -> "Vec":
        return Vec(self, {(c, self.ring._zero_exp): self.ring.field.normalize(1)})

    def from_polys(self, polys) -> "Vec":
        terms: dict = {}
        for c, p in enumerate(polys):
            for e, v in p.terms.items():
                terms[(c, e)] = v
        return Vec(self, terms)


class Vec:
    """Sparse element of a free module."""

    __slots__ = ("ctx", "terms", "_lt")

    def __init__(self, ctx: FreeCtx, terms: dict):
        self.ctx = ctx
        self.terms = terms
        self._lt = None

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def lead_term(self) -> Term:
        if self._lt is None:
            self._lt = max(self.terms, key=self.ctx.key)
        return self._lt

    def lead_coeff(self):
        return self.terms[self.lead_term()]

    def component_poly(self, c: int) -> Polynomial:
        ring = self.ctx.ring
        return Polynomial(ring, {e: v for (ci, e), v in self.terms.items() if ci == c})

    def to_polys(self) -> tuple[Polynomial, ...]:
        return tuple(self.component_poly(c) for c in range(self.ctx.ncomp))

    def max_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for (_, e) in self.terms)

    def vec_degree(self):
        """Weighted degree if homogeneous w.r.t. component degrees, else None."""
        if not self.terms:
            return None
        ring = self.ctx.ring
        degs = {ring.weighted_degree(e) + self.ctx.degrees[c] for (c, e) in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def add(self, other: "Vec", sign=1) -> "Vec":
        p = self.ctx.ring.field.char
        out = dict(self.terms)
        for t, c in other.terms.items():
            v = (out.get(t, 0) + sign * c) % p if p else out.get(t, 0) + sign * c
            if v:
                out[t] = v
            else:
                out.pop(t, None)
        return Vec(self.ctx, out)

    def __add__(self, other):
        return self.add(other, 1)

    def __sub__(self, other):
        return self.add(other, -1)

    def __neg__(self):
        p = self.ctx.ring.field.char
        if p:
            return Vec(self.ctx, {t: (-c) % p for t, c in self.terms.items()})
        return Vec(self.ctx, {t: -c for t, c in self.terms.items()})

    def scale(self, poly: Polynomial) -> "Vec":
        p = self.ctx.ring.field.char
        out: dict = {}
        for (comp, e1), c1 in self.terms.items():
            for e2, c2 in poly.terms.items():
                t = (comp, tuple(a + b for a, b in zip(e1, e2)))
                v = (out.get(t, 0) + c1 * c2) % p if p else out.get(t, 0) + c1 * c2
                if v:
                    out[t] = v
                else:
                    out.pop(t, None)
        return Vec(self.ctx, out)

    def mul_term(self, exps, coeff) -> "Vec":
        p = self.ctx.ring.field.char
        if p:
            return Vec(self.ctx, {(c, tuple(a + b for a, b in zip(e, exps))): (v * coeff) % p
                                  for (c, e), v in self.terms.items()})
        return Vec(self.ctx, {(c, tuple(a + b for a, b in zip(e, exps))): v * coeff
                              for (c, e), v in self.terms.items()})

    def monic(self) -> "Vec":
        if not self.terms:
            return self
        lc = self.lead_coeff()
        p = self.ctx.ring.field.char
        if p:
            inv = pow(lc, -1, p)
            return Vec(self.ctx, {t: (c * inv) % p for t, c in self.terms.items()})
        return Vec(self.ctx, {t: c / lc for t, c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, Vec) and self.terms == other.terms

    def __repr__(self):
        return f"Vec({', '.join(str(p) for p in self.to_polys())})"


def _vguard(vdeg: int, cap: int | None):
    if cap is not None and vdeg > cap:
        raise DegreeGuardExceeded(vdeg, cap)


def reduce_vec(v: Vec, basis: list[Vec], cap: int | None = None) -> Vec:
    """Full normal form of a vector modulo a list of vectors."""
    if not basis or not v.terms:
        return v
    ctx = v.ctx
    char = ctx.ring.field.char
    key = ctx.key
    lts = [(g.lead_term(), g.lead_coeff(), g) for g in basis]
    work = dict(v.terms)
    heap = [(tuple(-k for k in key(t)), t) for t in work]
    heapq.heapify(heap)
    rem: dict = {}
    while heap:
        _, t = heapq.heappop(heap)
        c = work.pop(t, None)
        if c is None:
            continue
        comp, e = t
        for (lcomp, le), ltc, g in lts:
            if lcomp == comp and _divides(le, e):
                shift = _sub_exps(e, le)
                factor = c * pow(ltc, -1, char) % char if char else c / ltc
                for (gc_, ge), gv in g.terms.items():
                    if (gc_, ge) == (lcomp, le):
                        continue
                    nt = (gc_, tuple(x + y for x, y in zip(ge, shift)))
                    _vguard(sum(nt[1]), cap)
                    fresh = nt not in work
                    nv = (work.get(nt, 0) - factor * gv) % char if char \
                        else work.get(nt, 0) - factor * gv
                    if nv:
                        work[nt] = nv
                        if fresh:
                            heapq.heappush(heap, (tuple(-k for k in key(nt)), nt))
                    else:
                        work.pop(nt, None)
                break
        else:
            rem[t] = c
    return Vec(ctx, rem)


def buchberger_vec(gens, ctx: FreeCtx, cap: int | None = None) -> list[Vec]:
    """Reduced module Groebner basis.

    Only the chain criterion is used for pair pruning; the product criterion
    is not valid for module syzygies.
    """
    if cap is None:
        cap = ctx.ring.max_degree
    work: list[Vec] = []
    heap: list[tuple] = []
    live: set[tuple[int, int]] = set()
    key = ctx.key

    def add_element(h: Vec):
        t = len(work)
        lcomp, lexp = h.lead_term()
        cand = []
        for i, g in enumerate(work):
            gc, ge = g.lead_term()
            if gc == lcomp:
                cand.append((i, _lcm_exps(ge, lexp)))
        kept = []
        for i, l in cand:
            dominated = False
            for j, l2 in cand:
                if j == i:
                    continue
                if (l2 != l and _divides(l2, l)) or (l2 == l and j < i):
                    dominated = True
                    break
            if not dominated:
                kept.append((i, l))
        for (i, j) in list(live):
            gi, li = work[i].lead_term()
            gj, lj = work[j].lead_term()
            if gi != lcomp:
                continue
            l = _lcm_exps(li, lj)
            if _divides(lexp, l) and _lcm_exps(li, lexp) != l and _lcm_exps(lj, lexp) != l:
                live.discard((i, j))
        for i, l in kept:
            heapq.heappush(heap, (key((lcomp, l)), i, t, (lcomp, l)))
            live.add((i, t))
        work.append(h)

    for g in gens:
        if g.terms:
            _vguard(g.max_degree(), cap)
            g = reduce_vec(g, work, cap)
            if g.terms:
                add_element(g.monic())

    while heap:
        _, i, j, lt = heapq.heappop(heap)
        if (i, j) not in live:
            continue
        live.discard((i, j))
        f, g = work[i], work[j]
        _, fe = f.lead_term()
        _, ge = g.lead_term()
        lcm = _lcm_exps(fe, ge)
        _vguard(sum(lcm), cap)
        s = f.mul_term(_sub_exps(lcm, fe), 1) - g.mul_term(_sub_exps(lcm, ge), 1)
        s = reduce_vec(s, work, cap)
        if s.terms:
            add_element(s.monic())

    return autoreduce_vec(work, cap)


def autoreduce_vec(vecs, cap=None) -> list[Vec]:
    vecs = [v for v in vecs if v.terms]
    if not vecs:
        return []
    ctx = vecs[0].ctx
    vecs = sorted(vecs, key=lambda v: ctx.key(v.lead_term()))
    minimal: list[Vec] = []
    for v in vecs:
        c, e = v.lead_term()
        if not any(q.lead_term()[0] == c and _divides(q.lead_term()[1], e) for q in minimal):
            minimal.append(v)
    out = []
    for k, v in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        r = reduce_vec(v, others, cap)
        if r.terms:
            out.append(r.monic())
    out.sort(key=lambda v: ctx.key(v.lead_term()))
    return out


class Span:
    """Submodule of A^n with an augmented basis for certificates and syzygies.

    Generators u_1..u_s are embedded as u_i + e_{n+i} in A^(n+s) under an
    order eliminating the first n components; the Groebner basis then yields
    membership certificates (tracking block of the normal form) and syzygies
    (elements supported entirely in the tracking block).
    """

    def __init__(self, ring: PolyRing, ncomp: int, gens: list[tuple[Polynomial, ...]],
                 target_degrees=None, gen_degrees=None, cap: int | None = None):
        self.ring = ring
        self.ncomp = ncomp
        self.gens = [tuple(g) for g in gens]
        self.target_degrees = tuple(target_degrees) if target_degrees is not None \
            else (0,) * ncomp
        self.gen_degrees = tuple(gen_degrees) if gen_degrees is not None \
            else (0,) * len(self.gens)
        self.cap = cap if cap is not None else ring.max_degree
        self._aux: FreeCtx | None = None
        self._gb: list[Vec] | None = None

    def _ctx(self) -> FreeCtx:
        if self._aux is None:
            self._aux = FreeCtx(self.ring, self.ncomp + len(self.gens),
                                self.target_degrees + self.gen_degrees,
                                elim_split=self.ncomp)
        return self._aux

    def gb(self) -> list[Vec]:
        if self._gb is None:
            ctx = self._ctx()
            aug = []
            for i, g in enumerate(self.gens):
                w = dict(ctx.from_polys(g).terms)
                w[(self.ncomp + i, self.ring._zero_exp)] = self.ring.field.normalize(1)
                aug.append(Vec(ctx, w))
            self._gb = buchberger_vec(aug, ctx, self.cap)
        return self._gb

    def _split(self, v: Vec):
        head: dict = {}
        tail: dict = {}
        for (c, e), coe in v.terms.items():
            if c < self.ncomp:
                head[(c, e)] = coe
            else:
                tail[(c - self.ncomp, e)] = coe
        return head, tail

    def reduce_with_certificate(self, polys) -> tuple[tuple[Polynomial, ...], tuple[Polynomial, ...]]:
        """Normal form of the vector and coefficients c with v - NF = sum c_i u_i."""
        ctx = self._ctx()
        v = ctx.from_polys(polys)
        nf = reduce_vec(v, self.gb(), self.cap)
        head, tail = self._split(nf)
        ring = self.ring
        remainder = tuple(
            Polynomial(ring, {e: c for (ci, e), c in head.items() if ci == comp})
            for comp in range(self.ncomp))
        coeffs = tuple(
            Polynomial(ring, {e: -c if not ring.field.char else (-c) % ring.field.char
                              for (ci, e), c in tail.items() if ci == i})
            for i in range(len(self.gens)))
        return remainder, coeffs

    def contains(self, polys) -> bool:
        remainder, _ = self.reduce_with_certificate(polys)
        return all(not p.terms for p in remainder)

    def certificate(self, polys):
        """Coefficients expressing the vector in the generators, or None."""
        remainder, coeffs = self.reduce_with_certificate(polys)
        if any(p.terms for p in remainder):
            return None
        return coeffs

    def syzygies(self) -> list[tuple[Polynomial, ...]]:
        """Generators of the syzygy module of the generators."""
        out = []
        for g in self.gb():
            head, tail = self._split(g)
            if not head:
                ring = self.ring
                out.append(tuple(
                    Polynomial(ring, {e: c for (ci, e), c in tail.items() if ci == i})
                    for i in range(len(self.gens))))
        return out

    def syzygy_degrees(self, syz) -> int | None:
        """Vector degree of a homogeneous syzygy w.r.t. the generator degrees."""
        degs = set()
        for i, p in enumerate(syz):
            if p.terms:
                d = p.homogeneous_degree()
                if d is None:
                    return None
                degs.add(d + self.gen_degrees[i])
        if not degs:
            return 0
        return degs.pop() if len(degs) == 1 else None


class FPModule:
    """Cokernel of homogeneous relation rows acting on graded generators."""

    def __init__(self, ring: PolyRing, gen_degrees, relations=(), rel_degrees=None):
        self.ring = ring
        self.gen_degrees = tuple(gen_degrees)
        rel_rows = [tuple(r) for r in relations]
        self.relations = tuple(rel_rows)
        for row in rel_rows:
            if len(row) != len(self.gen_degrees):
                raise ToolkitError("relation row length differs from generator count")
            for p in row:
                ring.check_same(p.ring)
        if rel_degrees is None:
            rel_degrees = [self._infer_rel_degree(row) for row in rel_rows]
        self.rel_degrees = tuple(rel_degrees)
        self._check_homogeneous()
        self._span: Span | None = None

    def _infer_rel_degree(self, row) -> int:
        for j, p in enumerate(row):
            if p.terms:
                d = p.homogeneous_degree()
                if d is None:
                    raise ToolkitError(f"inhomogeneous relation entry: {p}")
                return d + self.gen_degrees[j]
        return 0

    def _check_homogeneous(self):
        for row, rd in zip(self.relations, self.rel_degrees):
            for j, p in enumerate(row):
                if p.terms and not p.is_homogeneous(rd - self.gen_degrees[j]):
                    raise ToolkitError(
                        f"relation entry {p} not homogeneous of degree "
                        f"{rd - self.gen_degrees[j]}")

    @property
    def ngens(self) -> int:
        return len(self.gen_degrees)

    @property
    def nrels(self) -> int:
        return len(self.relations)

    def is_zero_module(self) -> bool:
        return self.ngens == 0

    def presentation_matrix(self) -> PolyMatrix:
        return PolyMatrix(self.ring, self.relations, self.nrels, self.ngens)

    def rel_span(self) -> Span:
        if self._span is None:
            self._span = Span(self.ring, self.ngens, list(self.relations),
                              target_degrees=self.gen_degrees,
                              gen_degrees=self.rel_degrees)
        return self._span

    def zero_element(self):
        return tuple(self.ring.zero() for _ in range(self.ngens))

    def element_is_zero(self, coords) -> bool:
        return self.rel_span().contains(coords)

    def elements_equal(self, a, b) -> bool:
        diff = tuple(x - y for x, y in zip(a, b))
        return self.element_is_zero(diff)

    def __repr__(self):
        return (f"FPModule({self.ring}, gens={list(self.gen_degrees)}, "
                f"rels={self.nrels})")


def free_module(ring: PolyRing, rank: int, degrees=None) -> FPModule:
    degs = tuple(degrees) if degrees is not None else (0,) * rank
    return FPModule(ring, degs, ())


class ModuleMap:
    """Graded map between presented modules, given by a matrix on generators.

    Column j holds the image of source generator j in target coordinates.
    Compatibility with both presentations is verified at construction: the
    image of every source relation must lie in the span of target relations.
    """

    def __init__(self, src: FPModule, tgt: FPModule, matrix, shift: int = 0,
                 check: bool = True):
        self.src = src
        self.tgt = tgt
        self.shift = shift
        rows = tuple(tuple(r) for r in matrix)
        if src.ngens == 0 or tgt.ngens == 0:
            rows = tuple(() for _ in range(tgt.ngens))
        elif len(rows) != tgt.ngens or any(len(r) != src.ngens for r in rows):
            raise ToolkitError("map matrix shape does not match generator counts")
        self.matrix = PolyMatrix(src.ring, rows, tgt.ngens, src.ngens)
        if check:
            self._check()

    def _check(self):
        src, tgt = self.src, self.tgt
        for i in range(tgt.ngens):
            for j in range(src.ngens):
                p = self.matrix[i, j]
                want = src.gen_degrees[j] + self.shift - tgt.gen_degrees[i]
                if p.terms and not p.is_homogeneous(want):
                    raise ToolkitError(
                        f"map entry {p} not homogeneous of degree {want}")
        for row in src.relations:
            image = self.matrix.apply(list(row))
            if not tgt.rel_span().contains(image):
                raise ToolkitError("map does not respect the source relations")

    def apply_element(self, coords):
        return self.matrix.apply(list(coords))

    def kernel_generators(self) -> list[tuple[Polynomial, ...]]:
        """Vectors generating the preimage of the target relations.

        As a submodule of the free cover of the source this contains the
        source relations; together they present the kernel.
        """
        src, tgt = self.src, self.tgt
        cols: list[tuple[Polynomial, ...]] = []
        for j in range(src.ngens):
            cols.append(self.matrix.col(j))
        for row in tgt.relations:
            cols.append(tuple(row))
        span = Span(src.ring, tgt.ngens, cols,
                    target_degrees=tgt.gen_degrees,
                    gen_degrees=tuple(src.gen_degrees[j] + self.shift
                                      for j in range(src.ngens)) + tgt.rel_degrees)
        out = []
        for syz in span.syzygies():
            vec = syz[:src.ngens]
            if any(p.terms for p in vec):
                out.append(tuple(vec))
        return out

    def __repr__(self):
        return f"ModuleMap({self.src} -> {self.tgt}, shift={self.shift})"


def syzygies(mat: PolyMatrix) -> PolyMatrix:
    """Columns generating the kernel of the map defined by mat on columns."""
    ring = mat.ring
    if mat.ncols == 0:
        return PolyMatrix(ring, [], 0, 0)
    if mat.nrows == 0:
        return PolyMatrix.identity(ring, mat.ncols)
    cols = [mat.col(j) for j in range(mat.ncols)]
    span = Span(ring, mat.nrows, cols)
    syz = span.syzygies()
    rows = [[s[i] for s in syz] for i in range(mat.ncols)]
    return PolyMatrix(ring, rows, mat.ncols, len(syz))


class HomModule(FPModule):
    """Hom(M, N) presented with an explicit generator realization table.

    Generator i is realized by a matrix on generators sending M to N;
    `coordinatize` writes any concrete homomorphism (as such a matrix) in
    terms of the generators, and `evaluate` is the pairing Hom x M -> N.
    """

    def __init__(self, ring, gen_degrees, relations, rel_degrees, source, target,
                 realizations, coord_span: Span):
        super().__init__(ring, gen_degrees, relations, rel_degrees)
        self.source = source
        self.target = target
        self.realizations = list(realizations)
        self._coord_span = coord_span

    def realization(self, i: int) -> PolyMatrix:
        return self.realizations[i]

    def combined_realization(self, coords) -> PolyMatrix:
        """The matrix realizing sum_i coords[i] * generator_i."""
        gN, gM = self.target.ngens, self.source.ngens
        acc = [[self.ring.zero()] * gM for _ in range(gN)]
        for i, c in enumerate(coords):
            if not c.terms:
                continue
            R = self.realizations[i]
            for a in range(gN):
                for b in range(gM):
                    if R[a, b].terms:
                        acc[a][b] = acc[a][b] + c * R[a, b]
        return PolyMatrix(self.ring, acc, gN, gM)

    def coordinatize(self, mat: PolyMatrix):
        """Coordinates of a concrete homomorphism matrix, or None."""
        flat = [mat[i, j] for i in range(self.target.ngens)
                for j in range(self.source.ngens)]
        cert = self._coord_span.certificate(flat)
        if cert is None:
            return None
        return cert[:self.ngens]

    def evaluate(self, hom_coords, m_coords):
        """Value in N-coordinates of the homomorphism at an element of M."""
        return self.combined_realization(hom_coords).apply(list(m_coords))


def hom_module(M: FPModule, N: FPModule, cap: int | None = None) -> HomModule:
    """Presentation of Hom(M, N) with realizations, by one syzygy computation.

    A homomorphism is a matrix Phi with Phi . (relation of M) in the span of
    the relations of N; solving Phi * PM^T = PN^T * Y linearly in the entries
    of Phi and Y gives the generators, and a second syzygy computation modulo
    the trivial homomorphisms PN^T * Z gives the relations.
    """
    ring = M.ring
    ring.check_same(N.ring)
    gM, gN = M.ngens, N.ngens
    rM, rN = M.nrels, N.nrels
    if gM == 0 or gN == 0:
        return _zero_hom(ring, M, N)

    # unknown columns: Phi entries (i, j) then Y entries (a, b)
    ncomp = gN * rM
    target_degrees = tuple(N.gen_degrees[i] - M.rel_degrees[l]
                           for i in range(gN) for l in range(rM))
    cols = []
    col_degrees = []
    zero = ring.zero()
    for i in range(gN):
        for j in range(gM):
            col = [zero] * ncomp
            for l in range(rM):
                col[i * rM + l] = M.relations[l][j]
            cols.append(tuple(col))
            col_degrees.append(N.gen_degrees[i] - M.gen_degrees[j])
    for a in range(rN):
        for b in range(rM):
            col = [zero] * ncomp
            for i in range(gN):
                col[i * rM + b] = -N.relations[a][i]
            cols.append(tuple(col))
            col_degrees.append(N.rel_degrees[a] - M.rel_degrees[b])

    if rM == 0:
        # no conditions: every matrix is a homomorphism
        kernel = []
        for i in range(gN):
            for j in range(gM):
                unit = [zero] * (gN * gM + rN * rM)
                unit[i * gM + j] = ring.one()
                kernel.append((tuple(unit), N.gen_degrees[i] - M.gen_degrees[j]))
    else:
        span = Span(ring, ncomp, cols, target_degrees=target_degrees,
                    gen_degrees=col_degrees, cap=cap)
        kernel = []
        for syz in span.syzygies():
            d = span.syzygy_degrees(syz)
            if d is None:
                raise ToolkitError("inhomogeneous syzygy in graded computation")
            kernel.append((syz, d))

    k_vecs = []
    k_degs = []
    for syz, d in kernel:
        phi = tuple(syz[:gN * gM])
        if any(p.terms for p in phi):
            k_vecs.append(phi)
            k_degs.append(d)

    r_vecs = []
    r_degs = []
    for a in range(rN):
        for j in range(gM):
            col = [zero] * (gN * gM)
            for i in range(gN):
                col[i * gM + j] = N.relations[a][i]
            r_vecs.append(tuple(col))
            r_degs.append(N.rel_degrees[a] - M.gen_degrees[j])

    flat_degrees = tuple(N.gen_degrees[i] - M.gen_degrees[j]
                         for i in range(gN) for j in range(gM))
    coord_span = Span(ring, gN * gM, k_vecs + r_vecs,
                      target_degrees=flat_degrees,
                      gen_degrees=tuple(k_degs) + tuple(r_degs), cap=cap)
    relations = []
    rel_degrees = []
    s = len(k_vecs)
    for syz in coord_span.syzygies():
        head = syz[:s]
        if any(p.terms for p in head):
            relations.append(tuple(head))
            d = coord_span.syzygy_degrees(syz)
            if d is None:
                raise ToolkitError("inhomogeneous syzygy in graded computation")
            rel_degrees.append(d)

    realizations = [PolyMatrix(ring, [[vec[i * gM + j] for j in range(gM)]
                                      for i in range(gN)], gN, gM)
                    for vec in k_vecs]
    return HomModule(ring, tuple(k_degs), relations, rel_degrees,
                     M, N, realizations, coord_span)


def _zero_hom(ring, M, N) -> HomModule:
    coord = Span(ring, N.ngens * M.ngens, [],
                 target_degrees=(0,) * (N.ngens * M.ngens))
    return HomModule(ring, (), (), (), M, N, [], coord)


def dual(M: FPModule, cap: int | None = None) -> HomModule:
    """Hom(M, A) with the realization table of functionals."""
    return hom_module(M, free_module(M.ring, 1), cap)


def double_dual(M: FPModule, cap: int | None = None):
    """The double dual and the natural evaluation map into it."""
    D = dual(M, cap)
    DD = dual(D, cap)
    ring = M.ring
    cols = []
    for j in range(M.ngens):
        vals = [[D.realization(c)[0, j] for c in range(D.ngens)]]
        coords = DD.coordinatize(PolyMatrix(ring, vals, 1, D.ngens))
        if coords is None:
            raise ToolkitError("evaluation functional escaped the double dual")
        cols.append(coords)
    rows = [[cols[j][i] for j in range(M.ngens)] for i in range(DD.ngens)]
    nat = ModuleMap(M, DD, rows, shift=0)
    return DD, nat


def tensor(M: FPModule, N: FPModule) -> FPModule:
    """Kronecker presentation of the tensor product."""
    ring = M.ring
    ring.check_same(N.ring)
    gM, gN = M.ngens, N.ngens
    degs = tuple(M.gen_degrees[i] + N.gen_degrees[j]
                 for i in range(gM) for j in range(gN))
    zero = ring.zero()
    rels = []
    rel_degs = []
    for row, rd in zip(M.relations, M.rel_degrees):
        for j in range(gN):
            out = [zero] * (gM * gN)
            for i in range(gM):
                out[i * gN + j] = row[i]
            rels.append(out)
            rel_degs.append(rd + N.gen_degrees[j])
    for row, rd in zip(N.relations, N.rel_degrees):
        for i in range(gM):
            out = [zero] * (gM * gN)
            for j in range(gN):
                out[i * gN + j] = row[j]
            rels.append(out)
            rel_degs.append(rd + M.gen_degrees[i])
    return FPModule(ring, degs, rels, rel_degs)


def exterior_power(M: FPModule, k: int) -> FPModule:
    """Presentation of the k-th exterior power on wedge monomials."""
    if k < 0:
        raise ToolkitError("negative exterior power")
    ring = M.ring
    if k == 0:
        return free_module(ring, 1)
    g = M.ngens
    if k > g:
        return FPModule(ring, (), ())
    basis = list(combinations(range(g), k))
    index = {b: n for n, b in enumerate(basis)}
    degs = tuple(sum(M.gen_degrees[i] for i in b) for b in basis)
    zero = ring.zero()
    rels = []
    rel_degs = []
    for row, rd in zip(M.relations, M.rel_degrees):
        for sub in combinations(range(g), k - 1):
            out = [zero] * len(basis)
            nonzero = False
            for i in range(g):
                if i in sub or not row[i].terms:
                    continue
                sign = (-1) ** sum(1 for s in sub if s < i)
                target = tuple(sorted(sub + (i,)))
                out[index[target]] = out[index[target]] + (row[i] if sign > 0 else -row[i])
                nonzero = True
            if nonzero:
                rels.append(out)
                rel_degs.append(rd + sum(M.gen_degrees[s] for s in sub))
    return FPModule(ring, degs, rels, rel_degs)


def symmetric_power(M: FPModule, k: int) -> FPModule:
    """Presentation of the k-th symmetric power on monomials of generators."""
    if k < 0:
        raise ToolkitError("negative symmetric power")
    ring = M.ring
    if k == 0:
        return free_module(ring, 1)
    g = M.ngens
    if g == 0:
        return FPModule(ring, (), ())
    basis = list(combinations_with_replacement(range(g), k))
    index = {b: n for n, b in enumerate(basis)}
    degs = tuple(sum(M.gen_degrees[i] for i in b) for b in basis)
    zero = ring.zero()
    rels = []
    rel_degs = []
    for row, rd in zip(M.relations, M.rel_degrees):
        for sub in combinations_with_replacement(range(g), k - 1):
            out = [zero] * len(basis)
            nonzero = False
            for i in range(g):
                if not row[i].terms:
                    continue
                target = tuple(sorted(sub + (i,)))
                out[index[target]] = out[index[target]] + row[i]
                nonzero = True
            if nonzero:
                rels.append(out)
                rel_degs.append(rd + sum(M.gen_degrees[s] for s in sub))
    return FPModule(ring, degs, rels, rel_degs)


def symmetric_multiply(M: FPModule, k1_coords, deg1: int, k2_coords, deg2: int):
    """Product S^a x S^b -> S^(a+b) on coordinate vectors over monomial bases."""
    g = M.ngens
    b1 = list(combinations_with_replacement(range(g), deg1))
    b2 = list(combinations_with_replacement(range(g), deg2))
    b3 = list(combinations_with_replacement(range(g), deg1 + deg2))
    index = {b: n for n, b in enumerate(b3)}
    out = [M.ring.zero()] * len(b3)
    for n1, m1 in enumerate(b1):
        c1 = k1_coords[n1]
        if not c1.terms:
            continue
        for n2, m2 in enumerate(b2):
            c2 = k2_coords[n2]
            if not c2.terms:
                continue
            target = tuple(sorted(m1 + m2))
            out[index[target]] = out[index[target]] + c1 * c2
    return tuple(out)


class SymAlgebra:
    """Symmetric algebra of a module: a polynomial extension modulo linear forms.

    One new variable per generator of E; the relation ideal is generated by
    the rows of E's presentation contracted against the new variables, each
    linear in them.
    """

    def __init__(self, base_ring: PolyRing, module: FPModule, ring: PolyRing,
                 t_names, relations: Ideal):
        self.base_ring = base_ring
        self.module = module
        self.ring = ring
        self.t_names = tuple(t_names)
        self.relations = relations

    @property
    def t_start(self) -> int:
        return self.ring.nvars - len(self.t_names)

    def t_var(self, i: int) -> Polynomial:
        return self.ring.gen(self.t_names[i])

    def t_degree(self, p: Polynomial):
        """Degree in the symmetric-power grading, None if mixed."""
        if not p.terms:
            return None
        start = self.t_start
        degs = {sum(e[start:]) for e in p.terms}
        return degs.pop() if len(degs) == 1 else None

    def quotient_ideal(self, I: Ideal) -> Ideal:
        """I together with the defining relations, as an ideal of the cover."""
        return Ideal(self.ring, tuple(I.gens) + tuple(self.relations.gens))

    def __repr__(self):
        return f"SymAlgebra({self.module} over {self.base_ring})"


def symmetric_algebra(E: FPModule) -> SymAlgebra:
    ring = E.ring
    if any(d < 0 for d in E.gen_degrees):
        raise ToolkitError("symmetric algebra needs nonnegative generator degrees")
    taken = set(ring.names)
    t_names = []
    for i in range(E.ngens):
        name = f"T{i + 1}"
        while name in taken:
            name = "_" + name
        taken.add(name)
        t_names.append(name)
    ext = ring.extend(t_names, E.gen_degrees)
    gens = []
    for row in E.relations:
        acc = ext.zero()
        for i, p in enumerate(row):
            if p.terms:
                acc = acc + p.convert(ext) * ext.gen(t_names[i])
        gens.append(acc)
    return SymAlgebra(ring, E, ext, t_names, Ideal(ext, gens))


def fitting_ideal(M: FPModule, j: int) -> Ideal:
    """Ideal of (ngens - j)-minors of the presentation matrix."""
    if j < 0:
        raise ToolkitError("negative Fitting index")
    k = M.ngens - j
    gens = minor_ideal_generators(M.presentation_matrix(), k) if k > 0 else [M.ring.one()]
    return Ideal(M.ring, gens)


def generic_rank(M: FPModule) -> int:
    """Rank at the generic point: generators minus presentation rank."""
    return M.ngens - bareiss_rank(M.presentation_matrix())


def isolated_singularity_check(M: FPModule, r: int, cap: int | None = None) -> bool:
    """True when M is free of rank r away from the irrelevant maximal ideal."""
    if r != generic_rank(M):
        raise ToolkitError(f"declared rank {r} differs from generic rank {generic_rank(M)}")
    if r > 0:
        below = fitting_ideal(M, r - 1)
        if any(g.terms for g in below.gens):
            return False
    return krull_dimension(fitting_ideal(M, r), cap) <= 0


def element_in_submodule(vectors, target, ring: PolyRing, ncomp: int, cap=None) -> bool:
    span = Span(ring, ncomp, [tuple(v) for v in vectors], cap=cap)
    return span.contains(tuple(target))


def scaled_generators(vectors, ring: PolyRing):
    """Products variable times generator: generators of m times the span."""
    out = []
    for v in vectors:
        for i in range(ring.nvars):
            x = ring.var(i)
            out.append(tuple(x * p for p in v))
    return out


def in_irrelevant_times_module(M: FPModule, coords, cap=None) -> bool:
    """Membership of an element of M in m*M (m = all positive-degree variables)."""
    gens = []
    ring = M.ring
    for i in range(M.ngens):
        unit = [ring.zero()] * M.ngens
        for v in range(ring.nvars):
            if ring.degrees[v] > 0:
                row = list(unit)
                row[i] = ring.var(v)
                gens.append(tuple(row))
    gens += [tuple(r) for r in M.relations]
    return element_in_submodule(gens, coords, ring, M.ngens, cap)


def submodule_saturation(vectors, h: Polynomial, ring: PolyRing, ncomp: int, cap=None):
    """Generators of {v : h^k v in span(vectors) for some k}."""
    from .ideals import _fresh_name
    name = _fresh_name("t", ring.names)
    ext = ring.extend([name], [1])
    tv = ext.gen(name)
    ext_vectors = [tuple(p.convert(ext) for p in v) for v in vectors]
    one_minus = ext.one() - tv * h.convert(ext)
    for i in range(ncomp):
        row = [ext.zero()] * ncomp
        row[i] = one_minus
        ext_vectors.append(tuple(row))
    # eliminate t: module order making t-monomials dominate in every component
    perm = (name,) + ring.names
    elim_ring = PolyRing(ring.field, perm, ring.order,
                         (1,) + ring.degrees, ring.max_degree)
    elim_vectors = [tuple(p.convert(elim_ring) for p in v) for v in ext_vectors]
    ctx = FreeCtx(elim_ring, ncomp, var_split=1)
    gb = buchberger_vec([ctx.from_polys(v) for v in elim_vectors], ctx, cap)
    out = []
    for g in gb:
        if all(e[0] == 0 for (_, e) in g.terms):
            out.append(tuple(p.convert(ring) for p in g.to_polys()))
    return out
