"""Groebner bases and the ideal operations built on them.

Everything reduces to three primitives: multivariate division (normal form),
Buchberger's algorithm with Gebauer-Moeller pair pruning, and leading-term
combinatorics.  Elimination, intersection, quotient, saturation, radical
membership and Krull dimension are the standard constructions on top.

A degree guard caps the total degree of every intermediate polynomial; when
exceeded the computation aborts with DegreeGuardExceeded rather than ever
returning a truncated answer.
"""

from __future__ import annotations

import heapq

from .errors import DegreeGuardExceeded, ToolkitError
from .rings import GREVLEX, Polynomial, PolyRing


def _fresh_name(base: str, taken) -> str:
    name = base
    k = 0
    while name in taken:
        name = f"{base}{k}"
        k += 1
    return name


def _divides(a, b) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _sub_exps(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _lcm_exps(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _guard(deg: int, cap: int | None):
    if cap is not None and deg > cap:
        raise DegreeGuardExceeded(deg, cap)


def reduce_full(p: Polynomial, basis, cap: int | None = None) -> Polynomial:
    """Full normal form of p modulo basis (every remainder term irreducible).

    Uses a lazy max-heap over the working support so each step finds the
    current top monomial without rescanning the whole polynomial.
    """
    ring = p.ring
    if not basis or not p.terms:
        return p
    char = ring.field.char
    key = ring.key
    lts = [(g.lead_exp(), g.lead_coeff(), g) for g in basis]
    work = dict(p.terms)
    heap = [(tuple(-k for k in key(e)), e) for e in work]
    heapq.heapify(heap)
    rem: dict = {}
    while heap:
        _, e = heapq.heappop(heap)
        c = work.pop(e, None)
        if c is None:
            continue
        for lte, ltc, g in lts:
            if _divides(lte, e):
                shift = _sub_exps(e, lte)
                factor = c * pow(ltc, -1, char) % char if char else c / ltc
                for ge, gc in g.terms.items():
                    if ge == lte:
                        continue
                    ne = tuple(x + y for x, y in zip(ge, shift))
                    _guard(sum(ne), cap)
                    fresh = ne not in work
                    if char:
                        v = (work.get(ne, 0) - factor * gc) % char
                    else:
                        v = work.get(ne, 0) - factor * gc
                    if v:
                        work[ne] = v
                        if fresh:
                            heapq.heappush(heap, (tuple(-k for k in key(ne)), ne))
                    else:
                        work.pop(ne, None)
                break
        else:
            rem[e] = c
    return Polynomial(ring, rem)


def normal_form(p: Polynomial, basis, ring: PolyRing | None = None,
                cap: int | None = None) -> Polynomial:
    """Division-algorithm remainder of p by the given polynomials."""
    basis = [g for g in basis if g.terms]
    if ring is None:
        ring = p.ring
    ring.check_same(p.ring)
    for g in basis:
        ring.check_same(g.ring)
    if cap is None:
        cap = ring.max_degree
    _guard(p.total_degree(), cap)
    return reduce_full(p, basis, cap)


def divide_exact(p: Polynomial, q: Polynomial) -> Polynomial:
    """Quotient p/q when q divides p exactly; raises otherwise."""
    ring = p.ring
    ring.check_same(q.ring)
    if not q.terms:
        raise ToolkitError("division by zero polynomial")
    char = ring.field.char
    lte, ltc = q.lead_exp(), q.lead_coeff()
    work = dict(p.terms)
    quot: dict = {}
    key = ring.key
    while work:
        e = max(work, key=key)
        c = work.pop(e)
        if not _divides(lte, e):
            raise ToolkitError("inexact polynomial division")
        shift = _sub_exps(e, lte)
        factor = c * pow(ltc, -1, char) % char if char else c / ltc
        quot[shift] = factor
        for ge, gc in q.terms.items():
            if ge == lte:
                continue
            ne = tuple(x + y for x, y in zip(ge, shift))
            if char:
                v = (work.get(ne, 0) - factor * gc) % char
            else:
                v = work.get(ne, 0) - factor * gc
            if v:
                work[ne] = v
            else:
                work.pop(ne, None)
    return Polynomial(ring, quot)


def _spoly(f: Polynomial, g: Polynomial, cap) -> Polynomial:
    lf, lg = f.lead_exp(), g.lead_exp()
    lcm = _lcm_exps(lf, lg)
    _guard(sum(lcm), cap)
    a = f.mul_term(_sub_exps(lcm, lf), 1)
    b = g.mul_term(_sub_exps(lcm, lg), 1)
    # both monic by construction of the basis
    return a - b


def buchberger(gens, ring: PolyRing, cap: int | None = None) -> list[Polynomial]:
    """Reduced Groebner basis of the given generators.

    Pair selection follows the normal strategy (smallest lcm in the ring
    order, ties by insertion index); Gebauer-Moeller pruning discards pairs
    covered by the product and chain criteria.  The output is monic,
    autoreduced and sorted, hence the unique reduced basis.
    """
    if cap is None:
        cap = ring.max_degree
    basis: list[Polynomial] = []
    for g in gens:
        _guard(g.total_degree(), cap)
        if g.terms:
            basis.append(g.monic())
    if not basis:
        return []
    if any(g.is_constant() for g in basis):
        return [ring.one()]

    work: list[Polynomial] = []
    heap: list[tuple] = []    # (lcm_key, i, j, lcm)
    live: set[tuple[int, int]] = set()

    def add_element(h: Polynomial):
        t = len(work)
        lth = h.lead_exp()
        cand = [(i, _lcm_exps(g.lead_exp(), lth)) for i, g in enumerate(work)]
        # Gebauer-Moeller M/F: among new pairs keep one per minimal lcm
        kept: list[tuple] = []
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
        # product criterion (valid in the ring case only)
        kept = [(i, l) for (i, l) in kept
                if l != tuple(a + b for a, b in zip(work[i].lead_exp(), lth))]
        # Gebauer-Moeller B: retire old pairs whose lcm the new element covers
        for (i, j) in list(live):
            l = _lcm_exps(work[i].lead_exp(), work[j].lead_exp())
            if _divides(lth, l) and _lcm_exps(work[i].lead_exp(), lth) != l \
                    and _lcm_exps(work[j].lead_exp(), lth) != l:
                live.discard((i, j))
        for i, l in kept:
            heapq.heappush(heap, (ring.key(l), i, t, l))
            live.add((i, t))
        work.append(h)

    for g in basis:
        g = reduce_full(g, work, cap)
        if g.terms:
            add_element(g.monic())

    while heap:
        _, i, j, _l = heapq.heappop(heap)
        if (i, j) not in live:
            continue
        live.discard((i, j))
        s = _spoly(work[i], work[j], cap)
        s = reduce_full(s, work, cap)
        if s.terms:
            if s.is_constant():
                return [ring.one()]
            add_element(s.monic())

    return autoreduce(work, cap)


def autoreduce(polys, cap=None) -> list[Polynomial]:
    """Interreduce to the unique reduced, monic, sorted basis."""
    polys = [p for p in polys if p.terms]
    if not polys:
        return []
    ring = polys[0].ring
    # drop elements whose leading term is divisible by another's
    polys = sorted(polys, key=lambda p: ring.key(p.lead_exp()))
    minimal: list[Polynomial] = []
    for p in polys:
        if not any(_divides(q.lead_exp(), p.lead_exp()) for q in minimal):
            minimal.append(p)
    reduced = []
    for k, p in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        r = reduce_full(p, others, cap)
        if r.terms:
            reduced.append(r.monic())
    reduced.sort(key=lambda p: ring.key(p.lead_exp()))
    return reduced


class Ideal:
    """An ideal given by generators, with a write-once reduced-basis cache."""

    __slots__ = ("ring", "gens", "_basis")

    def __init__(self, ring: PolyRing, gens, basis=None):
        self.ring = ring
        self.gens = tuple(gens)
        for g in self.gens:
            ring.check_same(g.ring)
        self._basis = tuple(basis) if basis is not None else None

    def basis(self, cap: int | None = None) -> tuple[Polynomial, ...]:
        if self._basis is None:
            self._basis = tuple(buchberger(list(self.gens), self.ring, cap))
        return self._basis

    def has_cached_basis(self) -> bool:
        return self._basis is not None

    def is_zero(self) -> bool:
        return all(not g.terms for g in self.gens)

    def is_unit(self) -> bool:
        return any(g.is_constant() and g.terms for g in self.basis())

    def equals(self, other: "Ideal", cap=None) -> bool:
        self.ring.check_same(other.ring)
        return (all(ideal_membership(g, self, cap) for g in other.gens) and
                all(ideal_membership(g, other, cap) for g in self.gens))

    def contains(self, other: "Ideal", cap=None) -> bool:
        return all(ideal_membership(g, self, cap) for g in other.gens)

    def __repr__(self):
        inside = ", ".join(str(g) for g in self.gens) or "0"
        return f"Ideal({inside})"


def groebner(I: Ideal, cap: int | None = None) -> Ideal:
    """Return an equal ideal carrying its reduced Groebner basis."""
    basis = I.basis(cap)
    return Ideal(I.ring, I.gens, basis)


def ideal_membership(p: Polynomial, I: Ideal, cap: int | None = None) -> bool:
    I.ring.check_same(p.ring)
    return not normal_form(p, I.basis(cap), I.ring, cap).terms


def eliminate(I: Ideal, drop_names, cap: int | None = None) -> Ideal:
    """Intersect I with the subring on the kept variables.

    Internally switches to a block order putting the dropped variables in a
    leading block; the result lives in the restricted ring carrying the
    caller's order.
    """
    ring = I.ring
    dropset = set(drop_names)
    unknown = dropset - set(ring.names)
    if unknown:
        raise ToolkitError(f"cannot drop unknown variables {sorted(unknown)}")
    if not dropset:
        return Ideal(ring, I.gens, I._basis)
    drop = [n for n in ring.names if n in dropset]
    keep = [n for n in ring.names if n not in dropset]
    perm = tuple(drop) + tuple(keep)
    degs = tuple(ring.degrees[ring._index[n]] for n in perm)
    elim_ring = PolyRing(ring.field, perm, ("block", len(drop)), degs, ring.max_degree)
    gens = [g.convert(elim_ring) for g in I.gens]
    basis = buchberger(gens, elim_ring, cap)
    keep_idx = set(range(len(drop), len(perm)))
    out_ring = ring.restrict(keep)
    kept = [g.convert(out_ring) for g in basis
            if g.support_vars() <= keep_idx or g.is_constant()]
    # the block order restricted to the kept suffix is grevlex, so the kept
    # polynomials are a reduced basis exactly when the caller uses grevlex
    cached = kept if out_ring.order == GREVLEX else None
    return Ideal(out_ring, kept, cached)


def _extended_ring(ring: PolyRing, base: str) -> tuple[PolyRing, str]:
    name = _fresh_name(base, ring.names)
    ext = PolyRing(ring.field, (name,) + ring.names, ring.order,
                   (1,) + ring.degrees, ring.max_degree)
    return ext, name


def ideal_intersect(I: Ideal, J: Ideal, cap: int | None = None) -> Ideal:
    """I ∩ J via the one-auxiliary-variable trick."""
    ring = I.ring
    ring.check_same(J.ring)
    ext, t = _extended_ring(ring, "t")
    tv = ext.gen(t)
    gens = [tv * g.convert(ext) for g in I.gens]
    gens += [(ext.one() - tv) * g.convert(ext) for g in J.gens]
    elim = eliminate(Ideal(ext, gens), [t], cap)
    out = [g.convert(ring) for g in elim.gens]
    return Ideal(ring, out, out if ring.order == GREVLEX and elim._basis is not None else None)


def ideal_quotient(I: Ideal, f: Polynomial, cap: int | None = None) -> Ideal:
    """The colon ideal I : f, computed as (I ∩ (f)) / f."""
    ring = I.ring
    ring.check_same(f.ring)
    if not f.terms:
        raise ToolkitError("quotient by the zero polynomial")
    inter = ideal_intersect(I, Ideal(ring, [f]), cap)
    return Ideal(ring, [divide_exact(g, f) for g in inter.gens])


def saturate(I: Ideal, J: Ideal, cap: int | None = None) -> Ideal:
    """I : J^infinity, one inverse-variable elimination per generator of J."""
    ring = I.ring
    ring.check_same(J.ring)
    nonzero = [g for g in J.gens if g.terms]
    if not nonzero:
        raise ToolkitError("saturation by the zero ideal")
    result: Ideal | None = None
    for g in nonzero:
        single = _saturate_element(I, g, cap)
        result = single if result is None else ideal_intersect(result, single, cap)
    return result


def _saturate_element(I: Ideal, f: Polynomial, cap) -> Ideal:
    ring = I.ring
    ext, t = _extended_ring(ring, "t")
    tv = ext.gen(t)
    gens = [g.convert(ext) for g in I.gens]
    gens.append(ext.one() - tv * f.convert(ext))
    elim = eliminate(Ideal(ext, gens), [t], cap)
    out = [g.convert(ring) for g in elim.gens]
    return Ideal(ring, out, out if ring.order == GREVLEX and elim._basis is not None else None)


def radical_member(f: Polynomial, I: Ideal, cap: int | None = None) -> bool:
    """True when f lies in the radical of I (Rabinowitsch trick)."""
    ring = I.ring
    ring.check_same(f.ring)
    if not f.terms:
        return True
    if ideal_membership(f, I, cap):
        return True
    ext, t = _extended_ring(ring, "t")
    tv = ext.gen(t)
    gens = [g.convert(ext) for g in I.gens]
    gens.append(ext.one() - tv * f.convert(ext))
    basis = buchberger(gens, ext, cap)
    return basis == [ext.one()]


def leading_term_supports(I: Ideal, cap: int | None = None) -> list[frozenset[int]]:
    """Minimal squarefree supports of the leading-term ideal, grevlex order.

    The ring is re-ordered to grevlex internally: for inhomogeneous ideals the
    dimension-from-leading-terms argument needs a degree-compatible order.
    """
    ring = I.ring
    if ring.order != GREVLEX:
        gr = ring.with_order(GREVLEX)
        basis = buchberger([g.convert(gr) for g in I.gens], gr, cap)
    else:
        basis = I.basis(cap)
    supports = []
    for g in basis:
        s = frozenset(i for i, e in enumerate(g.lead_exp()) if e)
        supports.append(s)
    minimal = []
    for s in sorted(set(supports), key=lambda s: (len(s), sorted(s))):
        if not any(t <= s for t in minimal):
            minimal.append(s)
    return minimal


def _min_cover(supports: tuple[frozenset[int], ...], memo: dict) -> int:
    if not supports:
        return 0
    key = supports
    if key in memo:
        return memo[key]
    s = min(supports, key=len)
    best = None
    for v in sorted(s):
        rest = tuple(t for t in supports if v not in t)
        c = 1 + _min_cover(rest, memo)
        if best is None or c < best:
            best = c
    memo[key] = best
    return best


def krull_dimension(I: Ideal, cap: int | None = None) -> int:
    """Krull dimension of the affine quotient ring; -1 for the unit ideal.

    Standard independent-set computation on the leading-term ideal: the
    dimension is the largest number of variables meeting no leading support,
    i.e. nvars minus a minimum vertex cover of the support hypergraph.
    """
    supports = leading_term_supports(I, cap)
    if frozenset() in supports:
        return -1
    return I.ring.nvars - _min_cover(tuple(supports), {})


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    I.ring.check_same(J.ring)
    return Ideal(I.ring, I.gens + J.gens)
