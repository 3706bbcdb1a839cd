"""Exact multivariate polynomial arithmetic over QQ and GF(p).

Polynomials are sparse dictionaries mapping exponent tuples to nonzero
coefficients.  A ring fixes the coefficient field, the variable names, a
monomial order and a grading weight per variable.  All values are immutable
after construction; every operation returns a fresh value.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

from .errors import RingMismatchError, ToolkitError

Exponents = tuple[int, ...]


class RationalField:
    """The field QQ, coefficients stored as Fraction in lowest terms."""

    char = 0

    def normalize(self, c):
        if isinstance(c, Fraction):
            return c
        return Fraction(c)

    def __repr__(self):
        return "QQ"

    def __str__(self):
        return "QQ"


class PrimeField:
    """GF(p) for a prime p < 2^31, residues stored in [0, p)."""

    def __init__(self, p: int):
        if p < 2 or p >= 2**31:
            raise ToolkitError(f"prime out of range: {p}")
        for d in range(2, int(p**0.5) + 1):
            if p % d == 0:
                raise ToolkitError(f"{p} is not prime")
        self.char = p

    def normalize(self, c):
        if isinstance(c, Fraction):
            den = c.denominator % self.char
            if den == 0:
                raise ToolkitError(f"denominator {c.denominator} not invertible mod {self.char}")
            return c.numerator * pow(den, -1, self.char) % self.char
        return c % self.char

    def __repr__(self):
        return f"GF({self.char})"

    def __str__(self):
        return f"GF({self.char})"


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_by_char(char: int):
    return QQ if char == 0 else GF(char)


# Monomial orders are tagged tuples:
#   ("grevlex",)        graded reverse lexicographic
#   ("lex",)            lexicographic
#   ("block", k)        eliminate the first k variables: grevlex on the
#                       leading block, ties broken by grevlex on the rest
GREVLEX = ("grevlex",)
LEX = ("lex",)


def _grevlex_key(exps: Exponents) -> tuple[int, ...]:
    return (sum(exps),) + tuple(-e for e in reversed(exps))


def make_order_key(order: tuple, nvars: int):
    """Return a function mapping exponent tuples to flat integer key tuples.

    Larger key means larger monomial.  Keys of equal-length monomials compare
    elementwise, so elementwise negation inverts the order (used by heaps).
    """
    if order[0] == "grevlex":
        return _grevlex_key
    if order[0] == "lex":
        return lambda exps: exps
    if order[0] == "block":
        k = order[1]
        if not 0 <= k <= nvars:
            raise ToolkitError(f"block size {k} out of range")

        def key(exps: Exponents):
            return _grevlex_key(exps[:k]) + _grevlex_key(exps[k:])

        return key
    raise ToolkitError(f"unknown monomial order {order!r}")


class PolyRing:
    """A polynomial ring: field, ordered variables, monomial order, grading."""

    def __init__(self, field, names, order=GREVLEX, degrees=None, max_degree=40):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ToolkitError("variable names must be unique")
        self.field = field
        self.names = names
        self.nvars = len(names)
        self.order = tuple(order)
        self.degrees = tuple(degrees) if degrees is not None else (1,) * self.nvars
        if len(self.degrees) != self.nvars or any(d < 0 for d in self.degrees):
            raise ToolkitError("grading weights must be one nonnegative integer per variable")
        self.max_degree = max_degree
        self.key = make_order_key(self.order, self.nvars)
        self._index = {n: i for i, n in enumerate(names)}
        self._zero_exp = (0,) * self.nvars

    # -- constructors ------------------------------------------------------
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = self.field.normalize(c)
        if not c:
            return Polynomial(self, {})
        return Polynomial(self, {self._zero_exp: c})

    def var(self, i: int) -> "Polynomial":
        exp = [0] * self.nvars
        exp[i] = 1
        return Polynomial(self, {tuple(exp): self.field.normalize(1)})

    def gen(self, name: str) -> "Polynomial":
        return self.var(self._index[name])

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def from_terms(self, terms: dict) -> "Polynomial":
        clean = {}
        for exp, c in terms.items():
            c = self.field.normalize(c)
            if c:
                clean[tuple(exp)] = c
        return Polynomial(self, clean)

    # -- derived rings -----------------------------------------------------
    def with_order(self, order) -> "PolyRing":
        return PolyRing(self.field, self.names, order, self.degrees, self.max_degree)

    def extend(self, names, degrees=None) -> "PolyRing":
        extra = tuple(names)
        degs = tuple(degrees) if degrees is not None else (1,) * len(extra)
        return PolyRing(self.field, self.names + extra, self.order,
                        self.degrees + degs, self.max_degree)

    def restrict(self, keep_names) -> "PolyRing":
        keep = tuple(keep_names)
        degs = tuple(self.degrees[self._index[n]] for n in keep)
        return PolyRing(self.field, keep, self.order, degs, self.max_degree)

    def same_ring(self, other: "PolyRing") -> bool:
        return (self.field is other.field or
                getattr(self.field, "char", None) == getattr(other.field, "char", None)) \
            and self.names == other.names and self.order == other.order

    def check_same(self, other: "PolyRing"):
        if not self.same_ring(other):
            raise RingMismatchError(f"ring mismatch: {self} vs {other}")

    def weighted_degree(self, exps: Exponents) -> int:
        return sum(e * w for e, w in zip(exps, self.degrees))

    def parse(self, text: str) -> "Polynomial":
        return parse_poly(self, text)

    def __repr__(self):
        return f"{self.field}[{', '.join(self.names)}]"


class Polynomial:
    """Sparse polynomial; term iteration is descending in the ring's order."""

    __slots__ = ("ring", "terms", "_lt", "_sorted")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._lt = None
        self._sorted = None

    # -- basic queries -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def lead_exp(self) -> Exponents:
        if self._lt is None:
            if not self.terms:
                raise ToolkitError("zero polynomial has no leading term")
            self._lt = max(self.terms, key=self.ring.key)
        return self._lt

    def lead_coeff(self):
        return self.terms[self.lead_exp()]

    def sorted_terms(self) -> list[tuple[Exponents, object]]:
        if self._sorted is None:
            self._sorted = [(e, self.terms[e])
                            for e in sorted(self.terms, key=self.ring.key, reverse=True)]
        return self._sorted

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def weighted_degree(self) -> int:
        if not self.terms:
            return -1
        return max(self.ring.weighted_degree(e) for e in self.terms)

    def homogeneous_degree(self):
        """Weighted degree if homogeneous for the ring grading, else None.

        The zero polynomial is homogeneous of every degree; returns None too,
        callers treat zero specially.
        """
        if not self.terms:
            return None
        degs = {self.ring.weighted_degree(e) for e in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self, degree=None) -> bool:
        if not self.terms:
            return True
        d = self.homogeneous_degree()
        return d is not None and (degree is None or d == degree)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        return self.terms.get(self.ring._zero_exp, self.ring.field.normalize(0))

    def support_vars(self) -> set[int]:
        out: set[int] = set()
        for e in self.terms:
            for i, ei in enumerate(e):
                if ei:
                    out.add(i)
        return out

    # -- arithmetic --------------------------------------------------------
    def _binop_add(self, other, sign):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        self.ring.check_same(other.ring)
        p = self.ring.field.char
        out = dict(self.terms)
        if p:
            for e, c in other.terms.items():
                v = (out.get(e, 0) + sign * c) % p
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        else:
            for e, c in other.terms.items():
                v = out.get(e, 0) + (c if sign == 1 else -c)
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Polynomial(self.ring, out)

    def __add__(self, other):
        return self._binop_add(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop_add(other, -1)

    def __rsub__(self, other):
        return (-self)._binop_add(other, 1)

    def __neg__(self):
        p = self.ring.field.char
        if p:
            return Polynomial(self.ring, {e: (-c) % p for e, c in self.terms.items()})
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = self.ring.field.normalize(other)
            if not c:
                return self.ring.zero()
            p = self.ring.field.char
            if p:
                return Polynomial(self.ring, {e: (v * c) % p for e, v in self.terms.items()})
            return Polynomial(self.ring, {e: v * c for e, v in self.terms.items()})
        self.ring.check_same(other.ring)
        p = self.ring.field.char
        out: dict = {}
        if p:
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    v = (out.get(e, 0) + c1 * c2) % p
                    if v:
                        out[e] = v
                    else:
                        out.pop(e, None)
        else:
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    v = out.get(e, 0) + c1 * c2
                    if v:
                        out[e] = v
                    else:
                        out.pop(e, None)
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ToolkitError("negative polynomial power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def mul_term(self, exps: Exponents, coeff) -> "Polynomial":
        p = self.ring.field.char
        if p:
            return Polynomial(self.ring, {
                tuple(a + b for a, b in zip(e, exps)): (c * coeff) % p
                for e, c in self.terms.items()})
        return Polynomial(self.ring, {
            tuple(a + b for a, b in zip(e, exps)): c * coeff
            for e, c in self.terms.items()})

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.lead_coeff()
        p = self.ring.field.char
        if p:
            inv = pow(lc, -1, p)
            return Polynomial(self.ring, {e: (c * inv) % p for e, c in self.terms.items()})
        return Polynomial(self.ring, {e: c / lc for e, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring.same_ring(other.ring) and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring.names, tuple(sorted(self.terms.items()))))

    # -- ring maps ---------------------------------------------------------
    def convert(self, dst: PolyRing, name_map=None) -> "Polynomial":
        """Reinterpret in dst, matching variables by name.

        Every variable appearing in a term must exist in dst.  Coefficients
        are re-normalized, so this also implements QQ -> GF(p) reduction.
        """
        if name_map is None:
            name_map = {n: n for n in self.ring.names}
        idx = []
        for n in self.ring.names:
            target = name_map.get(n, n)
            idx.append(dst._index.get(target, -1))
        out: dict = {}
        for e, c in self.terms.items():
            ne = [0] * dst.nvars
            for i, ei in enumerate(e):
                if ei:
                    if idx[i] < 0:
                        raise ToolkitError(
                            f"variable {self.ring.names[i]} not present in target ring")
                    ne[idx[i]] = ei
            c = dst.field.normalize(c)
            if c:
                out[tuple(ne)] = c
        return Polynomial(dst, out)

    def subs(self, dst: PolyRing, images: list["Polynomial"]) -> "Polynomial":
        """Apply the ring map sending variable i to images[i]."""
        if len(images) != self.ring.nvars:
            raise ToolkitError("one image per variable required")
        acc = dst.zero()
        pow_cache: dict[tuple[int, int], Polynomial] = {}
        for e, c in self.terms.items():
            term = dst.const(c if self.ring.field.char == 0 else int(c))
            for i, ei in enumerate(e):
                if ei:
                    key = (i, ei)
                    if key not in pow_cache:
                        pow_cache[key] = images[i] ** ei
                    term = term * pow_cache[key]
            acc = acc + term
        return acc

    # -- text form ---------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, (e, c) in enumerate(self.sorted_terms()):
            neg = (c < 0) if self.ring.field.char == 0 else False
            mag = -c if neg else c
            mono = "*".join(
                f"{self.ring.names[i]}^{ei}" if ei > 1 else self.ring.names[i]
                for i, ei in enumerate(e) if ei)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if k == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"<{self} in {self.ring}>"


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
                    r"|(?P<op>[-+*^()]))")


def parse_poly(ring: PolyRing, text: str) -> Polynomial:
    """Parse the canonical text form, e.g. ``x0^2*x1 - 3*x2``.

    Accepts optional ``*`` between a number and a variable and supports
    rational coefficients written ``a/b``.  Parentheses are not part of the
    exchange format and are rejected.
    """
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ToolkitError(f"cannot tokenize polynomial at: {text[pos:]!r}")
            break
        pos = m.end()
        if m.group("num"):
            tokens.append(("num", m.group("num")))
        elif m.group("name"):
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
    acc: dict[Exponents, Fraction] = {}
    i = 0
    n = len(tokens)
    first = True
    while i < n:
        sign = 1
        while i < n and tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        if i >= n:
            if not first:
                raise ToolkitError("dangling sign in polynomial")
            break
        coeff = Fraction(sign)
        exps = [0] * ring.nvars
        saw_factor = False
        while i < n:
            kind, val = tokens[i]
            if kind == "num":
                coeff *= Fraction(val)
                i += 1
            elif kind == "name":
                if val not in ring._index:
                    raise ToolkitError(f"unknown variable {val!r}")
                vi = ring._index[val]
                i += 1
                power = 1
                if i < n and tokens[i] == ("op", "^"):
                    i += 1
                    if i >= n or tokens[i][0] != "num" or "/" in tokens[i][1]:
                        raise ToolkitError("exponent must be an integer")
                    power = int(tokens[i][1])
                    i += 1
                exps[vi] += power
            elif (kind, val) == ("op", "*"):
                i += 1
                continue
            elif val in "+-":
                break
            else:
                raise ToolkitError(f"unexpected token {val!r} in polynomial")
            saw_factor = True
        if not saw_factor:
            raise ToolkitError("empty term in polynomial")
        e = tuple(exps)
        acc[e] = acc.get(e, Fraction(0)) + coeff
        first = False
    return ring.from_terms(acc)
