"""Exact sparse bigraded polynomial arithmetic.

Polynomials live over a generator table whose entries carry a bidegree
(p, q).  Generators of odd first degree anticommute (Koszul convention);
generators may carry an exponent cap with a rewrite rule, which is applied
during normalization.  Coefficients are exact: plain integers, or canonical
representatives mod m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

# A monomial is a tuple of (generator name, exponent) pairs, sorted by the
# generator sort key, with no zero exponents.
Monomial = tuple

ONE: Monomial = ()

_REWRITE_GUARD = 64


class RingError(Exception):
    pass


@dataclass(frozen=True)
class CoeffRing:
    """Integers, or integers mod a positive modulus."""

    modulus: Optional[int] = None

    def __post_init__(self):
        if self.modulus is not None and self.modulus <= 0:
            raise RingError("modulus must be positive")

    def normalize(self, c: int) -> int:
        return c if self.modulus is None else c % self.modulus

    def __str__(self):
        return "Z" if self.modulus is None else f"Z/{self.modulus}"


ZZ = CoeffRing()


def Zmod(m: int) -> CoeffRing:
    return CoeffRing(m)


@dataclass(frozen=True)
class GeneratorSpec:
    """A named generator with a bidegree and an optional exponent cap.

    ``sort_key`` fixes the global generator order (rho < tau < tau_i < xi_i
    < b_n < c_ij); ``parity`` is the first degree mod 2 and controls Koszul
    signs.  When ``cap`` is set, any exponent >= cap is rewritten through
    ``rewrite`` (a polynomial equal to generator**cap).
    """

    name: str
    bidegree: tuple
    sort_key: tuple
    cap: Optional[int] = None

    @property
    def parity(self) -> int:
        return self.bidegree[0] & 1


class GeneratorTable:
    """Ordered registry of generators; rewrite rules are attached per name."""

    def __init__(self, specs: Iterable[GeneratorSpec] = ()):
        self._specs: dict[str, GeneratorSpec] = {}
        self._rewrites: dict[str, "GradedPoly"] = {}
        for s in specs:
            self.add(s)

    def add(self, spec: GeneratorSpec) -> GeneratorSpec:
        if spec.name in self._specs:
            raise RingError(f"duplicate generator {spec.name!r}")
        self._specs[spec.name] = spec
        return spec

    def set_rewrite(self, name: str, poly: "GradedPoly"):
        self.spec(name)  # raises on unknown name
        self._rewrites[name] = poly

    def spec(self, name: str) -> GeneratorSpec:
        try:
            return self._specs[name]
        except KeyError:
            raise RingError(f"unknown generator {name!r}") from None

    def rewrite(self, name: str) -> Optional["GradedPoly"]:
        return self._rewrites.get(name)

    def names(self):
        return list(self._specs)

    def __contains__(self, name: str) -> bool:
        return name in self._specs

    def sort_key(self, name: str):
        return self.spec(name).sort_key


def monomial_bidegree(table: GeneratorTable, m: Monomial) -> tuple:
    p = q = 0
    for name, e in m:
        gp, gq = table.spec(name).bidegree
        p += gp * e
        q += gq * e
    return (p, q)


def _grlex_key(table: GeneratorTable, m: Monomial):
    deg = sum(e for _, e in m)
    return (deg, tuple((table.sort_key(n), -e) for n, e in m))


class GradedPoly:
    """Sparse polynomial in normal order over a generator table."""

    __slots__ = ("ring", "table", "terms")

    def __init__(self, ring: CoeffRing, table: GeneratorTable, terms=None):
        self.ring = ring
        self.table = table
        self.terms: dict[Monomial, int] = terms or {}

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, ring, table):
        return cls(ring, table)

    @classmethod
    def const(cls, ring, table, c: int):
        c = ring.normalize(c)
        return cls(ring, table, {ONE: c} if c else {})

    @classmethod
    def gen(cls, ring, table, name: str, exp: int = 1, coeff: int = 1):
        return normal_order(ring, table, [(name, exp)], coeff)

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, m: Monomial) -> int:
        return self.terms.get(m, 0)

    def constant_term(self) -> int:
        return self.terms.get(ONE, 0)

    def is_unit(self) -> bool:
        """A single constant term that is invertible mod the modulus."""
        if set(self.terms) != {ONE}:
            return False
        c = self.terms[ONE]
        return self.ring.modulus == 0 and c in (1, -1) or \
            self.ring.modulus != 0 and math.gcd(c, self.ring.modulus) == 1

    def inverse(self) -> "GradedPoly":
        if not self.is_unit():
            raise RingError("not a unit")
        c = self.terms[ONE]
        if self.ring.modulus == 0:
            return GradedPoly.const(self.ring, self.table, c)
        return GradedPoly.const(self.ring, self.table,
                                pow(c, -1, self.ring.modulus))

    def iter_terms(self):
        """Deterministic (monomial, coefficient) iteration in graded-lex order."""
        for m in sorted(self.terms, key=lambda m: _grlex_key(self.table, m)):
            yield m, self.terms[m]

    def bidegree(self):
        """Common bidegree of all terms, or None if zero/inhomogeneous."""
        deg = None
        for m in self.terms:
            d = monomial_bidegree(self.table, m)
            if deg is None:
                deg = d
            elif d != deg:
                return None
        return deg

    def homogeneous_components(self) -> dict:
        comps: dict[tuple, GradedPoly] = {}
        for m, c in self.terms.items():
            d = monomial_bidegree(self.table, m)
            comps.setdefault(d, GradedPoly(self.ring, self.table)).terms[m] = c
        return comps

    def linear_part(self) -> "GradedPoly":
        """Sum of terms of total generator exponent 1."""
        out = {}
        for m, c in self.terms.items():
            if sum(e for _, e in m) == 1:
                out[m] = c
        return GradedPoly(self.ring, self.table, out)

    # -- arithmetic ---------------------------------------------------

    def _check(self, other: "GradedPoly"):
        if self.ring != other.ring or self.table is not other.table:
            raise RingError("ring or generator table mismatch")

    def __add__(self, other):
        if isinstance(other, int):
            other = GradedPoly.const(self.ring, self.table, other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = self.ring.normalize(out.get(m, 0) + c)
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return GradedPoly(self.ring, self.table, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedPoly(
            self.ring, self.table,
            {m: self.ring.normalize(-c) for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = GradedPoly.const(self.ring, self.table, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            out = {}
            for m, c in self.terms.items():
                s = self.ring.normalize(c * other)
                if s:
                    out[m] = s
            return GradedPoly(self.ring, self.table, out)
        if not isinstance(other, GradedPoly):
            return NotImplemented
        self._check(other)
        acc = GradedPoly(self.ring, self.table)
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                acc = acc + _mul_monomials(self.ring, self.table, m1, c1, m2, c2)
        return acc

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise RingError("negative exponent")
        out = GradedPoly.const(self.ring, self.table, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = GradedPoly.const(self.ring, self.table, other)
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- maps ---------------------------------------------------------

    def map_ring(self, ring: CoeffRing) -> "GradedPoly":
        out = {}
        for m, c in self.terms.items():
            s = ring.normalize(c)
            if s:
                out[m] = s
        return GradedPoly(ring, self.table, out)

    def evaluate(self, assign: Callable[[str], "GradedPoly"],
                 ring: CoeffRing, table: GeneratorTable) -> "GradedPoly":
        """Ring-map image under generator -> polynomial substitution."""
        acc = GradedPoly.zero(ring, table)
        for m, c in self.terms.items():
            t = GradedPoly.const(ring, table, c)
            for name, e in m:
                t = t * (assign(name) ** e)
            acc = acc + t
        return acc

    # -- serialization ------------------------------------------------

    def to_obj(self) -> list:
        return [{"coefficient": str(c), "monomial": {n: e for n, e in m}}
                for m, c in self.iter_terms()]

    @classmethod
    def from_obj(cls, ring, table, obj) -> "GradedPoly":
        acc = cls.zero(ring, table)
        for t in obj:
            word = list(t["monomial"].items())
            acc = acc + normal_order(ring, table, word, int(t["coefficient"]))
        return acc

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.iter_terms():
            factors = []
            if c != 1 or m == ONE:
                factors.append(str(c))
            for n, e in m:
                factors.append(n if e == 1 else f"{n}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    __repr__ = __str__


def normal_order(ring: CoeffRing, table: GeneratorTable,
                 word, coeff: int = 1, _depth: int = 0) -> GradedPoly:
    """Canonical form of coeff * product(gen**exp for gen, exp in word).

    Sorting odd-parity generators past each other contributes Koszul signs;
    exponent caps trigger the table's rewrite rules until a fixed point.
    """
    if _depth > _REWRITE_GUARD:
        raise RingError("rewrite rules did not terminate")
    sign = 0
    keyed = []
    for name, e in word:
        spec = table.spec(name)
        if e < 0:
            raise RingError("negative exponent")
        if e:
            # block parity: g**e is odd iff both g and e are odd
            keyed.append([spec.sort_key, name, e, spec.parity * (e & 1)])
    # insertion sort, counting transpositions of odd-parity pairs
    for i in range(1, len(keyed)):
        j = i
        while j > 0 and keyed[j - 1][0] > keyed[j][0]:
            sign += keyed[j - 1][3] * keyed[j][3]
            keyed[j - 1], keyed[j] = keyed[j], keyed[j - 1]
            j -= 1
    merged: list = []
    for key, name, e, par in keyed:
        if merged and merged[-1][0] == name:
            merged[-1][1] += e
        else:
            merged.append([name, e])
    coeff = ring.normalize(-coeff if sign & 1 else coeff)
    if coeff == 0:
        return GradedPoly.zero(ring, table)
    # apply exponent caps
    for idx, (name, e) in enumerate(merged):
        spec = table.spec(name)
        if spec.cap is not None and e >= spec.cap:
            rewrite = table.rewrite(name)
            if rewrite is None:
                raise RingError(f"no rewrite rule for {name}^{spec.cap}")
            rest = merged[:idx] + ([[name, e - spec.cap]] if e > spec.cap else []) \
                + merged[idx + 1:]
            rest_poly = normal_order(ring, table,
                                     [(n, k) for n, k in rest], coeff,
                                     _depth + 1)
            acc = GradedPoly.zero(ring, table)
            for m1, c1 in rewrite.terms.items():
                for m2, c2 in rest_poly.terms.items():
                    acc = acc + _mul_monomials(ring, table, m1, c1, m2, c2,
                                               _depth + 1)
            return acc
    mono = tuple((n, e) for n, e in merged)
    return GradedPoly(ring, table, {mono: coeff})


def _mul_monomials(ring, table, m1: Monomial, c1: int, m2: Monomial, c2: int,
                   _depth: int = 0) -> GradedPoly:
    return normal_order(ring, table, list(m1) + list(m2), c1 * c2, _depth)
