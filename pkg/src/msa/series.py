"""Degree-truncated power series in one or two variables.

Coefficients are GradedPoly values (typically over Z[b1..bN]).  Truncation
is by total variable exponent ``max_order``; coefficient terms of weight
above ``max_weight`` are discarded as well, so all arithmetic is exact
below the truncation and deterministic above it.
"""

from __future__ import annotations

from .rings import CoeffRing, GeneratorTable, GradedPoly, RingError


class SeriesError(Exception):
    pass


def _weight(poly: GradedPoly, m) -> int:
    # weight = second grading; b_n sits in bidegree (2n, n)
    w = 0
    for name, e in m:
        w += poly.table.spec(name).bidegree[1] * e
    return w


class TruncatedSeries:
    """Sparse series sum(coeffs[exps] * x^e0 * y^e1)."""

    __slots__ = ("ring", "table", "nvars", "max_order", "max_weight", "coeffs")

    def __init__(self, ring: CoeffRing, table: GeneratorTable, nvars: int,
                 max_order: int, max_weight: int, coeffs=None):
        if nvars not in (1, 2):
            raise SeriesError("1 or 2 variables supported")
        self.ring = ring
        self.table = table
        self.nvars = nvars
        self.max_order = max_order
        self.max_weight = max_weight
        self.coeffs: dict[tuple, GradedPoly] = {}
        if coeffs:
            for exps, poly in coeffs.items():
                self._set(exps, poly)

    # -- plumbing -----------------------------------------------------

    def _zero_poly(self):
        return GradedPoly.zero(self.ring, self.table)

    def _clip(self, poly: GradedPoly) -> GradedPoly:
        out = {}
        for m, c in poly.terms.items():
            if _weight(poly, m) <= self.max_weight:
                out[m] = c
        return GradedPoly(self.ring, self.table, out)

    def _set(self, exps: tuple, poly: GradedPoly):
        if len(exps) != self.nvars:
            raise SeriesError("exponent arity mismatch")
        if sum(exps) > self.max_order:
            return
        poly = self._clip(poly)
        if poly.is_zero():
            self.coeffs.pop(exps, None)
        else:
            self.coeffs[exps] = poly

    def like(self, coeffs=None) -> "TruncatedSeries":
        return TruncatedSeries(self.ring, self.table, self.nvars,
                               self.max_order, self.max_weight, coeffs)

    def coefficient(self, *exps) -> GradedPoly:
        return self.coeffs.get(tuple(exps), self._zero_poly())

    # -- constructors -------------------------------------------------

    @classmethod
    def variable(cls, ring, table, nvars, max_order, max_weight, index=0):
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        s = cls(ring, table, nvars, max_order, max_weight)
        s._set(exps, GradedPoly.const(ring, table, 1))
        return s

    # -- arithmetic ---------------------------------------------------

    def _check(self, other):
        if (self.nvars, self.max_order, self.max_weight) != \
                (other.nvars, other.max_order, other.max_weight):
            raise SeriesError("truncation mismatch")
        if self.ring != other.ring:
            raise SeriesError("ring mismatch")

    def __add__(self, other):
        self._check(other)
        out = self.like()
        for exps in set(self.coeffs) | set(other.coeffs):
            out._set(exps, self.coefficient(*exps) + other.coefficient(*exps))
        return out

    def __neg__(self):
        return self.like({e: -p for e, p in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, GradedPoly)):
            out = self.like()
            for exps, p in self.coeffs.items():
                out._set(exps, p * other)
            return out
        self._check(other)
        acc: dict[tuple, GradedPoly] = {}
        for e1, p1 in self.coeffs.items():
            for e2, p2 in other.coeffs.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                if sum(exps) > self.max_order:
                    continue
                prod = p1 * p2
                acc[exps] = acc.get(exps, self._zero_poly()) + prod
        return self.like(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self.like()
        out._set((0,) * self.nvars, GradedPoly.const(self.ring, self.table, 1))
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.nvars == other.nvars and self.coeffs == other.coeffs

    def map_ring(self, ring: CoeffRing) -> "TruncatedSeries":
        out = TruncatedSeries(ring, self.table, self.nvars,
                              self.max_order, self.max_weight)
        for exps, p in self.coeffs.items():
            out._set(exps, p.map_ring(ring))
        return out

    def __str__(self):
        names = "xy"
        parts = []
        for exps in sorted(self.coeffs, key=lambda e: (sum(e), e)):
            mono = "*".join(f"{names[i]}^{e}" for i, e in enumerate(exps) if e)
            body = f"({self.coeffs[exps]})"
            parts.append(f"{body}*{mono}" if mono else body)
        return " + ".join(parts) or "0"

    __repr__ = __str__


def series_compose(outer: TruncatedSeries,
                   inner: TruncatedSeries) -> TruncatedSeries:
    """outer(inner), exact up to the truncation order.

    ``outer`` must be univariate; ``inner`` may be uni- or bivariate but
    needs zero constant term.
    """
    if outer.nvars != 1:
        raise SeriesError("outer series must be univariate")
    zero_exps = (0,) * inner.nvars
    if zero_exps in inner.coeffs:
        raise SeriesError("inner series has nonzero constant term")
    out = inner.like()
    power = inner.like()
    power._set(zero_exps, GradedPoly.const(inner.ring, inner.table, 1))
    for k in range(outer.max_order + 1):
        c = outer.coefficient(k)
        if not c.is_zero():
            out = out + power * c
        power = power * inner
        if not power.coeffs:
            break
    return out


def series_invert(s: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse g of s: s(g(x)) = g(s(x)) = x up to truncation.

    Solved degree by degree; requires s = x + higher-order terms.
    """
    if s.nvars != 1:
        raise SeriesError("inverse requires a univariate series")
    if (0,) in s.coeffs:
        raise SeriesError("nonzero constant term")
    if s.coefficient(1).constant_term() != 1 or \
            len(s.coefficient(1).terms) != 1:
        raise SeriesError("leading coefficient must be 1")
    g = TruncatedSeries.variable(s.ring, s.table, 1, s.max_order, s.max_weight)
    for m in range(2, s.max_order + 1):
        # coefficient of x^m in s(g) with the current partial g (c_m = 0)
        err = series_compose(s, g).coefficient(m)
        g._set((m,), g.coefficient(m) - err)
    return g
