"""Universal formal group law over Z[b1..bN] and Lazard-ring machinery.

The exponential exp(x) = x + sum(b_n x^{n+1}) identifies the universal
formal group law F(x, y) = exp(log x + log y); its coefficients c_ij
generate the image of the Lazard ring inside Z[b].  On top of this sit the
ell-series, typicality tests, the Lazard index rule, the integer-lattice
search for adequate generator sets, and the mod-ell subring with its
retraction.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field

from .intlinalg import (LinAlgError, ext_gcd_list, kernel_mod_lattice,
                        modp_solve, solve_integer)
from .rings import (ZZ, CoeffRing, GeneratorSpec, GeneratorTable, GradedPoly,
                    Zmod)
from .series import TruncatedSeries, series_compose, series_invert

DEFAULT_WEIGHT_BOUND = 8


class LazardError(Exception):
    pass


def b_name(n: int) -> str:
    return f"b{n}"


def make_b_table(max_weight: int) -> GeneratorTable:
    """Generator table for Z[b1..bN]; b_n has bidegree (2n, n)."""
    t = GeneratorTable()
    for n in range(1, max_weight + 1):
        t.add(GeneratorSpec(b_name(n), (2 * n, n), (4, n)))
    return t


def c_name(i: int, j: int) -> str:
    return f"c{i}_{j}"


def make_c_table(max_weight: int) -> GeneratorTable:
    """Formal symbols c_ij (i <= j, weight i+j-1) for provenance polynomials."""
    t = GeneratorTable()
    for w in range(1, max_weight + 1):
        for i in range(1, w + 1):
            j = w + 1 - i
            if i <= j:
                t.add(GeneratorSpec(c_name(i, j), (2 * w, w), (5, w, i)))
    return t


def weight_monomials(weights: dict, total: int):
    """All monomials sum(n*e_n) == total over symbols with given weights.

    ``weights`` maps symbol name -> positive weight.  Yields tuples of
    (name, exponent) pairs in the order the symbols are listed.
    """
    names = list(weights)

    def rec(idx, remaining, acc):
        if remaining == 0:
            yield tuple(acc)
            return
        if idx == len(names):
            return
        name = names[idx]
        w = weights[name]
        for e in range(remaining // w, -1, -1):
            if e:
                acc.append((name, e))
            yield from rec(idx + 1, remaining - e * w, acc)
            if e:
                acc.pop()

    yield from rec(0, total, [])


class FglModel:
    """Truncated universal formal group law data over Z[b1..bN]."""

    def __init__(self, max_weight: int):
        self.max_weight = max_weight
        self.table = make_b_table(max_weight)
        order = max_weight + 1
        exp = TruncatedSeries(ZZ, self.table, 1, order, max_weight)
        exp._set((1,), GradedPoly.const(ZZ, self.table, 1))
        for n in range(1, max_weight + 1):
            exp._set((n + 1,), GradedPoly.gen(ZZ, self.table, b_name(n)))
        self.exp = exp
        self.log = series_invert(exp)
        lx = TruncatedSeries(ZZ, self.table, 2, order, max_weight)
        ly = TruncatedSeries(ZZ, self.table, 2, order, max_weight)
        for (k,), p in self.log.coeffs.items():
            lx._set((k, 0), p)
            ly._set((0, k), p)
        self.F = series_compose(self.exp, lx + ly)
        self._ell_series: dict[int, TruncatedSeries] = {}

    def fgl_coefficient(self, i: int, j: int) -> GradedPoly:
        """Coefficient of x^i y^j in F(x, y); homogeneous of weight i+j-1."""
        if i < 1 or j < 1 or i + j - 1 > self.max_weight:
            raise LazardError(f"c_{i},{j} is beyond the weight truncation")
        return self.F.coefficient(i, j)

    def ell_series(self, ell: int) -> TruncatedSeries:
        """The ell-series exp(ell * log x) of the universal law, over Z[b]."""
        if ell not in self._ell_series:
            self._ell_series[ell] = series_compose(self.exp, self.log * ell)
        return self._ell_series[ell]


_models: dict[int, FglModel] = {}
_models_lock = threading.Lock()


def fgl_model(max_weight: int = DEFAULT_WEIGHT_BOUND) -> FglModel:
    with _models_lock:
        if max_weight not in _models:
            _models[max_weight] = FglModel(max_weight)
        return _models[max_weight]


@dataclass
class LazardElement:
    """An element of the Lazard ring, embedded in Z[b].

    ``provenance`` is an integer polynomial in the formal symbols c_ij
    whose expansion through the formal group law reproduces ``image``.
    """

    weight: int
    image: GradedPoly
    provenance: GradedPoly

    def check_provenance(self, model: FglModel) -> bool:
        return self.expand_provenance(model) == self.image

    def expand_provenance(self, model: FglModel) -> GradedPoly:
        def assign(name):
            i, j = (int(v) for v in name[1:].split("_"))
            return model.fgl_coefficient(i, j)

        return self.provenance.evaluate(assign, ZZ, model.table)


def _prime_power(n: int):
    """(ell, r) with n == ell**r, r >= 1, or None."""
    if n < 2:
        return None
    for p in range(2, n + 1):
        if p * p > n:
            return (n, 1)
        if n % p == 0:
            m, r = n, 0
            while m % p == 0:
                m //= p
                r += 1
            return (p, r) if m == 1 else None
    return None


def linear_coefficient(poly: GradedPoly, name: str) -> int:
    return poly.linear_part().coefficient(((name, 1),))


def lazard_index_coefficient(v: LazardElement) -> int:
    """Integer coefficient of b_n in the linear part of the image.

    v lifts a generator of the degree-n indecomposables iff the absolute
    value is ell when n+1 is a power of the prime ell, and 1 otherwise.
    """
    return linear_coefficient(v.image, b_name(v.weight))


def required_index(n: int) -> int:
    pp = _prime_power(n + 1)
    return pp[0] if pp else 1


def canonical_typical(ell: int, r: int,
                      model: FglModel = None) -> LazardElement:
    """The coefficient of x^(ell^r) in the ell-series, with provenance."""
    model = model or fgl_model()
    n = ell ** r - 1
    if r == 0:
        ctable = make_c_table(model.max_weight)
        return LazardElement(0, GradedPoly.const(ZZ, model.table, ell),
                             GradedPoly.const(ZZ, ctable, ell))
    if n > model.max_weight:
        raise LazardError("weight truncation too small")
    image = model.ell_series(ell).coefficient(ell ** r)
    prov = provenance_for(image, n, model)
    return LazardElement(n, image, prov)


def _c_monomials(n: int, model: FglModel):
    weights = {}
    for w in range(1, n + 1):
        for i in range(1, w + 1):
            j = w + 1 - i
            if i <= j:
                weights[c_name(i, j)] = w
    return list(weight_monomials(weights, n))


def _b_monomials(n: int, model: FglModel):
    weights = {b_name(k): k for k in range(1, n + 1)}
    return list(weight_monomials(weights, n))


def _c_image_matrix(n: int, model: FglModel):
    """Matrix of {weight-n monomials in c_ij} -> Z[b]_n, plus the index maps."""
    cmonos = _c_monomials(n, model)
    bmonos = _b_monomials(n, model)
    bindex = {m: i for i, m in enumerate(bmonos)}
    matrix = [[0] * len(cmonos) for _ in bmonos]
    for col, cm in enumerate(cmonos):
        poly = GradedPoly.const(ZZ, model.table, 1)
        for name, e in cm:
            i, j = (int(v) for v in name[1:].split("_"))
            poly = poly * (model.fgl_coefficient(i, j) ** e)
        for mono, coeff in poly.terms.items():
            matrix[bindex[mono]][col] = coeff
    return matrix, cmonos, bmonos, bindex


def provenance_for(image: GradedPoly, n: int, model: FglModel) -> GradedPoly:
    """Express a weight-n element of the Lazard image as a c_ij-polynomial."""
    matrix, cmonos, bmonos, bindex = _c_image_matrix(n, model)
    rhs = [0] * len(bmonos)
    for mono, coeff in image.terms.items():
        rhs[bindex[mono]] = coeff
    sol = solve_integer(matrix, rhs)
    if sol is None:
        raise LazardError("element is not in the Lazard subring")
    ctable = make_c_table(model.max_weight)
    terms = {cm: c for cm, c in zip(cmonos, sol) if c}
    return GradedPoly(ZZ, ctable, terms)


def is_ell_typical(v: LazardElement, ell: int):
    """Typicality test: image vanishes mod ell, and the linear part of the
    image survives mod ell^2.  Returns (bool, report dict)."""
    pp = _prime_power(v.weight + 1)
    if v.weight != 0 and (pp is None or pp[0] != ell):
        raise LazardError(f"weight {v.weight} is not ell^r - 1 for ell={ell}")
    mod_ell_zero = v.image.map_ring(Zmod(ell)).is_zero()
    lin_mod_ell2 = v.image.linear_part().map_ring(Zmod(ell * ell))
    report = {
        "mod_ell_vanishes": mod_ell_zero,
        "linear_part_mod_ell_squared_nonzero": not lin_mod_ell2.is_zero(),
    }
    return mod_ell_zero and report["linear_part_mod_ell_squared_nonzero"], report


@dataclass
class GeneratorSet:
    """Polynomial generators a_n of the Lazard ring with adequacy certificates."""

    max_weight: int
    elements: dict = field(default_factory=dict)   # n -> LazardElement
    certificates: dict = field(default_factory=dict)

    def element(self, n: int) -> LazardElement:
        return self.elements[n]

    def validate(self, model: FglModel = None):
        """Re-run every certificate check from the provenance alone."""
        model = model or fgl_model(self.max_weight)
        for n, el in self.elements.items():
            if el.expand_provenance(model) != el.image:
                return False, f"provenance mismatch at weight {n}"
            idx = lazard_index_coefficient(el)
            if abs(idx) != required_index(n):
                return False, f"index rule fails at weight {n}"
            pp = _prime_power(n + 1)
            if pp is not None:
                ok, _ = is_ell_typical(el, pp[0])
                if not ok:
                    return False, f"typicality fails at weight {n}"
            cert = self.certificates.get(n, {})
            if cert.get("index") != idx:
                return False, f"certificate index mismatch at weight {n}"
        return True, "ok"

    def to_obj(self):
        return {
            "max_weight": self.max_weight,
            "generators": {
                str(n): {
                    "provenance": el.provenance.to_obj(),
                    "image": el.image.to_obj(),
                    "certificate": self.certificates[n],
                }
                for n, el in sorted(self.elements.items())
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), indent=2)

    @classmethod
    def from_obj(cls, obj, model: FglModel = None):
        max_weight = obj["max_weight"]
        model = model or fgl_model(max_weight)
        ctable = make_c_table(max_weight)
        gs = cls(max_weight)
        for k, rec in obj["generators"].items():
            n = int(k)
            prov = GradedPoly.from_obj(ZZ, ctable, rec["provenance"])
            el = LazardElement(n, None, prov)
            el.image = el.expand_provenance(model)
            gs.elements[n] = el
            gs.certificates[n] = rec["certificate"]
        return gs

    @classmethod
    def from_json(cls, text: str, model: FglModel = None):
        return cls.from_obj(json.loads(text), model)


def find_adequate_generators(max_weight: int = DEFAULT_WEIGHT_BOUND,
                             model: FglModel = None) -> GeneratorSet:
    """Search for an adequate generator set a_1..a_N.

    Each a_n is an integer combination of weight-n monomials in the c_ij
    with Lazard index +-1 (or +-ell when n+1 = ell^r); when n+1 is a prime
    power the combination is additionally constrained to vanish mod ell,
    which together with the exact index +-ell certifies ell-typicality.
    """
    model = model or fgl_model(max_weight)
    gs = GeneratorSet(max_weight)
    for n in range(1, max_weight + 1):
        matrix, cmonos, bmonos, bindex = _c_image_matrix(n, model)
        linrow = matrix[bindex[((b_name(n), 1),)]]
        pp = _prime_power(n + 1)
        if pp is None:
            g, combo = ext_gcd_list(linrow)
            if g != 1:
                raise LazardError(f"no weight-{n} generator of index 1")
            u = combo
        else:
            ell = pp[0]
            lattice = kernel_mod_lattice(matrix, ell)
            values = [sum(r * v for r, v in zip(linrow, vec))
                      for vec in lattice]
            g, combo = ext_gcd_list(values)
            if g != ell:
                raise LazardError(
                    f"weight-{n} search found index {g}, wanted {ell}")
            u = [sum(c * vec[i] for c, vec in zip(combo, lattice))
                 for i in range(len(cmonos))]
        ctable = make_c_table(max_weight)
        prov = GradedPoly(ZZ, ctable,
                          {cm: c for cm, c in zip(cmonos, u) if c})
        el = LazardElement(n, None, prov)
        el.image = el.expand_provenance(model)
        idx = lazard_index_coefficient(el)
        cert = {"index": idx, "required_index": required_index(n)}
        if pp is not None:
            ok, rep = is_ell_typical(el, pp[0])
            if not ok:
                raise LazardError(f"weight-{n} candidate is not typical")
            cert["typical_for"] = pp[0]
            cert.update(rep)
        gs.elements[n] = el
        gs.certificates[n] = cert
    return gs


# -- the mod-ell subring h(L) and its retraction ---------------------


def excluded_weights(ell: int, max_weight: int):
    """Weights n <= max_weight with n+1 a power of ell (no b'_n exists)."""
    out = []
    q = ell
    while q - 1 <= max_weight:
        out.append(q - 1)
        q *= ell
    return out


def b_prime_poly(ell: int, gens: GeneratorSet, n: int) -> GradedPoly:
    """b'_n: the image of a_n mod ell (defined for n+1 not a power of ell)."""
    if n in excluded_weights(ell, gens.max_weight):
        raise LazardError(f"b'_{n} does not exist at ell={ell}")
    return gens.element(n).image.map_ring(Zmod(ell))


def hL_basis_mod_ell(ell: int, gens: GeneratorSet, weight: int):
    """Monomial basis of h(L) in the given weight, as Z/ell[b] polynomials.

    Each basis element is a product of b'_n factors, n+1 not a power of
    ell.  Returns a list of (label, polynomial) pairs.
    """
    if weight > gens.max_weight:
        raise LazardError("weight exceeds the generator-set range")
    excluded = set(excluded_weights(ell, gens.max_weight))
    weights = {f"b'{n}": n for n in range(1, weight + 1) if n not in excluded}
    ring = Zmod(ell)
    out = []
    for mono in weight_monomials(weights, weight):
        poly = GradedPoly.const(ring, gens.element(1).image.table, 1)
        for name, e in mono:
            poly = poly * (b_prime_poly(ell, gens, int(name[2:])) ** e)
        out.append((mono, poly))
    return out


def _mixed_basis(ell: int, gens: GeneratorSet, weight: int):
    """Triangular basis of Z/ell[b]_w: monomials in {b_n', b_{ell^r-1}}.

    Returns (labels, expansions) where each label is a ((kind, n), e) tuple
    monomial; kind "p" marks a b'_n factor and "e" a plain excluded b_n.
    """
    excluded = set(excluded_weights(ell, gens.max_weight))
    weights = {}
    for n in range(1, weight + 1):
        weights[("e" if n in excluded else "p", n)] = n
    ring = Zmod(ell)
    table = gens.element(1).image.table
    labels, expansions = [], []
    for mono in weight_monomials(weights, weight):
        poly = GradedPoly.const(ring, table, 1)
        for (kind, n), e in mono:
            factor = (GradedPoly.gen(ring, table, b_name(n))
                      if kind == "e" else b_prime_poly(ell, gens, n))
            poly = poly * (factor ** e)
        labels.append(mono)
        expansions.append(poly)
    return labels, expansions


def retraction_pi(ell: int, gens: GeneratorSet,
                  poly: GradedPoly) -> GradedPoly:
    """Graded ring retraction of Z/ell[b] onto h(L).

    Rewrites the input in the triangular variables {b'_n} + {b_{ell^r-1}}
    and kills the second group; the output is returned as a Z/ell[b]
    polynomial lying in h(L).
    """
    ring = Zmod(ell)
    table = poly.table
    result = GradedPoly.zero(ring, table)
    for wdeg, comp in poly.homogeneous_components().items():
        weight = wdeg[1]
        if weight == 0:
            result = result + comp
            continue
        if weight > gens.max_weight:
            raise LazardError("weight exceeds the generator-set range")
        labels, expansions = _mixed_basis(ell, gens, weight)
        bmonos = _b_monomials(weight, fgl_model(gens.max_weight))
        bindex = {m: i for i, m in enumerate(bmonos)}
        matrix = [[0] * len(labels) for _ in bmonos]
        for col, exp in enumerate(expansions):
            for mono, coeff in exp.terms.items():
                matrix[bindex[mono]][col] = coeff
        rhs = [0] * len(bmonos)
        for mono, coeff in comp.terms.items():
            rhs[bindex[mono]] = coeff
        coords = modp_solve(matrix, rhs, ell)
        if coords is None:
            raise LazardError("triangular change of variables failed")
        for label, exp, c in zip(labels, expansions, coords):
            if c and all(kind == "p" for (kind, _), _ in label):
                result = result + exp * c
    return result
