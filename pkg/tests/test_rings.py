import pytest
from hypothesis import assume, given, settings, strategies as st

from msa.rings import (ONE, CoeffRing, GeneratorSpec, GeneratorTable,
                       GradedPoly, RingError, Zmod, ZZ, normal_order)


def small_table():
    t = GeneratorTable()
    t.add(GeneratorSpec("u", (1, 0), (0,)))   # odd
    t.add(GeneratorSpec("v", (3, 1), (1,)))   # odd
    t.add(GeneratorSpec("w", (2, 1), (2,)))   # even
    return t


TABLE = small_table()


def test_coeff_ring_normalize():
    assert Zmod(5).normalize(12) == 2
    assert ZZ.normalize(-3) == -3
    with pytest.raises(RingError):
        CoeffRing(0)


def test_koszul_sign_on_odd_generators():
    t = small_table()
    uv = normal_order(ZZ, t, [("u", 1), ("v", 1)])
    vu = normal_order(ZZ, t, [("v", 1), ("u", 1)])
    assert (uv + vu).is_zero()
    # odd powers are kept as written; caps, not signs, control squares
    assert str(normal_order(ZZ, t, [("u", 2)])) == "u^2"


def test_even_generator_commutes():
    t = small_table()
    wv = normal_order(ZZ, t, [("w", 1), ("v", 1)])
    vw = normal_order(ZZ, t, [("v", 1), ("w", 1)])
    assert (wv - vw).is_zero()


def test_cap_rewrite():
    t = GeneratorTable()
    t.add(GeneratorSpec("x", (1, 0), (0,), cap=2))
    t.add(GeneratorSpec("y", (2, 0), (1,)))
    t.set_rewrite("x", GradedPoly.gen(ZZ, t, "y"))
    sq = normal_order(ZZ, t, [("x", 2)])
    assert sq == GradedPoly.gen(ZZ, t, "y")
    cube = normal_order(ZZ, t, [("x", 3)])
    assert cube == normal_order(ZZ, t, [("x", 1), ("y", 1)])


def test_unit_and_inverse():
    t = small_table()
    five = GradedPoly.const(Zmod(7), t, 5)
    assert five.is_unit()
    assert (five * five.inverse()).constant_term() == 1
    assert not GradedPoly.gen(Zmod(7), t, "w").is_unit()
    with pytest.raises(RingError):
        GradedPoly.const(Zmod(6), t, 3).inverse()


def polys(ring):
    t = TABLE
    gen_word = st.lists(
        st.tuples(st.sampled_from(["u", "v", "w"]), st.integers(1, 2)),
        max_size=3)
    term = st.tuples(gen_word, st.integers(-4, 4))
    return st.lists(term, max_size=4).map(
        lambda ts: sum((normal_order(ring, t, w, c) for w, c in ts),
                       GradedPoly.zero(ring, t)))


@settings(max_examples=60, deadline=None)
@given(polys(Zmod(2)), polys(Zmod(2)), polys(Zmod(2)))
def test_associativity_and_distributivity_mod2(a, b, c):
    assert ((a * b) * c - a * (b * c)).is_zero()
    assert (a * (b + c) - (a * b + a * c)).is_zero()


words = st.lists(
    st.tuples(st.sampled_from(["u", "v", "w"]), st.integers(1, 2)),
    max_size=3)


@settings(max_examples=100, deadline=None)
@given(words, words)
def test_graded_commutativity_over_zz(w1, w2):
    # monomials with no shared odd generator commute up to the Koszul sign;
    # a shared odd generator instead produces a kept square (u*u = u^2), so
    # those pairs are excluded here and covered by the square tests above
    shared = {g for g, _ in w1} & {g for g, _ in w2}
    assume(not any(TABLE.spec(g).parity for g in shared))
    m1 = normal_order(ZZ, TABLE, w1, 1)
    m2 = normal_order(ZZ, TABLE, w2, 1)
    par1 = sum(TABLE.spec(g).parity * e for g, e in w1)
    par2 = sum(TABLE.spec(g).parity * e for g, e in w2)
    sign = -1 if (par1 % 2) and (par2 % 2) else 1
    assert (m1 * m2 - (m2 * m1) * sign).is_zero()


def test_homogeneous_components_bidegrees():
    t = small_table()
    p = (GradedPoly.gen(ZZ, t, "u") + GradedPoly.gen(ZZ, t, "w")
         + GradedPoly.const(ZZ, t, 3))
    comps = p.homogeneous_components()
    assert set(comps) == {(0, 0), (1, 0), (2, 1)}
