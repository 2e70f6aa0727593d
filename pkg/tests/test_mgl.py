import pytest

from msa.hopf import GENERIC, SPECIALIZED, MilnorMonomial, SteenrodContext
from msa.lazard import find_adequate_generators
from msa.mgl import (BidegreeFamily, MglContext, MglError,
                     act_on_projective_space, comodule_map_check,
                     g_tilde_matrix, hmgl1_map, ker_bockstein_basis,
                     mgl_family, multinomial, multiplicative_map,
                     pr_tau_duality_check, q_on_projective_space,
                     quotient_homology_basis, verify_comodule,
                     xi_monomial, xi_sequences, zero_map)


@pytest.fixture(scope="module")
def gens():
    return find_adequate_generators(8)


def test_multinomial():
    assert multinomial(7, ()) == 1
    assert multinomial(2, (1,)) == 2
    assert multinomial(1, (2,)) == 0
    assert multinomial(4, (1, 1)) == 12
    with pytest.raises(MglError):
        multinomial(-1, ())


def test_coaction_generator_examples():
    ctx = MglContext(2, 8)
    def tstr(t):
        return {str(mm): str(p) for mm, p in t.items()}
    assert tstr(ctx.coaction(ctx.one())) == {"1": "1"}
    assert tstr(ctx.coaction(ctx.b(1))) == {"1": "b1", "xi1": "1"}
    assert tstr(ctx.coaction(ctx.b(3))) == {
        "1": "b3", "xi1": "b2", "xi1^2": "b1", "xi2": "1"}


def test_coaction_structure_sweep():
    for ell in (2, 3):
        ctx = MglContext(ell, 8)
        monos = [m for w in range(7) for m in ctx.b_monomials(w)]
        for m in monos:
            p = ctx.monomial_poly(m)
            assert ctx.counit_ok(p)
            assert ctx.coassoc_ok(p)


def test_coaction_multiplicative():
    ctx = MglContext(2, 8)
    pool = [m for w in range(1, 4) for m in ctx.b_monomials(w)]
    for m1 in pool:
        for m2 in pool:
            u, v = ctx.monomial_poly(m1), ctx.monomial_poly(m2)
            assert ctx.tensor_eq(
                ctx.coaction(u * v),
                ctx.tensor_mul(ctx.coaction(u), ctx.coaction(v)))


def test_projective_space_action():
    assert act_on_projective_space(2, (), 5) == (1, 5)
    assert act_on_projective_space(3, (1,), 2) == (2, 4)
    assert act_on_projective_space(2, (2,), 1) == (0, 3)
    assert q_on_projective_space(1, 9) == 0


def test_comodule_map_checks():
    for ell in (2, 3):
        ctx = MglContext(ell, 8)
        assert comodule_map_check(ctx, hmgl1_map(ctx), 6)["passed"]
        assert comodule_map_check(ctx, zero_map(ctx), 4)["passed"]
    ctx = MglContext(2, 8)
    bad = multiplicative_map(ctx, {1: ctx.steenrod.gen("xi1"),
                                   2: ctx.steenrod.gen("xi1", 2)})
    rep = comodule_map_check(ctx, bad, 3)
    assert not rep["passed"]
    assert rep["failure"] == "b2^1"


def test_g_tilde_weight_examples(gens):
    rep = g_tilde_matrix(2, gens, 1)
    assert rep["matrix"] == [[1]]
    assert str(rep["f_tilde"]["xi1"]) == "b1"
    rep = g_tilde_matrix(2, gens, 2)
    # b2 -> 1 (x) b'2 and b1^2 -> xi1^2 (x) 1
    cols = {m: i for i, m in enumerate(rep["source"])}
    rows = {t: i for i, t in enumerate(rep["target"])}
    b2 = ((("b2", 1),))
    m = rep["matrix"]
    assert m[rows[(xi_monomial(()), (("b'2", 1),))]][cols[(("b2", 1),)]] == 1
    assert m[rows[(xi_monomial((2,)), ())]][cols[(("b1", 2),)]] == 1
    assert rep["invertible"]
    rep = g_tilde_matrix(2, gens, 0)
    assert rep["matrix"] == [[1]]


def test_g_tilde_invertible_all_weights(gens):
    for ell in (2, 3):
        for w in range(7):
            rep = g_tilde_matrix(ell, gens, w)
            assert len(rep["source"]) == len(rep["target"])
            assert rep["invertible"], (ell, w)


def test_quotient_homology_basis(gens):
    full = list(range(1, 9))
    rep = quotient_homology_basis(2, gens, full, (2, 1))
    assert rep["rank"] == 1
    assert [str(mm) for mm, _ in rep["basis"]] == ["xi1"]
    rep = quotient_homology_basis(2, gens, [1], (4, 2))
    assert rep["rank"] == 2
    got = {(str(mm), lab) for mm, lab in rep["basis"]}
    assert got == {("1", (("b'2", 1),)), ("xi1^2", ())}
    for ell in (2, 3):
        for w in range(7):
            rep = quotient_homology_basis(ell, gens, full, (2 * w, w))
            assert rep["rank"] == len(xi_sequences(ell, w))
    with pytest.raises(MglError):
        quotient_homology_basis(2, gens, [99], (2, 1))


def test_ker_bockstein_examples():
    ctx = SteenrodContext(2, SPECIALIZED, 12)
    rep = ker_bockstein_basis(ctx, (1, 0))
    assert rep["basis"] == [] and rep["verified"]
    rep = ker_bockstein_basis(ctx, (2, 1))
    assert [str(m) for m in rep["basis"]] == ["xi1"] and rep["verified"]
    rep = ker_bockstein_basis(ctx, (0, 0))
    assert [str(m) for m in rep["basis"]] == ["1"]


def test_ker_bockstein_sweeps():
    for ell in (2, 3):
        ctx = SteenrodContext(ell, SPECIALIZED, 12)
        seen = set()
        for mm in ctx.window_basis(12):
            bd = mm.bidegree(ell)
            if bd in seen:
                continue
            seen.add(bd)
            assert ker_bockstein_basis(ctx, bd)["verified"], bd
    gen = SteenrodContext(2, GENERIC, 10)
    for bd in {mm.bidegree(2) for mm in gen.window_basis(10)}:
        rep = ker_bockstein_basis(gen, bd)
        assert not rep["asserted"]
        assert rep["in_kernel"]


def test_pr_tau_duality():
    for ell in (2, 3):
        ctx = MglContext(ell, 8)
        for w in range(6):
            for R in xi_sequences(ell, w):
                assert pr_tau_duality_check(ctx, R), (ell, R)


def test_psf_family_ops():
    fam = mgl_family(2)
    assert fam.is_psf(6)
    unit = BidegreeFamily({0: {0: 1}})
    sm = unit.smash(fam, 6)
    assert all(sm.slice(q) == fam.slice(q) for q in range(7))
    assert not fam.dual(4).is_psf(4)
    below_cone = BidegreeFamily({2: {1: 1}})
    assert not below_cone.is_psf(4)


def test_psf_smash_matches_brute_force():
    f1 = BidegreeFamily({0: {0: 1}, 1: {2: 2, 3: 1}, 2: {4: 1, 5: 2}})
    f2 = BidegreeFamily({0: {0: 1, 1: 1}, 2: {4: 3}, 3: {6: 1}})
    sm = f1.smash(f2, 6)
    brute = {}
    for p1, q1 in f1.bidegrees(6):
        for p2, q2 in f2.bidegrees(6):
            if q1 + q2 <= 6:
                sl = brute.setdefault(q1 + q2, {})
                sl[p1 + p2] = sl.get(p1 + p2, 0) + 1
    assert all(sm.slice(q) == brute.get(q, {}) for q in range(7))


def test_verify_comodule_passes(gens):
    for ell in (2, 3):
        rep = verify_comodule(ell, gens, 5)
        assert rep["passed"], [c for c in rep["checks"] if not c["ok"]]
