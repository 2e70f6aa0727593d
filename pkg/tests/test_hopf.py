import pytest

from msa.hopf import (GENERIC, SPECIALIZED, HopfError, MilnorMonomial,
                      SteenrodContext, verify_hopf_axioms)


def gctx(max_p=10):
    return SteenrodContext(2, GENERIC, max_p)


def test_mode_validation():
    with pytest.raises(HopfError):
        SteenrodContext(3, GENERIC, 10)
    assert SteenrodContext(3, max_p=10).mode == SPECIALIZED
    assert SteenrodContext(2, max_p=10).mode == GENERIC


def test_generator_bidegrees():
    mm = MilnorMonomial((1,), ())
    assert mm.bidegree(2) == (1, 0)          # tau0
    assert MilnorMonomial((), (1,)).bidegree(2) == (2, 1)   # xi1
    assert MilnorMonomial((0, 1), ()).bidegree(2) == (3, 1)  # tau1
    assert MilnorMonomial((), (0, 1)).bidegree(3) == (16, 8)  # xi2 at ell=3


def test_tau_square_rewrite():
    ctx = gctx()
    sq = ctx.gen("tau0", 2)
    expected = (ctx.gamma_word([("tau", 1), ("xi1", 1)])
                + ctx.gamma_word([("rho", 1), ("tau1", 1)])
                + ctx.gamma_word([("rho", 1), ("tau0", 1), ("xi1", 1)]))
    assert (sq - expected).is_zero()
    sctx = SteenrodContext(3, SPECIALIZED, 10)
    assert sctx.gen("tau0", 2).is_zero()


def test_eta_r_twists_tau():
    ctx = gctx()
    image = ctx.eta_R(ctx.gen("tau"))
    expected = ctx.gen("tau") + ctx.gamma_word([("rho", 1), ("tau0", 1)])
    assert (image - expected).is_zero()
    # rho is central to both units
    assert (ctx.eta_R(ctx.gen("rho")) - ctx.gen("rho")).is_zero()


def test_coproduct_of_xi1_and_tau1():
    ctx = gctx()
    d = ctx.delta_monomial(MilnorMonomial((), (1,)))
    unit = MilnorMonomial()
    xi1 = MilnorMonomial((), (1,))
    assert set(d) == {(xi1, unit), (unit, xi1)}
    d = ctx.delta_monomial(MilnorMonomial((0, 1), ()))
    tau1 = MilnorMonomial((0, 1), ())
    tau0 = MilnorMonomial((1,), ())
    assert set(d) == {(tau1, unit), (unit, tau1), (xi1, tau0)}


def test_counit_kills_generators():
    ctx = gctx()
    assert ctx.counit(ctx.gen("xi1")).is_zero()
    assert ctx.counit(ctx.gen("tau0")).is_zero()
    assert (ctx.counit(ctx.gen("rho")) - ctx.gen("rho")).is_zero()


def test_tensor_mul_koszul_sign():
    ctx = gctx()
    tau0 = MilnorMonomial((1,), ())
    unit = MilnorMonomial()
    t1 = {(tau0, unit): ctx.one()}
    t2 = {(unit, tau0): ctx.one()}
    # (tau0 (x) 1)(1 (x) tau0) = tau0 (x) tau0
    # (1 (x) tau0)(tau0 (x) 1) = -tau0 (x) tau0
    a = ctx.tensor_mul(t1, t2)
    b = ctx.tensor_mul(t2, t1)
    key = (tau0, tau0)
    assert (a[key] + b[key]).is_zero()


@pytest.mark.parametrize("ell,mode", [(2, GENERIC), (2, SPECIALIZED),
                                      (3, SPECIALIZED)])
def test_hopf_axioms_small_window(ell, mode):
    bound = 8 if ell == 2 else 16
    ctx = SteenrodContext(ell, mode, bound)
    rep = verify_hopf_axioms(ctx, bound)
    assert rep["passed"], [c for c in rep["checks"] if not c["ok"]]
    assert rep["iota_squared_is_identity"]


def test_coinverse_involution_on_generators():
    ctx = gctx()
    for name in ("tau0", "tau1", "xi1", "xi2"):
        x = ctx.gen(name)
        assert (ctx.coinverse(ctx.coinverse(x)) - x).is_zero()


def test_window_basis_is_graded_and_bounded():
    ctx = gctx(10)
    basis = ctx.window_basis(10)
    assert MilnorMonomial() in basis
    assert all(mm.bidegree(2)[0] <= 10 for mm in basis)
    degs = [mm.bidegree(2) for mm in basis]
    assert degs == sorted(degs)
