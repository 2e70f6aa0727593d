import pytest

from msa.lazard import (GeneratorSet, LazardError, b_prime_poly,
                        canonical_typical, excluded_weights,
                        fgl_model, find_adequate_generators,
                        hL_basis_mod_ell, is_ell_typical,
                        lazard_index_coefficient, required_index,
                        retraction_pi)
from msa.rings import Zmod


def test_ell_series_divisibility():
    model = fgl_model(8)
    for ell in (2, 3, 5):
        series = model.ell_series(ell)
        for p in series.coeffs.values():
            assert all(c % ell == 0 for c in p.terms.values())


def test_canonical_typical_examples():
    model = fgl_model(8)
    v1 = canonical_typical(2, 1, model)
    assert str(v1.image) == "2*b1"
    v2 = canonical_typical(2, 2, model)
    assert lazard_index_coefficient(v2) == 14
    for ell, r in ((2, 1), (2, 2), (3, 1)):
        ok, rep = is_ell_typical(canonical_typical(ell, r, model), ell)
        assert ok, rep


def test_required_index_rule():
    assert required_index(1) == 2      # 1 + 1 = 2^1
    assert required_index(2) == 3      # 2 + 1 = 3^1
    assert required_index(3) == 2      # 3 + 1 = 2^2
    assert required_index(5) == 1      # 6 is not a prime power
    assert required_index(7) == 2


def test_find_adequate_generators_and_serialization():
    gens = find_adequate_generators(8)
    ok, msg = gens.validate()
    assert ok, msg
    again = GeneratorSet.from_json(gens.to_json())
    ok, msg = again.validate()
    assert ok, msg
    assert set(again.elements) == set(gens.elements)


def test_excluded_weights():
    assert excluded_weights(2, 8) == [1, 3, 7]
    assert excluded_weights(3, 8) == [2, 8]


def test_hl_basis_and_b_prime():
    gens = find_adequate_generators(8)
    with pytest.raises(LazardError):
        b_prime_poly(2, gens, 3)
    # ell = 2: h(L) weight 2 is spanned by b'_2 alone
    basis = hL_basis_mod_ell(2, gens, 2)
    assert len(basis) == 1
    assert basis[0][0] == (("b'2", 1),)


def test_retraction_pi_is_idempotent_and_multiplicative():
    gens = find_adequate_generators(8)
    for ell in (2, 3):
        ring = Zmod(ell)
        for n in (2, 4, 5):
            p = gens.element(n).image.map_ring(ring)
            once = retraction_pi(ell, gens, p)
            twice = retraction_pi(ell, gens, once)
            assert (once - twice).is_zero()
        a = retraction_pi(ell, gens, gens.element(2).image.map_ring(ring))
        b = retraction_pi(ell, gens, gens.element(4).image.map_ring(ring))
        prod = retraction_pi(ell, gens, a * b)
        assert (prod - a * b).is_zero()


def test_retraction_kills_excluded_generators():
    gens = find_adequate_generators(8)
    for ell in (2, 3):
        ring = Zmod(ell)
        for n in excluded_weights(ell, 6):
            image = gens.element(n).image.map_ring(ring)
            assert retraction_pi(ell, gens, image).is_zero()
