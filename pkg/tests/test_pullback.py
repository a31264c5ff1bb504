from fractions import Fraction
from math import isqrt

import pytest

from cyclecert.heegner import hurwitz_class_number
from cyclecert.lattices import DiscElement
from cyclecert.pullback import (
    AmbientGenerator,
    DivisorClass,
    apply_decomposition,
    chow_heegner_divisor,
    decompose_heegner,
    pullback_divisor,
    reduce_omega_to_cusp,
    verify_decomposition,
)


def gen(level, m, r1, r2=0):
    return AmbientGenerator(m=Fraction(m), mu=DiscElement(level, r1, r2))


def test_pullback_of_base_generator_is_adjunction():
    d = pullback_divisor(gen(1, 0, 0, 0))
    assert d.omega_coeff == -2
    assert not d.heeg_coeffs
    assert not d.cusp_ambiguous


def test_pullback_of_nonzero_mu_at_zero_norm_vanishes():
    d = pullback_divisor(gen(1, 0, 1, 1))
    assert d.is_zero()
    assert not d.cusp_ambiguous


def test_pullback_example_m_one():
    d = pullback_divisor(gen(1, 1, 0, 0))
    assert d.heeg_coeffs == {(Fraction(1), 0): Fraction(1)}
    assert d.omega_coeff == -2
    assert d.cusp_ambiguous


def test_pullback_example_quarter_norm():
    d = pullback_divisor(gen(1, Fraction(1, 4), 0, 1))
    assert not d.heeg_coeffs
    assert d.omega_coeff == -2
    assert d.cusp_ambiguous


def test_pullback_general_scalar_residue():
    # both square-root cosets contribute separate splittings
    d = pullback_divisor(gen(3, 12, 1, 1))
    keys = sorted(d.heeg_coeffs)
    assert all(r1 == 1 for (_, r1) in keys)
    assert len(keys) == 4


def test_pullback_validates_congruence():
    with pytest.raises(ValueError):
        AmbientGenerator(m=Fraction(1, 3), mu=DiscElement(1, 0, 1))


def test_decompose_example_level_one():
    dec = decompose_heegner(1, 1, 0)
    coeffs = {(g.m, g.mu.r1, g.mu.r2): c for g, c in dec.terms}
    assert coeffs == {
        (Fraction(1), 0, 0): Fraction(1),
        (Fraction(0), 0, 0): Fraction(-1),
    }
    assert dec.residual_cusp_ambiguous


def test_decompose_example_three_quarters():
    dec = decompose_heegner(1, Fraction(3, 4), 1)
    coeffs = {(g.m, g.mu.r1, g.mu.r2): c for g, c in dec.terms}
    assert coeffs == {(Fraction(3, 4), 1, 0): Fraction(1)}


def test_decompose_leading_coefficient_is_one():
    for level, m0, r1 in [(1, 5, 0), (2, Fraction(7, 8), 1), (3, Fraction(23, 12), 1)]:
        dec = decompose_heegner(level, m0, r1)
        assert dec.coefficient(gen(level, m0, r1)) == 1


def test_decompose_generators_stay_below_target():
    dec = decompose_heegner(2, 6, 0)
    for g, _ in dec.terms:
        assert g.m <= 6
        assert g.mu.r2 == 0


def test_decompose_rejects_invalid_keys():
    with pytest.raises(ValueError):
        decompose_heegner(1, Fraction(1, 2), 0)
    with pytest.raises(ValueError):
        decompose_heegner(1, -1, 0)


def test_round_trip_small_levels():
    for level in (1, 2):
        for r1 in range(2 * level):
            for scaled in range(1, 81):
                if (scaled + r1 * r1) % (4 * level) != 0:
                    continue
                dec = decompose_heegner(level, Fraction(scaled, 4 * level), r1)
                assert verify_decomposition(dec) == {}


def test_round_trip_cancels_omega_exactly():
    for level, m0, r1 in [(1, 4, 0), (2, 8, 0), (3, 3, 0)]:
        dec = decompose_heegner(level, m0, r1)
        total = apply_decomposition(dec)
        assert total.omega_coeff == 0


def test_pullback_linearity_on_heeg_coefficients():
    g1, g2 = gen(2, 1, 0, 0), gen(2, 2, 0, 0)
    a, b = Fraction(3, 2), Fraction(-5)
    lhs = pullback_divisor(g1).scaled(a) + pullback_divisor(g2).scaled(b)
    rhs = {}
    for g, c in ((g1, a), (g2, b)):
        for k, v in pullback_divisor(g).heeg_coeffs.items():
            rhs[k] = rhs.get(k, Fraction(0)) + c * v
    assert lhs.heeg_vector() == {k: v for k, v in rhs.items() if v != 0}


def test_pullback_support_bound():
    # at most 1 + floor(sqrt(m/N)) splittings for vanishing scalar residue,
    # at most twice that in general (two square-root cosets)
    for level in (1, 2, 3):
        for r2 in range(2 * level):
            for scaled in range(1, 200):
                if (scaled - r2 * r2) % (4 * level) != 0:
                    continue
                m = Fraction(scaled, 4 * level)
                d = pullback_divisor(gen(level, m, 0, r2))
                bound = 1 + isqrt(scaled // (4 * level * level))
                terms = len(d.heeg_coeffs) + (1 if d.omega_coeff != 0 else 0)
                if r2 == 0:
                    assert terms <= bound
                else:
                    assert terms <= 2 * bound


def test_divisor_class_rejects_bad_keys():
    with pytest.raises(ValueError):
        DivisorClass(level=1, heeg_coeffs={(Fraction(1, 2), 0): Fraction(1)})


def test_divisor_class_drops_zero_coefficients():
    d = DivisorClass(level=1, heeg_coeffs={(Fraction(1), 0): Fraction(0)})
    assert d.heeg_coeffs == {}


def test_chow_heegner_degree_zero_contract():
    dec = decompose_heegner(1, 1, 0)
    out = chow_heegner_divisor(1, dec)
    # covering degree 6 and paired degree 2*H(4) = 1 give cusp weight -6
    assert out.heeg_coeffs == {(Fraction(1), 0): Fraction(1)}
    assert out.cusp_coeff == -2 * 6 * hurwitz_class_number(4)
    assert not out.cusp_ambiguous
    assert out.omega_coeff == 0


def test_omega_reduction_rule_gated_on_genus():
    d = DivisorClass(level=5, omega_coeff=Fraction(3), cusp_coeff=Fraction(1))
    reduced = reduce_omega_to_cusp(d, genus=2)
    assert reduced.omega_coeff == 0
    assert reduced.cusp_coeff == 1 + 3 * (2 * 2 - 2)
    formal = reduce_omega_to_cusp(d, genus=0)
    assert formal.omega_coeff == 3 and formal.cusp_coeff == 1
