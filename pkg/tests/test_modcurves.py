import pytest

from cyclecert.modcurves import (
    LevelBoundError,
    cover_degree_over_x0,
    cover_profile,
    fricke_quotient_genus,
    minus_newspace_dim,
    sl2_order,
    x0_profile,
)
from oracles import cover_index_by_crt, x0_data_by_enumeration

GENUS_ONE_PRIMES = (37, 43, 53, 61, 79, 83, 89, 101, 131)
GENUS_TWO_PLUS_PRIMES = (67, 73, 97, 103, 107, 109, 113, 127)


def test_sl2_orders_by_brute_force():
    for m in range(1, 13):
        count = sum(
            1
            for a in range(m)
            for b in range(m)
            for c in range(m)
            for d in range(m)
            if (a * d - b * c) % m == 1 % m
        )
        assert sl2_order(m) == count


def test_x0_profile_examples():
    assert x0_profile(1).genus == 0
    p37 = x0_profile(37)
    assert p37.genus == 2
    assert (p37.index, p37.nu2, p37.nu3, p37.cusps) == (38, 2, 2, 2)
    assert x0_profile(11).genus == 1
    assert x0_profile(128).genus == 9


def test_x0_profile_against_enumeration_oracle():
    for n in list(range(1, 41)) + [128]:
        index, cusps, nu2, nu3 = x0_data_by_enumeration(n)
        prof = x0_profile(n)
        assert (prof.index, prof.cusps, prof.nu2, prof.nu3) == (index, cusps, nu2, nu3)


def test_cover_profile_level_one_is_the_classical_one():
    prof = cover_profile(1)
    assert (prof.index, prof.cusps, prof.genus, prof.nu2, prof.nu3) == (6, 3, 0, 0, 0)


def test_cover_profiles_pinned():
    # regression values; genus follows from index and cusps since nu2 = nu3 = 0
    expected = {2: (12, 4, 0), 3: (24, 6, 0), 5: (72, 12, 1), 6: (96, 16, 1)}
    for n, (index, cusps, genus) in expected.items():
        prof = cover_profile(n)
        assert (prof.index, prof.cusps, prof.genus) == (index, cusps, genus)


def test_cover_is_torsion_free_up_to_30():
    for n in range(1, 31):
        prof = cover_profile(n)
        assert prof.nu2 == 0 and prof.nu3 == 0


def test_cover_index_multiplicative_over_prime_powers():
    from cyclecert.modcurves import _cover_image

    for n in range(1, 31):
        m = 2 * n
        direct = sl2_order(m) // len(_cover_image(m))
        assert direct == cover_index_by_crt(n)


def test_cover_enumeration_guard():
    with pytest.raises(LevelBoundError):
        cover_profile(61)
    prof = cover_profile(61, max_enum_level=122)
    assert prof.nu2 == 0 and prof.nu3 == 0


@pytest.mark.parametrize("p,genus", [(37, 1), (2, 0), (3, 0), (5, 0), (31, 0)])
def test_fricke_quotient_examples(p, genus):
    assert fricke_quotient_genus(p) == genus


def test_fricke_quotient_genus_table():
    for p in GENUS_ONE_PRIMES:
        assert fricke_quotient_genus(p) == 1
    for p in GENUS_TWO_PLUS_PRIMES:
        assert fricke_quotient_genus(p) >= 2


def test_fricke_riemann_hurwitz_consistency():
    # 2*g0 - 2 = 2*(2*g* - 2) + nu with nu the fixed-point count from
    # primitive class numbers, for every prime 5 <= p <= 131
    from cyclecert.heegner import class_number

    for p in (q for q in range(5, 132) if all(q % d for d in range(2, q))):
        nu = class_number(4 * p) + (class_number(p) if p % 4 == 3 else 0)
        g0 = x0_profile(p).genus
        gs = fricke_quotient_genus(p)
        assert 2 * g0 - 2 == 2 * (2 * gs - 2) + nu


def test_fricke_rejects_composites():
    with pytest.raises(ValueError):
        fricke_quotient_genus(6)
    with pytest.raises(ValueError):
        minus_newspace_dim(74)


@pytest.mark.parametrize("p,dim", [(37, 1), (2, 0), (131, 1), (67, 2)])
def test_minus_newspace_dim(p, dim):
    assert minus_newspace_dim(p) == dim


def test_cover_degree_over_x0():
    assert cover_degree_over_x0(1) == 6
    for n in (2, 3, 5, 6):
        num = cover_profile(n).index
        den = x0_profile(n).index
        assert cover_degree_over_x0(n) * den == num
