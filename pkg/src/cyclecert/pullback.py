"""Symbolic divisor algebra on the cover curve and the diagonal pullback map.

Divisor classes are formal rational combinations of Heegner generators
Heeg(m0, r1), the tautological-square class Omega (the canonical class) and
the cusp class Cusp.  The pullback of an ambient generator Z*(m, mu) lands in
this algebra with a cusp coefficient that is only defined up to an integer;
that ambiguity is carried as a flag and never guessed, and all round-trip
comparisons are on Heegner coefficients alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .heegner import hurwitz_class_number, special_divisor_index
from .lattices import DiscElement, q_mod1
from .modcurves import cover_degree_over_x0
from .repcount import scalar_rep_count

HeegKey = tuple[Fraction, int]


def _validate_heeg_key(level: int, m0: Fraction, r1: int) -> HeegKey:
    m0 = Fraction(m0)
    if m0 <= 0:
        raise ValueError("Heegner keys require m0 > 0")
    r1 = r1 % (2 * level)
    scaled = m0 * 4 * level
    if scaled.denominator != 1 or (scaled.numerator + r1 * r1) % (4 * level) != 0:
        raise ValueError("key (%s, %d) violates m0 = -r1**2/(4N) mod 1" % (m0, r1))
    return (m0, r1)


@dataclass
class DivisorClass:
    """Formal divisor class: Heegner coefficients plus Omega and Cusp parts.

    `cusp_ambiguous` means the cusp coefficient is a representative only,
    defined up to an undetermined integer.
    """

    level: int
    heeg_coeffs: dict[HeegKey, Fraction] = field(default_factory=dict)
    omega_coeff: Fraction = Fraction(0)
    cusp_coeff: Fraction = Fraction(0)
    cusp_ambiguous: bool = False

    def __post_init__(self) -> None:
        if self.level < 1:
            raise ValueError("level must be a positive integer")
        cleaned: dict[HeegKey, Fraction] = {}
        for (m0, r1), coeff in self.heeg_coeffs.items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            key = _validate_heeg_key(self.level, m0, r1)
            if special_divisor_index(self.level, key[0], key[1]) is None:
                raise ValueError("key %s indexes an empty divisor" % (key,))
            cleaned[key] = cleaned.get(key, Fraction(0)) + coeff
        self.heeg_coeffs = {k: v for k, v in cleaned.items() if v != 0}
        self.omega_coeff = Fraction(self.omega_coeff)
        self.cusp_coeff = Fraction(self.cusp_coeff)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        if self.level != other.level:
            raise ValueError("cannot add classes at different levels")
        heeg = dict(self.heeg_coeffs)
        for k, v in other.heeg_coeffs.items():
            heeg[k] = heeg.get(k, Fraction(0)) + v
        return DivisorClass(
            level=self.level,
            heeg_coeffs=heeg,
            omega_coeff=self.omega_coeff + other.omega_coeff,
            cusp_coeff=self.cusp_coeff + other.cusp_coeff,
            cusp_ambiguous=self.cusp_ambiguous or other.cusp_ambiguous,
        )

    def scaled(self, factor: Fraction | int) -> "DivisorClass":
        f = Fraction(factor)
        return DivisorClass(
            level=self.level,
            heeg_coeffs={k: f * v for k, v in self.heeg_coeffs.items()},
            omega_coeff=f * self.omega_coeff,
            cusp_coeff=f * self.cusp_coeff,
            cusp_ambiguous=self.cusp_ambiguous,
        )

    def heeg_vector(self) -> dict[HeegKey, Fraction]:
        return dict(self.heeg_coeffs)

    def is_zero(self) -> bool:
        return not self.heeg_coeffs and self.omega_coeff == 0 and self.cusp_coeff == 0


@dataclass(frozen=True)
class AmbientGenerator:
    """Generator Z*(m, mu) of the divisor algebra on the product surface.

    (0, 0) denotes the inverse tautological-square class of the surface;
    (0, mu) with mu nonzero is the zero divisor.
    """

    m: Fraction
    mu: DiscElement

    def __post_init__(self) -> None:
        m = Fraction(self.m)
        object.__setattr__(self, "m", m)
        if m < 0:
            raise ValueError("m must be nonnegative")
        if (m - q_mod1(self.mu, "full")) % 1 != 0:
            raise ValueError("m = %s violates m = q(mu) mod 1 for mu = %s" % (m, self.mu))

    @property
    def level(self) -> int:
        return self.mu.level


@dataclass(frozen=True)
class PullbackDecomposition:
    """Coefficients on ambient generators realizing a Heegner divisor as a pullback."""

    level: int
    target: HeegKey
    terms: tuple[tuple[AmbientGenerator, Fraction], ...]
    residual_cusp_ambiguous: bool = True

    def coefficient(self, gen: AmbientGenerator) -> Fraction:
        for g, c in self.terms:
            if g == gen:
                return c
        return Fraction(0)


def pullback_divisor(gen: AmbientGenerator) -> DivisorClass:
    """Diagonal pullback of an ambient generator, as a divisor class on the curve.

    For m > 0 the result runs over splittings m = m0 + m_plus with the scalar
    side contributing its representation count; the m0 = 0 branch exists only
    for vanishing trace-zero component and contributes through the convention
    Z(0, 0) = -Omega.  The cusp coefficient is ambiguous for m > 0 (boundary
    components of the closure are supported on pairs of cusps) and the chosen
    representative is 0.  For m = 0 the pullback is -2*Omega at mu = 0 by
    adjunction, and the zero class otherwise.
    """
    n = gen.level
    r1, r2 = gen.mu.r1, gen.mu.r2
    if gen.m == 0:
        if gen.mu.is_zero():
            return DivisorClass(level=n, omega_coeff=Fraction(-2), cusp_ambiguous=False)
        return DivisorClass(level=n, cusp_ambiguous=False)

    heeg: dict[HeegKey, Fraction] = {}
    omega = Fraction(0)
    scaled = gen.m * 4 * n
    assert scaled.denominator == 1  # m = q(mu) mod 1 forces denominator | 4N
    smax = isqrt(scaled.numerator)
    seen: set[Fraction] = set()
    k_lo = -(smax + r2) // (2 * n) - 1
    k_hi = (smax - r2) // (2 * n) + 1
    for k in range(k_lo, k_hi + 1):
        s = r2 + 2 * n * k
        m_plus = Fraction(s * s, 4 * n)
        if m_plus > gen.m or m_plus in seen:
            continue
        seen.add(m_plus)
        count = scalar_rep_count(n, m_plus, r2)
        if count == 0:
            continue
        m0 = gen.m - m_plus
        if m0 > 0:
            key = (m0, r1 % (2 * n))
            heeg[key] = heeg.get(key, Fraction(0)) + count
        elif r1 % (2 * n) == 0:
            omega += -count
    return DivisorClass(
        level=n,
        heeg_coeffs=heeg,
        omega_coeff=omega,
        cusp_coeff=Fraction(0),
        cusp_ambiguous=True,
    )


def decompose_heegner(level: int, m0: Fraction | int, r1: int) -> PullbackDecomposition:
    """Express Heeg(m0, r1) as a pullback of ambient generators, by back-substitution.

    The generators are Z*(m', (r1, 0)) for the ladder m' = m0, m0 - 1, ...
    down to the fractional part, plus Z*(0, 0).  The linear system is
    unitriangular in decreasing m', so the leading coefficient is exactly 1;
    the Z*(0, 0) coefficient is chosen so the Omega parts cancel, and the cusp
    part stays ambiguous.
    """
    if level < 1:
        raise ValueError("level must be a positive integer")
    m0, r1 = _validate_heeg_key(level, Fraction(m0), r1)
    n = level

    lam: dict[Fraction, Fraction] = {}
    needed: dict[Fraction, Fraction] = {m0: Fraction(1)}
    omega_total = Fraction(0)
    m_cur = m0
    while m_cur > 0:
        coeff = needed.pop(m_cur, Fraction(0))
        if coeff != 0:
            lam[m_cur] = coeff
            k = 1
            while m_cur - n * k * k > 0:
                lower = m_cur - n * k * k
                needed[lower] = needed.get(lower, Fraction(0)) - 2 * coeff
                k += 1
            if r1 == 0:
                ratio = Fraction(m_cur, n)
                if ratio.denominator == 1 and isqrt(ratio.numerator) ** 2 == ratio.numerator:
                    omega_total += -2 * coeff
        m_cur -= 1

    terms: list[tuple[AmbientGenerator, Fraction]] = [
        (AmbientGenerator(m=m, mu=DiscElement(level=n, r1=r1, r2=0)), c)
        for m, c in sorted(lam.items(), reverse=True)
    ]
    lam0 = omega_total / 2
    if lam0 != 0:
        terms.append((AmbientGenerator(m=Fraction(0), mu=DiscElement(level=n, r1=0, r2=0)), lam0))
    return PullbackDecomposition(
        level=n,
        target=(m0, r1),
        terms=tuple(terms),
        residual_cusp_ambiguous=True,
    )


def apply_decomposition(decomp: PullbackDecomposition) -> DivisorClass:
    """Pull back every generator in the decomposition and sum with its coefficients."""
    total = DivisorClass(level=decomp.level)
    for gen, coeff in decomp.terms:
        total = total + pullback_divisor(gen).scaled(coeff)
    return total


def verify_decomposition(decomp: PullbackDecomposition) -> dict[HeegKey, Fraction]:
    """Residual of the round trip on Heegner coefficients; empty means exact.

    Omega and cusp coefficients are excluded from the comparison: the cusp
    coefficient of a pullback is undetermined, and the two classes are
    proportional on the curves in question.
    """
    achieved = apply_decomposition(decomp).heeg_vector()
    achieved[decomp.target] = achieved.get(decomp.target, Fraction(0)) - 1
    return {k: v for k, v in achieved.items() if v != 0}


def chow_heegner_divisor(level: int, decomp: PullbackDecomposition) -> DivisorClass:
    """Degree-zero divisor cut out of the modified diagonal cycle by the decomposition.

    The result is Heeg(m0, r1) - d1 * Cusp with d1 the degree of the Heegner
    divisor on the cover: twice the Hurwitz class number times the covering
    degree over X_0(N).  The two basepoint-slice correction terms are
    supported on cusps, hence torsion, and drop out of the rational class;
    the cusp coefficient here is exact, not ambiguous.
    """
    m0, r1 = decomp.target
    idx = special_divisor_index(level, m0, r1)
    if idx is None:
        raise ValueError("decomposition targets an empty divisor")
    degree = 2 * cover_degree_over_x0(level) * hurwitz_class_number(-idx.disc)
    return DivisorClass(
        level=level,
        heeg_coeffs={(m0, r1): Fraction(1)},
        omega_coeff=Fraction(0),
        cusp_coeff=-degree,
        cusp_ambiguous=False,
    )


def reduce_omega_to_cusp(divclass: DivisorClass, genus: int) -> DivisorClass:
    """Absorb the Omega part into the cusp class via (2g-2)*Cusp = Omega.

    The relation requires a torsion-free group with genus at least 2 so the
    canonical class is cusp-supported; below genus 2 the class is returned
    unchanged and stays formal.
    """
    if genus < 2 or divclass.omega_coeff == 0:
        return divclass
    return DivisorClass(
        level=divclass.level,
        heeg_coeffs=dict(divclass.heeg_coeffs),
        omega_coeff=Fraction(0),
        cusp_coeff=divclass.cusp_coeff + divclass.omega_coeff * (2 * genus - 2),
        cusp_ambiguous=divclass.cusp_ambiguous,
    )
