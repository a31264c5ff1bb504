"""Heegner divisors on X_0(N) via binary quadratic forms, and Hurwitz class numbers.

Class representatives are positive definite integral forms [a, b, c] with
N | a and b fixed mod 2N; two such forms are identified when they differ by
an SL2(Z) change of variable with lower-left entry divisible by N.  Degrees
are weighted class counts with weight 1/2 on classes proportional to
x^2 + y^2 and 1/3 on classes proportional to x^2 + x*y + y^2.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .lattices import DiscElement, q_mod1


class CongruenceError(ValueError):
    """Raised when (m0, r1) violates m0 = -r1**2/4N mod 1; distinct from an empty divisor."""


@dataclass(frozen=True)
class BQForm:
    """Integral binary quadratic form a*x**2 + b*x*y + c*y**2."""

    a: int
    b: int
    c: int

    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def content(self) -> int:
        return gcd(gcd(self.a, abs(self.b)), self.c)

    def is_positive_definite(self) -> bool:
        return self.a > 0 and self.discriminant() < 0

    def transformed(self, g: tuple[tuple[int, int], tuple[int, int]]) -> "BQForm":
        """Form Q(g11*x + g12*y, g21*x + g22*y)."""
        (p, q), (s, t) = g
        a, b, c = self.a, self.b, self.c
        return BQForm(
            a * p * p + b * p * s + c * s * s,
            2 * a * p * q + b * (p * t + q * s) + 2 * c * s * t,
            a * q * q + b * q * t + c * t * t,
        )


def reduced_forms(n: int) -> tuple[BQForm, ...]:
    """All reduced positive definite forms of discriminant -n.

    Reduced means |b| <= a <= c with b >= 0 whenever |b| = a or a = c.
    Imprimitive forms are included.  Empty unless n = 0 or 3 mod 4.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    out: list[BQForm] = []
    if n % 4 in (1, 2):
        return ()
    for b in range(n % 2, isqrt(n // 3) + 1, 2):
        m = (b * b + n) // 4
        a = max(b, 1)
        while a * a <= m:
            if m % a == 0:
                c = m // a
                out.append(BQForm(a, b, c))
                if 0 < b < a < c:
                    out.append(BQForm(a, -b, c))
            a += 1
    return tuple(sorted(out, key=lambda f: (f.a, f.b, f.c)))


def _hurwitz_weight(form: BQForm) -> Fraction:
    # weights attach to the reduced shape, so imprimitive multiples of the
    # two exceptional forms are also weighted
    if form.b == 0 and form.a == form.c:
        return Fraction(1, 2)
    if form.a == form.b == form.c:
        return Fraction(1, 3)
    return Fraction(1)


@functools.lru_cache(maxsize=None)
def hurwitz_class_number(n: int) -> Fraction:
    """Hurwitz class number H(n): weighted count of all form classes of discriminant -n.

    Zero when -n is not a discriminant (n = 1 or 2 mod 4).  Rejects n <= 0.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    return sum((_hurwitz_weight(f) for f in reduced_forms(n)), Fraction(0))


@functools.lru_cache(maxsize=None)
def class_number(n: int) -> int:
    """Class number h(-n): number of primitive reduced forms of discriminant -n."""
    if n <= 0:
        raise ValueError("n must be positive")
    return sum(1 for f in reduced_forms(n) if f.content() == 1)


def eichler_relation_sides(n: int) -> tuple[Fraction, int]:
    """Both sides of the Hurwitz-Kronecker relation at n.

    Left: sum of H(4n - r**2) over r**2 <= 4n, with the boundary term
    H(0) = -1/12 when 4n is a square.  Right: sum over d | n of max(d, n/d).
    The two agree for every n >= 1.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    lhs = Fraction(0)
    r = 0
    while r * r <= 4 * n:
        m = 4 * n - r * r
        term = Fraction(-1, 12) if m == 0 else hurwitz_class_number(m)
        lhs += term if r == 0 else 2 * term
        r += 1
    rhs = sum(max(d, n // d) for d in range(1, n + 1) if n % d == 0)
    return lhs, rhs


def heegner_r_values(level: int, disc: int) -> list[int]:
    """All r in {0, ..., 2N-1} with r**2 = disc mod 4N; empty when none exist."""
    if level < 1:
        raise ValueError("level must be a positive integer")
    if disc % 4 in (2, 3):
        raise ValueError("disc must be 0 or 1 mod 4")
    return [r for r in range(2 * level) if (r * r - disc) % (4 * level) == 0]


@dataclass(frozen=True)
class HeegnerIndex:
    """Index (N, D, r) of a Heegner divisor: D < 0 a discriminant, r**2 = D mod 4N."""

    level: int
    disc: int
    r: int

    def __post_init__(self) -> None:
        if self.level < 1:
            raise ValueError("level must be a positive integer")
        if self.disc >= 0:
            raise ValueError("disc must be negative")
        if self.disc % 4 in (2, 3):
            raise ValueError("disc must be 0 or 1 mod 4")
        object.__setattr__(self, "r", self.r % (2 * self.level))
        if (self.r * self.r - self.disc) % (4 * self.level) != 0:
            raise ValueError("r**2 must be disc mod 4N")

    def self_paired(self) -> bool:
        """True when r = -r mod 2N, so the paired divisor is 2x a single one."""
        return (2 * self.r) % (2 * self.level) == 0


@dataclass(frozen=True)
class HeegnerDivisor:
    index: HeegnerIndex
    classes: tuple[tuple[BQForm, Fraction], ...]
    degree: Fraction
    self_paired: bool


def _units(n: int) -> tuple[int, ...]:
    if n == 1:
        return (1,)
    return tuple(u for u in range(1, n) if gcd(u, n) == 1)


def _p1_canon(p: int, q: int, n: int) -> tuple[int, int]:
    # canonical representative of (p : q) in P^1(Z/n)
    if n == 1:
        return (0, 0)
    return min(((u * p) % n, (u * q) % n) for u in _units(n))


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0)
    g, x, y = _egcd(b, a % b)
    return (g, y, x - (a // b) * y)


@functools.lru_cache(maxsize=None)
def _coset_reps(level: int) -> tuple[tuple[tuple[int, int], tuple[int, int]], ...]:
    """Integer matrices representing the left cosets of the lower-triangular-mod-N subgroup.

    One representative per point of P^1(Z/N); the point is the first column mod N.
    """
    n = level
    if n == 1:
        return (((1, 0), (0, 1)),)
    seen: set[tuple[int, int]] = set()
    reps = []
    for p in range(n):
        for q in range(n):
            if gcd(gcd(p, q), n) != 1:
                continue
            lab = _p1_canon(p, q, n)
            if lab in seen:
                continue
            seen.add(lab)
            pp, qq = p, q
            if pp == 0:
                pp = n
            t = 0
            while gcd(pp, qq + t * n) != 1:
                t += 1
            qq += t * n
            g, y, x_neg = _egcd(pp, qq)
            mat = ((pp, -x_neg), (qq, y))
            assert mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0] == 1
            reps.append((lab, mat))
    return tuple(m for (_, m) in sorted(reps))


_AUT_FOUR = ((0, -1), (1, 0))
_AUT_SIX = ((0, -1), (1, 1))


def _mat_mul(x, y):
    return (
        (x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
        (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]),
    )


def enumerate_heegner_divisor(idx: HeegnerIndex) -> HeegnerDivisor:
    """Enumerate the classes of forms [aN, b, c] of discriminant D with b = r mod 2N.

    Every class is obtained by transforming a reduced form R by a coset
    representative; the level-N condition is constant on cosets, and the
    automorph group of R (order 2 or 3 mod +-1 in the two exceptional shapes)
    glues cosets that give equivalent forms.  Weighted degree equals the
    Hurwitz class number H(|D|) whenever gcd(D, N) = 1.
    """
    n, disc, r = idx.level, idx.disc, idx.r
    reps = _coset_reps(n)
    labels = [_p1_canon(g[0][0], g[1][0], n) for g in reps]
    label_to_index = {lab: j for j, lab in enumerate(labels)}
    classes: list[tuple[BQForm, Fraction]] = []
    for base in reduced_forms(-disc):
        if base.b == 0 and base.a == base.c:
            aut = _AUT_FOUR
        elif base.a == base.b == base.c:
            aut = _AUT_SIX
        else:
            aut = None
        selected = {}
        for j, g in enumerate(reps):
            q = base.transformed(g)
            if q.a % n == 0 and (q.b - r) % (2 * n) == 0:
                selected[j] = g
        weight = _hurwitz_weight(base)
        seen: set[int] = set()
        for j in sorted(selected):
            if j in seen:
                continue
            orbit = {j}
            if aut is not None:
                cur = selected[j]
                for _ in range(6):
                    cur = _mat_mul(aut, cur)
                    jj = label_to_index[_p1_canon(cur[0][0], cur[1][0], n)]
                    if jj in selected:
                        orbit.add(jj)
            seen |= orbit
            classes.append((base.transformed(selected[min(orbit)]), weight))
    classes.sort(key=lambda cw: (cw[0].a, cw[0].b, cw[0].c))
    degree = sum((w for (_, w) in classes), Fraction(0))
    return HeegnerDivisor(index=idx, classes=tuple(classes), degree=degree, self_paired=idx.self_paired())


def special_divisor_index(level: int, m0: Fraction | int, r1: int) -> HeegnerIndex | None:
    """Heegner index (D, r) = (-4N*m0, r1) of the special divisor at (m0, r1).

    Requires m0 > 0 and the congruence m0 = -r1**2/4N mod 1, violated input
    raising CongruenceError.  Returns None only if (D, r) fails to be a valid
    index, which signals the empty divisor (never the case once the congruence
    holds, but kept as an explicit outcome distinct from the error).
    """
    if level < 1:
        raise ValueError("level must be a positive integer")
    m0 = Fraction(m0)
    if m0 <= 0:
        raise ValueError("m0 must be positive")
    r1 = r1 % (2 * level)
    scaled = m0 * 4 * level
    if scaled.denominator != 1 or (scaled.numerator + r1 * r1) % (4 * level) != 0:
        raise CongruenceError(
            "m0 = %s violates m0 = -r1**2/(4N) mod 1 for r1 = %d at level %d" % (m0, r1, level)
        )
    disc = -scaled.numerator
    try:
        return HeegnerIndex(level=level, disc=disc, r=r1)
    except ValueError:
        return None


def special_divisor_key_is_valid(level: int, m0: Fraction | int, r1: int) -> bool:
    """True when (m0, r1) indexes a nonempty Heegner divisor at this level."""
    try:
        return special_divisor_index(level, m0, r1) is not None
    except (CongruenceError, ValueError):
        return False


def heegner_degree_on_cover(level: int, m0: Fraction | int, r1: int, cover_degree: int) -> Fraction:
    """Degree of the paired Heegner divisor pulled back through a degree-d cover.

    The downstairs divisor is the r and -r pair, so its degree is twice the
    Hurwitz class number; self-paired indices count the single divisor with
    multiplicity two, giving the same total.
    """
    idx = special_divisor_index(level, m0, r1)
    if idx is None:
        return Fraction(0)
    return 2 * cover_degree * hurwitz_class_number(-idx.disc)


def disc_element_for_r1(level: int, r1: int) -> DiscElement:
    return DiscElement(level=level, r1=r1, r2=0)


def heegner_key_congruent(level: int, m0: Fraction, r1: int) -> bool:
    """Congruence test m0 = q(mu_r1) mod 1 on the trace-zero side."""
    mu = DiscElement(level=level, r1=r1, r2=0)
    return (Fraction(m0) - q_mod1(mu, "trace0")) % 1 == 0
