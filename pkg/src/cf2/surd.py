"""Quadratic surds (P + sqrt(D))/Q with exact integer arithmetic.

Values are kept in a canonical representation derived from the primitive
minimal polynomial, so equal values compare equal regardless of how they
were built.  The normalization Q | D - P*P always holds, which keeps the
expansion recurrence R' = a*Q - P, S' = (D - R'*R')/Q in integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .cf import CF, fold_word


class SurdParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


def sign_with_sqrt(a: int, b: int, d: int) -> int:
    """Sign of a + b*sqrt(d) for nonsquare d > 0 (never zero)."""
    if a >= 0 and b >= 0:
        return 1 if (a or b) else 0
    if a <= 0 and b <= 0:
        return -1 if (a or b) else 0
    if a > 0:  # b < 0
        return 1 if a * a > b * b * d else -1
    return 1 if b * b * d > a * a else -1


def _small_factor_divisors(n: int) -> list[int]:
    """Divisors of n built from prime factors <= 10**4 (larger factors kept whole)."""
    n = abs(n)
    divs = [1]
    f = 2
    while f * f <= n and f <= 10_000:
        if n % f == 0:
            powers = []
            while n % f == 0:
                n //= f
                powers.append(f ** (len(powers) + 1))
            divs = [d * e for d in divs for e in [1] + powers]
        f += 1 if f == 2 else 2
    if n > 1:
        divs = [d * e for d in divs for e in (1, n)]
    return divs


@dataclass(frozen=True)
class QuadraticSurd:
    """Exact value (P + sqrt(D))/Q with D > 0 nonsquare and Q != 0."""

    P: int
    D: int
    Q: int

    def __post_init__(self):
        P, D, Q = self.P, self.D, self.Q
        if Q == 0:
            raise ValueError("Q must be nonzero")
        if D <= 0 or isqrt(D) ** 2 == D:
            raise ValueError(f"D must be a positive nonsquare, got {D}")
        a0 = Q * Q
        b0 = -2 * P * Q
        c0 = P * P - D
        g = gcd(gcd(a0, b0), c0)
        A, B, C = a0 // g, b0 // g, c0 // g
        disc = B * B - 4 * A * C
        if Q > 0:
            P1, Q1 = -B, 2 * A
        else:
            P1, Q1 = B, -2 * A
        # Cosmetic square reduction: divide P, Q by d and D by d*d when legal.
        g0 = gcd(P1, Q1)
        best = 1
        for dv in _small_factor_divisors(g0):
            if dv > best and disc % (dv * dv) == 0:
                d2 = disc // (dv * dv)
                p2, q2 = P1 // dv, Q1 // dv
                if (d2 - p2 * p2) % q2 == 0:
                    best = dv
        object.__setattr__(self, "P", P1 // best)
        object.__setattr__(self, "D", disc // (best * best))
        object.__setattr__(self, "Q", Q1 // best)

    # -- basic queries -----------------------------------------------------

    def minimal_polynomial(self) -> tuple[int, int, int]:
        """Primitive (A, B, C) with A > 0 and A*s*s + B*s + C = 0."""
        a0 = self.Q * self.Q
        b0 = -2 * self.P * self.Q
        c0 = self.P * self.P - self.D
        g = gcd(gcd(a0, b0), c0)
        return a0 // g, b0 // g, c0 // g

    def conjugate(self) -> "QuadraticSurd":
        return QuadraticSurd(-self.P, self.D, -self.Q)

    def trace(self) -> Fraction:
        A, B, _ = self.minimal_polynomial()
        return Fraction(-B, A)

    def cmp(self, r: Fraction | int) -> int:
        """Sign of self - r (never zero; the value is irrational)."""
        r = Fraction(r)
        n, d = r.numerator, r.denominator
        s = sign_with_sqrt(d * self.P - n * self.Q, d, self.D)
        return s if self.Q > 0 else -s

    def floor(self) -> int:
        return _floor_pdq(self.P, self.D, self.Q)

    def __float__(self) -> float:
        return (self.P + self.D ** 0.5) / self.Q

    def __str__(self) -> str:
        return f"({self.P} + sqrt({self.D}))/{self.Q}"


def _floor_pdq(P: int, D: int, Q: int, r: int | None = None) -> int:
    """floor((P + sqrt(D))/Q); the numerator lies strictly inside (P+r, P+r+1)."""
    if r is None:
        r = isqrt(D)
    if Q > 0:
        return (P + r) // Q
    return -((P + r) // (-Q)) - 1


# -- Moebius transforms ----------------------------------------------------


def linear_fractional(s: QuadraticSurd, a: int, b: int, c: int, d: int) -> QuadraticSurd:
    """(a*s + b)/(c*s + d) as an exact surd; a*d - b*c must be nonzero."""
    det = a * d - b * c
    if det == 0:
        raise ValueError("transform is singular (result would be rational)")
    P, D, Q = s.P, s.D, s.Q
    cpd = c * P + d * Q
    if c == 0 and d == 0:
        raise ValueError("zero denominator")
    t = det * Q
    p2 = (a * P + b * Q) * cpd - a * c * D
    q2 = cpd * cpd - c * c * D
    if t < 0:
        p2, t, q2 = -p2, -t, -q2
    return QuadraticSurd(p2, D * t * t, q2)


def double_surd(s: QuadraticSurd) -> QuadraticSurd:
    return linear_fractional(s, 2, 0, 0, 1)


def halve_surd(s: QuadraticSurd) -> QuadraticSurd:
    return linear_fractional(s, 1, 0, 0, 2)


def halve_plus1_surd(s: QuadraticSurd) -> QuadraticSurd:
    return linear_fractional(s, 1, 1, 0, 2)


def recip_surd(s: QuadraticSurd) -> QuadraticSurd:
    return linear_fractional(s, 0, 1, 1, 0)


def add_int_surd(s: QuadraticSurd, n: int) -> QuadraticSurd:
    return linear_fractional(s, 1, n, 0, 1)


def mul_pow2(s: QuadraticSurd, k: int) -> QuadraticSurd:
    """2**k * s (k may be negative for halving)."""
    for _ in range(k):
        s = double_surd(s)
    for _ in range(-k):
        s = halve_surd(s)
    return s


# -- expansion -------------------------------------------------------------


def _expansion_raw(P: int, D: int, Q: int) -> tuple[list[int], int, list[tuple[int, int]]]:
    """Digits until the (P, Q) state repeats; returns (digits, cycle_start, states)."""
    r = isqrt(D)
    digits: list[int] = []
    states: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    while True:
        key = (P, Q)
        hit = seen.get(key)
        if hit is not None:
            return digits, hit, states
        seen[key] = len(digits)
        states.append(key)
        a = (P + r) // Q if Q > 0 else -((P + r) // (-Q)) - 1
        digits.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q


def expand_surd(s: QuadraticSurd) -> CF:
    """Eventually periodic continued fraction of the surd (exact)."""
    digits, j, _ = _expansion_raw(s.P, s.D, s.Q)
    if j == 0:
        return CF(digits[0], (), tuple(digits[1:]) + (digits[0],))
    return CF(digits[0], tuple(digits[1:j]), tuple(digits[j:]))


def expand_surd_states(s: QuadraticSurd) -> tuple[CF, list[tuple[int, int]], int]:
    """expand_surd plus the visited (R, S) states and the cycle start index."""
    digits, j, states = _expansion_raw(s.P, s.D, s.Q)
    if j == 0:
        cf = CF(digits[0], (), tuple(digits[1:]) + (digits[0],))
    else:
        cf = CF(digits[0], tuple(digits[1:j]), tuple(digits[j:]))
    return cf, states, j


def surd_of_periodic_cf(cf: CF) -> QuadraticSurd:
    """Exact quadratic value of an eventually periodic continued fraction."""
    if cf.is_finite:
        raise ValueError("continued fraction is rational, not a quadratic surd")
    w = cf.period
    h1, k1, h0, k0 = fold_word(w)
    # Fixed point t of t = (h1*t + h0)/(k1*t + k0), the root with t > 1.
    A, B, C = k1, k0 - h1, -h0
    disc = B * B - 4 * A * C
    if disc <= 0 or isqrt(disc) ** 2 == disc:
        raise ValueError("period does not define a quadratic irrational")
    t = QuadraticSurd(-B, disc, 2 * A)
    if cf.pre:
        p1, q1, p0, q0 = fold_word((cf.a0,) + cf.pre)
    else:
        p1, q1, p0, q0 = cf.a0, 1, 1, 0
    return linear_fractional(t, p1, p0, q1, q0)


def is_purely_periodic(s: QuadraticSurd) -> bool:
    """True iff s > 1 and its conjugate lies in (-1, 0)."""
    if s.cmp(1) <= 0:
        return False
    conj = s.conjugate()
    return conj.cmp(0) < 0 and conj.cmp(-1) > 0


def algebraic_integer_shape_check(s: QuadraticSurd) -> bool:
    """Expansion of an algebraic integer surd is [a0; (w..., 2*a0 - trace)] with a palindromic front.

    Requires a monic minimal polynomial; checks the palindrome and the final
    period digit against twice the integer part minus the trace.
    """
    A, B, _ = s.minimal_polynomial()
    if A != 1:
        raise ValueError("not an algebraic integer (leading coefficient != 1)")
    cf = expand_surd(s)
    if cf.pre:
        return False
    w = cf.period
    if list(w[:-1]) != list(reversed(w[:-1])):
        return False
    return w[-1] == 2 * cf.a0 + B


# -- text form ---------------------------------------------------------------


def parse_surd(text: str) -> QuadraticSurd:
    """Parse '(P + sqrt(D))/Q'; raises SurdParseError with a position."""
    i = 0
    n = len(text)

    def skip():
        nonlocal i
        while i < n and text[i].isspace():
            i += 1

    def expect(tok: str):
        nonlocal i
        skip()
        if not text.startswith(tok, i):
            raise SurdParseError(f"expected {tok!r}", i)
        i += len(tok)

    def integer() -> int:
        nonlocal i
        skip()
        start = i
        if i < n and text[i] in "+-":
            i += 1
        while i < n and text[i].isdigit():
            i += 1
        if not text[start:i].lstrip("+-"):
            raise SurdParseError("expected an integer", start)
        return int(text[start:i])

    expect("(")
    p = integer()
    expect("+")
    expect("sqrt")
    expect("(")
    d = integer()
    expect(")")
    expect(")")
    expect("/")
    q = integer()
    skip()
    if i != n:
        raise SurdParseError("trailing input", i)
    try:
        return QuadraticSurd(p, d, q)
    except ValueError as exc:
        raise SurdParseError(str(exc), 0) from None
