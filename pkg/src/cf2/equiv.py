"""Equivalence classes of quadratic irrationals under shared expansion tails.

Two quadratic irrationals are equivalent exactly when their expansions
eventually agree, i.e. when the primitive periods are rotations of one
another.  The class key is the lexicographically least rotation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .cf import CF, least_rotation
from .surd import (
    QuadraticSurd,
    double_surd,
    expand_surd,
    halve_plus1_surd,
    halve_surd,
)

ClassKey = tuple[int, ...]


def key_of_cf(cf: CF) -> ClassKey:
    if cf.is_finite:
        raise ValueError("rational values have no periodic tail")
    return least_rotation(cf.period)


def class_key(s: QuadraticSurd) -> ClassKey:
    """Rotation-invariant tail signature; equal keys mean equivalent surds."""
    return key_of_cf(expand_surd(s))


class Move(enum.Enum):
    DOUBLE = "double"
    HALF = "half"
    HALF_PLUS1 = "half+1"


def _isqrt_is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def scaled_equiv_certificate(s: QuadraticSurd, e: int, f: int, h: int,
                             bound: int = 1000):
    """Unimodular (a, b, c, d) and scale l certifying (e*s + f)/h = (a*s + b)/(c*s + d).

    Cross-multiplying against the minimal polynomial A, B, C forces
    e*c = A*l, e*d + f*c - h*a = B*l, f*d - h*b = C*l; for each l the
    determinant condition becomes a quadratic in d.  Returns the first
    solution with |l|, |d| <= bound, or None.
    """
    if e == 0 or h == 0:
        raise ValueError("target transform must be nonsingular")
    A, B, C = s.minimal_polynomial()
    for la in range(1, bound + 1):
        for l in (la, -la):
            if (A * l) % e:
                continue
            c = A * l // e
            # e^2 d^2 - e*B*l*d + A*C*l^2 -+ e*h = 0
            for det in (1, -1):
                disc = (e * B * l) ** 2 - 4 * e * e * (A * C * l * l - det * e * h)
                if disc < 0 or not _isqrt_is_square(disc):
                    continue
                root = isqrt(disc)
                for sgn in (1, -1):
                    num = e * B * l + sgn * root
                    if num % (2 * e * e):
                        continue
                    d = num // (2 * e * e)
                    if abs(d) > bound:
                        continue
                    if (e * d + f * c - B * l) % h or (f * d - C * l) % h:
                        continue
                    a = (e * d + f * c - B * l) // h
                    b = (f * d - C * l) // h
                    if a * d - b * c == det:
                        return a, b, c, d, l
    return None


def m_equiv_certificate(s: QuadraticSurd, m: int | Fraction, bound: int = 1000):
    """Certificate that s ~ m*s (integer m), or s ~ (p/q)*s for a Fraction.

    For integer m the returned (a, b, c, d, l) satisfies A*l = m*c,
    B*l = m*d - a, C*l = -b and a*d - b*c = +-1 with gcd(l, m) = 1.
    """
    m = Fraction(m)
    if m == 0:
        raise ValueError("m must be nonzero")
    return scaled_equiv_certificate(s, m.numerator, 0, m.denominator, bound)


def self_similar_check(s: QuadraticSurd) -> bool:
    """True iff s, s/2 and (s+1)/2 share one equivalence class."""
    key = class_key(s)
    return class_key(halve_surd(s)) == key and class_key(halve_plus1_surd(s)) == key


def class_contains_self_similar(s: QuadraticSurd) -> bool:
    """True iff the class of s has some member equivalent to both its halvings.

    Member-independent test: of the three images 2s, s/2, (s+1)/2, at least
    two stay in the class.  Each image enters the shared tail through a
    distinct window case, and a preperiod can steer the doubling case to
    any of the three, so two in-class images means some member keeps both
    halvings in the class.
    """
    key = class_key(s)
    count = sum(class_key(img) == key for img in
                (double_surd(s), halve_surd(s), halve_plus1_surd(s)))
    return count >= 2


def two_of_three(beta: QuadraticSurd, target: ClassKey) -> set[Move]:
    """The two of {2b, b/2, (b+1)/2} in the target class (a self-similar class member).

    Raises when the count differs from two, which signals a violated
    precondition: beta outside the class, or the class not self-similar.
    """
    if class_key(beta) != target:
        raise ValueError("beta is not a member of the target class")
    hits = {move for move, img in (
        (Move.DOUBLE, double_surd(beta)),
        (Move.HALF, halve_surd(beta)),
        (Move.HALF_PLUS1, halve_plus1_surd(beta)),
    ) if class_key(img) == target}
    if len(hits) != 2:
        raise ValueError(f"expected exactly two equivalent images, got {sorted(m.value for m in hits)}")
    return hits


@dataclass(frozen=True)
class ChainResult:
    beta: QuadraticSurd
    K: int
    checks: tuple[ClassKey, ...]


def build_chain(alpha: QuadraticSurd, K: int) -> ChainResult:
    """beta with beta, 2*beta, ..., 2^K beta all in the class of alpha.

    Descends K times from alpha, at each step replacing the current value
    by whichever of value/2, (value+1)/2 stays in the class (preferring the
    plain half when both do, which only happens at the first step).
    """
    target = class_key(alpha)
    if not self_similar_check(alpha):
        raise ValueError("alpha does not satisfy the self-similarity precondition")
    beta = alpha
    for step in range(K):
        half = halve_surd(beta)
        plus = halve_plus1_surd(beta)
        half_ok = class_key(half) == target
        plus_ok = class_key(plus) == target
        if not (half_ok or plus_ok):
            raise AssertionError("no equivalent halving; self-similarity violated")
        if half_ok and plus_ok and step > 0:
            raise AssertionError("both halvings equivalent below the top of the chain")
        beta = half if half_ok else plus
    checks = []
    cur = beta
    for _ in range(K + 1):
        checks.append(class_key(cur))
        cur = double_surd(cur)
    assert all(c == target for c in checks)
    return ChainResult(beta, K, tuple(checks))


def family_member(m: int) -> QuadraticSurd:
    """Positive root of x^2 - m*x - 2 for odd m >= 3; a self-similar class seed."""
    if m < 3 or m % 2 == 0:
        raise ValueError("m must be an odd integer >= 3")
    return QuadraticSurd(m, m * m + 8, 2)


def family_chain(m: int, K: int) -> QuadraticSurd:
    """beta with the period maximum of every 2^k beta (0 <= k <= K) equal to m."""
    return build_chain(family_member(m), K).beta


@dataclass(frozen=True)
class ScanHit:
    D: int
    Q: int
    P: int
    period_len: int
    period_max: int
    key: ClassKey


def _spf_sieve(limit: int) -> list[int]:
    spf = list(range(limit + 1))
    for i in range(2, isqrt(limit) + 1):
        if spf[i] == i:
            for j in range(i * i, limit + 1, i):
                if spf[j] == j:
                    spf[j] = i
    return spf


def _divisors_leq(n: int, bound: int, spf: list[int]) -> list[int]:
    divs = [1]
    while n > 1:
        p = spf[n]
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        divs = [d * p ** e for d in divs for e in range(k + 1)]
    return sorted(d for d in divs if d <= bound)


def _cycle_of(P: int, Q: int, D: int, r: int) -> tuple[list[int], list[tuple[int, int]]]:
    """Digit cycle and states of a purely periodic start state."""
    digits: list[int] = []
    states: list[tuple[int, int]] = []
    P0, Q0 = P, Q
    while True:
        states.append((P, Q))
        a = (P + r) // Q
        digits.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
        if (P, Q) == (P0, Q0):
            return digits, states


def _scan_range(args) -> list[ScanHit]:
    d_lo, d_hi, q_max = args
    spf = _spf_sieve(max(d_hi, 4))
    seen_keys: set[ClassKey] = set()
    hits: list[ScanHit] = []
    for D in range(d_lo, d_hi + 1):
        r = isqrt(D)
        if r * r == D:
            continue
        seen_states: set[tuple[int, int]] = set()
        local: list[ScanHit] = []
        for P in range(1, r + 1):
            M = D - P * P
            for Q in _divisors_leq(M, q_max, spf):
                if (P, Q) in seen_states:
                    continue
                # reduced: value > 1 and conjugate in (-1, 0)
                qp = Q - P
                if qp > 0 and D < qp * qp:  # value < 1
                    continue
                if D > (P + Q) * (P + Q):  # conjugate < -1
                    continue
                digits, states = _cycle_of(P, Q, D, r)
                seen_states.update(states)
                key = least_rotation(tuple(digits))
                if key in seen_keys:
                    continue
                seen_keys.add(key)
                s = QuadraticSurd(P, D, Q)
                if class_contains_self_similar(s):
                    local.append(ScanHit(D, Q, P, len(key), max(key), key))
        hits.extend(sorted(local, key=lambda h: (h.Q, h.P)))
    return hits


def scan_self_similar(d_max: int, q_max: int, d_min: int = 2, jobs: int = 1) -> list[ScanHit]:
    """All self-similar classes with a reduced representative (P + sqrt(D))/Q in range.

    Enumerates purely periodic states for each nonsquare D in [d_min, d_max]
    with 1 <= Q <= q_max, one expansion per class, and keeps the classes
    where some member is equivalent to both of its halvings.  Output is
    deduplicated by class key and sorted by (D, Q, P); chunked workers
    merge in range order, so the result is independent of the job count.
    """
    d_min = max(2, d_min)
    if jobs <= 1 or d_max - d_min < 64:
        raw = _scan_range((d_min, d_max, q_max))
    else:
        from concurrent.futures import ProcessPoolExecutor
        step = max(64, (d_max - d_min + 1) // (jobs * 4))
        ranges = [(lo, min(lo + step - 1, d_max), q_max)
                  for lo in range(d_min, d_max + 1, step)]
        raw = []
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_scan_range, ranges):
                raw.extend(part)
    seen: set[ClassKey] = set()
    hits = []
    for h in raw:
        if h.key not in seen:
            seen.add(h.key)
            hits.append(h)
    return hits
