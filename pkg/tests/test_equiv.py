import random

import pytest

from conftest import random_surd
from cf2.cf import CF
from cf2.equiv import (
    Move,
    build_chain,
    class_contains_self_similar,
    class_key,
    family_chain,
    family_member,
    m_equiv_certificate,
    scaled_equiv_certificate,
    scan_self_similar,
    self_similar_check,
    two_of_three,
)
from cf2.surd import (
    QuadraticSurd,
    double_surd,
    expand_surd,
    halve_surd,
    linear_fractional,
    mul_pow2,
    recip_surd,
    surd_of_periodic_cf,
)

S17 = QuadraticSurd(3, 17, 2)


def test_class_key_examples():
    assert class_key(S17) == class_key(QuadraticSurd(3, 17, 4))
    assert class_key(S17) != class_key(QuadraticSurd(3, 17, 1))
    assert class_key(S17) == (1, 1, 3)


def test_class_key_of_complete_quotient():
    rng = random.Random(3)
    for _ in range(60):
        s = random_surd(rng, d_max=10**4)
        shifted = recip_surd(linear_fractional(s, 1, -s.floor(), 0, 1))
        assert class_key(s) == class_key(shifted)


def test_class_key_is_unimodular_invariant():
    rng = random.Random(5)
    mats = []
    while len(mats) < 60:
        a, b, c, d = (rng.randint(-10, 10) for _ in range(4))
        if a * d - b * c in (1, -1):
            mats.append((a, b, c, d))
    for i in range(200):
        s = random_surd(rng, d_max=10**4)
        a, b, c, d = mats[i % len(mats)]
        assert class_key(s) == class_key(linear_fractional(s, a, b, c, d))


def test_class_key_equivalence_relation():
    rng = random.Random(7)
    surds = [random_surd(rng, d_max=5000) for _ in range(60)]
    keys = [class_key(s) for s in surds]
    for i in range(len(surds)):
        assert keys[i] == keys[i]
        for j in range(i + 1, len(surds)):
            assert (keys[i] == keys[j]) == (keys[j] == keys[i])


def test_m_certificate_half_transform_fixture():
    # s/2 = 1/(s - 3) for the root of x^2 - 3x - 2
    from fractions import Fraction
    cert = m_equiv_certificate(S17, Fraction(1, 2))
    assert cert is not None
    a, b, c, d, l = cert
    assert a * d - b * c in (1, -1)
    assert linear_fractional(S17, a, b, c, d) == halve_surd(S17)
    # the textbook certificate (0, 1, 1, -3), l = 1 satisfies the same system
    assert linear_fractional(S17, 0, 1, 1, -3) == halve_surd(S17)
    A, B, C = S17.minimal_polynomial()
    a2, b2, c2, d2, l2 = 0, 1, 1, -3, 1
    assert c2 == A * l2 and d2 - 2 * a2 == B * l2 and -2 * b2 == C * l2
    assert a2 * d2 - b2 * c2 == -1


def test_m_certificate_none_when_classes_differ():
    assert m_equiv_certificate(S17, 2) is None
    golden = QuadraticSurd(1, 5, 2)
    assert m_equiv_certificate(golden, 2) is None


def test_scaled_certificate_half_plus1_fixture():
    s = QuadraticSurd(5, 33, 2)  # root of x^2 - 5x - 2
    cert = scaled_equiv_certificate(s, 1, 1, 2)
    assert cert is not None
    a, b, c, d, l = cert
    assert linear_fractional(s, a, b, c, d) == linear_fractional(s, 1, 1, 0, 2)
    assert (a, b, c, d) == (3, 1, 1, 0)


def test_certificate_existence_implies_class_equality():
    rng = random.Random(11)
    found = 0
    for _ in range(60):
        s = random_surd(rng, d_max=2000)
        cert = m_equiv_certificate(s, 2, bound=300)
        if cert is not None:
            found += 1
            a, b, c, d, l = cert
            assert a * d - b * c in (1, -1)
            assert linear_fractional(s, a, b, c, d) == double_surd(s)
            assert class_key(s) == class_key(double_surd(s))


def test_never_all_three_certificates_on_self_similar():
    from fractions import Fraction
    for s in (S17, QuadraticSurd(5, 33, 2)):
        certs = [m_equiv_certificate(s, 2, bound=400),
                 m_equiv_certificate(s, Fraction(1, 2), bound=400),
                 scaled_equiv_certificate(s, 1, 1, 2, bound=400)]
        assert sum(c is not None for c in certs) == 2


def test_self_similar_fixtures():
    assert self_similar_check(S17)
    assert self_similar_check(QuadraticSurd(5, 33, 2))
    assert self_similar_check(QuadraticSurd(1, 2089, 6))
    assert max(expand_surd(QuadraticSurd(1, 2089, 6)).period) == 14
    assert not self_similar_check(QuadraticSurd(1, 5, 2))
    assert not self_similar_check(QuadraticSurd(0, 2, 1))


def test_two_of_three_examples():
    key = class_key(S17)
    assert two_of_three(S17, key) == {Move.HALF, Move.HALF_PLUS1}
    assert len(two_of_three(QuadraticSurd(3, 17, 4), key)) == 2
    with pytest.raises(ValueError):
        two_of_three(QuadraticSurd(0, 2, 1), key)
    # members of non-self-similar classes report the violated precondition
    sqrt2 = QuadraticSurd(0, 2, 1)
    with pytest.raises(ValueError):
        two_of_three(sqrt2, class_key(sqrt2))


def test_two_of_three_random_members():
    rng = random.Random(13)
    key = class_key(S17)
    word = expand_surd(S17).period
    for _ in range(150):
        pre = tuple(rng.randint(1, 9) for _ in range(rng.randint(0, 5)))
        member = surd_of_periodic_cf(CF(0, pre, word))
        assert len(two_of_three(member, key)) == 2


def test_build_chain_examples():
    result = build_chain(S17, 2)
    assert all(k == (1, 1, 3) for k in result.checks)
    assert len(result.checks) == 3
    assert build_chain(S17, 0).beta == S17
    r10 = build_chain(QuadraticSurd(5, 33, 2), 10)
    assert len(r10.checks) == 11
    for k in range(11):
        assert class_key(mul_pow2(r10.beta, k)) == class_key(QuadraticSurd(5, 33, 2))


def test_build_chain_requires_self_similar():
    with pytest.raises(ValueError):
        build_chain(QuadraticSurd(1, 5, 2), 3)


def test_family_member_fixtures():
    assert family_member(3) == S17
    assert str(expand_surd(family_member(3))) == "[(3; 1, 1)]"
    assert str(expand_surd(family_member(5))) == "[(5; 2, 1, 2)]"
    with pytest.raises(ValueError):
        family_member(4)
    with pytest.raises(ValueError):
        family_member(1)


def test_family_shape_palindrome_and_bound():
    for m in range(3, 53, 2):
        cf = expand_surd(family_member(m))
        assert cf.is_purely_periodic and cf.a0 == m
        word = cf.period  # reads [m; (a_1 ... a_n)] with a_n = m
        assert word[-1] == m
        front = word[:-1]
        assert list(front) == list(reversed(front))
        assert all(d <= m for d in word)
        assert self_similar_check(family_member(m))


def test_family_chain_b_values():
    beta = family_chain(3, 4)
    for k in range(5):
        assert max(expand_surd(mul_pow2(beta, k)).period) == 3


def test_scan_finds_known_classes():
    hits = scan_self_similar(50, 20)
    keys = {h.key for h in hits}
    assert (1, 1, 3) in keys  # D = 17
    assert (1, 2, 5, 2) in keys  # D = 33, the m = 5 class
    assert (1, 2, 2, 1, 5) in keys  # D = 41, root of x^2 - 5x - 4
    d17 = [h for h in hits if h.key == (1, 1, 3)][0]
    assert d17.D == 17 and d17.period_len == 3 and d17.period_max == 3


def test_scan_2089_fixture():
    hits = scan_self_similar(2089, 6, d_min=2089)
    target = class_key(QuadraticSurd(1, 2089, 6))
    match = [h for h in hits if h.key == target]
    assert match and match[0].period_max == 14


def test_scan_output_is_sorted():
    hits = scan_self_similar(200, 30)
    order = [(h.D, h.Q, h.P) for h in hits]
    assert order == sorted(order)


def test_scan_deterministic_across_workers():
    assert scan_self_similar(400, 30, jobs=3) == scan_self_similar(400, 30, jobs=1)


def test_class_contains_self_similar_is_member_independent():
    # (1 + sqrt(17))/4 is in the self-similar class but fails the member check
    member = QuadraticSurd(1, 17, 4)
    assert class_key(member) == (1, 1, 3)
    assert not self_similar_check(member)
    assert class_contains_self_similar(member)
