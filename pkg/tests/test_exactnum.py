import math
import pickle
import random
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from logcave.errors import MixedField, ParseError
from logcave.exactnum import (
    R0,
    R1,
    QField,
    format_number,
    golden,
    normalize,
    parse_number,
    parse_numbers,
    qf_add,
    qf_cmp,
    qf_mul,
    qf_sign,
    sign_sub_scaled,
    sqrt_rational,
    squarefree_decompose,
)

S2 = QField(0, 1, 2)


def test_add_examples():
    assert qf_add(QField(1, 1, 2), QField(1, 0, 2)) == QField(2, 1, 2)
    assert qf_add(R0, QField(0)) == R0
    s = qf_add(QField(1, -1, 2), QField(1, 1, 2))
    assert s == 2 and s.d == 0 and s.is_rational


def test_mul_examples():
    assert qf_mul(R1, R1) == QField(3, 2, 2)
    golden_sq = qf_mul(golden(1), golden(1))
    assert (golden_sq.a, golden_sq.b, golden_sq.d) == (F(3, 2), F(1, 2), 5)
    assert qf_mul(QField(1, 1, 2), QField(1, -1, 2)) == -1


def test_sign_examples():
    assert qf_sign(QField(1, -1, 2)) == -1
    assert qf_sign(QField(0)) == 0
    assert qf_sign(QField(-3, 2, 5)) == 1


def test_cmp_examples():
    with pytest.raises(MixedField):
        qf_cmp(R1, R0)
    assert qf_cmp(QField(2, 0, 2), R1) == -1
    assert qf_cmp(R0, R0) == 0


def test_r1_is_root_of_its_quadratic():
    assert R1 * R1 - 2 * R1 - 1 == 0


def test_r0_value():
    # (3+sqrt5)/2 = phi_1^2
    assert R0 == golden(1) ** 2
    assert R0 == (3 + sqrt_rational(5)) / 2


def test_squarefree_normalization():
    x = QField(0, 1, 8)
    assert (x.b, x.d) == (2, 2)
    assert QField(1, 1, 9) == 4
    assert QField(1, 1, 9).d == 0
    assert squarefree_decompose(72) == (6, 2)
    assert sqrt_rational(F(9, 4)) == F(3, 2)
    assert sqrt_rational(F(1, 2)) == QField(0, F(1, 2), 2)


def test_equality_and_hash_match_fraction():
    assert QField(F(1, 3)) == F(1, 3)
    assert hash(QField(F(1, 3))) == hash(F(1, 3))
    assert len({QField(2), 2, F(2)}) == 1


def test_immutable_and_picklable():
    with pytest.raises(AttributeError):
        R1.a = 5
    assert pickle.loads(pickle.dumps(R0)) == R0


def test_inverse_and_division():
    assert R1 * (1 / R1) == 1
    assert R1 / R1 == 1
    assert (1 / R1) == QField(-1, 1, 2)
    with pytest.raises(ZeroDivisionError):
        R1 / QField(0)


def test_powers():
    assert R1 ** 0 == 1
    assert R1 ** 3 == R1 * R1 * R1
    assert R1 ** -2 * R1 ** 2 == 1


def test_mixed_fields_rejected():
    with pytest.raises(MixedField):
        S2 + QField(0, 1, 3)
    with pytest.raises(MixedField):
        parse_number("sqrt(2)+sqrt(5)")


def test_sign_sub_scaled_matches_generic():
    rng = random.Random(4)
    for _ in range(500):
        x = rng.randint(-10 ** 6, 10 ** 6)
        y = rng.randint(-10 ** 3, 10 ** 3)
        r = rng.choice([R0, R1, F(7, 3), QField(F(1, 3), F(2, 7), 13)])
        assert sign_sub_scaled(x, r, y) == qf_sign(x - r * y)
        xf, yf = F(x, rng.randint(1, 9)), F(y, rng.randint(1, 9))
        assert sign_sub_scaled(xf, r, yf) == qf_sign(xf - r * yf)


def test_sign_sub_scaled_exact_tie():
    # x - r*y == 0 exactly in Q(sqrt 2)
    assert sign_sub_scaled(QField(2, 2, 2), R1, 2) == 0


# -- text form -----------------------------------------------------------------

@pytest.mark.parametrize("text,value", [
    ("3/2", F(3, 2)),
    ("-7", -7),
    ("1+sqrt(2)", R1),
    ("r1", R1),
    ("r0", R0),
    ("(3+sqrt(5))/2", R0),
    ("phi(1)", golden(1)),
    ("phi(2)", 2),
    ("phi(6)", 3),
    ("1/2+3/4*sqrt(8)", QField(F(1, 2), F(3, 2), 2)),
    ("2^10", 1024),
    ("2**-2", F(1, 4)),
    ("1.9", F(19, 10)),
    ("sqrt(1/2)", QField(0, F(1, 2), 2)),
])
def test_parse(text, value):
    assert parse_number(text) == value


@pytest.mark.parametrize("bad", ["", "1/0", "sqrt(-1)", "x", "1+", "(1", "sqrt(r1)", "1 2"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_number(bad)


def test_parse_numbers():
    assert parse_numbers("{1, 1+sqrt(2), phi(1)}") == [1, R1, golden(1)]
    assert parse_numbers("1,sqrt(2),3") == [1, S2, 3]
    assert parse_numbers("") == []


def test_format_examples():
    assert format_number(F(3, 2)) == "3/2"
    assert format_number(R0) == "3/2+1/2*sqrt(5)"
    assert format_number(R1) == "1+sqrt(2)"
    assert format_number(QField(0, -1, 2)) == "-sqrt(2)"
    assert format_number(QField(1, F(-2, 3), 2)) == "1-2/3*sqrt(2)"


def test_normalize_types():
    assert type(normalize(QField(3))) is int
    assert type(normalize(F(3, 1))) is int
    assert type(normalize(F(3, 2))) is F
    assert normalize(R1) is R1


# -- properties ------------------------------------------------------------------

def _rand_frac(rng, bound=10 ** 6, den=10 ** 4):
    return F(rng.randint(-bound, bound), rng.randint(1, den))


def test_canonical_form_after_operations():
    rng = random.Random(0)
    for _ in range(10 ** 4):
        p, q = _rand_frac(rng), _rand_frac(rng)
        for v in (p + q, p - q, p * q) + ((p / q,) if q else ()):
            assert v.denominator > 0 and math.gcd(v.numerator, v.denominator) == 1
        x = QField(p, q, 5) * QField(q, p, 5)
        for part in (x.a, x.b):
            assert part.denominator > 0 and math.gcd(part.numerator, part.denominator) == 1
        assert x.b != 0 or x.d == 0


def test_sign_agrees_with_256_bit_evaluation():
    rng = random.Random(1)
    with mpmath.workprec(256):
        for i in range(10 ** 4):
            d = rng.choice([2, 3, 5, 13])
            a = rng.randint(-10 ** 6, 10 ** 6)
            b = rng.randint(-10 ** 6, 10 ** 6)
            if i % 10 == 0:
                # exact zeros: a = b = 0, or b = 0
                a, b = (0, 0) if i % 20 == 0 else (a, 0)
            x = QField(a, b, d)
            ref = mpmath.mpf(a) + mpmath.mpf(b) * mpmath.sqrt(d)
            # integer a, b with non-square d: a + b sqrt d = 0 only when a = b = 0
            expected = 0 if (a == 0 and b == 0) else (1 if ref > 0 else -1)
            assert qf_sign(x) == expected


def test_field_axioms_on_random_triples():
    rng = random.Random(2)
    for _ in range(10 ** 3):
        d = rng.choice([2, 3, 5, 13])
        x, y, z = (QField(_rand_frac(rng, 100, 20), _rand_frac(rng, 100, 20), d) for _ in range(3))
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x + y == y + x and x * y == y * x
        if x != 0:
            assert x * (1 / x) == 1


fracs = st.fractions(min_value=-10 ** 4, max_value=10 ** 4, max_denominator=10 ** 3)
radicands = st.sampled_from([2, 3, 5, 6, 7, 13])


@given(fracs, fracs, radicands)
@settings(max_examples=300, deadline=None)
def test_format_parse_round_trip(a, b, d):
    x = normalize(QField(a, b, d))
    assert parse_number(format_number(x)) == x


@given(fracs, fracs, fracs, fracs, radicands)
@settings(max_examples=300, deadline=None)
def test_cmp_consistent_with_subtraction_and_order(a, b, c, e, d):
    x, y = QField(a, b, d), QField(c, e, d)
    s = qf_cmp(x, y)
    assert s == -qf_cmp(y, x)
    assert (s == 0) == (x == y)
    assert (x < y) == (s < 0) and (x >= y) == (s >= 0)
    with mpmath.workprec(200):
        gap = x.approx(60) - y.approx(60)
        if s != 0:
            assert (gap > 0) == (s > 0)


@given(fracs, fracs, radicands)
@settings(max_examples=200, deadline=None)
def test_norm_equals_product_with_conjugate(a, b, d):
    x = QField(a, b, d)
    assert x * x.conjugate() == x.norm()


def test_sign_of_huge_near_ties():
    # |a| within 1 of |b| sqrt(d): the cheap bracket cannot decide, squaring must
    rng = random.Random(5)
    for _ in range(200):
        d = rng.choice([2, 3, 5, 13])
        b = rng.getrandbits(rng.choice([70, 300, 3000])) + 1
        a0 = math.isqrt(b * b * d)
        for a in (a0 - 1, a0, a0 + 1, a0 + 2, a0 + b // 2 ** 66):
            expected = 1 if a * a > b * b * d else -1
            assert qf_sign(QField(a, -b, d)) == expected
            assert qf_sign(QField(-a, b, d)) == -expected
