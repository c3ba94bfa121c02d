import random
from fractions import Fraction as F

import pytest

from logcave.errors import InvalidA, InvalidC, MixedField, QNotRFactorLC
from logcave.exactnum import qf_sign, sqrt_rational
from logcave.region import clause_signs, closure_test, is_member, phi_squared
from logcave.sampling import random_witness_spec
from logcave.seqcore import SymSeq, first_lc_violation, materialize
from logcave.witness import (
    WitnessSpec,
    a_bound,
    build_witness,
    c_bound,
    c_bound_sq,
    default_q,
    is_valid_a,
    is_valid_c,
    pentagonal,
    pentagonal_number,
    triangular,
)


def test_figurate_examples():
    assert [pentagonal(n) for n in (0, 1, 3)] == [0, 2, 24]
    assert [pentagonal_number(n) for n in (0, 1, 2, 3)] == [0, 1, 5, 12]
    assert [triangular(n) for n in (0, 1, 4)] == [0, 1, 10]
    with pytest.raises(ValueError):
        pentagonal(-1)


def test_pentagonal_identities():
    for n in range(1, 1001):
        assert pentagonal(n + 1) + pentagonal(n - 1) == 2 * pentagonal(n) + 6
        assert triangular(n + 1) + triangular(n - 1) == 2 * triangular(n) + 1
    assert F(pentagonal(0)) - F(pentagonal(1), 2) == -1


def test_c_bound_examples():
    assert c_bound(1) == 2 / (1 + sqrt_rational(5))
    assert c_bound(6) == sqrt_rational(6) / 3
    assert is_valid_c(F(4, 5), 6)
    assert c_bound(2) == sqrt_rational(2) / 2
    assert not is_valid_c(F(3, 4), 2)
    assert c_bound_sq(1) * (1 + sqrt_rational(5)) ** 2 == 4


def test_c_bound_needs_one_radical():
    with pytest.raises(MixedField):
        c_bound(3)  # sqrt(3) and sqrt(13)
    assert is_valid_c(F(1, 2), 3)  # the squared test still works


def test_c_validity_edges():
    assert not is_valid_c(0, 1)
    assert not is_valid_c(F(-1, 2), 1)
    assert is_valid_c(F(61, 100), 1) and not is_valid_c(F(62, 100), 1)
    # triangular needs C < r / phi_r^2 (0.3819... at r = 1)
    assert is_valid_c(F(38, 100), 1, "triangular")
    assert not is_valid_c(F(39, 100), 1, "triangular")


def test_a_bound_examples():
    assert a_bound(1, F(1, 2), 2) == 512
    assert is_valid_a(513, 1, F(1, 2), 2)
    assert a_bound(1, F(1, 2), 1) == 8
    assert a_bound(1, F(1, 3), 2, scheme="triangular") == 18
    with pytest.raises(InvalidC):
        a_bound(1, F(1, 2), 2, scheme="triangular")


def test_triangular_bound_is_needed():
    # with C = 1/2 and a just above 2 C^{T(1)-T(2)} the sequence leaves R at H_0
    C, a = F(1, 2), 9
    core = tuple(C ** triangular(j) * a ** (j + 1) for j in range(3))
    assert core == (9, F(81, 2), F(729, 8))
    assert clause_signs(SymSeq(core, "even"), 1)[0] < 0


def test_a_bound_odd_is_rational_upper_bound():
    for r in (1, 2, F(5, 2), 3):
        for n in (1, 2, 3):
            C = F(1, 3)
            u = a_bound(r, C, n, "odd")
            k = pentagonal(n - 1) - pentagonal(n)
            true_sq = phi_squared(r) / r * C ** (2 * k)
            assert qf_sign(u * u - true_sq) >= 0
            assert u.denominator <= 10 ** 6 or u.denominator == 1
            assert is_valid_a(u + F(1, 10 ** 6), r, C, n, "odd")


def test_build_examples():
    w = build_witness(WitnessSpec(1, F(1, 2), 2, a=513, q_core=(1, 1, 1)))
    assert w.core == (513, F(513 ** 2, 4), F(513 ** 3, 1024))
    assert is_member(w, 1)
    with pytest.raises(InvalidA):
        build_witness(WitnessSpec(1, F(1, 2), 2, a=512, q_core=(1, 1, 1)))
    with pytest.raises(InvalidC):
        build_witness(WitnessSpec(1, F(2, 3), 2))
    with pytest.raises(QNotRFactorLC):
        build_witness(WitnessSpec(2, F(1, 2), 2, q_core=(1, 1, 1)))


def test_default_a_and_q():
    s = WitnessSpec(1, F(1, 2), 2).resolved()
    assert s.a == 513 and s.q_core == (1, 1, 1)
    q = default_q(2, 2)
    assert q == (8, 32, 64)
    assert first_lc_violation(materialize(SymSeq(q, "even")), 2) is None
    assert first_lc_violation(materialize(SymSeq(q, "odd")), 2) is None


def test_scaling_a_up_keeps_membership():
    base = WitnessSpec(1, F(1, 2), 2, a=513)
    for k in range(1, 11):
        w = build_witness(WitnessSpec(1, F(1, 2), 2, a=base.a * (1 + F(k, 3))))
        assert is_member(w, 1)


def test_odd_witness_centre():
    w = build_witness(WitnessSpec(1, F(1, 2), 2, parity="odd"))
    assert len(materialize(w)) == 2 * 2 + 3
    a = WitnessSpec(1, F(1, 2), 2, parity="odd").resolved().a
    assert w.core[2] == F(1, 2) ** pentagonal(2) * a ** 3


def test_spec_validation():
    with pytest.raises(ValueError):
        WitnessSpec(1, F(1, 2), 0)
    with pytest.raises(ValueError):
        WitnessSpec(1, F(1, 2), 2, scheme="hexagonal")
    with pytest.raises(ValueError):
        WitnessSpec(1, F(1, 2), 2, q_core=(1, 1))


def test_random_witnesses_are_members():
    rng = random.Random(40)
    for scheme in ("pentagonal", "triangular"):
        for _ in range(60):
            spec = random_witness_spec(rng, scheme)
            w = build_witness(spec)
            assert first_lc_violation(materialize(w), spec.r) is None
            assert is_member(w, spec.r)
            assert closure_test(w, spec.r, 3).ok
