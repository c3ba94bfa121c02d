import random
import warnings
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from logcave.errors import MixedField, NegativeEntry, RNotSupported
from logcave.exactnum import R0, R1, QField, golden
from logcave.pascal import binomial_row
from logcave.sampling import rand_rational
from logcave.seqcore import (
    Seq,
    SymSeq,
    apply_l,
    apply_lr,
    core_of,
    first_lc_violation,
    is_ifold_lc,
    is_r_factor_lc,
    iterate_lr,
    materialize,
    projective_orbit,
)


def naive_l(values, r=1):
    """Independent L_r over an explicitly padded list."""
    a = [0] + list(values) + [0]
    return [a[k] ** 2 - r * a[k - 1] * a[k + 1] for k in range(1, len(a) - 1)]


def test_apply_examples():
    assert apply_lr(Seq.of([1, 3, 3, 1]), 1).values == (1, 6, 6, 1)
    r = F(7, 3)
    x = 1 + r
    assert apply_lr(Seq.of([1, x, x, 1]), r).values == (1, x, x, 1)
    phi = golden(1)
    assert apply_lr(Seq.of([1, phi, 1]), 1).values == (1, phi, 1)


def test_fixed_point_with_irrational_r():
    x = 1 + R1
    assert apply_lr(Seq.of([1, x, x, 1]), R1).values == (1, x, x, 1)


def test_iterate_examples():
    s = Seq.of([1, 3, 3, 1])
    assert iterate_lr(s, 1, 0) == s
    assert iterate_lr(Seq.of([1, 2, 2, 1]), 1, 5).values == (1, 2, 2, 1)
    assert iterate_lr(s, 1, 2).values == (1, 30, 30, 1)
    with pytest.raises(ValueError):
        iterate_lr(s, 1, -1)


def test_padding_maps_to_padding():
    s = Seq.of([2, 5, 1], offset=3).padded(2, 2)
    out = apply_lr(s, 2)
    assert out.values[:2] == (0, 0) and out.values[-2:] == (0, 0)
    assert out.trimmed() == apply_lr(Seq.of([2, 5, 1], offset=3), 2)


def test_r_validation():
    s = Seq.of([1, 2, 1])
    with pytest.raises(RNotSupported):
        apply_lr(s, 0)
    with pytest.raises(RNotSupported):
        apply_lr(s, -1)
    with pytest.raises(RNotSupported):
        apply_lr(s, F(1, 2))
    with pytest.warns(UserWarning):
        assert apply_lr(s, F(1, 2), allow_small_r=True).values == (1, F(7, 2), 1)


def test_mixed_field_rejected():
    with pytest.raises(MixedField):
        apply_lr(Seq.of([1, QField(0, 1, 5), 1]), R1)
    with pytest.raises(MixedField):
        Seq.of([QField(0, 1, 5), QField(0, 1, 2)])


def test_r_factor_lc_examples():
    assert is_r_factor_lc(Seq.of([1, 3, 3, 1]), 3)
    assert is_r_factor_lc(Seq.of([1, 3, 3, 1]), R1)
    v = is_r_factor_lc(Seq.of([1, 1, 2]), 1)
    assert not v and v.index == 1
    with pytest.raises(NegativeEntry):
        is_r_factor_lc(Seq.of([1, -1, 1]), 1)


def test_violation_index_respects_offset():
    assert first_lc_violation(Seq.of([1, 1, 2], offset=5), 1) == 6


def orbit_failure(x, r=1, limit=100):
    """First j with a negative entry in L_r^j {1,x,x,1}: the core obeys x -> x^2 - r x."""
    for j in range(1, limit + 1):
        x = x * x - r * x
        if x < 0:
            return j
    return None


def test_ifold_examples():
    assert is_ifold_lc(Seq.of([1, 2, 2, 1]), 1, 50)
    x = F(19, 10)
    v = is_ifold_lc(Seq.parse("1,1.9,1.9,1"), 1, 20)
    assert not v
    assert v.iteration == orbit_failure(x) == 4
    assert v.index in (1, 2)
    assert is_ifold_lc(Seq.of([1, 4, 6, 4, 1]), 1, 5)
    with pytest.raises(ValueError):
        is_ifold_lc(Seq.of([1]), 1, 0)


def test_materialize_examples():
    assert materialize(SymSeq((5,), "even")).values == (1, 5, 5, 1)
    assert materialize(SymSeq((5,), "odd")).values == (1, 5, 1)
    assert materialize(SymSeq((2, 3), "even")).values == (1, 2, 3, 3, 2, 1)
    assert len(materialize(SymSeq((2, 3, 4), "even"))) == 2 * 2 + 4
    assert len(materialize(SymSeq((2, 3, 4), "odd"))) == 2 * 2 + 3


def test_symseq_validation_and_json():
    with pytest.raises(ValueError):
        SymSeq((1, 0), "even")
    with pytest.raises(ValueError):
        SymSeq((1,), "middle")
    with pytest.raises(ValueError):
        SymSeq((), "even")
    p = SymSeq((F(3, 2), golden(1)), "odd")
    assert SymSeq.from_json(p.to_json()) == p


def test_text_form():
    assert str(Seq.of([1, 6, 6, 1])) == "{1,6,6,1}"
    assert Seq.parse(str(Seq.of([F(1, 2), R1]))).values == (F(1, 2), R1)


def test_big_integer_path_matches_generic():
    row = binomial_row(30)
    fast = iterate_lr(row, 1, 3).values
    slow = [int(v) for v in row.values]
    for _ in range(3):
        slow = naive_l(slow)
    assert [int(v) for v in fast] == slow


# -- properties ------------------------------------------------------------------

def _random_symseq(rng, max_n=6):
    n = rng.randint(0, max_n)
    core = tuple(rand_rational(rng, F(1, 10), 20, 9) for _ in range(n + 1))
    core = tuple(c if c > 0 else F(1) for c in core)
    return SymSeq(core, rng.choice(["even", "odd"]))


def test_symmetry_preserved():
    rng = random.Random(10)
    for _ in range(500):
        p = _random_symseq(rng)
        r = rand_rational(rng, 1, 5, 6)
        out = apply_lr(materialize(p), r)
        assert out.values == out.values[::-1]
        assert out.values[0] == out.values[-1] == 1
        assert len(out) == len(materialize(p))


def test_lr_at_one_matches_classical_operator():
    rng = random.Random(11)
    for _ in range(500):
        vals = [rand_rational(rng, -5, 20, 7) for _ in range(rng.randint(1, 10))]
        s = Seq.of(vals)
        assert list(apply_l(s).values) == naive_l(vals)
        assert list(apply_lr(s, 1).values) == naive_l(vals)


def test_generalized_ifold_implies_classical_ifold():
    rng = random.Random(12)
    checked = 0
    while checked < 200:
        s = Seq.of([rand_rational(rng, F(1, 2), 6, 4) for _ in range(rng.randint(2, 7))])
        r = rand_rational(rng, 1, 4, 4)
        i = rng.randint(1, 4)
        if is_ifold_lc(s, r, i):
            checked += 1
            assert is_ifold_lc(s, 1, i)


values = st.lists(st.fractions(min_value=0, max_value=50, max_denominator=20), min_size=1, max_size=8)
rs = st.sampled_from([1, 2, F(5, 2), R1, R0])


@given(values, rs, st.integers(0, 3), st.integers(0, 3))
@settings(max_examples=200, deadline=None)
def test_padding_never_changes_predicates(vals, r, left, right):
    s = Seq.of(vals)
    p = s.padded(left, right)
    assert bool(is_r_factor_lc(s, r)) == bool(is_r_factor_lc(p, r))
    assert apply_lr(p, r).trimmed() == apply_lr(s, r).trimmed()
    a, b = is_ifold_lc(s, r, 2), is_ifold_lc(p, r, 2)
    assert (a.ok, a.iteration, a.index) == (b.ok, b.iteration, b.index)


@given(st.lists(st.fractions(min_value=F(1, 10), max_value=20, max_denominator=10), min_size=1, max_size=5),
       st.sampled_from(["even", "odd"]))
@settings(max_examples=100, deadline=None)
def test_core_round_trip(core, parity):
    p = SymSeq(tuple(core), parity)
    assert core_of(materialize(p), p.n, parity) == p


def test_projective_orbit_is_a_positive_multiple_of_the_exact_orbit():
    rng = random.Random(13)
    for _ in range(300):
        vals = [rand_rational(rng, -3, 9, 7) for _ in range(rng.randint(1, 7))]
        r = rng.choice([1, 2, rand_rational(rng, 1, 5, 9)])
        orbit = projective_orbit(vals, r)
        exact = Seq.of(vals)
        for _ in range(4):
            z = next(orbit)
            nz = [(a, b) for a, b in zip(z, exact.values) if b != 0]
            assert all(a == 0 for a, b in zip(z, exact.values) if b == 0)
            if nz:
                lam = F(int(nz[0][0])) / nz[0][1]
                assert lam > 0
                assert all(F(int(a)) == lam * b for a, b in nz)
            exact = apply_lr(exact, r)
