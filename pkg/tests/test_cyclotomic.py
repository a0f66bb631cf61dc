from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import cyclotomic_value, cycsum_value
from paleycover.cyclotomic import CycSum, conjugate, cyc_arith, embed_complex, galois_twist, reduce_padded


def test_constant_from_counts():
    counts = np.zeros((5, 3), dtype=np.int64)
    counts[0, 0] = 7
    assert CycSum.from_exponent_counts(counts, 5, 3) == 7


def test_full_sum_of_pth_roots_vanishes():
    counts = np.zeros((5, 3), dtype=np.int64)
    counts[:, 0] = 1
    assert CycSum.from_exponent_counts(counts, 5, 3) == 0


def test_example_theta_0_1_against_oracle(alpha25):
    # theta_{0,1} for the worked-example alpha: 6 + 3 zeta_3 + 3 zeta_3^2 = 3
    from paleycover.spectrum import theta

    t = theta(alpha25, 0, 1)
    assert t == 3
    vals = alpha25.values[alpha25.field.squares]
    terms = [((0, int(v)), 1) for v in vals]
    assert cycsum_value(t) == cyclotomic_value(5, 3, terms)


def test_additive_identity():
    a = CycSum.monomial(7, 3, 2, 1, coeff=4)
    assert a + CycSum.zero(7, 3) == a


def test_exponent_wraparound():
    assert CycSum.monomial(5, 3, 1) * CycSum.monomial(5, 3, 4) == 1


def test_sum_of_nontrivial_roots_is_minus_one():
    s = sum((CycSum.monomial(7, 1, u) for u in range(1, 7)), CycSum.zero(7, 1))
    assert s == -1
    assert s * 1 == -1


def test_conjugation_examples():
    assert conjugate(CycSum.constant(4, 5, 3)) == 4
    x = CycSum.monomial(5, 3, 1) + CycSum.monomial(5, 3, 4)
    assert x.conjugate("p") == x


def test_embed_constant():
    assert embed_complex(CycSum.constant(7, 5, 3)) == pytest.approx(7.0)


def test_gauss_sum_f13():
    s = sum((CycSum.monomial(13, 1, x * x % 13) for x in range(1, 7)), CycSum.zero(13, 1))
    assert embed_complex(s) == pytest.approx((13**0.5 - 1) / 2, abs=1e-12)


def test_twist_identity_and_ell_free():
    x = CycSum.monomial(5, 7, 2, 3) + 2
    assert galois_twist(x, 1) == x
    y = CycSum.monomial(5, 7, 2, 0)
    assert galois_twist(y, 3) == y


def test_twist_rejects_zero():
    with pytest.raises(ValueError):
        galois_twist(CycSum.monomial(5, 7, 1, 1), 7)


def test_arith_dispatch():
    a, b = CycSum.monomial(5, 3, 1, 1), CycSum.monomial(5, 3, 2, 2)
    assert cyc_arith(a, b, "mul") == CycSum.monomial(5, 3, 3, 0)
    assert cyc_arith(a, b, "sub") == a - b
    with pytest.raises(ValueError):
        cyc_arith(a, b, "pow")


def test_denominator_normalized():
    x = CycSum(5, 3, np.full((4, 2), 10), denom=25)
    assert x.denom == 5 and x.coeffs[0, 0] == 2
    assert (x * 5) == CycSum(5, 3, np.full((4, 2), 2))


def test_promotion_from_zeta_p_only():
    a = CycSum.monomial(5, 1, 2)
    b = CycSum.monomial(5, 3, 0, 1)
    assert (a * b) == CycSum.monomial(5, 3, 2, 1)


def test_ell_equal_p_folds():
    x = CycSum.monomial(3, 3, 1, 2)
    assert x == CycSum.monomial(3, 3, 0, 0)
    assert x.coeffs.shape == (2, 1)


def test_json_roundtrip():
    x = CycSum.monomial(7, 5, 3, 2, coeff=-4) / 49
    assert CycSum.from_json(x.to_json()) == x


def test_big_coefficients_stay_exact():
    big = CycSum.constant(2**40, 5, 3)
    assert (big * big) == CycSum.constant(2**80, 5, 3)


@pytest.mark.parametrize("p,ell", [(5, 3), (3, 5), (7, 3), (13, 3), (5, 7)])
def test_canonical_form_uniqueness(p, ell):
    # 10^4 pairs in total across the parametrization; half differ only by the
    # vanishing relations (a full row or column of ones), half at random
    rng = np.random.default_rng(p * 100 + ell)
    n = 2000
    a = rng.integers(-3, 4, size=(n, p, ell))
    b = a.copy()
    same = rng.random(n) < 0.5
    for i in np.flatnonzero(same):
        b[i, :, rng.integers(ell)] += rng.integers(-3, 4)
        b[i, rng.integers(p), :] += rng.integers(-3, 4)
    diff = ~same
    b[diff] = rng.integers(-3, 4, size=(diff.sum(), p, ell))
    ca, cb = reduce_padded(a, p, ell), reduce_padded(b, p, ell)
    zp = np.exp(2j * np.pi * np.arange(p) / p)
    zl = np.exp(2j * np.pi * np.arange(ell) / ell)
    ea = np.einsum("nuv,u,v->n", a, zp, zl)
    eb = np.einsum("nuv,u,v->n", b, zp, zl)
    exact_equal = (ca == cb).all(axis=(1, 2))
    close = np.abs(ea - eb) < 1e-9
    assert np.array_equal(exact_equal, close)
    assert exact_equal[same].all()


elements = st.builds(
    lambda u, v, c: CycSum.monomial(5, 3, u, v, coeff=c),
    st.integers(0, 4),
    st.integers(0, 2),
    st.integers(-5, 5),
)
sums = st.lists(elements, min_size=1, max_size=4).map(lambda xs: sum(xs[1:], xs[0]))


@given(sums, sums, sums)
def test_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a - b) + b == a


@given(sums)
def test_conjugation_involutive_and_complex_conjugate(a):
    assert a.conjugate().conjugate() == a
    assert abs(a.conjugate().embed_complex() - a.embed_complex().conjugate()) < 1e-12


@given(sums, sums)
def test_embedding_is_a_ring_map(a, b):
    assert abs((a * b).embed_complex() - a.embed_complex() * b.embed_complex()) < 1e-9


@given(sums)
def test_matches_independent_reduction(a):
    terms = [((u, v), int(c)) for (u, v), c in np.ndenumerate(a.coeffs)]
    assert cyclotomic_value(5, 3, terms) == cycsum_value(a)
