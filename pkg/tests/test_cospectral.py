from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from paleycover.cospectral import (
    CertificateError,
    PermPoly,
    block_decompose,
    block_equation_holds,
    build_matrix_M,
    certify,
    check_block_equations,
    check_circulant,
    check_condition3,
    check_orthogonal,
    derive_bijection,
    eigenvalue_bijection_check,
    interpolate,
    random_odd_perm_poly,
    random_odd_permutation,
    validate_perm_poly,
)
from paleycover.cover import VoltageAssignment
from paleycover.example25 import printed_block_sum, printed_blocks
from paleycover.field import make_field


def test_identity_polynomial_valid(F25):
    assert validate_perm_poly(PermPoly.identity(F25)) == {"bijective": True, "odd": True, "semilinear": True}


def test_example_polynomial_valid(F25, f25):
    assert validate_perm_poly(f25) == {"bijective": True, "odd": True, "semilinear": True}
    assert f25(F25.one) == F25.one
    assert f25.degree == 21


def test_squaring_not_bijective(F13):
    assert not validate_perm_poly(PermPoly(F13, {2: F13.one_index}))["bijective"]


def test_exponent_bounds(F13):
    with pytest.raises(CertificateError):
        PermPoly(F13, {13: 1})


def test_perm_poly_json_roundtrip(F25, f25):
    assert PermPoly.from_json(F25, f25.to_json()) == f25


def test_eigenvalue_bijection(alpha25, beta25, f25, F25):
    assert eigenvalue_bijection_check(alpha25, alpha25, PermPoly.identity(F25))
    assert eigenvalue_bijection_check(alpha25, beta25, f25)
    assert not eigenvalue_bijection_check(alpha25, beta25, PermPoly.identity(F25))


def test_identity_gives_q_times_identity(F25):
    M = build_matrix_M(PermPoly.identity(F25))
    want = np.zeros((25, 25, 4), dtype=np.int64)
    want[np.arange(25), np.arange(25), 0] = 25
    assert np.array_equal(M.scaled, want)


def test_column_zero_is_unit_vector(f25):
    M = build_matrix_M(f25)
    assert M.value(0, 0) == 1
    assert all(M.value(x, 0) == 0 for x in range(1, 25))


def test_condition3_identity_and_example(F25, alpha25, beta25, f25):
    assert check_condition3(build_matrix_M(PermPoly.identity(F25)), alpha25, alpha25).ok
    rep = check_condition3(build_matrix_M(f25), alpha25, beta25)
    assert rep.orthogonal and rep.circulant and rep.psi_transport and rep.psi_transport_nontrivial


@pytest.mark.parametrize("ell", [3, 7, 11])
def test_condition3_holds_for_every_ell(ell, f25):
    from paleycover.example25 import example_alpha, example_beta

    assert check_condition3(build_matrix_M(f25), example_alpha(ell), example_beta(ell)).ok


def test_condition3_fails_with_wrong_beta(alpha25, f25):
    rep = check_condition3(build_matrix_M(f25), alpha25, alpha25)
    assert rep.orthogonal and rep.circulant
    assert not rep.psi_transport


def test_blocks_match_printed(f25):
    blocks = block_decompose(build_matrix_M(f25))
    assert np.array_equal(blocks.scaled_integer_blocks(5), printed_blocks())
    total = blocks.block_sum()
    assert np.array_equal(total[..., 0], 25 * printed_block_sum())
    assert not total[..., 1:].any()
    fr = blocks.rational_blocks()
    assert fr[0][1][1] == pytest.approx(3 / 5)


def test_identity_blocks(F25):
    blocks = block_decompose(build_matrix_M(PermPoly.identity(F25)))
    assert np.array_equal(blocks.scaled_integer_blocks(1)[0], np.eye(3, dtype=np.int64))
    assert not blocks.scaled_integer_blocks(1)[1:].any()


def test_block_decompose_needs_semilinear(F25, rng):
    f = random_odd_perm_poly(F25, rng)
    assert not validate_perm_poly(f)["semilinear"]
    with pytest.raises(CertificateError):
        block_decompose(build_matrix_M(f))


def test_block_decompose_needs_even_degree(F13):
    with pytest.raises(CertificateError):
        block_decompose(build_matrix_M(PermPoly.identity(F13)))


def test_block_equations(alpha25, beta25, f25, F25):
    blocks = block_decompose(build_matrix_M(f25))
    assert check_block_equations(blocks, alpha25, beta25)
    for j in (1, 2):
        assert block_equation_holds(blocks, alpha25, beta25, j, 1)
        assert block_equation_holds(blocks, alpha25, beta25, j, 0)
    assert not check_block_equations(blocks, alpha25, alpha25)
    ident = block_decompose(build_matrix_M(PermPoly.identity(F25)))
    assert check_block_equations(ident, alpha25, alpha25)


def test_derive_bijection_identity(alpha25, F25):
    assert derive_bijection(alpha25, alpha25) == PermPoly.identity(F25)


def test_derive_bijection_example(alpha25, beta25):
    f = derive_bijection(alpha25, beta25)
    assert f is not None
    assert validate_perm_poly(f)["bijective"] and validate_perm_poly(f)["odd"]
    assert eigenvalue_bijection_check(alpha25, beta25, f)


def test_derive_bijection_none_when_not_cospectral(F25, alpha25):
    ones = VoltageAssignment.from_pair_values(F25, 3, [1] * 6)
    assert derive_bijection(alpha25, ones) is None


def test_certify_example(alpha25, beta25):
    f, checks = certify(alpha25, beta25)
    assert f is not None and all(checks.values())


@given(st.integers(0, 2**32 - 1))
def test_interpolation_reproduces_values(seed):
    F = make_field(5, 2)
    vals = np.random.default_rng(seed).integers(0, 25, size=25)
    f = interpolate(F, vals)
    assert np.array_equal(f.values, vals)
    assert f.degree < 25


def test_interpolation_of_example(F25, f25):
    assert interpolate(F25, f25.values) == f25


@pytest.mark.parametrize("p,r", [(5, 2), (13, 1), (3, 2)])
def test_random_odd_permutations(p, r, rng):
    F = make_field(p, r)
    for _ in range(5):
        perm = random_odd_permutation(F, rng)
        assert sorted(perm) == list(range(F.q))
        assert np.array_equal(perm[F.neg(np.arange(F.q))], F.neg(perm))


@pytest.mark.parametrize("seed", range(4))
def test_orthogonal_and_circulant_for_random_odd_polynomials(seed):
    F = make_field(5, 2)
    M = build_matrix_M(random_odd_perm_poly(F, np.random.default_rng(seed)))
    assert check_orthogonal(M)
    assert check_circulant(M)


def test_non_bijection_breaks_orthogonality(F13):
    M = build_matrix_M(PermPoly(F13, {2: F13.one_index}))
    assert not check_orthogonal(M)


def test_m_entries_are_exact(f25):
    M = build_matrix_M(f25)
    x = M.value(3, 7)
    assert x.denom in (1, 5, 25)
    numeric = sum(np.exp(2j * np.pi * ((int(M.field.trace_products[f25.values[a], 7]) - int(M.field.trace_products[a, 3])) % 5) / 5)
                  for a in range(25)) / 25
    assert abs(x.embed_complex() - numeric) < 1e-12
