"""The 75-vertex cospectral, non-isomorphic pair of Z/ell-covers of X(F_25).

F_25 = F_5(w) with w^2 = 2 and generator g = w + 3. The voltages are given on
one square of each +-pair and extended by oddness; ``f`` is the odd
permutation polynomial that matches their eigenvalues.
"""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import numpy as np
from sympy import isprime

from .cospectral import (
    block_decompose,
    block_equation_holds,
    build_matrix_M,
    check_condition3,
    eigenvalue_bijection_check,
    validate_perm_poly,
    PermPoly,
)
from .cover import VoltageAssignment, make_voltage
from .field import FiniteField, field_from_descriptor
from .iso import graph_isomorphic
from .spectrum import cospectral, full_spectrum


@lru_cache(maxsize=1)
def _data() -> dict:
    return json.loads(resources.files("paleycover.data").joinpath("example25_f.json").read_text())


def example_field() -> FiniteField:
    return field_from_descriptor(_data()["field"])


def example_alpha(ell: int = 3) -> VoltageAssignment:
    return make_voltage(example_field(), ell, _data()["alpha_table"])


def example_beta(ell: int = 3) -> VoltageAssignment:
    return make_voltage(example_field(), ell, _data()["beta_table"])


def example_f() -> PermPoly:
    return PermPoly.from_json(example_field(), _data()["f"])


def printed_blocks() -> np.ndarray:
    """5 * M^[k] for k = 1..4 as printed, shape (4, 3, 3)."""
    return np.array(_data()["blocks_times_5"], dtype=np.int64)


def printed_block_sum() -> np.ndarray:
    return np.array(_data()["block_sum"], dtype=np.int64)


def check_ell(ell: int) -> None:
    if ell == 2 or not isprime(ell):
        raise ValueError(f"ell = {ell}: the worked example needs an odd prime")
    if ell == 5:
        raise ValueError("ell = 5 equals the characteristic of F_25")


def verify_example25(ell: int = 3) -> dict[str, bool]:
    """Run every check on the worked example; returns ``{check name: passed}``."""
    check_ell(ell)
    F = example_field()
    alpha, beta, f = example_alpha(ell), example_beta(ell), example_f()
    sa, sb = full_spectrum(alpha), full_spectrum(beta)
    out = dict(validate_perm_poly(f))
    out["f(1)=1"] = f(F.one_index) == F.one_index
    out["cospectral"] = cospectral(sa, sb)
    out["eigenvalue_bijection"] = eigenvalue_bijection_check(sa, sb, f)
    out["not_isomorphic"] = graph_isomorphic(alpha, beta).status == "NotIsomorphic"
    M = build_matrix_M(f)
    out.update(check_condition3(M, alpha, beta).to_json())
    blocks = block_decompose(M)
    out["blocks_match_printed"] = bool(np.array_equal(blocks.scaled_integer_blocks(5), printed_blocks()))
    total = blocks.block_sum()
    out["block_sum_is_printed_permutation"] = bool(
        not total[..., 1:].any() and np.array_equal(total[..., 0], F.q * printed_block_sum())
    )
    for j in (1, 2):
        out[f"block_equation_j{j}"] = all(block_equation_holds(blocks, alpha, beta, j, k) for k in (1, 0))
    return out
