from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import bfs_components
from paleycover.cover import (
    BudgetExceeded,
    CoverGraph,
    VoltageAssignment,
    VoltageError,
    canonical_pair_vector,
    count_voltages,
    enumerate_voltages,
    make_voltage,
    sample_voltage,
    tau_from_mapping,
    transform_voltage,
    voltage_from_tau,
)
from paleycover.field import make_field
from paleycover.iso import cover_isomorphic


def test_example_alpha_from_table(F25, alpha25):
    assert alpha25(F25("1,0")) == 1 and alpha25(F25("3,0")) == 1 and alpha25(F25("1,1")) == 1
    assert alpha25(F25("3,3")) == 0 and alpha25(F25("1,4")) == 0 and alpha25(F25("3,2")) == 0
    # oddness fills the other half
    assert alpha25(F25("4,0")) == 2 and alpha25(F25("2,0")) == 2


def test_example_beta_from_table(F25, beta25):
    got = {k: beta25(F25(k)) for k in ("1,0", "3,0", "1,1", "3,3", "1,4", "3,2")}
    assert got == {"1,0": 0, "3,0": 0, "1,1": 1, "3,3": 0, "1,4": 1, "3,2": 1}


def test_all_zero_rejected(F13):
    with pytest.raises(VoltageError):
        VoltageAssignment.from_pair_values(F13, 3, [0, 0, 0])


def test_non_odd_rejected(F13):
    vals = np.zeros(13, dtype=np.int64)
    vals[1] = 1
    vals[12] = 1
    with pytest.raises(VoltageError):
        VoltageAssignment(F13, 3, vals)


def test_value_on_non_square_rejected(F13):
    with pytest.raises(VoltageError):
        make_voltage(F13, 3, {2: 1})


def test_missing_pair_rejected(F13):
    with pytest.raises(VoltageError):
        make_voltage(F13, 3, {1: 1})


def test_json_roundtrip(alpha25):
    assert VoltageAssignment.from_json(alpha25.to_json()) == alpha25


def test_fifteen_cycle(F5):
    v = make_voltage(F5, 3, {1: 1})
    g = CoverGraph(v)
    A = g.adjacency_matrix()
    assert A.shape == (15, 15)
    assert (A.sum(1) == 2).all()
    assert bfs_components(A) == 1


def test_example_cover_is_connected_and_regular(alpha25):
    g = CoverGraph(alpha25)
    A = g.adjacency_matrix()
    assert g.n_vertices == 75
    assert (A.sum(1) == 12).all()
    assert bfs_components(A) == 1
    assert g.is_connected()


def test_fibers_are_independent(alpha25):
    A = CoverGraph(alpha25).adjacency_matrix()
    for x in range(25):
        block = A[x * 3 : x * 3 + 3, x * 3 : x * 3 + 3]
        assert not block.any()


@pytest.mark.parametrize("p,r,ell", [(5, 1, 3), (13, 1, 3), (13, 1, 5), (5, 2, 3), (3, 2, 5)])
def test_connected_when_ell_differs_from_p(p, r, ell, rng):
    F = make_field(p, r)
    for _ in range(5):
        g = CoverGraph(sample_voltage(F, ell, rng))
        assert g.is_connected() == (bfs_components(g.adjacency_matrix()) == 1) == True  # noqa: E712


def test_cover_connectivity_matches_bfs_when_ell_equals_p(F9):
    for v in enumerate_voltages(F9, 3):
        g = CoverGraph(v)
        assert g.is_connected() == (bfs_components(g.adjacency_matrix()) == 1)


def test_identity_and_inverse_transform(F25, alpha25):
    assert transform_voltage(alpha25, F25.one) == alpha25
    t = F25(int(F25.squares[5]))
    assert transform_voltage(transform_voltage(alpha25, t), t.inverse()) == alpha25


def test_example_beta_is_no_transform_of_alpha(F25, alpha25, beta25):
    for t in F25.squares:
        for i in range(2):
            for n in (1, 2):
                assert transform_voltage(beta25, int(t), i, n) != alpha25


def test_transform_rejects_non_square(F25, alpha25):
    with pytest.raises(VoltageError):
        transform_voltage(alpha25, F25("0,1"))


@pytest.mark.parametrize("p,r,ell,n", [(5, 1, 3, 2), (13, 1, 3, 26), (3, 2, 3, 8), (5, 2, 3, 728)])
def test_enumeration_counts(p, r, ell, n):
    F = make_field(p, r)
    vs = list(enumerate_voltages(F, ell))
    assert len(vs) == n == count_voltages(F, ell)
    assert len({v.values.tobytes() for v in vs}) == n


def test_enumeration_cap(F25):
    with pytest.raises(BudgetExceeded):
        list(enumerate_voltages(F25, 3, cap=100))


def test_tau_from_example_maps_alpha_to_beta(F25, alpha25, beta25):
    c = F25("1,4")
    mapping = {}
    for u in range(1, 5):
        one = F25.from_int(u)
        mapping[one] = one * c
        mapping[one * c] = one
    tau = tau_from_mapping(F25, mapping)
    assert voltage_from_tau(alpha25, tau) == beta25
    assert voltage_from_tau(alpha25, np.arange(25)) == alpha25


def test_galois_tau_gives_cover_isomorphic_voltage(F25, alpha25):
    tau = F25.frobenius(np.arange(25), 1)
    swapped = voltage_from_tau(alpha25, tau)
    w = cover_isomorphic(alpha25, swapped)
    assert w is not None and w.sigma == 1


def test_tau_must_preserve_trace(F25):
    with pytest.raises(VoltageError):
        tau_from_mapping(F25, {F25("1,0"): F25("2,0"), F25("2,0"): F25("1,0")})


@given(st.lists(st.integers(0, 2), min_size=6, max_size=6).filter(any), st.integers(0, 11), st.integers(0, 1), st.integers(1, 2))
def test_canonical_vector_is_orbit_invariant(vals, j, i, n):
    F = make_field(5, 2)
    v = VoltageAssignment.from_pair_values(F, 3, vals)
    w = transform_voltage(v, int(F.squares[j]), i, n)
    assert canonical_pair_vector(v) == canonical_pair_vector(w)


def test_dot_has_fiber_clusters(F5):
    dot = CoverGraph(make_voltage(F5, 3, {1: 1})).to_dot()
    assert dot.count("subgraph cluster_fiber_") == 3
    assert dot.count(" -- ") == 15
