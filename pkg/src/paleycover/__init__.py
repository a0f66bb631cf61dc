"""Translation-invariant Z/ell-covers of Paley graphs: exact spectra, isomorphism, cospectral pairs."""
from __future__ import annotations

from .cospectral import (
    PermPoly,
    build_matrix_M,
    block_decompose,
    check_block_equations,
    check_condition3,
    derive_bijection,
    eigenvalue_bijection_check,
    interpolate,
    search_counterexamples,
    validate_perm_poly,
)
from .cover import (
    CoverGraph,
    VoltageAssignment,
    build_cover,
    enumerate_voltages,
    make_voltage,
    transform_voltage,
    voltage_from_tau,
)
from .cyclotomic import CycSum
from .field import FieldElement, FiniteField, make_field
from .iso import brute_force_isomorphic, cover_isomorphic, decide_isomorphism, graph_isomorphic
from .paley import PaleyGraph, build_paley, paley_automorphism, paley_spectrum_closed_form
from .spectrum import CoverSpectrum, cospectral, full_spectrum, numeric_spectrum, reconstruct_voltage, theta

__version__ = "0.1.0"
