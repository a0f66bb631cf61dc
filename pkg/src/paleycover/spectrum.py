"""Exact adjacency spectra of covers, plus a dense floating-point oracle."""
from __future__ import annotations

import hashlib

import numpy as np

from . import _kernels
from .cover import CoverGraph, VoltageAssignment
from .cyclotomic import CycSum, ncols, pad, reduce_padded
from .field import FieldElement, FiniteField, field_from_descriptor

DEFAULT_DENSE_CAP = 2000


class SpectrumError(ValueError):
    pass


def _index(field: FiniteField, a) -> int:
    if isinstance(a, FieldElement):
        return a.index
    return int(a)


def theta(voltage: VoltageAssignment, a, k: int) -> CycSum:
    """The eigenvalue labelled (a, k): sum over squares s of zeta_p^tr(as) zeta_ell^(k alpha(s))."""
    f, ell = voltage.field, voltage.ell
    sq = f.squares
    u = f.trace_table[f.mul(_index(f, a), sq)]
    v = (k * voltage.values[sq]) % ell
    counts = np.zeros((f.p, ell), dtype=np.int64)
    np.add.at(counts, (u, v), 1)
    return CycSum.from_exponent_counts(counts, f.p, ell)


class CoverSpectrum:
    """All q*ell labelled eigenvalues of a cover.

    ``coeffs[a, k]`` holds the canonical coordinates of theta_{a,k}.
    """

    def __init__(self, field: FiniteField, ell: int, coeffs: np.ndarray):
        expected = (field.q, ell, field.p - 1, ncols(ell, field.p))
        if coeffs.shape != expected:
            raise SpectrumError(f"coefficient array must have shape {expected}")
        coeffs = np.ascontiguousarray(coeffs)
        coeffs.flags.writeable = False
        self.field = field
        self.ell = ell
        self.coeffs = coeffs

    def __getitem__(self, label) -> CycSum:
        a, k = label
        return CycSum(self.field.p, self.ell, self.coeffs[_index(self.field, a), int(k) % self.ell])

    def __len__(self):
        return self.field.q * self.ell

    def labels(self) -> dict[tuple[int, int], CycSum]:
        return {(a, k): self[a, k] for a in range(self.field.q) for k in range(self.ell)}

    def _unique(self) -> tuple[np.ndarray, np.ndarray]:
        rows = self.coeffs.reshape(len(self), -1)
        return np.unique(rows, axis=0, return_counts=True)

    def multiset(self) -> list[tuple[CycSum, int]]:
        """Distinct eigenvalues in canonical order with multiplicities."""
        rows, counts = self._unique()
        shape = self.coeffs.shape[2:]
        p, ell = self.field.p, self.ell
        return [(CycSum(p, ell, r.reshape(shape)), int(c)) for r, c in zip(rows, counts)]

    def digest(self) -> str:
        rows, counts = self._unique()
        h = hashlib.sha256()
        h.update(f"{self.field.p},{self.ell},{self.field.q}".encode())
        h.update(np.ascontiguousarray(rows, dtype=np.int64).tobytes())
        h.update(np.ascontiguousarray(counts, dtype=np.int64).tobytes())
        return h.hexdigest()

    def complex_values(self) -> np.ndarray:
        """Embedded eigenvalues, shape (q, ell)."""
        p, ell = self.field.p, self.ell
        zp = np.exp(2j * np.pi * np.arange(p - 1) / p)
        zl = np.exp(2j * np.pi * np.arange(ell - 1) / ell) if ncols(ell, p) > 1 else np.ones(1)
        return np.einsum("akuv,u,v->ak", self.coeffs.astype(float), zp, zl)

    def sorted_floats(self) -> np.ndarray:
        return np.sort(self.complex_values().real.ravel())

    def laplacian_floats(self) -> np.ndarray:
        """Laplacian eigenvalues (q-1)/2 - theta, derived from the adjacency spectrum."""
        return np.sort((self.field.q - 1) / 2 - self.complex_values().real.ravel())

    def to_json(self) -> dict:
        f = self.field
        vals = self.complex_values().real
        entries = [
            {"a": f.key(a), "k": k, "exact": self[a, k].to_json(), "float": float(vals[a, k])}
            for a in range(f.q)
            for k in range(self.ell)
        ]
        return {"field": f.descriptor(), "ell": self.ell, "digest": self.digest(), "eigenvalues": entries}

    @classmethod
    def from_json(cls, obj: dict) -> CoverSpectrum:
        f = field_from_descriptor(obj["field"])
        ell = int(obj["ell"])
        coeffs = np.zeros((f.q, ell, f.p - 1, ncols(ell, f.p)), dtype=np.int64)
        seen = np.zeros((f.q, ell), dtype=bool)
        for e in obj["eigenvalues"]:
            a, k = f(e["a"]).index, int(e["k"]) % ell
            val = CycSum.from_json(e["exact"])
            if val.denom != 1 or (val.p, val.ell) != (f.p, ell):
                raise SpectrumError(f"eigenvalue ({e['a']}, {k}) is not in Z[zeta_p, zeta_ell]")
            coeffs[a, k] = val.coeffs
            seen[a, k] = True
        if not seen.all():
            raise SpectrumError("spectrum file does not list every label (a, k)")
        return cls(f, ell, coeffs)


def full_spectrum(voltage: VoltageAssignment) -> CoverSpectrum:
    f, ell = voltage.field, voltage.ell
    sq = f.squares
    tr_sq = f.trace_products[:, sq]
    counts = _kernels.theta_counts(tr_sq, voltage.values[sq], f.p, ell)
    return CoverSpectrum(f, ell, reduce_padded(counts, f.p, ell))


def cospectral(spec_a: CoverSpectrum, spec_b: CoverSpectrum) -> bool:
    """Exact multiset equality of the canonical eigenvalue forms."""
    if spec_a.field != spec_b.field or spec_a.ell != spec_b.ell:
        raise SpectrumError("spectra of covers with different (q, ell)")
    ra, ca = spec_a._unique()
    rb, cb = spec_b._unique()
    return ra.shape == rb.shape and np.array_equal(ra, rb) and np.array_equal(ca, cb)


def numeric_spectrum(cover: CoverGraph, cap: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    """Eigenvalues of the dense adjacency matrix, ascending (LAPACK symmetric solver)."""
    if cover.n_vertices > cap:
        raise SpectrumError(f"{cover.n_vertices} vertices exceed the dense eigensolver cap {cap}")
    A = cover.adjacency_matrix(dtype=np.float64)
    return np.linalg.eigvalsh(A)


def reconstruct_voltage(spec: CoverSpectrum, k: int = 1) -> VoltageAssignment:
    """Recover the voltage from the k-slice by inverse Fourier transform over F_q.

    psi_k(alpha(x)) = (1/q) sum_a theta_{a,k} zeta_p^(-tr(ax)) is computed
    exactly; it must be a power of zeta_ell on squares and zero elsewhere.
    """
    f, ell = spec.field, spec.ell
    if k % ell == 0:
        raise SpectrumError("k must be a unit mod ell")
    p, q = f.p, f.q
    theta_k = pad(spec.coeffs[:, k % ell], p, ell)  # (a, p, ell)
    tr = f.trace_products  # tr[x, a] = tr(ax)
    acc = np.zeros((q, p, ell), dtype=np.int64)
    for u in range(p):
        part = np.tensordot((tr == u).astype(np.int64), theta_k, axes=(1, 0))
        acc += np.roll(part, -u, axis=1)
    inv = reduce_padded(acc, p, ell)
    if (inv % q).any():
        raise SpectrumError("inverse transform does not clear the denominator q")
    inv //= q
    candidates = np.stack([CycSum.monomial(p, ell, 0, k * m).coeffs for m in range(ell)])
    values = np.zeros(q, dtype=np.int64)
    for x in range(q):
        if f.square_mask[x]:
            hits = np.flatnonzero((candidates == inv[x]).all(axis=(1, 2)))
            if len(hits) != 1:
                raise SpectrumError(f"no root of unity matches at {f.format(x)}")
            values[x] = hits[0]
        elif inv[x].any():
            raise SpectrumError(f"inverse transform is nonzero at non-square {f.format(x)}")
    try:
        return VoltageAssignment(f, ell, values)
    except ValueError as exc:
        raise SpectrumError(f"reconstructed values are not a voltage: {exc}") from exc
