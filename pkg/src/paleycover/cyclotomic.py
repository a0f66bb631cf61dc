"""Exact arithmetic in Z[zeta_p, zeta_ell] (and its q-denominator scalars).

An element is stored by its integer coordinates in the basis
``zeta_p^u zeta_ell^v`` with ``0 <= u <= p-2`` and ``0 <= v <= ell-2``. Since
p and ell are distinct primes this is an integral basis of Z[zeta_{p ell}],
so coordinates are unique and equality is array equality.

``ell = 1`` is allowed and means the ring Z[zeta_p] alone (a single
coordinate column). Elements with ``ell = 1`` promote automatically when
combined with elements over a genuine ell. ``ell = p`` is also allowed: then
zeta_ell = zeta_p, exponents are folded together and the element again has a
single coordinate column.

"Padded" arrays have shape ``(..., p, L)`` with ``L = ell`` and hold a sum of
roots of unity with all exponents present; :func:`reduce_padded` brings them
to canonical coordinates.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce

import numpy as np

_INT64_SAFE = 2**62


def ncols(ell: int, p: int | None = None) -> int:
    return ell - 1 if ell > 1 and ell != p else 1


def reduce_padded(arr: np.ndarray, p: int, ell: int) -> np.ndarray:
    """Canonical coordinates from padded exponent counts, vectorized over leading axes.

    Uses ``zeta^(n-1) = -(1 + zeta + ... + zeta^(n-2))``: the last row is
    subtracted from every row, then the last column from every column.
    """
    arr = np.asarray(arr)
    if ell == p and arr.shape[-1] == p:
        # zeta_p^u zeta_p^v = zeta_p^(u+v): fold the second axis into the first
        arr = sum(np.roll(arr[..., :, v : v + 1], v, axis=-2) for v in range(p))
    out = arr[..., : p - 1, :] - arr[..., p - 1 : p, :]
    if ell > 1 and ell != p:
        out = out[..., :, : ell - 1] - out[..., :, ell - 1 : ell]
    return out


def pad(coeffs: np.ndarray, p: int, ell: int) -> np.ndarray:
    """Inverse of :func:`reduce_padded` on canonical input (adds zero last row/column)."""
    coeffs = np.asarray(coeffs)
    lead = coeffs.shape[:-2]
    out = np.zeros(lead + (p, max(ell, 1)), dtype=coeffs.dtype)
    out[..., : p - 1, : ncols(ell, p)] = coeffs
    return out


def _maxabs(arr: np.ndarray) -> int:
    return int(max((abs(int(x)) for x in arr.ravel()), default=0))


def _promote_object(a: np.ndarray, b: np.ndarray, terms: int):
    if _maxabs(a) * _maxabs(b) * max(terms, 1) >= _INT64_SAFE:
        return a.astype(object), b.astype(object)
    return a, b


class CycSum:
    """An element of Z[zeta_p, zeta_ell], optionally divided by a positive integer."""

    __slots__ = ("p", "ell", "coeffs", "denom")

    def __init__(self, p: int, ell: int, coeffs, denom: int = 1):
        coeffs = np.array(coeffs, dtype=object if _needs_object(coeffs) else np.int64)
        shape = (p - 1, ncols(ell, p))
        if coeffs.shape != shape:
            raise ValueError(f"coefficient matrix must have shape {shape}, got {coeffs.shape}")
        denom = int(denom)
        if denom <= 0:
            raise ValueError("denominator must be positive")
        g = reduce(math.gcd, (int(c) for c in coeffs.ravel()), denom)
        if g > 1:
            coeffs = coeffs // g
            denom //= g
        if not coeffs.any():
            denom = 1
        coeffs.flags.writeable = False
        self.p = p
        self.ell = ell
        self.coeffs = coeffs
        self.denom = denom

    # -- constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, p: int, ell: int) -> CycSum:
        return cls(p, ell, np.zeros((p - 1, ncols(ell, p)), dtype=np.int64))

    @classmethod
    def constant(cls, c, p: int, ell: int) -> CycSum:
        c = Fraction(c)
        big = abs(c.numerator) >= _INT64_SAFE
        arr = np.zeros((p - 1, ncols(ell, p)), dtype=object if big else np.int64)
        arr[0, 0] = c.numerator
        return cls(p, ell, arr, c.denominator)

    @classmethod
    def monomial(cls, p: int, ell: int, u: int = 0, v: int = 0, coeff: int = 1) -> CycSum:
        counts = np.zeros((p, max(ell, 1)), dtype=np.int64)
        counts[u % p, v % ell if ell > 1 else 0] = coeff
        return cls.from_exponent_counts(counts, p, ell)

    @classmethod
    def from_exponent_counts(cls, counts, p: int, ell: int, denom: int = 1) -> CycSum:
        counts = np.asarray(counts)
        if counts.shape != (p, max(ell, 1)):
            raise ValueError(f"exponent counts must have shape {(p, max(ell, 1))}")
        return cls(p, ell, reduce_padded(counts, p, ell), denom)

    # -- coercion ----------------------------------------------------------------
    def _lift(self, other) -> tuple[CycSum, CycSum]:
        if isinstance(other, (int, np.integer)):
            other = CycSum.constant(int(other), self.p, self.ell)
        if not isinstance(other, CycSum):
            return NotImplemented
        if other.p != self.p:
            raise ValueError(f"mismatched p: {self.p} vs {other.p}")
        a, b = self, other
        if a.ell != b.ell:
            if a.ell == 1:
                a = a.promote(b.ell)
            elif b.ell == 1:
                b = b.promote(a.ell)
            else:
                raise ValueError(f"mismatched ell: {a.ell} vs {b.ell}")
        return a, b

    def promote(self, ell: int) -> CycSum:
        """View a Z[zeta_p] element inside Z[zeta_p, zeta_ell]."""
        if self.ell == ell:
            return self
        if self.ell != 1:
            raise ValueError("only ell = 1 elements can be promoted")
        arr = np.zeros((self.p - 1, ncols(ell, self.p)), dtype=self.coeffs.dtype)
        arr[:, 0] = self.coeffs[:, 0]
        return CycSum(self.p, ell, arr, self.denom)

    @property
    def padded(self) -> np.ndarray:
        return pad(self.coeffs, self.p, self.ell)

    # -- ring operations -----------------------------------------------------------
    def __add__(self, other):
        lifted = self._lift(other)
        if lifted is NotImplemented:
            return NotImplemented
        a, b = lifted
        d = a.denom * b.denom // math.gcd(a.denom, b.denom)
        ca = a.coeffs.astype(object) * (d // a.denom)
        cb = b.coeffs.astype(object) * (d // b.denom)
        return CycSum(a.p, a.ell, ca + cb, d)

    __radd__ = __add__

    def __neg__(self):
        return CycSum(self.p, self.ell, -self.coeffs, self.denom)

    def __sub__(self, other):
        lifted = self._lift(other)
        if lifted is NotImplemented:
            return NotImplemented
        a, b = lifted
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        lifted = self._lift(other)
        if lifted is NotImplemented:
            return NotImplemented
        a, b = lifted
        p, ell = a.p, a.ell
        pa, pb = _promote_object(a.padded, b.padded, a.coeffs.size)
        out = np.zeros_like(pb)
        for (u, v), c in np.ndenumerate(pa):
            if c:
                out = out + c * np.roll(np.roll(pb, u, axis=0), v, axis=1)
        return CycSum(p, ell, reduce_padded(out, p, ell), a.denom * b.denom)

    __rmul__ = __mul__

    def __truediv__(self, n: int) -> CycSum:
        """Division by a nonzero integer."""
        n = int(n)
        if n == 0:
            raise ZeroDivisionError("division of a cyclotomic sum by zero")
        sign = 1 if n > 0 else -1
        return CycSum(self.p, self.ell, self.coeffs * sign, self.denom * abs(n))

    # -- symmetries -------------------------------------------------------------
    def conjugate(self, mode: str = "both") -> CycSum:
        """Invert zeta_p, zeta_ell or both."""
        if mode not in ("p", "ell", "both"):
            raise ValueError(f"unknown conjugation mode {mode!r}")
        if self.ell == self.p:
            mode = "p"  # a single root of unity
        arr = self.padded
        if mode in ("p", "both"):
            arr = arr[(-np.arange(self.p)) % self.p, :]
        if mode in ("ell", "both") and self.ell > 1:
            arr = arr[:, (-np.arange(self.ell)) % self.ell]
        return CycSum(self.p, self.ell, reduce_padded(arr, self.p, self.ell), self.denom)

    def galois_twist(self, k: int) -> CycSum:
        """Apply zeta_ell -> zeta_ell^k."""
        if self.ell == 1:
            return self
        if self.ell == self.p:
            raise ValueError("zeta_ell is zeta_p when ell = p; twist is not independent of zeta_p")
        if k % self.ell == 0:
            raise ValueError("twist exponent must be a unit mod ell")
        arr = self.padded
        out = np.zeros_like(arr)
        out[:, (k * np.arange(self.ell)) % self.ell] = arr
        return CycSum(self.p, self.ell, reduce_padded(out, self.p, self.ell), self.denom)

    def embed_complex(self) -> complex:
        zp = np.exp(2j * np.pi * np.arange(self.p - 1) / self.p)
        if self.ell > 1 and self.ell != self.p:
            zl = np.exp(2j * np.pi * np.arange(self.ell - 1) / self.ell)
        else:
            zl = np.ones(1)
        total = complex(np.sum(self.coeffs.astype(float) * np.outer(zp, zl)))
        return total / self.denom

    def __complex__(self):
        return self.embed_complex()

    # -- comparison and serialization ----------------------------------------------
    @property
    def sort_key(self) -> tuple:
        return (self.denom,) + tuple(int(c) for c in self.coeffs.ravel())

    def is_rational(self) -> bool:
        c = self.coeffs.copy()
        c[0, 0] = 0
        return not c.any()

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = CycSum.constant(int(other), self.p, self.ell)
        if not isinstance(other, CycSum):
            return NotImplemented
        if self.p != other.p:
            return False
        try:
            a, b = self._lift(other)
        except ValueError:
            return False
        return a.denom == b.denom and np.array_equal(a.coeffs, b.coeffs)

    def __hash__(self):
        return hash((self.p, self.ell, self.sort_key))

    def __repr__(self):
        rows = self.coeffs.tolist()
        tail = "" if self.denom == 1 else f", denom={self.denom}"
        return f"CycSum(p={self.p}, ell={self.ell}, coeffs={rows}{tail})"

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "ell": self.ell,
            "denom": self.denom,
            "coeffs": [[int(c) for c in row] for row in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj: dict) -> CycSum:
        return cls(int(obj["p"]), int(obj["ell"]), obj["coeffs"], int(obj.get("denom", 1)))


def _needs_object(values) -> bool:
    arr = np.asarray(values)
    if arr.dtype != object:
        return False
    return any(abs(int(x)) >= _INT64_SAFE for x in arr.ravel())


def from_exponent_counts(counts, p: int, ell: int) -> CycSum:
    return CycSum.from_exponent_counts(counts, p, ell)


def cyc_arith(a: CycSum, b: CycSum, op: str) -> CycSum:
    if (a.p, a.ell) != (b.p, b.ell) and 1 not in (a.ell, b.ell):
        raise ValueError("mismatched (p, ell)")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def conjugate(a: CycSum, mode: str = "both") -> CycSum:
    return a.conjugate(mode)


def embed_complex(a: CycSum) -> complex:
    return a.embed_complex()


def galois_twist(a: CycSum, k: int) -> CycSum:
    return a.galois_twist(k)


def zeta_matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Matrix product over Z[zeta_p] on padded arrays of shape (n, m, p) and (m, k, p)."""
    a, b = _promote_object(a, b, a.shape[1] * p)
    out = np.zeros((a.shape[0], b.shape[1], p), dtype=a.dtype)
    for u in range(p):
        au = a[:, :, u]
        if not au.any():
            continue
        for v in range(p):
            out[:, :, (u + v) % p] += au @ b[:, :, v]
    return out


def canonical_zeta_p(arr: np.ndarray, p: int) -> np.ndarray:
    """Canonical Z[zeta_p] coordinates of padded arrays of shape (..., p)."""
    return arr[..., : p - 1] - arr[..., p - 1 : p]
