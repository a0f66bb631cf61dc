"""Independent reference computations used by the tests.

Nothing here goes through the package's table-driven arithmetic: fields use
sympy polynomials over GF(p), cyclotomic values are reduced modulo the
cyclotomic polynomial Phi_{p ell} (or Phi_p), and spectra are accumulated
term by term in complex floating point.
"""
from __future__ import annotations

import cmath
import itertools
import math

import numpy as np
import sympy
from sympy import GF, Poly, symbols

T, Z = symbols("T z")


class PolyField:
    """F_p[T]/(m) with elements as coefficient tuples (constant term first)."""

    def __init__(self, p: int, modulus):
        self.p = p
        self.r = len(modulus) - 1
        self.m = Poly(list(reversed(modulus)), T, domain=GF(p))

    def poly(self, c) -> Poly:
        return Poly(list(reversed(list(c))), T, domain=GF(self.p))

    def coeffs(self, poly: Poly) -> tuple[int, ...]:
        c = [int(x) % self.p for x in reversed(poly.all_coeffs())]
        return tuple((c + [0] * self.r)[: self.r])

    def mul(self, a, b):
        return self.coeffs((self.poly(a) * self.poly(b)).rem(self.m))

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def pow(self, a, e: int):
        out = tuple([1] + [0] * (self.r - 1))
        for _ in range(e):
            out = self.mul(out, a)
        return out

    def elements(self):
        return [tuple(c) for c in itertools.product(range(self.p), repeat=self.r)]

    def trace(self, a) -> int:
        total = tuple([0] * self.r)
        x = a
        for _ in range(self.r):
            total = self.add(total, x)
            x = self.pow(x, self.p)
        assert all(c == 0 for c in total[1:])
        return total[0]

    def squares(self):
        nz = [a for a in self.elements() if any(a)]
        return sorted({self.mul(a, a) for a in nz})


def cyclotomic_value(p: int, ell: int, terms) -> Poly:
    """sum of zeta_p^u zeta_ell^v over ``terms`` (pairs (u, v) with a count), reduced in Q(zeta_{p ell})."""
    n = p * ell if ell not in (1, p) else p
    phi = Poly(sympy.cyclotomic_poly(n, Z), Z)
    acc = Poly(0, Z)
    for (u, v), c in terms:
        if ell in (1, p):
            e = (u + v) % p
        else:
            e = (ell * u + p * v) % n
        acc += c * Poly(Z**e, Z)
    return acc.rem(phi)


def cycsum_value(x) -> Poly:
    """Reduce a package CycSum into the same representation (times its denominator)."""
    terms = [((u, v), int(c)) for (u, v), c in np.ndenumerate(x.coeffs) if c]
    return cyclotomic_value(x.p, x.ell, terms)


def complex_theta(field_oracle: PolyField, alpha_of, ell: int, a, k: int) -> complex:
    """theta_{a,k} by direct summation over the squares."""
    p = field_oracle.p
    total = 0j
    for s in field_oracle.squares():
        tr = field_oracle.trace(field_oracle.mul(a, s))
        total += cmath.exp(2j * math.pi * tr / p) * cmath.exp(2j * math.pi * k * alpha_of(s) / ell)
    return total


def bfs_components(adj: np.ndarray) -> int:
    n = len(adj)
    seen = np.zeros(n, dtype=bool)
    comps = 0
    for start in range(n):
        if seen[start]:
            continue
        comps += 1
        stack = [start]
        seen[start] = True
        while stack:
            v = stack.pop()
            for w in np.flatnonzero(adj[v]):
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
    return comps
