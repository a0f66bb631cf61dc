"""Paley graphs X(F_q) as Cayley graphs of the additive group."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .field import FieldElement, FieldError, FiniteField


class PaleyError(ValueError):
    pass


def check_paley_field(field: FiniteField) -> None:
    if field.q % 4 != 1:
        raise PaleyError(f"q = {field.q} is not 1 mod 4; the Paley graph is undefined")


@dataclass(frozen=True, eq=False)
class PaleyGraph:
    field: FiniteField

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def squares(self) -> np.ndarray:
        """Nonzero squares, ordered g^0, g^2, g^4, ... for the fixed generator g."""
        return self.field.squares

    @property
    def degree(self) -> int:
        return (self.q - 1) // 2

    def neighbors(self) -> np.ndarray:
        """``nbr[x, j] = x + s_j``, shape (q, (q-1)/2)."""
        x = np.arange(self.q)
        return self.field.add(x[:, None], self.squares[None, :])

    def adjacency_matrix(self) -> np.ndarray:
        A = np.zeros((self.q, self.q), dtype=np.int8)
        nbr = self.neighbors()
        A[np.repeat(np.arange(self.q), self.degree), nbr.ravel()] = 1
        return A

    def edges(self) -> list[tuple[int, int]]:
        nbr = self.neighbors()
        return [(x, int(y)) for x in range(self.q) for y in nbr[x] if x < y]

    def is_adjacent(self, x: int, y: int) -> bool:
        return x != y and bool(self.field.square_mask[self.field.sub(y, x)])

    def to_dot(self) -> str:
        f = self.field
        lines = [f'graph "X(F_{self.q})" {{']
        for x in range(self.q):
            lines.append(f'  "{f.key(x)}";')
        for x, y in self.edges():
            lines.append(f'  "{f.key(x)}" -- "{f.key(y)}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_paley(field: FiniteField) -> PaleyGraph:
    check_paley_field(field)
    return PaleyGraph(field)


def paley_spectrum_closed_form(field: FiniteField) -> list[tuple[str, float, int]]:
    """Eigenvalues of X(F_q) as (exact tag, value, multiplicity).

    The square-indexed characters give ((-1)^(r-1) sqrt(q) - 1)/2 and the
    non-square-indexed ones ((-1)^r sqrt(q) - 1)/2.
    """
    check_paley_field(field)
    q, r = field.q, field.r
    half = (q - 1) // 2
    root = math.sqrt(q)
    out = [(str(half), float(half), 1)]
    for sign in ((-1) ** (r - 1), (-1) ** r):
        if math.isqrt(q) ** 2 == q:
            s = math.isqrt(q)
            tag = str(Fraction(sign * s - 1, 2))
        else:
            tag = f"({'-' if sign < 0 else ''}sqrt({q})-1)/2"
        out.append((tag, (sign * root - 1) / 2, half))
    return out


def paley_automorphism(t: FieldElement, i: int, a: FieldElement) -> np.ndarray:
    """The vertex permutation x -> t x^(p^i) + a, checked to preserve adjacency."""
    field = t.field
    check_paley_field(field)
    if t.index == 0 or not t.is_square():
        raise PaleyError(f"{t} is not a nonzero square")
    x = np.arange(field.q)
    perm = field.add(field.mul(t.index, field.frobenius(x, i)), a.index)
    sq = field.squares
    nbr = field.add(x[:, None], sq[None, :])
    if not field.square_mask[field.sub(perm[nbr], perm[x][:, None])].all():
        raise PaleyError("map does not preserve adjacency")  # cannot happen for square t
    return perm


__all__ = [
    "FieldError",
    "PaleyError",
    "PaleyGraph",
    "build_paley",
    "check_paley_field",
    "paley_automorphism",
    "paley_spectrum_closed_form",
]
