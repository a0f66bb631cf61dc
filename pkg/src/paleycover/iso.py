"""Cover- and graph-isomorphism decisions for translation-invariant covers.

The rigidity scan only looks at maps (x, i) -> (t x^(p^sigma) + a, n i + k).
A brute-force individualization/refinement search is provided as an
independent check on small graphs.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cover import CoverGraph, VoltageAssignment
from .field import FiniteField

DEFAULT_GI_CAP = 80
DEFAULT_GI_BUDGET = 200_000

ISOMORPHIC = "Isomorphic"
NOT_ISOMORPHIC = "NotIsomorphic"
UNKNOWN = "Unknown"
BUDGET_EXCEEDED = "BudgetExceeded"


@dataclass(frozen=True)
class IsoWitness:
    """The map (x, i) -> (t x^(p^sigma) + a, n i + k); field elements as indices."""

    t: int
    sigma: int
    a: int = 0
    k: int = 0
    n: int = 1

    def vertex_map(self, field: FiniteField, ell: int) -> np.ndarray:
        x = np.repeat(np.arange(field.q), ell)
        i = np.tile(np.arange(ell), field.q)
        y = field.add(field.mul(self.t, field.frobenius(x, self.sigma)), self.a)
        return y * ell + (self.n * i + self.k) % ell

    def to_json(self, field: FiniteField) -> dict:
        return {
            "t": field.key(self.t),
            "sigma": self.sigma,
            "a": field.key(self.a),
            "k": self.k,
            "n": self.n,
        }


@dataclass(frozen=True)
class IsoVerdict:
    status: str
    witness: IsoWitness | None
    hypothesis_ok: bool
    method: str = "scan"

    def __post_init__(self):
        if self.status == NOT_ISOMORPHIC and not self.hypothesis_ok and self.method == "scan":
            raise ValueError("NotIsomorphic from the scan requires the rigidity hypothesis")

    def to_json(self, field: FiniteField) -> dict:
        out = {"status": self.status, "hypothesis_ok": self.hypothesis_ok, "method": self.method}
        if self.witness is not None:
            out["witness"] = self.witness.to_json(field)
        return out


def rigidity_hypothesis(q: int, r: int, ell: int) -> bool:
    """When an exhausted scan proves non-isomorphism.

    Needs ell != p (otherwise the cover can be disconnected and the
    rigidity argument does not apply) and r <= 4 or ell > (q-1)/2.
    """
    p = round(q ** (1 / r))
    return ell != p and (r <= 4 or ell > (q - 1) // 2)


@lru_cache(maxsize=32)
def _scan_table(field: FiniteField) -> np.ndarray:
    """``table[j, sigma, m] = t_j * s_m^(p^sigma)`` over the even-power ordering of squares."""
    sq = field.squares
    frob = field.frob_table[:, sq]  # (r, S)
    table = field.mul(sq[:, None, None], frob[None, :, :])
    table.flags.writeable = False
    return table


def _check_pair(alpha: VoltageAssignment, beta: VoltageAssignment) -> None:
    if alpha.field != beta.field or alpha.ell != beta.ell:
        raise ValueError("voltages over different (q, ell)")


def _first_hit(alpha: VoltageAssignment, beta: VoltageAssignment, n: int) -> tuple[int, int] | None:
    f = alpha.field
    target = (n * alpha.values[f.squares]) % alpha.ell
    images = beta.values[_scan_table(f)]  # (T, r, S)
    ok = (images == target).all(axis=2)
    hits = np.argwhere(ok)  # row-major: t first, then sigma
    if len(hits) == 0:
        return None
    j, sigma = hits[0]
    return int(f.squares[j]), int(sigma)


def cover_isomorphic(alpha: VoltageAssignment, beta: VoltageAssignment) -> IsoWitness | None:
    """First (t, sigma) with alpha(s) = beta(t s^(p^sigma)) for all squares s."""
    _check_pair(alpha, beta)
    hit = _first_hit(alpha, beta, 1)
    return None if hit is None else IsoWitness(t=hit[0], sigma=hit[1])


def graph_isomorphic(alpha: VoltageAssignment, beta: VoltageAssignment) -> IsoVerdict:
    """Scan n, t, sigma for n alpha(s) = beta(t s^(p^sigma)).

    Exhausting the scan proves non-isomorphism only under the rigidity
    hypothesis (see :func:`rigidity_hypothesis`); otherwise the answer is
    Unknown.
    """
    _check_pair(alpha, beta)
    f, ell = alpha.field, alpha.ell
    ok = rigidity_hypothesis(f.q, f.r, ell)
    for n in range(1, ell):
        hit = _first_hit(alpha, beta, n)
        if hit is not None:
            return IsoVerdict(ISOMORPHIC, IsoWitness(t=hit[0], sigma=hit[1], n=n), ok)
    return IsoVerdict(NOT_ISOMORPHIC if ok else UNKNOWN, None, ok)


def decide_isomorphism(
    alpha: VoltageAssignment,
    beta: VoltageAssignment,
    gi_cap: int = DEFAULT_GI_CAP,
    budget: int = DEFAULT_GI_BUDGET,
) -> IsoVerdict:
    """The rigidity scan, falling back to brute force on small graphs when it is inconclusive."""
    verdict = graph_isomorphic(alpha, beta)
    if verdict.status != UNKNOWN or alpha.field.q * alpha.ell > gi_cap:
        return verdict
    bf = brute_force_isomorphic(CoverGraph(alpha), CoverGraph(beta), budget=budget, cap=gi_cap)
    if bf.status == BUDGET_EXCEEDED:
        return verdict
    return IsoVerdict(bf.status, None, verdict.hypothesis_ok, method="brute_force")


def witness_preserves_adjacency(witness: IsoWitness, alpha: VoltageAssignment, beta: VoltageAssignment) -> bool:
    """Edge-by-edge check that the witness maps X^alpha onto X^beta."""
    f, ell = alpha.field, alpha.ell
    perm = witness.vertex_map(f, ell)
    if len(np.unique(perm)) != len(perm):
        return False
    nbr_a = CoverGraph(alpha).neighbors()
    A_b = CoverGraph(beta).adjacency_matrix()
    return bool(A_b[perm[:, None], perm[nbr_a]].all())


# -- brute-force oracle ------------------------------------------------------------


@dataclass(frozen=True)
class BruteForceResult:
    status: str
    mapping: np.ndarray | None = None
    nodes: int = 0


def _as_adjacency(g) -> np.ndarray:
    if isinstance(g, CoverGraph):
        return g.adjacency_matrix()
    return np.asarray(g, dtype=np.int8)


def _walk_invariants(A: np.ndarray, depth: int = 6) -> list[tuple[int, ...]]:
    """Per-vertex closed-walk counts of lengths 2..depth, as a sorted list."""
    M = A.astype(np.int64)
    P = M.copy()
    cols = []
    for _ in range(2, depth + 1):
        P = P @ M
        cols.append(np.diag(P).copy())
    return sorted(zip(*(c.tolist() for c in cols)))


def _refine(nbrs1, nbrs2, c1: list[int], c2: list[int]) -> tuple[list[int], list[int]] | None:
    """Joint colour refinement; returns None when the colour histograms diverge."""
    n_colors = len(set(c1) | set(c2))
    while True:
        sig1 = [(c1[v], tuple(sorted(c1[w] for w in nbrs1[v]))) for v in range(len(c1))]
        sig2 = [(c2[v], tuple(sorted(c2[w] for w in nbrs2[v]))) for v in range(len(c2))]
        if Counter(sig1) != Counter(sig2):
            return None
        palette = {s: i for i, s in enumerate(sorted(set(sig1)))}
        c1 = [palette[s] for s in sig1]
        c2 = [palette[s] for s in sig2]
        if len(palette) == n_colors:
            return c1, c2
        n_colors = len(palette)


def brute_force_isomorphic(g1, g2, budget: int = DEFAULT_GI_BUDGET, cap: int = DEFAULT_GI_CAP) -> BruteForceResult:
    """Individualization/refinement search for a vertex bijection g1 -> g2.

    Accepts covers or 0/1 adjacency matrices. A returned bijection has been
    checked edge by edge.
    """
    A1, A2 = _as_adjacency(g1), _as_adjacency(g2)
    n = A1.shape[0]
    if max(n, A2.shape[0]) > cap:
        raise ValueError(f"graphs exceed the brute-force vertex cap {cap}")
    if A2.shape[0] != n or A1.sum() != A2.sum():
        return BruteForceResult(NOT_ISOMORPHIC)
    if sorted(A1.sum(1).tolist()) != sorted(A2.sum(1).tolist()):
        return BruteForceResult(NOT_ISOMORPHIC)
    if _walk_invariants(A1) != _walk_invariants(A2):
        return BruteForceResult(NOT_ISOMORPHIC)
    nbrs1 = [np.flatnonzero(row).tolist() for row in A1]
    nbrs2 = [np.flatnonzero(row).tolist() for row in A2]
    nodes = 0

    def search(c1, c2):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _Budget
        cells = Counter(c1)
        target = min((c for c, m in cells.items() if m > 1), key=lambda c: (cells[c], c), default=None)
        if target is None:
            mapping = np.empty(n, dtype=np.int64)
            where2 = {c: v for v, c in enumerate(c2)}
            for v, c in enumerate(c1):
                mapping[v] = where2[c]
            if (A2[mapping[:, None], mapping[None, :]] == A1).all():
                return mapping
            return None
        v = c1.index(target)
        fresh = max(max(c1), max(c2)) + 1
        for w in [u for u, c in enumerate(c2) if c == target]:
            d1, d2 = list(c1), list(c2)
            d1[v], d2[w] = fresh, fresh
            refined = _refine(nbrs1, nbrs2, d1, d2)
            if refined is None:
                continue
            found = search(*refined)
            if found is not None:
                return found
        return None

    start = _refine(nbrs1, nbrs2, [0] * n, [0] * n)
    if start is None:
        return BruteForceResult(NOT_ISOMORPHIC)
    try:
        mapping = search(*start)
    except _Budget:
        return BruteForceResult(BUDGET_EXCEEDED, nodes=nodes)
    if mapping is None:
        return BruteForceResult(NOT_ISOMORPHIC, nodes=nodes)
    return BruteForceResult(ISOMORPHIC, mapping, nodes)


class _Budget(Exception):
    pass
