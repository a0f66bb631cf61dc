"""Voltage assignments and the translation-invariant Z/ell-covers they define."""
from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Iterator, Mapping

import numpy as np
from sympy import isprime

from .field import FieldElement, FiniteField, field_from_descriptor
from .paley import check_paley_field

DEFAULT_ENUM_CAP = 1_000_000


class VoltageError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


def pair_representatives(field: FiniteField) -> np.ndarray:
    """One member of each {s, -s} pair: g^0, g^2, ..., g^(2((q-1)/4 - 1)).

    Since -1 = g^((q-1)/2), the partner of ``squares[i]`` is
    ``squares[i + (q-1)/4]``.
    """
    return field.squares[: (field.q - 1) // 4]


def _check_ell(field: FiniteField, ell: int) -> None:
    if not isprime(ell):
        raise VoltageError(f"ell = {ell} is not prime")


class VoltageAssignment:
    """An odd, not identically zero map from the nonzero squares to Z/ell.

    ``values`` has length q and is zero off the squares.
    """

    __slots__ = ("field", "ell", "values")

    def __init__(self, field: FiniteField, ell: int, values):
        check_paley_field(field)
        _check_ell(field, ell)
        values = np.asarray(values, dtype=np.int64) % ell
        if values.shape != (field.q,):
            raise VoltageError(f"values must have length {field.q}")
        if values[~field.square_mask].any():
            raise VoltageError("voltage is defined on squares only")
        sq = field.squares
        if not np.array_equal(values[field.neg(sq)], (-values[sq]) % ell):
            raise VoltageError("voltage is not odd: alpha(-s) != -alpha(s)")
        if not values.any():
            raise VoltageError("voltage assignment is identically zero")
        values.flags.writeable = False
        self.field = field
        self.ell = ell
        self.values = values

    @classmethod
    def from_pair_values(cls, field: FiniteField, ell: int, pair_values) -> VoltageAssignment:
        """Build from the values on :func:`pair_representatives`, in order."""
        reps = pair_representatives(field)
        pair_values = np.asarray(pair_values, dtype=np.int64)
        if pair_values.shape != reps.shape:
            raise VoltageError(f"expected {len(reps)} pair values")
        values = np.zeros(field.q, dtype=np.int64)
        values[reps] = pair_values % ell
        values[field.neg(reps)] = (-pair_values) % ell
        return cls(field, ell, values)

    def __call__(self, s) -> int:
        idx = s.index if isinstance(s, FieldElement) else int(s)
        if not self.field.square_mask[idx]:
            raise VoltageError(f"{self.field.format(idx)} is not a nonzero square")
        return int(self.values[idx])

    @property
    def pair_values(self) -> np.ndarray:
        return self.values[pair_representatives(self.field)]

    @property
    def square_values(self) -> np.ndarray:
        """Values along the even-power ordering of the squares."""
        return self.values[self.field.squares]

    def scaled(self, n: int) -> VoltageAssignment:
        return VoltageAssignment(self.field, self.ell, (n * self.values) % self.ell)

    def __eq__(self, other):
        return (
            isinstance(other, VoltageAssignment)
            and self.field == other.field
            and self.ell == other.ell
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.field, self.ell, self.values.tobytes()))

    def __repr__(self):
        f = self.field
        body = ", ".join(f"{f.format(int(s))}: {int(self.values[s])}" for s in pair_representatives(f))
        return f"VoltageAssignment(q={f.q}, ell={self.ell}, {{{body}}})"

    def to_json(self) -> dict:
        """Values on the lexicographically smaller member of each +-pair."""
        f = self.field
        reps = pair_representatives(f)
        keyed = {}
        for s in sorted(int(min(s, f.neg(s))) for s in reps):
            keyed[f.key(s)] = int(self.values[s])
        return {"field": f.descriptor(), "ell": self.ell, "values": keyed}

    @classmethod
    def from_json(cls, obj: Mapping) -> VoltageAssignment:
        for name in ("field", "ell", "values"):
            if name not in obj:
                raise VoltageError(f"voltage file is missing {name!r}")
        field = field_from_descriptor(obj["field"])
        return make_voltage(field, int(obj["ell"]), dict(obj["values"]))


def _element_index(field: FiniteField, key) -> int:
    if isinstance(key, FieldElement):
        return field(key).index
    if isinstance(key, (int, np.integer)):
        return field.from_int(int(key)).index
    return field(key).index


def _as_index(field: FiniteField, x) -> int:
    """Field element or raw index."""
    if isinstance(x, FieldElement):
        return field(x).index
    return int(x)


def make_voltage(field: FiniteField, ell: int, partial_values: Mapping) -> VoltageAssignment:
    """Complete a voltage from values on at least one member of every +-pair.

    Keys may be field elements, canonical keys like ``"1,3"``, coefficient
    tuples, or plain ints (read as prime-field elements).
    """
    check_paley_field(field)
    _check_ell(field, ell)
    values = np.zeros(field.q, dtype=np.int64)
    seen = np.zeros(field.q, dtype=bool)
    for key, val in partial_values.items():
        s = _element_index(field, key)
        if not field.square_mask[s]:
            raise VoltageError(f"{field.format(s)} is not a nonzero square")
        v, nv = int(val) % ell, (-int(val)) % ell
        ns = int(field.neg(s))
        for idx, want in ((s, v), (ns, nv)):
            if seen[idx] and values[idx] != want:
                raise VoltageError(f"inconsistent values on the pair of {field.format(s)}")
            values[idx] = want
            seen[idx] = True
    missing = field.squares[~seen[field.squares]]
    if len(missing):
        raise VoltageError(f"no value given for the pair of {field.format(int(missing[0]))}")
    return VoltageAssignment(field, ell, values)


def transform_voltage(voltage: VoltageAssignment, t, i: int = 0, n: int = 1) -> VoltageAssignment:
    """The voltage s -> n * voltage(t^{-1} s^(p^i))."""
    f, ell = voltage.field, voltage.ell
    t_idx = _as_index(f, t)
    if t_idx == 0 or not f.square_mask[t_idx]:
        raise VoltageError(f"{f.format(t_idx)} is not a nonzero square")
    if n % ell == 0:
        raise VoltageError("n must be a unit mod ell")
    sq = f.squares
    src = f.mul(f.inv(t_idx), f.frobenius(sq, i))
    values = np.zeros(f.q, dtype=np.int64)
    values[sq] = (n * voltage.values[src]) % ell
    return VoltageAssignment(f, ell, values)


def enumerate_voltages(field: FiniteField, ell: int, cap: int = DEFAULT_ENUM_CAP) -> Iterator[VoltageAssignment]:
    """Every voltage once, lexicographic in the pair values (first pair most significant)."""
    check_paley_field(field)
    _check_ell(field, ell)
    m = (field.q - 1) // 4
    if ell**m > cap:
        raise BudgetExceeded(f"{ell}^{m} voltages exceed the enumeration cap {cap}")
    for vals in itertools.product(range(ell), repeat=m):
        if any(vals):
            yield VoltageAssignment.from_pair_values(field, ell, vals)


def count_voltages(field: FiniteField, ell: int) -> int:
    return ell ** ((field.q - 1) // 4) - 1


def sample_voltage(field: FiniteField, ell: int, rng: np.random.Generator) -> VoltageAssignment:
    """Uniform over pair values, rejecting the all-zero draw."""
    m = (field.q - 1) // 4
    while True:
        vals = rng.integers(0, ell, size=m)
        if vals.any():
            return VoltageAssignment.from_pair_values(field, ell, vals)


def check_tau(field: FiniteField, tau: np.ndarray) -> None:
    """Raise unless tau is a trace-preserving involution of the squares commuting with negation."""
    tau = np.asarray(tau)
    sq = field.squares
    if tau.shape != (field.q,):
        raise VoltageError("tau must be given as a length-q index array")
    img = tau[sq]
    if not field.square_mask[img].all() or len(set(img.tolist())) != len(sq):
        raise VoltageError("tau is not a permutation of the squares")
    if not np.array_equal(tau[img], sq):
        raise VoltageError("tau is not an involution")
    if not np.array_equal(tau[field.neg(sq)], field.neg(img)):
        raise VoltageError("tau does not commute with negation")
    if not np.array_equal(field.trace_table[img], field.trace_table[sq]):
        raise VoltageError("tau does not preserve the trace")


def tau_from_mapping(field: FiniteField, mapping: Mapping) -> np.ndarray:
    """Index array for a map given on some squares; unspecified squares are fixed.

    The result is validated with :func:`check_tau`.
    """
    tau = np.arange(field.q)
    for src, dst in mapping.items():
        tau[_as_index(field, src)] = _as_index(field, dst)
    check_tau(field, tau)
    return tau


def voltage_from_tau(base: VoltageAssignment, tau) -> VoltageAssignment:
    """The voltage beta with base(s) = beta(tau(s))."""
    f = base.field
    tau = np.asarray(tau)
    check_tau(f, tau)
    values = np.zeros(f.q, dtype=np.int64)
    values[tau[f.squares]] = base.values[f.squares]
    return VoltageAssignment(f, base.ell, values)


def transform_group(field: FiniteField, ell: int) -> Iterator[tuple[int, int, int]]:
    """(t, sigma, n) triples in scan order: n ascending, t by even generator powers, sigma ascending."""
    for n in range(1, ell):
        for t in field.squares:
            for sigma in range(field.r):
                yield int(t), sigma, n


def orbit_pair_vectors(voltage: VoltageAssignment) -> np.ndarray:
    """Pair-value vectors of every transform of ``voltage``, one row per group element."""
    f, ell = voltage.field, voltage.ell
    reps = pair_representatives(f)
    sq = f.squares
    t = sq[:, None, None]
    sig = np.arange(f.r)[None, :, None]
    # src[t, sigma, j] = t^{-1} rep_j^(p^sigma)
    src = f.mul(f.inv(t), f.frob_table[sig, reps[None, None, :]])
    base = voltage.values[src].reshape(-1, len(reps))
    ns = np.arange(1, ell)
    return ((ns[:, None, None] * base[None]) % ell).reshape(-1, len(reps))


def canonical_pair_vector(voltage: VoltageAssignment) -> tuple[int, ...]:
    """Lexicographically least pair-value vector in the orbit under (t, sigma, n)."""
    vecs = orbit_pair_vectors(voltage)
    order = np.lexsort(vecs.T[::-1])
    return tuple(int(v) for v in vecs[order[0]])


def canonical_representative(voltage: VoltageAssignment) -> VoltageAssignment:
    return VoltageAssignment.from_pair_values(voltage.field, voltage.ell, canonical_pair_vector(voltage))


class CoverGraph:
    """X^alpha: the Cayley graph of F_q x Z/ell with generators (s, alpha(s)).

    Vertex ``(x, i)`` has id ``x * ell + i``.
    """

    def __init__(self, voltage: VoltageAssignment):
        self.voltage = voltage
        self.field = voltage.field
        self.ell = voltage.ell
        self.n_vertices = self.field.q * self.ell
        self.degree = (self.field.q - 1) // 2

    @property
    def gen_set(self) -> list[tuple[FieldElement, int]]:
        f = self.field
        return [(f(int(s)), int(self.voltage.values[s])) for s in f.squares]

    def vertex(self, x: int, i: int) -> int:
        return int(x) * self.ell + int(i) % self.ell

    def label(self, v: int) -> tuple[int, int]:
        return divmod(int(v), self.ell)

    def neighbors(self) -> np.ndarray:
        """``nbr[v, j]`` is the neighbour of v along the j-th generator."""
        f, ell = self.field, self.ell
        sq = f.squares
        volt = self.voltage.values[sq]
        x = np.repeat(np.arange(f.q), ell)
        i = np.tile(np.arange(ell), f.q)
        y = f.add(x[:, None], sq[None, :])
        j = (i[:, None] + volt[None, :]) % ell
        return y * ell + j

    def adjacency_matrix(self, dtype=np.int8) -> np.ndarray:
        A = np.zeros((self.n_vertices, self.n_vertices), dtype=dtype)
        nbr = self.neighbors()
        A[np.repeat(np.arange(self.n_vertices), self.degree), nbr.ravel()] = 1
        return A

    def edges(self) -> list[tuple[int, int]]:
        nbr = self.neighbors()
        return [(v, int(w)) for v in range(self.n_vertices) for w in nbr[v] if v < w]

    def is_connected(self) -> bool:
        """Breadth-first search from (0, 0)."""
        nbr = self.neighbors()
        seen = np.zeros(self.n_vertices, dtype=bool)
        seen[0] = True
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for w in nbr[v]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(int(w))
        return bool(seen.all())

    def to_dot(self) -> str:
        f, ell = self.field, self.ell
        name = lambda v: f'"({f.key(v // ell)},{v % ell})"'  # noqa: E731
        lines = [f'graph "X^alpha q={f.q} ell={ell}" {{']
        for i in range(ell):
            lines.append(f"  subgraph cluster_fiber_{i} {{")
            lines.append(f'    label="i={i}";')
            for x in range(f.q):
                lines.append(f"    {name(x * ell + i)};")
            lines.append("  }")
        for v, w in self.edges():
            lines.append(f"  {name(v)} -- {name(w)};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_cover(voltage: VoltageAssignment) -> CoverGraph:
    return CoverGraph(voltage)


def is_connected(cover: CoverGraph) -> bool:
    return cover.is_connected()
