"""Finite fields F_{p^r} backed by exp/log tables.

Elements are stored as integer indices. The index of ``c0 + c1 w + ... +
c_{r-1} w^{r-1}`` is ``sum(c_i * p**(r-1-i))``, so integer order coincides
with lexicographic order on the coefficient vector ``(c0, c1, ...)``. That
order is the canonical enumeration order used everywhere in the package.
"""
from __future__ import annotations

import itertools
import json
from functools import cached_property, lru_cache
from importlib import resources

import numpy as np
from sympy import factorint, isprime

MAX_FIELD_SIZE = 2**20


class FieldError(ValueError):
    pass


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic ``m`` (coefficients low to high)."""
    a = [c % p for c in a]
    n = len(m) - 1
    while len(a) > n:
        c = a.pop()
        if c:
            shift = len(a) - n
            for i in range(n):
                a[shift + i] = (a[shift + i] - c * m[i]) % p
    return a + [0] * (n - len(a))


def _poly_mulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _poly_mod(prod, m, p)


def _poly_powmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = _poly_mod([1], m, p)
    base = a
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, m, p)
        base = _poly_mulmod(base, base, m, p)
        e >>= 1
    return result


def is_irreducible(modulus: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= r/2."""
    r = len(modulus) - 1
    if r <= 1:
        return r == 1
    for d in range(1, r // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not any(_poly_mod(modulus, list(low) + [1], p)):
                return False
    return True


def default_modulus(p: int, r: int) -> list[int]:
    """The rule behind the shipped modulus table.

    ``T^r - d`` for the smallest quadratic non-residue ``d`` mod p making it
    irreducible; otherwise the first monic irreducible polynomial in
    lexicographic order on its low coefficients.
    """
    if r == 1:
        return [0, 1]
    for d in range(1, p):
        if pow(d, (p - 1) // 2, p) != p - 1:
            continue
        cand = [(-d) % p] + [0] * (r - 1) + [1]
        if is_irreducible(cand, p):
            return cand
    for low in itertools.product(range(p), repeat=r):
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {r} over F_{p}")


@lru_cache(maxsize=None)
def _modulus_table() -> dict[tuple[int, int], dict]:
    text = resources.files("paleycover.data").joinpath("modulus_table.json").read_text()
    return {(e["p"], e["r"]): e for e in json.loads(text)["fields"]}


class FiniteField:
    """The field F_q, q = p^r, with a fixed multiplicative generator.

    All arithmetic helpers accept integer indices or numpy arrays of them.
    """

    def __init__(self, p: int, r: int, modulus, generator=None):
        if not isprime(p):
            raise FieldError(f"p = {p} is not prime")
        if r < 1:
            raise FieldError("r must be positive")
        if p**r > MAX_FIELD_SIZE:
            raise FieldError(f"q = {p}^{r} exceeds the field size cap {MAX_FIELD_SIZE}")
        modulus = [int(c) for c in modulus]
        if len(modulus) != r + 1:
            raise FieldError(f"modulus must have {r + 1} coefficients, got {len(modulus)}")
        if modulus[-1] % p != 1:
            raise FieldError("modulus must be monic")
        modulus = [c % p for c in modulus]
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.r = r
        self.q = p**r
        self.modulus = tuple(modulus)
        self._place = p ** np.arange(r - 1, -1, -1, dtype=np.int64)
        self.digits = np.array(list(itertools.product(range(p), repeat=r)), dtype=np.int64).reshape(self.q, r)
        if generator is None:
            generator = self._find_generator()
        else:
            generator = self._coerce_index(generator)
            if not self._has_full_order(generator):
                raise FieldError("pinned generator does not have order q - 1")
        self._gen = generator
        self._build_tables()

    # -- construction helpers ------------------------------------------------
    def _coeffs_of(self, idx: int) -> list[int]:
        return [int(c) for c in self.digits[idx]]

    def _index_of(self, coeffs) -> int:
        coeffs = [int(c) % self.p for c in coeffs]
        coeffs += [0] * (self.r - len(coeffs))
        return int(np.dot(coeffs, self._place))

    def _has_full_order(self, idx: int) -> bool:
        if idx == 0:
            return False
        poly = self._coeffs_of(idx)
        one = _poly_mod([1], list(self.modulus), self.p)
        n = self.q - 1
        if _poly_powmod(poly, n, list(self.modulus), self.p) != one:
            return False
        return all(
            _poly_powmod(poly, n // ell, list(self.modulus), self.p) != one for ell in factorint(n)
        )

    def _find_generator(self) -> int:
        for idx in range(1, self.q):
            if self._has_full_order(idx):
                return idx
        raise FieldError("no generator found")  # unreachable for a genuine field

    def _build_tables(self) -> None:
        q, m, p = self.q, list(self.modulus), self.p
        exp = np.empty(q - 1, dtype=np.int64)
        g = self._coeffs_of(self._gen)
        cur = _poly_mod([1], m, p)
        for i in range(q - 1):
            exp[i] = self._index_of(cur)
            cur = _poly_mulmod(cur, g, m, p)
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        self.exp_table = exp
        self.log_table = log
        self.exp_table.flags.writeable = False
        self.log_table.flags.writeable = False

        neg = ((-self.digits) % p) @ self._place
        self.neg_table = neg
        frob = np.empty((self.r, q), dtype=np.int64)
        frob[0] = np.arange(q)
        for i in range(1, self.r):
            frob[i] = self.pow(frob[i - 1], p)
        self.frob_table = frob
        tr = np.zeros(q, dtype=np.int64)
        for i in range(self.r):
            # Frobenius images of any element sum into the prime field
            tr = self.add(tr, frob[i])
        self.trace_table = tr // self._place[0]  # prime-field element c has index c * p^(r-1)
        for t in (neg, frob, self.trace_table):
            t.flags.writeable = False

    def _coerce_index(self, x) -> int:
        if isinstance(x, FieldElement):
            return x.index
        if isinstance(x, str):
            return self._index_of(int(c) for c in x.split(","))
        if isinstance(x, (list, tuple)):
            return self._index_of(x)
        return int(x)

    # -- identity --------------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.r, self.modulus, self._gen) == (
            other.p,
            other.r,
            other.modulus,
            other._gen,
        )

    def __hash__(self):
        return hash((self.p, self.r, self.modulus, self._gen))

    def __repr__(self):
        return f"FiniteField(p={self.p}, r={self.r}, modulus={list(self.modulus)})"

    # -- elements --------------------------------------------------------------
    def __call__(self, x) -> FieldElement:
        """Coerce an index, coefficient vector, canonical key or element."""
        if isinstance(x, FieldElement):
            if x.field != self:
                raise FieldError("element belongs to a different field")
            return x
        if isinstance(x, (list, tuple, str)):
            return FieldElement(self, self._coerce_index(x))
        idx = int(x)
        if not 0 <= idx < self.q:
            raise FieldError(f"index {idx} out of range for F_{self.q}")
        return FieldElement(self, idx)

    def from_int(self, n: int) -> FieldElement:
        """The prime-field element n mod p."""
        return FieldElement(self, (n % self.p) * int(self._place[0]))

    def from_coeffs(self, coeffs) -> FieldElement:
        return FieldElement(self, self._index_of(coeffs))

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, i) for i in range(self.q)]

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return self.from_int(1)

    @property
    def one_index(self) -> int:
        return int(self._place[0])

    @property
    def generator(self) -> FieldElement:
        return FieldElement(self, self._gen)

    def key(self, idx: int) -> str:
        return ",".join(str(c) for c in self.digits[idx])

    def descriptor(self) -> dict:
        return {"p": self.p, "r": self.r, "modulus": list(self.modulus)}

    # -- vectorized arithmetic on indices ----------------------------------------
    def add(self, a, b):
        return ((self.digits[a] + self.digits[b]) % self.p) @ self._place

    def sub(self, a, b):
        return ((self.digits[a] - self.digits[b]) % self.p) @ self._place

    def neg(self, a):
        return self.neg_table[a]

    def mul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        la, lb = self.log_table[a], self.log_table[b]
        out = self.exp_table[(la + lb) % (self.q - 1)]
        return np.where((la < 0) | (lb < 0), 0, out)

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self.exp_table[(-self.log_table[a]) % (self.q - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        a = np.asarray(a)
        la = self.log_table[a]
        out = self.exp_table[(la * (e % (self.q - 1))) % (self.q - 1)]
        if e == 0:
            return np.full_like(a, self.one_index)
        if e < 0 and np.any(a == 0):
            raise ZeroDivisionError("negative power of zero")
        return np.where(la < 0, 0, out)

    def smul(self, c: int, a):
        """Multiply by the prime-field scalar c."""
        return ((self.digits[a] * c) % self.p) @ self._place

    # -- structure ---------------------------------------------------------------
    @cached_property
    def squares(self) -> np.ndarray:
        """Nonzero squares ordered by even powers of the generator."""
        sq = self.exp_table[0::2].copy()
        sq.flags.writeable = False
        return sq

    @cached_property
    def square_mask(self) -> np.ndarray:
        mask = np.zeros(self.q, dtype=bool)
        mask[self.squares] = True
        mask.flags.writeable = False
        return mask

    @cached_property
    def trace_products(self) -> np.ndarray:
        """``tr(x*y)`` for all index pairs, shape (q, q)."""
        idx = np.arange(self.q)
        t = self.trace_table[self.mul(idx[:, None], idx[None, :])]
        t.flags.writeable = False
        return t

    def trace(self, x) -> int:
        return int(self.trace_table[self._coerce_index(x)])

    def frobenius(self, x, i: int = 1):
        if not 0 <= i < self.r:
            raise FieldError(f"Galois index {i} outside [0, {self.r})")
        return self.frob_table[i][x]

    def is_square(self, x) -> bool:
        idx = self._coerce_index(x)
        if idx == 0:
            raise FieldError("is_square is undefined at zero")
        return bool(self.square_mask[idx])

    def multiplicative_generator(self) -> FieldElement:
        return self.generator

    def format(self, idx: int, var: str = "w") -> str:
        """Human-readable form such as ``4w+1``."""
        terms = []
        for power in range(self.r - 1, -1, -1):
            c = int(self.digits[idx][power])
            if not c:
                continue
            if power == 0:
                terms.append(str(c))
            else:
                mono = var if power == 1 else f"{var}^{power}"
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) or "0"


class FieldElement:
    """An element of a :class:`FiniteField`, compared by value."""

    __slots__ = ("field", "index")

    def __init__(self, field: FiniteField, index: int):
        self.field = field
        self.index = int(index)

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.field.digits[self.index])

    @property
    def key(self) -> str:
        return self.field.key(self.index)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("elements of different fields")
            return other.index
        if isinstance(other, int):
            return self.field.from_int(other).index
        return NotImplemented

    def _wrap(self, idx) -> FieldElement:
        return FieldElement(self.field, int(idx))

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.add(self.index, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(self.index, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(o, self.index))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.mul(self.index, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(self.index, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(o, self.index))

    def __neg__(self):
        return self._wrap(self.field.neg(self.index))

    def __pow__(self, e: int):
        return self._wrap(self.field.pow(self.index, e))

    def inverse(self) -> FieldElement:
        return self._wrap(self.field.inv(self.index))

    def trace(self) -> int:
        return int(self.field.trace_table[self.index])

    def frobenius(self, i: int = 1) -> FieldElement:
        return self._wrap(self.field.frobenius(self.index, i))

    def is_square(self) -> bool:
        return self.field.is_square(self.index)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.index == other.index
        if isinstance(other, int):
            return self.index == self.field.from_int(other).index
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.index))

    def __lt__(self, other: FieldElement) -> bool:
        return self.index < other.index

    def __repr__(self):
        return f"FieldElement({self.field.format(self.index)} in F_{self.field.q})"

    def __str__(self):
        return self.field.format(self.index)


def make_field(p: int, r: int = 1, modulus=None) -> FiniteField:
    """Build F_{p^r}, taking the modulus (and pinned generator) from the table if omitted."""
    if not isprime(p):
        raise FieldError(f"p = {p} is not prime")
    return _make_field(p, r, None if modulus is None else tuple(int(c) for c in modulus))


@lru_cache(maxsize=64)
def _make_field(p: int, r: int, modulus):
    generator = None
    entry = _modulus_table().get((p, r))
    if modulus is None:
        if r == 1:
            modulus = (0, 1)
        elif entry is None:
            raise FieldError(f"no built-in modulus for p={p}, r={r}; pass one explicitly")
        else:
            modulus = tuple(entry["modulus"])
    # the pinned generator goes with the table modulus however it was supplied
    if entry is not None and [c % p for c in modulus] == entry["modulus"]:
        generator = entry.get("generator")
    return FiniteField(p, r, list(modulus), generator)


def field_from_descriptor(desc: dict) -> FiniteField:
    return make_field(int(desc["p"]), int(desc["r"]), desc.get("modulus"))


def arith(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    """Dispatch one of add, sub, mul, div, neg, inv, pow (``b`` is the exponent for pow)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** int(b)
    raise ValueError(f"unknown field operation {op!r}")
