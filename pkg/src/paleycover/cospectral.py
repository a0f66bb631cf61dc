"""Permutation-polynomial certificates of cospectrality, and counterexample search.

An odd permutation polynomial f with theta^alpha_{a,k} = theta^beta_{f(a),k}
gives the F_q x F_q matrix

    q M[x, y] = sum_a zeta_p^tr(f(a) y - a x),

which is orthogonal, conjugates each cycle matrix R^t to the F_q-circulant
built from column t of M, and carries psi^beta to psi^alpha. All of this is
checked exactly over Z[zeta_p] (entries of q M are stored in canonical
coordinates, so M itself never needs fractions).
"""
from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from . import _kernels
from .cover import (
    BudgetExceeded,
    VoltageAssignment,
    canonical_pair_vector,
    check_tau,
    enumerate_voltages,
    voltage_from_tau,
)
from .cyclotomic import CycSum, canonical_zeta_p, reduce_padded, zeta_matmul
from .field import FieldElement, FiniteField, field_from_descriptor
from .iso import DEFAULT_GI_CAP, NOT_ISOMORPHIC, UNKNOWN, decide_isomorphism
from .spectrum import CoverSpectrum, cospectral, full_spectrum


class CertificateError(ValueError):
    pass


# -- permutation polynomials ----------------------------------------------------------


class PermPoly:
    """A polynomial over F_q given by its nonzero coefficients ``{exponent: element index}``."""

    def __init__(self, field: FiniteField, coeffs: dict):
        clean = {}
        for e, c in coeffs.items():
            e = int(e)
            if not 0 <= e < field.q:
                raise CertificateError(f"exponent {e} outside [0, q)")
            idx = c.index if isinstance(c, FieldElement) else int(c)
            if idx:
                clean[e] = idx
        self.field = field
        self.coeffs = dict(sorted(clean.items()))
        self._values = None

    @classmethod
    def identity(cls, field: FiniteField) -> PermPoly:
        return cls(field, {1: field.one_index})

    @property
    def values(self) -> np.ndarray:
        """``values[a] = f(a)`` for every element index a."""
        if self._values is None:
            f = self.field
            x = np.arange(f.q)
            out = np.zeros(f.q, dtype=np.int64)
            for e, c in self.coeffs.items():
                out = f.add(out, f.mul(c, f.pow(x, e)))
            out.flags.writeable = False
            self._values = out
        return self._values

    def __call__(self, a):
        if isinstance(a, FieldElement):
            return self.field(int(self.values[a.index]))
        return int(self.values[int(a)])

    @property
    def degree(self) -> int:
        return max(self.coeffs, default=0)

    def __eq__(self, other):
        return isinstance(other, PermPoly) and self.field == other.field and self.coeffs == other.coeffs

    def __repr__(self):
        f = self.field
        terms = [f"({f.format(c)})T^{e}" for e, c in sorted(self.coeffs.items(), reverse=True)]
        return "PermPoly(" + " + ".join(terms) + ")"

    def to_json(self) -> dict:
        return {"coeffs": {str(e): self.field.key(c) for e, c in self.coeffs.items()}}

    @classmethod
    def from_json(cls, field: FiniteField, obj: dict) -> PermPoly:
        return cls(field, {int(e): field(k).index for e, k in obj["coeffs"].items()})


def interpolate(field: FiniteField, values) -> PermPoly:
    """Lagrange interpolation over F_q: the unique polynomial of degree < q with f(a) = values[a].

    Uses f(T) = sum_a f(a) (1 - (T - a)^(q-1)) and
    (T - a)^(q-1) = sum_j a^(q-1-j) T^j (with 0^0 = 1).
    """
    f = field
    q = f.q
    v = np.asarray(values, dtype=np.int64)
    a = np.arange(q)
    j = np.arange(q)
    powers = _pow_grid(f, a, q - 1 - j)
    prods = f.mul(v[None, :], powers)  # (j, a)
    digit_sums = f.digits[prods].sum(axis=1) % f.p  # (j, r)
    place = f.p ** np.arange(f.r - 1, -1, -1)
    sums = digit_sums @ place
    coeffs = f.neg(sums)
    total = (f.digits[v].sum(axis=0) % f.p) @ place
    coeffs[0] = f.add(coeffs[0], total)
    return PermPoly(f, {int(e): int(c) for e, c in enumerate(coeffs)})


def _pow_grid(field: FiniteField, a: np.ndarray, exps: np.ndarray) -> np.ndarray:
    """``a[col] ** exps[row]`` with 0^0 = 1."""
    la = field.log_table[a]  # -1 at zero
    out = field.exp_table[(la[None, :] * exps[:, None]) % (field.q - 1)]
    zero_col = la < 0
    out[:, zero_col] = np.where(exps[:, None] == 0, field.one_index, 0)
    return out


def validate_perm_poly(f: PermPoly) -> dict[str, bool]:
    F = f.field
    vals = f.values
    x = np.arange(F.q)
    bijective = len(np.unique(vals)) == F.q
    odd = bool(np.array_equal(vals[F.neg(x)], F.neg(vals)))
    semilinear = all(np.array_equal(vals[F.smul(c, x)], F.smul(c, vals)) for c in range(F.p))
    return {"bijective": bool(bijective), "odd": odd, "semilinear": bool(semilinear)}


def random_odd_permutation(field: FiniteField, rng: np.random.Generator) -> np.ndarray:
    """A uniformly random odd bijection of F_q as an index array."""
    q = field.q
    half = (q - 1) // 2
    nz = np.arange(1, q)
    reps = np.array(sorted({int(min(x, field.neg(x))) for x in nz}))
    assert len(reps) == half
    images = reps[rng.permutation(half)]
    flip = rng.integers(0, 2, size=half).astype(bool)
    images = np.where(flip, field.neg(images), images)
    out = np.zeros(q, dtype=np.int64)
    out[reps] = images
    out[field.neg(reps)] = field.neg(images)
    return out


def random_odd_perm_poly(field: FiniteField, rng: np.random.Generator) -> PermPoly:
    return interpolate(field, random_odd_permutation(field, rng))


# -- eigenvalue correspondence ----------------------------------------------------------


def _spectrum_of(v) -> CoverSpectrum:
    return v if isinstance(v, CoverSpectrum) else full_spectrum(v)


def eigenvalue_bijection_check(alpha, beta, f: PermPoly) -> bool:
    """theta^alpha_{a,k} == theta^beta_{f(a),k} exactly for every a and k."""
    sa, sb = _spectrum_of(alpha), _spectrum_of(beta)
    return bool(np.array_equal(sa.coeffs, sb.coeffs[f.values]))


def derive_bijection(alpha, beta) -> PermPoly | None:
    """An odd permutation polynomial matching the eigenvalue columns of alpha and beta.

    Each a is labelled by its full column (theta_{a,k})_k; a is matched to the
    first unused b with the same column, and -a to -b. Because
    theta_{-a,k} = theta_{a,-k} the partner columns then agree automatically.
    """
    sa, sb = _spectrum_of(alpha), _spectrum_of(beta)
    F = sa.field
    if sb.field != F or sb.ell != sa.ell:
        raise CertificateError("spectra over different (q, ell)")
    q = F.q
    col_a = [sa.coeffs[a].tobytes() for a in range(q)]
    col_b = [sb.coeffs[b].tobytes() for b in range(q)]
    pool: dict[bytes, list[int]] = {}
    for b in range(1, q):
        pool.setdefault(col_b[b], []).append(b)
    if col_a[0] != col_b[0]:
        return None
    image = np.full(q, -1, dtype=np.int64)
    image[0] = 0
    used = np.zeros(q, dtype=bool)
    for a in range(1, q):
        if image[a] >= 0:
            continue
        cands = pool.get(col_a[a], [])
        b = next((b for b in cands if not used[b]), None)
        if b is None:
            return None
        nb, na = int(F.neg(b)), int(F.neg(a))
        if col_b[nb] != col_a[na]:
            return None
        image[a], image[na] = b, nb
        used[b] = used[nb] = True
    return interpolate(F, image)


# -- the matrix M ---------------------------------------------------------------------


class MMatrix:
    """q*M stored as canonical Z[zeta_p] coordinates, shape (q, q, p-1)."""

    def __init__(self, field: FiniteField, f: PermPoly, scaled: np.ndarray):
        self.field = field
        self.f = f
        scaled.flags.writeable = False
        self.scaled = scaled

    @property
    def q(self) -> int:
        return self.field.q

    def entry(self, x: int, y: int) -> CycSum:
        """q * M[x, y] as an element of Z[zeta_p]."""
        return CycSum(self.field.p, 1, self.scaled[x, y][:, None])

    def value(self, x: int, y: int) -> CycSum:
        """M[x, y] itself."""
        return self.entry(x, y) / self.q

    def padded(self) -> np.ndarray:
        p = self.field.p
        out = np.zeros(self.scaled.shape[:2] + (p,), dtype=self.scaled.dtype)
        out[..., : p - 1] = self.scaled
        return out


def build_matrix_M(f: PermPoly) -> MMatrix:
    F = f.field
    counts = _kernels.m_counts(F.trace_products, f.values, F.p)
    return MMatrix(F, f, canonical_zeta_p(counts, F.p))


@dataclass
class Condition3Report:
    orthogonal: bool
    circulant: bool
    psi_transport: bool
    psi_transport_nontrivial: bool

    @property
    def ok(self) -> bool:
        return self.orthogonal and self.circulant and self.psi_transport

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "orthogonal": self.orthogonal,
            "circulant": self.circulant,
            "psi_transport": self.psi_transport,
        }


def check_orthogonal(M: MMatrix) -> bool:
    """(qM)(qM)^T == q^2 I exactly."""
    p, q = M.field.p, M.q
    P = M.padded()
    prod = canonical_zeta_p(zeta_matmul(P, P.transpose(1, 0, 2), p), p)
    want = np.zeros_like(prod)
    want[np.arange(q), np.arange(q), 0] = q * q
    return bool(np.array_equal(prod, want))


def check_circulant(M: MMatrix) -> bool:
    """For each t, (qM) R^t (qM)^T == q * sum_a (qM)[a, t] R^a."""
    F, p, q = M.field, M.field.p, M.q
    P = M.padded()
    PT = P.transpose(1, 0, 2)
    idx = np.arange(q)
    diff = F.sub(idx[None, :], idx[:, None])  # diff[x, y] = y - x
    for t in range(q):
        shifted = P[:, F.sub(idx, t), :]  # (qM R^t)[x, b] = qM[x, b - t]
        lhs = canonical_zeta_p(zeta_matmul(shifted, PT, p), p)
        rhs = q * M.scaled[diff, t]
        if not np.array_equal(lhs, rhs):
            return False
    return True


def _level_indicators(v: VoltageAssignment) -> np.ndarray:
    """``ind[c, x] = 1`` iff x is a square with v(x) = c."""
    F = v.field
    ind = np.zeros((v.ell, F.q), dtype=np.int64)
    sq = F.squares
    ind[v.values[sq], sq] = 1
    return ind


def psi_transport_residuals(M: MMatrix, alpha: VoltageAssignment, beta: VoltageAssignment) -> np.ndarray:
    """``w[c] = qM v_c^beta - q v_c^alpha`` in Z[zeta_p] coordinates, shape (ell, q, p-1)."""
    ind_a, ind_b = _level_indicators(alpha), _level_indicators(beta)
    w = np.einsum("xyu,cy->cxu", M.scaled, ind_b)
    w[:, :, 0] -= M.q * ind_a
    return w


def check_condition3(M: MMatrix, alpha: VoltageAssignment, beta: VoltageAssignment) -> Condition3Report:
    """Orthogonality, the circulant identity, and M psi^beta = psi^alpha for every character.

    For nontrivial characters the transport condition is that all w_c agree
    (sum_c zeta^c w_c = 0 forces this); including the trivial character
    forces them all to vanish.
    """
    if alpha.field != M.field or beta.field != M.field or alpha.ell != beta.ell:
        raise CertificateError("voltages and matrix over different fields")
    w = psi_transport_residuals(M, alpha, beta)
    all_equal = bool((w == w[0]).all())
    return Condition3Report(
        orthogonal=check_orthogonal(M),
        circulant=check_circulant(M),
        psi_transport=all_equal and not w[0].any(),
        psi_transport_nontrivial=all_equal,
    )


# -- block circulant reduction ----------------------------------------------------------


@dataclass
class BlockDecomposition:
    """The p-1 blocks of q*M restricted to squares x squares, shape (p-1, B, B, p-1)."""

    field: FiniteField
    scaled: np.ndarray

    @property
    def size(self) -> int:
        return self.scaled.shape[1]

    def block(self, k: int) -> np.ndarray:
        """Block M^[k] (1-based, k taken mod p-1) as canonical q*M coordinates."""
        return self.scaled[(k - 1) % (self.field.p - 1)]

    def is_rational(self) -> bool:
        return not self.scaled[..., 1:].any()

    def rational_blocks(self) -> list[list[list[Fraction]]]:
        """The blocks of M as exact rationals (requires every entry to be rational)."""
        if not self.is_rational():
            raise CertificateError("blocks have irrational entries")
        q = self.field.q
        return [
            [[Fraction(int(v), q) for v in row] for row in blk[..., 0]]
            for blk in self.scaled
        ]

    def scaled_integer_blocks(self, c: int) -> np.ndarray:
        """c * M^[k] for all k as an integer array; raises unless exact."""
        if not self.is_rational():
            raise CertificateError("blocks have irrational entries")
        num = self.scaled[..., 0].astype(object) * c
        if any(int(v) % self.field.q for v in num.ravel()):
            raise CertificateError(f"{c} * M is not integral")
        return (num // self.field.q).astype(np.int64)

    def block_sum(self) -> np.ndarray:
        """sum_k M^[k] in q*M coordinates, shape (B, B, p-1)."""
        return self.scaled.sum(axis=0)


def block_decompose(M: MMatrix) -> BlockDecomposition:
    F = M.field
    p, q = F.p, F.q
    if F.r % 2:
        raise CertificateError("block reduction needs r even (F_p^x inside the squares)")
    if not validate_perm_poly(M.f)["semilinear"]:
        raise CertificateError("block reduction needs f(aT) = a f(T) for a in F_p")
    B = (q - 1) // (2 * (p - 1))
    sq = F.squares
    Mt = M.scaled[sq[:, None], sq[None, :]]  # (S, S, p-1), S = (q-1)/2
    blocks = np.stack([Mt[:B, (k - 1) * B : k * B] for k in range(1, p)])
    for I in range(p - 1):
        for J in range(p - 1):
            want = blocks[(J - I) % (p - 1)]
            if not np.array_equal(Mt[I * B : (I + 1) * B, J * B : (J + 1) * B], want):
                raise CertificateError(f"restricted M is not block circulant at block ({I}, {J})")
    return BlockDecomposition(F, blocks)


def _psi_blocks(v: VoltageAssignment, k: int, B: int) -> np.ndarray:
    """Exponents of zeta_ell in psi^v_[j](i) = psi(v(g^(2 m(i, j)))), shape (p-1, B)."""
    vals = (k * v.values[v.field.squares]) % v.ell
    return vals.reshape(-1, B)


def block_equation_holds(blocks: BlockDecomposition, alpha, beta, j: int, k: int) -> bool:
    """sum_i M^[i] psi^beta_[i+j-1] == psi^alpha_[j] for the character psi_k."""
    F, ell = blocks.field, alpha.ell
    p, q, B = F.p, F.q, blocks.size
    pb = _psi_blocks(beta, k, B)
    pa = _psi_blocks(alpha, k, B)
    acc = np.zeros((B, p, ell), dtype=np.int64)
    for i in range(1, p):
        blk = blocks.block(i)  # (B, B, p-1)
        expo = pb[(i + j - 2) % (p - 1)]  # block [i + j - 1], 1-based
        for col in range(B):
            acc[:, : p - 1, expo[col]] += blk[:, col, :]
    lhs = reduce_padded(acc, p, ell)
    rhs = np.zeros((B, p, ell), dtype=np.int64)
    rhs[np.arange(B), 0, pa[(j - 1) % (p - 1)]] = q
    return bool(np.array_equal(lhs, reduce_padded(rhs, p, ell)))


def check_block_equations(blocks: BlockDecomposition, alpha, beta, zeta_symbolic: bool = True, k: int = 1, js=None) -> bool:
    """The reduced transport check for j = 1, ..., (p-1)/2.

    With ``zeta_symbolic`` the check runs at a primitive ell-th root (k = 1,
    which covers every nontrivial character by Galois conjugation) and at
    zeta = 1; otherwise only at the character psi_k.
    """
    p = blocks.field.p
    js = range(1, (p - 1) // 2 + 1) if js is None else js
    ks = (1, 0) if zeta_symbolic else (k,)
    return all(block_equation_holds(blocks, alpha, beta, j, kk) for j in js for kk in ks)


# -- search --------------------------------------------------------------------------


def trace_involutions(field: FiniteField, cap: int = 100_000) -> list[np.ndarray]:
    """Every trace-preserving involution of the squares commuting with negation.

    Returned as length-q index arrays (non-squares fixed), in a deterministic
    order with the identity first.
    """
    F = field
    sq = np.sort(F.squares)
    tr = F.trace_table
    choices = []
    for c in range(F.p):
        members = [int(s) for s in sq if tr[s] == c]
        if not members:
            continue
        if c == 0:
            choices.append(("zero", members))
        elif c <= (F.p - 1) // 2:
            choices.append(("pair", members))
    per_class = []
    total = 1
    for kind, members in choices:
        opts = list(_involutions(members)) if kind == "pair" else list(_neg_involutions(F, members))
        per_class.append((kind, opts))
        total *= len(opts)
        if total > cap:
            raise BudgetExceeded(f"more than {cap} trace-preserving involutions")
    out = []
    for combo in itertools.product(*(opts for _, opts in per_class)):
        tau = np.arange(F.q)
        for (kind, _), mapping in zip(per_class, combo):
            for s, t in mapping.items():
                tau[s] = t
                if kind == "pair":
                    tau[F.neg(s)] = F.neg(t)
        check_tau(F, tau)
        out.append(tau)
    return out


def _involutions(items: list[int]):
    """All involutions of ``items`` as dicts, identity first."""
    if not items:
        yield {}
        return
    first, rest = items[0], items[1:]
    for sub in _involutions(rest):
        yield {first: first, **sub}
    for i, partner in enumerate(rest):
        for sub in _involutions(rest[:i] + rest[i + 1 :]):
            yield {first: partner, partner: first, **sub}


def _neg_involutions(F: FiniteField, members: list[int]):
    """Involutions of a negation-closed set that commute with negation."""
    reps = sorted({min(s, int(F.neg(s))) for s in members})

    def rec(rs):
        if not rs:
            yield {}
            return
        a, rest = rs[0], rs[1:]
        na = int(F.neg(a))
        for sub in rec(rest):
            yield {a: a, na: na, **sub}
            yield {a: na, na: a, **sub}
        for i, b in enumerate(rest):
            nb = int(F.neg(b))
            for sub in rec(rest[:i] + rest[i + 1 :]):
                yield {a: b, b: a, na: nb, nb: na, **sub}
                yield {a: nb, nb: a, na: b, b: na, **sub}

    yield from rec(reps)


@dataclass
class CertifiedPair:
    alpha: VoltageAssignment
    beta: VoltageAssignment
    verdict: str
    certificate: PermPoly | None = None
    checks: dict | None = None
    tau: np.ndarray | None = None

    @property
    def orbit_key(self) -> tuple:
        return tuple(sorted((canonical_pair_vector(self.alpha), canonical_pair_vector(self.beta))))

    def to_json(self) -> dict:
        out = {
            "alpha": self.alpha.to_json()["values"],
            "beta": self.beta.to_json()["values"],
            "cospectral": True,
            "graph_isomorphic": self.verdict,
            "certificate": None,
        }
        if self.certificate is not None:
            out["certificate"] = {"f": self.certificate.to_json(), "checks": self.checks}
        if self.tau is not None:
            F = self.alpha.field
            out["tau"] = {F.key(int(s)): F.key(int(self.tau[s])) for s in np.sort(F.squares) if self.tau[s] != s}
        return out


@dataclass
class SearchReport:
    field: FiniteField
    ell: int
    mode: str
    n_voltages: int = 0
    n_orbits: int = 0
    distinct_pairs: int = 0
    pairs_with_self: int = 0
    pairs_tested: int = 0
    cospectral_pairs: int = 0
    counterexamples: list[CertifiedPair] = dc_field(default_factory=list)
    undecided: list[CertifiedPair] = dc_field(default_factory=list)
    per_pair: list[dict] | None = None
    seconds: float = 0.0

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "field": self.field.descriptor(),
            "ell": self.ell,
            "mode": self.mode,
            "n_voltages": self.n_voltages,
            "n_orbits": self.n_orbits,
            "distinct_pairs": self.distinct_pairs,
            "pairs_with_self": self.pairs_with_self,
            "pairs_tested": self.pairs_tested,
            "cospectral_pairs": self.cospectral_pairs,
            "counterexamples": [c.to_json() for c in self.counterexamples],
            "undecided": [c.to_json() for c in self.undecided],
        }
        if self.per_pair is not None:
            out["per_pair"] = self.per_pair
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


def certify(alpha: VoltageAssignment, beta: VoltageAssignment) -> tuple[PermPoly | None, dict | None]:
    """Derive f, then run the eigenvalue and matrix checks on it."""
    f = derive_bijection(alpha, beta)
    if f is None:
        return None, None
    checks = dict(validate_perm_poly(f))
    checks["eigenvalue_bijection"] = eigenvalue_bijection_check(alpha, beta, f)
    checks.update(check_condition3(build_matrix_M(f), alpha, beta).to_json())
    return f, checks


def _pair_verdict(args) -> tuple[bool, str, dict | None]:
    """Worker: exact cospectrality and rigidity verdict for one pair of pair-value vectors."""
    desc, ell, va, vb, gi_cap = args
    F = field_from_descriptor(desc)
    a = VoltageAssignment.from_pair_values(F, ell, va)
    b = VoltageAssignment.from_pair_values(F, ell, vb)
    if not cospectral(full_spectrum(a), full_spectrum(b)):
        return False, None
    return True, decide_isomorphism(a, b, gi_cap=gi_cap).to_json(F)


def _map(fn, items, workers: int):
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def search_counterexamples(
    field: FiniteField,
    ell: int,
    mode: str = "exhaustive",
    enum_cap: int = 1_000_000,
    per_pair_cap: int = 20_000,
    tau_cap: int = 10_000,
    gi_cap: int = DEFAULT_GI_CAP,
    workers: int = 1,
) -> SearchReport:
    """Look for exactly cospectral covers that the rigidity scan proves non-isomorphic.

    ``exhaustive`` tests all pairs of orbit representatives under the
    transform group (t, sigma, n); cospectrality and graph isomorphism are
    invariant under transforming either side, so no orbit pair is missed.
    When the raw pair count is at most ``per_pair_cap`` every unordered raw
    pair (self-pairs included) also gets its own verdict.

    ``tau_guided`` pairs every voltage alpha with alpha o tau^-1 for every
    non-identity trace-preserving involution tau.

    Scan verdicts outside the rigidity hypothesis are settled by brute force
    when the cover has at most ``gi_cap`` vertices, and reported as undecided
    otherwise.
    """
    if mode not in ("exhaustive", "tau_guided"):
        raise ValueError(f"unknown search mode {mode!r}")
    t0 = time.perf_counter()
    report = SearchReport(field, ell, mode)
    voltages = list(enumerate_voltages(field, ell, cap=enum_cap))
    report.n_voltages = len(voltages)
    n = len(voltages)
    report.distinct_pairs = n * (n - 1) // 2
    report.pairs_with_self = report.distinct_pairs + n
    canon = {}
    for v in voltages:
        canon.setdefault(canonical_pair_vector(v), v)
    report.n_orbits = len(canon)
    spectra = {}

    def spec(v):
        key = v.values.tobytes()
        if key not in spectra:
            s = full_spectrum(v)
            spectra[key] = (s, s.digest())
        return spectra[key]

    found: dict[tuple, CertifiedPair] = {}
    if mode == "exhaustive":
        reps = [canon[k] for k in sorted(canon)]
        for i, a in enumerate(reps):
            for b in reps[i:]:
                report.pairs_tested += 1
                if spec(a)[1] != spec(b)[1] or not cospectral(spec(a)[0], spec(b)[0]):
                    continue
                verdict = decide_isomorphism(a, b, gi_cap=gi_cap)
                if verdict.status in (NOT_ISOMORPHIC, UNKNOWN):
                    _record(found, a, b, verdict.status, None)
        if report.pairs_with_self <= per_pair_cap:
            desc = field.descriptor()
            items = [
                (desc, ell, tuple(map(int, voltages[i].pair_values)), tuple(map(int, voltages[j].pair_values)), gi_cap)
                for i in range(n)
                for j in range(i, n)
            ]
            results = _map(_pair_verdict, items, workers)
            report.per_pair = []
            for (_, _, va, vb, _), (cos, verdict) in zip(items, results):
                entry = {"alpha": list(va), "beta": list(vb), "cospectral": cos}
                if cos:
                    entry["verdict"] = verdict
                    report.cospectral_pairs += 1
                report.per_pair.append(entry)
    else:
        taus = [t for t in trace_involutions(field, cap=tau_cap) if not np.array_equal(t, np.arange(field.q))]
        for tau in taus:
            for a in voltages:
                b = voltage_from_tau(a, tau)
                report.pairs_tested += 1
                if spec(a)[1] != spec(b)[1] or not cospectral(spec(a)[0], spec(b)[0]):
                    continue
                report.cospectral_pairs += 1
                verdict = decide_isomorphism(a, b, gi_cap=gi_cap)
                if verdict.status in (NOT_ISOMORPHIC, UNKNOWN):
                    _record(found, a, b, verdict.status, tau)
    for key in sorted(found):
        pair = found[key]
        pair.certificate, pair.checks = certify(pair.alpha, pair.beta)
        (report.counterexamples if pair.verdict == NOT_ISOMORPHIC else report.undecided).append(pair)
    report.seconds = time.perf_counter() - t0
    return report


def _record(found: dict, a, b, status: str, tau) -> None:
    pair = CertifiedPair(a, b, status, tau=tau)
    found.setdefault(pair.orbit_key, pair)
