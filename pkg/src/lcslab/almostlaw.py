"""Word maps on special unitary groups: sampling, certified bounds, decay.

A word w in two letters induces the evaluation map (u, v) -> w(u, v) on
SU(k) x SU(k).  The module measures how far that map gets from the identity
in operator norm:

  * sampled lower bounds on the maximum (Haar samples plus a derivative-free
    polish step),
  * certified upper bounds (an epsilon-net over SU(2)^2 with an explicit
    Lipschitz slack, the only honest grid certificate, with its cost
    accounted up front),
  * propagated upper bounds through the commutator recursion
    U_n = 4 U_{n-1}^2 U_{n-2}, rounded upward so the chain never
    underestimates,
  * a decay table with the fitted constants of the contraction.

For SU(2) the distance to the identity has the closed form
d(I, U) = sqrt(2 - tr U), so everything trace-related can be cross-checked
against the classical three-variable trace recursion (tr u, tr v, tr uv),
which this module also implements as an independent route.

Seed admissibility.  The propagation needs start words whose true maximum
is at most 1/3.  That is a very strong property: the 120-element
icosahedral subgroup of SU(2) has its nearest nontrivial element at
distance sqrt(2 - golden) = 1/golden = 0.6180..., so a word staying within
1/3 of the identity everywhere must evaluate to the identity *exactly* on
every pair from that subgroup, and must in particular lie in the kernel of
every induced pair in its simple quotient (the alternating group on five
points).  One-parameter rotation subgroups force both exponent sums to
vanish as well.  `seed_pool_obstruction` turns this into an exhaustive
search bound: no nontrivial word up to the pool's length cap passes, which
is why `certify_seed` can never accept a short seed and `run_decay` refuses
to start from one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .construction import build
from .quotients import PermutationQuotient, permutation_from_cycles
from .search import (
    NotFoundBelow,
    SearchFlags,
    SearchSpec,
    SearchStats,
    canonical_bytes,
    search_min,
)
from .words import (
    LETTER_A,
    LETTER_AI,
    LETTER_B,
    LETTER_BI,
    Word,
    commutator,
    conjugate,
)

TOLERANCE = 1e-12          # unitarity defect ceiling after correction
SEED_THRESHOLD = 1.0 / 3.0
SILVER = 1.0 + math.sqrt(2.0)
GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0
# smallest distance from the identity to a nontrivial element of the
# icosahedral subgroup: traces are {±2, ±golden, ±1/golden, ±1, 0}, and
# 2 - golden = golden^-2 exactly
ICOSAHEDRAL_GAP = 1.0 / GOLDEN


class NumericFailure(RuntimeError):
    """Unitarity could not be restored within tolerance."""


class BudgetExceeded(RuntimeError):
    """The requested certification is larger than the evaluation budget."""


class SeedRejected(ValueError):
    """Propagation refused: a seed bound exceeds 1/3 or a composed word
    collapses to the identity."""


# ----------------------------------------------------------------------
# unitary matrices

@dataclass(frozen=True)
class UnitaryMatrix:
    matrix: np.ndarray
    defect: float

    @property
    def k(self) -> int:
        return self.matrix.shape[0]


def unitarity_defect(m: np.ndarray) -> float:
    k = m.shape[-1]
    gram = m.conj().swapaxes(-1, -2) @ m
    return float(np.linalg.norm(gram - np.eye(k), ord=2))


def reorthonormalize(m: np.ndarray) -> np.ndarray:
    """Nearest unitary (polar factor); works on a single matrix or a batch."""
    u, _, vh = np.linalg.svd(m)
    return u @ vh


def unitary(m: np.ndarray) -> UnitaryMatrix:
    if not np.all(np.isfinite(m)):
        raise NumericFailure("non-finite matrix entries")
    fixed = reorthonormalize(np.asarray(m, dtype=complex))
    defect = unitarity_defect(fixed)
    if not defect <= TOLERANCE:
        raise NumericFailure(f"unitarity defect {defect:.3e} after correction")
    return UnitaryMatrix(matrix=fixed, defect=defect)


def haar_su2(rng: np.random.Generator, size: int) -> np.ndarray:
    """Haar-distributed SU(2) batch via normalized 4-vectors of Gaussians."""
    q = rng.normal(size=(size, 4))
    q /= np.linalg.norm(q, axis=1, keepdims=True)
    out = np.empty((size, 2, 2), dtype=complex)
    out[:, 0, 0] = q[:, 0] + 1j * q[:, 1]
    out[:, 0, 1] = q[:, 2] + 1j * q[:, 3]
    out[:, 1, 0] = -q[:, 2] + 1j * q[:, 3]
    out[:, 1, 1] = q[:, 0] - 1j * q[:, 1]
    return out


def haar_suk(rng: np.random.Generator, k: int, size: int) -> np.ndarray:
    """Haar SU(k): QR of complex Gaussians, phases fixed, determinant 1."""
    if k == 2:
        return haar_su2(rng, size)
    z = rng.normal(size=(size, k, k)) + 1j * rng.normal(size=(size, k, k))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    q = q * (d / np.abs(d))[:, None, :]
    det = np.linalg.det(q)
    q *= (det ** (-1.0 / k))[:, None, None]
    return q


_LETTER_SLOT = {LETTER_A: (0, False), LETTER_AI: (0, True),
                LETTER_B: (1, False), LETTER_BI: (1, True)}


def batch_evaluate(w: Word, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
    """Evaluate the word map on a batch of argument pairs; no correction."""
    n, k = us.shape[0], us.shape[-1]
    acc = np.broadcast_to(np.eye(k, dtype=complex), (n, k, k)).copy()
    mats = (us, vs)
    for c in w.data:
        slot, inv = _LETTER_SLOT[c]
        m = mats[slot]
        acc = acc @ (m.conj().swapaxes(-1, -2) if inv else m)
    return acc


def evaluate(w: Word, u, v) -> UnitaryMatrix:
    """Word map at one argument pair, re-orthonormalized."""
    mu = u.matrix if isinstance(u, UnitaryMatrix) else np.asarray(u, dtype=complex)
    mv = v.matrix if isinstance(v, UnitaryMatrix) else np.asarray(v, dtype=complex)
    for name, m in (("u", mu), ("v", mv)):
        if unitarity_defect(m) > 1e-8:
            raise NumericFailure(f"argument {name} is not unitary")
    out = batch_evaluate(w, mu[None], mv[None])[0]
    return unitary(out)


def distance_to_identity(u) -> float:
    """Operator norm of I - U; for SU(2) this is sqrt(2 - tr U)."""
    m = u.matrix if isinstance(u, UnitaryMatrix) else np.asarray(u)
    k = m.shape[-1]
    if k == 2:
        tr = m[0, 0] + m[1, 1]
        return min(2.0, math.sqrt(max(0.0, 2.0 - tr.real)))
    return min(2.0, float(np.linalg.norm(np.eye(k) - m, ord=2)))


def _batch_distance(ms: np.ndarray) -> np.ndarray:
    k = ms.shape[-1]
    if k == 2:
        tr = np.trace(ms, axis1=-2, axis2=-1).real
        return np.sqrt(np.clip(2.0 - tr, 0.0, 4.0))
    return np.array([distance_to_identity(m) for m in ms])


# ----------------------------------------------------------------------
# sampled lower bounds

@dataclass(frozen=True)
class LEstimate:
    word: Word
    lower: float
    witness: Tuple[UnitaryMatrix, UnitaryMatrix]
    samples: int

    def recheck(self, tol: float = 1e-10) -> bool:
        d = distance_to_identity(evaluate(self.word, *self.witness))
        return abs(d - self.lower) <= tol


_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _su2_rotation(axis: int, theta: float) -> np.ndarray:
    return math.cos(theta) * np.eye(2, dtype=complex) + 1j * math.sin(theta) * _PAULI[axis]


def _polish_pair(w: Word, u: np.ndarray, v: np.ndarray, steps: int,
                 rng: np.random.Generator, k: int):
    """Greedy coordinate perturbation; returns the improved pair and value."""
    best = distance_to_identity(batch_evaluate(w, u[None], v[None])[0])
    step = 0.2
    used = 0
    while used < steps and step > 1e-9:
        improved = False
        for side in (0, 1):
            for axis in range(3 if k == 2 else 1):
                for sign in (1.0, -1.0):
                    if used >= steps:
                        break
                    used += 1
                    if k == 2:
                        rot = _su2_rotation(axis, sign * step)
                    else:
                        skew = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
                        skew = skew - skew.conj().T
                        rot = reorthonormalize(np.eye(k) + sign * step * skew)
                        rot *= np.linalg.det(rot) ** (-1.0 / k)  # stay in SU(k)
                    cu = rot @ u if side == 0 else u
                    cv = rot @ v if side == 1 else v
                    d = distance_to_identity(batch_evaluate(w, cu[None], cv[None])[0])
                    if d > best:
                        best, u, v, improved = d, cu, cv, True
        if not improved:
            step /= 2.0
    return u, v, best


_CHUNK = 256  # fixed draw granularity so larger budgets extend smaller ones


def estimate_L(w: Word, samples: int = 10_000, polish_steps: int = 200,
               seed: int = 0, k: int = 2) -> LEstimate:
    """Best sampled distance from the identity, then a local polish.

    Deterministic for a fixed seed; the sample stream is drawn in fixed-size
    chunks, so a larger budget strictly extends a smaller one.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    best = -1.0
    best_pair = None
    done = 0
    while done < samples:
        m = min(_CHUNK, samples - done)
        us = haar_suk(rng, k, _CHUNK)[:m]
        vs = haar_suk(rng, k, _CHUNK)[:m]
        ds = _batch_distance(batch_evaluate(w, us, vs))
        i = int(np.argmax(ds))
        if ds[i] > best:
            best = float(ds[i])
            best_pair = (us[i], vs[i])
        done += m
    u, v, best = _polish_pair(w, *best_pair, polish_steps, rng, k)
    witness = (unitary(u), unitary(v))
    best = distance_to_identity(evaluate(w, *witness))
    return LEstimate(word=w, lower=min(best, 2.0), witness=witness, samples=samples)


# ----------------------------------------------------------------------
# certified upper bounds

@dataclass(frozen=True)
class GridProvenance:
    net_resolution: float
    lipschitz_const: float


@dataclass(frozen=True)
class PropagatedProvenance:
    source: Tuple[int, int]  # the two previous levels


Provenance = Union[GridProvenance, PropagatedProvenance]


@dataclass(frozen=True)
class CertifiedBound:
    n: int
    upper: float
    provenance: Provenance


def su2_net(eps: float) -> np.ndarray:
    """A finite subset of SU(2) within operator distance eps of every point.

    Quaternion coordinates are 1-Lipschitz in each hypersphere angle, so a
    grid with step h leaves gaps of at most 3h/2 in Euclidean norm, and
    ||U(p) - U(q)|| <= ||.||_F = sqrt(2) |p - q|.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    r = eps / math.sqrt(2.0)     # Euclidean covering radius needed on S^3
    h = 2.0 * r / 3.0
    n_psi = max(1, math.ceil(math.pi / h))
    n_theta = max(1, math.ceil(math.pi / h))
    n_phi = max(1, math.ceil(2.0 * math.pi / h))
    psi = (np.arange(n_psi) + 0.5) * (math.pi / n_psi)
    theta = (np.arange(n_theta) + 0.5) * (math.pi / n_theta)
    phi = (np.arange(n_phi) + 0.5) * (2.0 * math.pi / n_phi)
    ps, ts, fs = np.meshgrid(psi, theta, phi, indexing="ij")
    ps, ts, fs = ps.ravel(), ts.ravel(), fs.ravel()
    q = np.stack([np.cos(ps),
                  np.sin(ps) * np.sin(ts) * np.cos(fs),
                  np.sin(ps) * np.sin(ts) * np.sin(fs),
                  np.sin(ps) * np.cos(ts)], axis=1)
    out = np.empty((len(q), 2, 2), dtype=complex)
    out[:, 0, 0] = q[:, 0] + 1j * q[:, 1]
    out[:, 0, 1] = q[:, 2] + 1j * q[:, 3]
    out[:, 1, 0] = -q[:, 2] + 1j * q[:, 3]
    out[:, 1, 1] = q[:, 0] - 1j * q[:, 1]
    return out


def net_points_required(w: Word, eps: float) -> int:
    """Number of argument pairs a grid certificate at this eps must evaluate."""
    if not w:
        return 1
    r = eps / math.sqrt(2.0)
    h = 2.0 * r / 3.0
    per_factor = (max(1, math.ceil(math.pi / h))
                  * max(1, math.ceil(math.pi / h))
                  * max(1, math.ceil(2.0 * math.pi / h)))
    return per_factor * per_factor


def certify_seed(w: Word, eps: float, budget_points: int = 4_000_000,
                 k: int = 2) -> CertifiedBound:
    """Grid certificate: max over an eps-net plus the Lipschitz slack.

    Each letter is 1-Lipschitz in each argument, so the word map moves by at
    most len(w) * (shift of u) + len(w) * (shift of v): the slack is
    2 * len(w) * eps.  SU(2) only.
    """
    if k != 2:
        raise ValueError("grid certification is implemented for k=2 only")
    lip = float(len(w))
    if not w:
        return CertifiedBound(n=0, upper=0.0,
                              provenance=GridProvenance(eps, 0.0))
    needed = net_points_required(w, eps)
    if needed > budget_points:
        raise BudgetExceeded(
            f"eps={eps:g} needs {needed:.3e} pair evaluations "
            f"(budget {budget_points:.3e})")
    net = su2_net(eps)
    m = len(net)
    worst = 0.0
    block = max(1, 200_000 // max(1, m))
    for i in range(0, m, block):
        us = np.repeat(net[i:i + block], m, axis=0)
        vs = np.tile(net, (len(net[i:i + block]), 1, 1))
        ds = _batch_distance(batch_evaluate(w, us, vs))
        worst = max(worst, float(np.max(ds)))
    # any unitary is within 2 of the identity, so 2 always certifies
    upper = min(2.0, worst + 2.0 * lip * eps)
    return CertifiedBound(n=0, upper=upper, provenance=GridProvenance(eps, lip))


def certification_cost_at_threshold(w: Word,
                                    target: float = SEED_THRESHOLD) -> int:
    """Pairs the grid would need even in the best case (net max 0)."""
    if not w:
        return 1
    eps = target / (2.0 * len(w))
    return net_points_required(w, eps)


# ----------------------------------------------------------------------
# trace recursion on SU(2): the independent route to tr w(u,v)

def _trace_canonical(word: bytes) -> bytes:
    """Trace-equivalent canonical form: a distinguished rotation of the word
    or its inverse (traces are conjugation- and inverse-invariant).

    Representatives with fewer inverse letters come first, so the rewrite
    below strictly shrinks (inverse count, length) and always terminates.
    """
    best = None
    best_key = None
    for w in (word, bytes(reversed(word)).translate(_TRACE_INV)):
        dbl = w + w
        for i in range(max(1, len(w))):
            cand = dbl[i:i + len(w)]
            key = (sum(1 for c in cand if c in (LETTER_AI, LETTER_BI)), cand)
            if best_key is None or key < best_key:
                best, best_key = cand, key
    return best


_TRACE_INV = bytes.maketrans(b"aAbB", b"AaBb")


def trace_of_word(w: Word, x, y, z):
    """tr w(u,v) as a polynomial in x = tr u, y = tr v, z = tr uv.

    Uses tr(m g^-1) = tr(g) tr(m) - tr(m g) to clear inverse letters and
    tr(g (g m)) = tr(g) tr(g m) - tr(m) to shorten repeats; alternating
    words and pure powers close under the Chebyshev-style three-term rule.
    Accepts scalars or numpy arrays for x, y, z.
    """
    two = 2.0 if not isinstance(x, np.ndarray) else np.full_like(x, 2.0)
    memo: Dict[bytes, object] = {}
    gen_trace = {LETTER_A: x, LETTER_B: y}

    def rec(word: bytes):
        key = _trace_canonical(word)
        if key in memo:
            return memo[key]
        memo[key] = val = _compute(key)
        return val

    def _compute(word: bytes):
        if len(word) == 0:
            return two
        if len(word) == 1:
            c = word[0]
            return gen_trace.get(c, gen_trace.get(ord(chr(c).lower())))
        if word == b"ab":
            return z
        # clear an inverse letter if any: rotate it to the end
        for i, c in enumerate(word):
            if c in (LETTER_AI, LETTER_BI):
                rot = word[i + 1:] + word[:i]   # word ~ rot + [c] cyclically
                g = ord(chr(c).lower())
                return gen_trace[g] * rec(rot) - rec(rot + bytes([g]))
        # positive word: shorten a doubled letter if any (cyclically)
        dbl = word + word
        for i in range(len(word)):
            if dbl[i] == dbl[i + 1]:
                rot = dbl[i:i + len(word)]      # starts with gg
                g = rot[0]
                return gen_trace[g] * rec(rot[1:]) - rec(rot[2:])
        # square-free positive cyclic word: alternating, (ab)^m with m >= 2
        m = len(word) // 2
        return z * rec((b"ab" * (m - 1))) - rec(b"ab" * (m - 2))

    return rec(w.data)


def character_region(x, y, z):
    """True where (x, y, z) is realized by an SU(2) pair:
    x^2 + y^2 + z^2 - xyz <= 4 inside the cube [-2, 2]^3."""
    inside = (np.abs(x) <= 2) & (np.abs(y) <= 2) & (np.abs(z) <= 2)
    return inside & (x * x + y * y + z * z - x * y * z <= 4.0)


def scan_min_trace(w: Word, grid: int = 48) -> float:
    """Numeric minimum of tr w over a character-region grid (heuristic:
    corroborates sampling, certifies nothing)."""
    ax = np.linspace(-2.0, 2.0, grid)
    x, y, z = np.meshgrid(ax, ax, ax, indexing="ij")
    mask = character_region(x, y, z)
    vals = trace_of_word(w, x[mask], y[mask], z[mask])
    return float(np.min(vals))


# ----------------------------------------------------------------------
# seed admissibility

def seed_candidate_pool(max_len: int = 16) -> List[Word]:
    """Commutators and short conjugate products, deduplicated by symmetry."""
    a, b = Word.parse("a"), Word.parse("b")
    basics = [a, b, a * b, a * ~b, a * a, b * b, a * b * ~a]
    cands: List[Word] = []
    for u in basics:
        for v in basics:
            cands.append(commutator(u, v))
    for c in (a, b, a * b):
        cands.append(commutator(conjugate(commutator(a, b), c),
                                commutator(a, b)))
        cands.append(conjugate(commutator(a, b), c)
                     * conjugate(commutator(b, a), ~c))
    seq = build(2)
    cands += [seq.a(1), seq.b(1), seq.a(2), seq.b(2)]
    flags = SearchFlags(cyclic=True, inverse=True, automorphism=True)
    seen = set()
    pool = []
    for w in cands:
        if not w or len(w) > max_len:
            continue
        key = canonical_bytes(w.data, flags)
        if key not in seen:
            seen.add(key)
            pool.append(w)
    pool.sort(key=lambda w: (len(w), w.data))
    return pool


# Pairs of even permutations on five points.  A word whose map stays within
# 1/3 of the identity on SU(2)^2 is a law of the icosahedral subgroup (see
# module docstring), so it must die under EVERY homomorphism to the
# alternating group on five points; each pair below is one such
# homomorphism, so their joint kernel over-approximates the admissible set.
# Seven pairs happen to be enough to empty it up to length 16: the first
# five were chosen for variety of element orders, the last two kill the
# only two joint-kernel words of length 16 the five-pair search found.
_A5_PAIRS = (
    ("(1 2 3 4 5)", "(3 4 5)"),
    ("(1 2 3 4 5)", "(1 2)(3 4)"),
    ("(1 2 3)", "(3 4 5)"),
    ("(1 2)(3 4)", "(1 3 5)"),
    ("(3 4 5)", "(1 2 3 4 5)"),
    ("(1 2 3)", "(2 3 4)"),
    ("(1 2)(3 4)", "(2 3)(4 5)"),
)


def _a5_block_quotient(pairs=None) -> PermutationQuotient:
    pairs = pairs if pairs is not None else _A5_PAIRS
    blocks_a, blocks_b = [], []
    offset = 0
    for ca, cb in pairs:
        pa = permutation_from_cycles(ca, degree=5)
        pb = permutation_from_cycles(cb, degree=5)
        blocks_a.extend(p + offset for p in pa)
        blocks_b.extend(p + offset for p in pb)
        offset += 5
    return PermutationQuotient(tuple(blocks_a), tuple(blocks_b))


@dataclass(frozen=True)
class SeedObstruction:
    max_len: int
    outcome: Union[NotFoundBelow, Tuple[int, Word]]
    stats: SearchStats
    threshold: float = SEED_THRESHOLD
    gap: float = ICOSAHEDRAL_GAP

    @property
    def no_admissible_seed(self) -> bool:
        return isinstance(self.outcome, NotFoundBelow)


def seed_pool_obstruction(max_len: int = 16, workers: int = 1,
                          checkpoint: Optional[str] = None) -> SeedObstruction:
    """Exhaustively verify that no nontrivial word up to max_len letters
    vanishes on all the alternating-group pairs while having zero exponent
    sums — the two necessary conditions for a word map to stay within 1/3
    of the identity on all of SU(2)^2."""
    q = _a5_block_quotient()
    oracle_id = f"zerosum-{q.spec_string()}"
    spec = SearchSpec(oracle_id=oracle_id, max_len=max_len,
                      flags=SearchFlags(cyclic=True, inverse=True,
                                        automorphism=False),
                      shards=1, checkpoint=checkpoint)
    outcome, stats = search_min(spec, workers=workers)
    return SeedObstruction(max_len=max_len, outcome=outcome, stats=stats)


@dataclass(frozen=True)
class SeedSearchReport:
    pool: Tuple[Word, ...]
    sampled: Tuple[Tuple[Word, float], ...]  # (word, sampled lower), ascending
    obstruction: SeedObstruction
    admissible: Tuple[Word, ...]             # words that could still qualify

    @property
    def best(self) -> Tuple[Word, float]:
        return self.sampled[0]


def seed_search(max_len: int = 16, samples: int = 2000, seed: int = 7,
                workers: int = 1) -> SeedSearchReport:
    """The whole pipeline: pool, sampled ranking, exhaustive obstruction."""
    pool = seed_candidate_pool(max_len)
    sampled = []
    for w in pool:
        est = estimate_L(w, samples=samples, polish_steps=60, seed=seed)
        sampled.append((w, est.lower))
    sampled.sort(key=lambda t: (t[1], len(t[0]), t[0].data))
    obstruction = seed_pool_obstruction(max_len=max_len, workers=workers)
    admissible = tuple(w for w, lo in sampled
                       if lo <= SEED_THRESHOLD and not obstruction.no_admissible_seed)
    return SeedSearchReport(pool=tuple(pool), sampled=tuple(sampled),
                            obstruction=obstruction, admissible=admissible)


# ----------------------------------------------------------------------
# propagation and the decay table

def _up(x: float) -> float:
    return math.nextafter(x, math.inf)


def propagate_bounds(u0: float, n_max: int) -> List[float]:
    """U_1 = 2 U_0^2, then U_n = 4 U_{n-1}^2 U_{n-2}, every product rounded
    upward so floating point can only overestimate."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    us = [float(u0)]
    if n_max >= 1:
        us.append(_up(2.0 * _up(u0 * u0)))
    for _ in range(2, n_max + 1):
        prev, prev2 = us[-1], us[-2]
        us.append(_up(4.0 * _up(_up(prev * prev) * prev2)))
    return us


@dataclass(frozen=True)
class DecayRow:
    n: int
    length: int
    upper: float
    lower: Optional[float]
    minus_log_2upper: float
    ratio_silver: float


@dataclass(frozen=True)
class DecayTable:
    seeds: Tuple[Word, Word]
    rows: Tuple[DecayRow, ...]
    bounds: Tuple[CertifiedBound, ...]
    d_hat: float            # largest D with -log(2 U_n) >= D (1+sqrt2)^n
    d_lsq: float            # least-squares slope against (1+sqrt2)^n
    c_hat: float            # intercept of the log-log length regression
    exponent_hat: float     # slope of the log-log length regression
    samples: int
    rng_seed: int
    k: int


def compose_family(seeds: Tuple[Word, Word], n_max: int) -> List[Word]:
    """The first family member at each level, seeds substituted, reduced."""
    if not seeds[0] or not seeds[1]:
        raise SeedRejected("seed words must be nontrivial")
    seq = build(n_max, seeds=seeds)
    words = [seq.a(n) for n in range(n_max + 1)]
    for n, w in enumerate(words):
        if not w:
            raise SeedRejected(f"composed word at level {n} is trivial")
    return words


def _sampled_lowers(seeds: Tuple[Word, Word], n_max: int, samples: int,
                    rng_seed: int, k: int) -> List[float]:
    """Max sampled distance per level via the value recursion (one pass of
    matrix commutators per level instead of re-reading the long words)."""
    rng = np.random.default_rng(rng_seed)
    lows = [0.0] * (n_max + 1)
    done = 0
    while done < samples:
        m = min(_CHUNK, samples - done)
        us = haar_suk(rng, k, _CHUNK)[:m]
        vs = haar_suk(rng, k, _CHUNK)[:m]
        a_val = batch_evaluate(seeds[0], us, vs)
        b_val = batch_evaluate(seeds[1], us, vs)
        lows[0] = max(lows[0], float(np.max(_batch_distance(a_val))))
        for n in range(1, n_max + 1):
            ah = a_val.conj().swapaxes(-1, -2)
            bh = b_val.conj().swapaxes(-1, -2)
            a_next = bh @ a_val @ b_val @ ah
            b_next = a_val @ b_val @ ah @ bh
            a_val = reorthonormalize(a_next)
            b_val = reorthonormalize(b_next)
            lows[n] = max(lows[n], float(np.max(_batch_distance(a_val))))
        done += m
    return lows


def run_decay(seeds: Tuple[Word, Word],
              seed_bounds: Tuple[CertifiedBound, CertifiedBound],
              n_max: int, samples: int = 10_000, rng_seed: int = 0,
              k: int = 2) -> DecayTable:
    """Propagated upper bounds against sampled lower bounds, with fits.

    Refuses to run unless both seed bounds are at most 1/3 (the recursion
    need not contract otherwise) and every composed word is nontrivial.
    With samples = 0 the lower column is left empty; otherwise a sampled
    lower exceeding the certified upper at any level is a hard error, since
    both bound the same maximum.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2 so the fits have enough points")
    for b in seed_bounds:
        if b.upper > SEED_THRESHOLD:
            raise SeedRejected(
                f"seed bound {b.upper:.6f} exceeds {SEED_THRESHOLD:.6f}")
    words = compose_family(seeds, n_max)
    u0 = max(b.upper for b in seed_bounds)
    uppers = propagate_bounds(u0, n_max)
    bounds = [max(seed_bounds, key=lambda b: b.upper)]
    for n in range(1, n_max + 1):
        bounds.append(CertifiedBound(
            n=n, upper=uppers[n],
            provenance=PropagatedProvenance(source=(n - 1, max(0, n - 2)))))
    lowers: List[Optional[float]] = [None] * (n_max + 1)
    if samples > 0:
        lows = _sampled_lowers(seeds, n_max, samples, rng_seed, k)
        for n in range(n_max + 1):
            if lows[n] > uppers[n] + 1e-9:
                raise AssertionError(
                    f"sampled lower {lows[n]:.6f} exceeds certified upper "
                    f"{uppers[n]:.6f} at level {n}: one of the bounds is wrong")
            lowers[n] = lows[n]
    ms = [-math.log(2.0 * u) for u in uppers]
    ratios = [ms[n] / SILVER ** n for n in range(n_max + 1)]
    d_hat = min(ratios)
    xs = np.array([SILVER ** n for n in range(n_max + 1)])
    d_lsq = float(np.dot(xs, ms) / np.dot(xs, xs))
    log_len = np.log([len(w) for w in words])
    log_m = np.log(ms)
    exponent_hat, log_c = np.polyfit(log_len, log_m, 1)
    rows = tuple(DecayRow(n=n, length=len(words[n]), upper=uppers[n],
                          lower=lowers[n], minus_log_2upper=ms[n],
                          ratio_silver=ratios[n])
                 for n in range(n_max + 1))
    return DecayTable(seeds=tuple(seeds), rows=rows, bounds=tuple(bounds),
                      d_hat=d_hat, d_lsq=d_lsq, c_hat=float(math.exp(log_c)),
                      exponent_hat=float(exponent_hat),
                      samples=samples, rng_seed=rng_seed, k=k)


CSV_HEADER = "n,len,upper,lower,minus_log_2upper,ratio_to_(1+√2)^n"


def decay_csv(table: DecayTable) -> str:
    lines = [CSV_HEADER]
    for r in table.rows:
        low = "" if r.lower is None else f"{r.lower:.12g}"
        lines.append(f"{r.n},{r.length},{r.upper:.12g},{low},"
                     f"{r.minus_log_2upper:.12g},{r.ratio_silver:.12g}")
    return "\n".join(lines) + "\n"
