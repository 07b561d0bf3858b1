"""Exact evaluators for every sum in scope: the shifted-prime sum, its
restricted variant, short and double character sums, Burgess moments, the
congruence-solution census and the weighted-decomposition identity.

All complex accumulation is exactly rounded (``math.fsum`` per component),
so results are independent of block partitioning and thread count.
Equality tolerances downstream scale with ``abs_term_sum``, the total mass,
not with the (possibly heavily cancelled) value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .characters import DirichletCharacter, character_from_json, induce_primitive, is_primitive
from .integers import (
    as_factored,
    dirichlet_convolve,
    divisors,
    euler_phi,
    factor,
    mangoldt_sieve,
    mobius,
    mobius_sieve,
    omega,
)
from .util import (
    PreconditionError,
    SplitMix64,
    WorkBudgetError,
    block_ranges,
    complex_fsum,
    map_blocks,
    require,
    thread_width,
)

LEMMA_TAGS = (
    "THEOREM_T",
    "T_RESTRICTED",
    "SHORT_S",
    "SHORT_SY",
    "DOUBLE_W",
    "BURGESS_2R",
    "BURGESS_SEXTIC",
    "HB_DECOMP",
    "COPRIME_COUNT",
)

DEFAULT_WORK_BUDGET = 10**9


@dataclass(frozen=True)
class SumValue:
    """An exactly computed sum plus audit data.

    ``term_count`` is the number of summands enumerated (zero character
    values included); ``abs_term_sum`` is their total absolute mass, which
    equality checks scale their tolerance with.
    """

    value: complex
    term_count: int
    abs_term_sum: float

    def to_json_dict(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "term_count": self.term_count,
            "abs_term_sum": self.abs_term_sum,
        }


def _collect(term_blocks: list[np.ndarray]) -> SumValue:
    blocks = [np.asarray(b, dtype=np.complex128) for b in term_blocks if len(b)]
    if not blocks:
        return SumValue(0j, 0, 0.0)
    flat = blocks[0] if len(blocks) == 1 else np.concatenate(blocks)
    value = complex(math.fsum(flat.real), math.fsum(flat.imag))
    return SumValue(value, int(flat.size), math.fsum(np.abs(flat)))


@lru_cache(maxsize=8)
def _mangoldt_arrays(x: int):
    """(n, log p) arrays over prime powers n <= x; cached, treat as read-only."""
    table = mangoldt_sieve(1, x)
    n, p, _ = table.prime_power_arrays()
    return n, np.log(p.astype(np.float64))


def mangoldt_weights(x: int) -> np.ndarray:
    """Lambda(0..x) as float64."""
    out = np.zeros(x + 1, dtype=np.float64)
    if x >= 2:
        n, lam = _mangoldt_arrays(x)
        out[n] = lam
    return out


# ---------------------------------------------------------------------------
# Coefficient families for bilinear sums


def coeff_one(n: int) -> int:
    return 1


def coeff_mobius(n: int) -> int:
    return mobius(factor(n))


def coeff_tau5_family(seed: int):
    """Deterministic integer coefficients with |a_m| <= tau_5(m)."""

    def coeff(n: int) -> int:
        t5 = 1
        for _, a in factor(n).factors:
            t5 *= math.comb(a + 4, 4)
        u = SplitMix64(seed ^ (n * 0x9E3779B97F4A7C15)).next_u64()
        mag = u % (t5 + 1)
        return mag if (u >> 63) == 0 else -mag

    return coeff


def coefficient_family(name: str):
    """Resolve a serializable coefficient-family name to a callable."""
    if name == "one":
        return coeff_one
    if name == "mobius":
        return coeff_mobius
    if name.startswith("tau5:"):
        return coeff_tau5_family(int(name.split(":", 1)[1]))
    raise PreconditionError("coefficients", f"unknown family {name!r}")


# ---------------------------------------------------------------------------
# Declarative sum description


@dataclass
class SumSpec:
    """Declarative description of one sum: tag, parameters, character."""

    lemma_tag: str
    parameters: dict
    character: DirichletCharacter | None = None

    def __post_init__(self):
        require(self.lemma_tag in LEMMA_TAGS, "lemma_tag", f"unknown tag {self.lemma_tag!r}")

    def to_json_dict(self) -> dict:
        out = {"lemma_tag": self.lemma_tag, "parameters": dict(self.parameters)}
        if self.character is not None:
            out["character"] = self.character.to_json_dict()
        return out

    @staticmethod
    def from_json_dict(data: dict) -> "SumSpec":
        chi = character_from_json(data["character"]) if "character" in data else None
        return SumSpec(data["lemma_tag"], dict(data["parameters"]), chi)


# ---------------------------------------------------------------------------
# Main evaluators


def shifted_prime_sum(chi: DirichletCharacter, l: int, x: int, *, threads=None, block_size=None) -> SumValue:
    """Sum of Lambda(n) chi(n - l) over n <= x."""
    D = chi.modulus
    require(math.gcd(l, D) == 1, "l", f"need gcd(l, D) = 1, got gcd({l}, {D}) > 1")
    if x < 2:
        return SumValue(0j, 0, 0.0)
    n, lam = _mangoldt_arrays(x)
    table = chi.value_table()

    def block(rng):
        a, b = rng
        idx = (n[a:b] - l) % D
        return lam[a:b] * table[idx]

    parts = map_blocks(block, block_ranges(0, len(n), block_size), thread_width(threads))
    return _collect(parts)


def restricted_sum(chi_q: DirichletCharacter, nu: int, l: int, x: int, *, threads=None, block_size=None) -> SumValue:
    """Sum of Lambda(n) chi_q(n - l) over n <= x with (n, q) = 1, n = l (mod nu)."""
    q = chi_q.modulus
    require(math.gcd(nu, q) == 1, "nu", f"need gcd(nu, q) = 1, got gcd({nu}, {q}) > 1")
    require(math.gcd(l, q * nu) == 1, "l", f"need gcd(l, q*nu) = 1")
    if x < 2:
        return SumValue(0j, 0, 0.0)
    n, lam = _mangoldt_arrays(x)
    table = chi_q.value_table()
    res = l % nu

    def block(rng):
        a, b = rng
        ns = n[a:b]
        mask = (np.gcd(ns, q) == 1) & (ns % nu == res)
        return lam[a:b][mask] * table[(ns[mask] - l) % q]

    parts = map_blocks(block, block_ranges(0, len(n), block_size), thread_width(threads))
    return _collect(parts)


def short_sum(chi_q: DirichletCharacter, M: int, N: int, d: int, k: int, eta: int, *, threads=None, block_size=None) -> SumValue:
    """Sum of chi_q(n*d + eta*k) over the window M - N < n <= M."""
    q = chi_q.modulus
    require(math.gcd(eta, q) == 1, "eta", "need gcd(eta, q) = 1")
    require(math.gcd(d, k) == 1, "d,k", "need gcd(d, k) = 1")
    require(N >= 1, "N", "need N >= 1")
    table = chi_q.value_table()
    shift = eta * k

    def block(rng):
        a, b = rng
        ns = np.arange(a, b, dtype=np.int64)
        return table[(ns * d + shift) % q]

    parts = map_blocks(block, block_ranges(M - N + 1, M + 1, block_size), thread_width(threads))
    return _collect(parts)


def sy_sum(chi_q: DirichletCharacter, u, y, eta: int, nu: int, *, threads=None, block_size=None) -> SumValue:
    """Sum of chi_q(n - eta) over u - y < n <= u with (n, q) = 1, n = eta (mod nu)."""
    q = chi_q.modulus
    require(math.gcd(eta * nu, q) == 1, "eta*nu", "need gcd(eta*nu, q) = 1")
    lo = math.floor(u - y) + 1
    hi = math.floor(u)
    if hi < lo:
        return SumValue(0j, 0, 0.0)
    table = chi_q.value_table()
    res = eta % nu

    def block(rng):
        a, b = rng
        ns = np.arange(a, b, dtype=np.int64)
        mask = (np.gcd(ns, q) == 1) & (ns % nu == res)
        return table[(ns[mask] - eta) % q]

    parts = map_blocks(block, block_ranges(lo, hi + 1, block_size), thread_width(threads))
    return _collect(parts)


def double_sum(
    chi_q: DirichletCharacter,
    a_m,
    b_n,
    M: int,
    N: int,
    U: int,
    nu: int,
    l: int,
    x: int,
    *,
    threads=None,
    block_size=None,
) -> SumValue:
    """Bilinear sum over M < m <= 2M, U < n <= min(x/m, 2N) of
    a_m b_n chi_q(mn - l), with (mn, q) = 1 and mn = l (mod nu)."""
    q = chi_q.modulus
    require(N <= U < 2 * N, "U", f"need N <= U < 2N, got N={N}, U={U}")
    if isinstance(a_m, str):
        a_m = coefficient_family(a_m)
    if isinstance(b_n, str):
        b_n = coefficient_family(b_n)
    table = chi_q.value_table()

    def block(rng):
        m_lo, m_hi = rng
        chunks = []
        for m in range(m_lo, m_hi):
            if math.gcd(m, q) != 1:
                continue
            am = a_m(m)
            if am == 0:
                continue
            hi_n = min(x // m, 2 * N)
            if hi_n <= U:
                continue
            ns = np.arange(U + 1, hi_n + 1, dtype=np.int64)
            bv = np.array([b_n(int(v)) for v in ns], dtype=np.float64)
            prods = m * ns
            mask = (bv != 0) & ((prods - l) % nu == 0) & (np.gcd(ns, q) == 1)
            sel = mask.nonzero()[0]
            if len(sel):
                chunks.append(am * bv[sel] * table[(prods[sel] - l) % q])
        if not chunks:
            return np.zeros(0, dtype=np.complex128)
        return np.concatenate(chunks)

    parts = map_blocks(block, block_ranges(M + 1, 2 * M + 1, block_size), thread_width(threads))
    return _collect(parts)


# ---------------------------------------------------------------------------
# Burgess moment sums


def burgess_moment_2r(chi_q: DirichletCharacter, Z: int, r: int) -> float:
    """Sum over all window starts of |sum_{z<=Z} chi_q(start + z)|^(2r), exact."""
    require(Z >= 1, "Z", "need Z >= 1")
    require(r >= 1, "r", "need r >= 1")
    q = chi_q.modulus
    table = chi_q.value_table()
    idx = (np.arange(q, dtype=np.int64)[:, None] + np.arange(1, Z + 1, dtype=np.int64)[None, :]) % q
    windows = table[idx].sum(axis=1)
    return math.fsum(np.abs(windows) ** (2 * r))


def burgess_sextic(chi_q: DirichletCharacter, Z: int, *, work_budget: int = DEFAULT_WORK_BUDGET) -> float:
    """Sextic rational-argument moment: sum over 6-tuples z of
    |sum_lambda chi_q(prod(lambda+z_i, i<=3) / prod(lambda+z_i, i>3))|.

    A start where the denominator is not invertible contributes the
    character value 0 at that point, matching the chi(non-unit) = 0
    convention for the formal rational argument.
    """
    q = chi_q.modulus
    require(is_primitive(chi_q), "chi_q", "need a primitive character")
    require(Z >= 1 and Z**6 <= q, "Z", f"need 1 <= Z <= q^(1/6), got Z={Z}, q={q}")
    if Z**6 * q > work_budget:
        raise WorkBudgetError(f"Z^6*q = {Z**6 * q} exceeds budget {work_budget}")
    table = chi_q.value_table()
    units = chi_q.basis.unit_mask()
    inv = np.zeros(q, dtype=np.int64)
    for a in range(q):
        if units[a]:
            inv[a] = pow(a, -1, q)
    lam = np.arange(q, dtype=np.int64)
    inner_abs = []
    import itertools as _it

    for zs in _it.product(range(1, Z + 1), repeat=6):
        num = (lam + zs[0]) % q * ((lam + zs[1]) % q) % q * ((lam + zs[2]) % q) % q
        den = (lam + zs[3]) % q * ((lam + zs[4]) % q) % q * ((lam + zs[5]) % q) % q
        ok = units[den]
        args = num * inv[den] % q
        vals = np.where(ok, table[args], 0.0)
        inner_abs.append(abs(complex_fsum(vals)))
    return math.fsum(inner_abs)


# ---------------------------------------------------------------------------
# Congruence-solution census


@dataclass(frozen=True)
class CongruenceInstance:
    """Parameters and solution census of the two-window congruence
    (n d + eta k) y = (n1 d + eta k) y1 (mod q).

    ``diagonal`` counts solutions with y = y1; kappa1..3 classify the
    off-diagonal (y < y1) solutions by the three proof cases, each counted
    once, so K = diagonal + 2 (kappa1 + kappa2 + kappa3).
    """

    q: int
    d: int
    eta: int
    k: int
    M: int
    N: int
    Y: int
    K: int
    diagonal: int
    kappa1: int
    kappa2: int
    kappa3: int
    rho: int

    @property
    def kappa_total(self) -> int:
        return self.kappa1 + self.kappa2 + self.kappa3

    def to_json_dict(self) -> dict:
        return {
            "q": self.q, "d": self.d, "eta": self.eta, "k": self.k,
            "M": self.M, "N": self.N, "Y": self.Y,
            "K": self.K, "diagonal": self.diagonal,
            "kappa1": self.kappa1, "kappa2": self.kappa2, "kappa3": self.kappa3,
            "rho": self.rho,
        }


def validate_census_preconditions(q, d, eta, k, M, N, Y):
    require(q >= 2, "q", "need q >= 2")
    require(d >= 1 and q % d == 0, "d|q", f"need d | q, got d={d}, q={q}")
    require(math.gcd(eta, q) == 1, "eta", "need gcd(eta, q) = 1")
    require(math.gcd(k, d) == 1, "k", "need gcd(k, d) = 1")
    require(N >= 1, "N", "need N >= 1")
    require(Y >= 1, "Y", "need Y >= 1")
    require(M >= 0, "M", "need M >= 0")
    require(2 * N * Y < q, "2NY<q", f"need 2NY < q, got 2*{N}*{Y} >= {q}")
    require(d < Y, "d<Y", f"need d < Y, got d={d}, Y={Y}")


def rho_divisor_count(q: int, d: int, Y: int) -> int:
    """Divisors beta of q/d with q/Y <= beta < q/d and gcd(beta, d) = 1."""
    require(d >= 1 and q % d == 0, "d|q", f"need d | q, got d={d}, q={q}")
    qd = q // d
    count = 0
    for beta in divisors(factor(qd)):
        if beta * Y >= q and beta < qd and math.gcd(beta, d) == 1:
            count += 1
    return count


def congruence_census(q, d, eta, k, M, N, Y, *, work_budget: int = DEFAULT_WORK_BUDGET) -> CongruenceInstance:
    """Exact enumeration of the congruence solutions with the case split
    applied literally to the off-diagonal solutions.

    Pairs (n, y) are grouped by the residue (nd + eta k) y mod q; K is the
    number of ordered pairs of colliding entries.  Within one residue group
    the y values are pairwise distinct (a consequence of 2NY < q), so the
    diagonal consists exactly of the identity pairs.
    """
    validate_census_preconditions(q, d, eta, k, M, N, Y)
    ys = [y for y in range(1, Y + 1) if math.gcd(y, q) == 1]
    if N * len(ys) > work_budget:
        raise WorkBudgetError(f"N*Y_q = {N * len(ys)} exceeds budget {work_budget}")
    groups: dict[int, list[tuple[int, int]]] = {}
    shift = eta * k
    for n in range(M + 1, M + N + 1):
        base = (n * d + shift) % q
        for y in ys:
            groups.setdefault(base * y % q, []).append((n, y))
    qd = q // d
    K = diagonal = kappa1 = kappa2 = kappa3 = 0
    for sols in groups.values():
        s = len(sols)
        K += s * s
        diagonal += s
        if s == 1:
            continue
        sols.sort(key=lambda ny: ny[1])
        for j in range(1, s):
            n1, y1 = sols[j]
            w = (n1 * d + shift) % qd
            for i in range(j):
                y = sols[i][1]
                delta = y1 - y
                assert delta > 0 and delta % d == 0, "off-diagonal gap must be a multiple of d"
                t = delta // d
                if w == 0:
                    kappa1 += 1
                elif (w * t) % qd == 0:
                    kappa2 += 1
                else:
                    kappa3 += 1
    assert K == diagonal + 2 * (kappa1 + kappa2 + kappa3)
    return CongruenceInstance(
        q, d, eta, k, M, N, Y, K, diagonal, kappa1, kappa2, kappa3,
        rho_divisor_count(q, d, Y),
    )


# ---------------------------------------------------------------------------
# Weighted-decomposition identity (exact splitting of Lambda-weighted sums)


@dataclass
class HBDecomposition:
    """Parts of the exact identity splitting sum Lambda(n) f(n), n <= x.

    ``parts`` holds one SumValue per head depth k = 1..r (sign and binomial
    coefficient folded into the value) plus the final alternating tail, so
    the plain sum of part values reproduces the left-hand side up to
    rounding; ``residual`` is that defect.
    """

    parts: list[SumValue]
    labels: list[str]
    lhs: complex
    total: complex
    residual: float
    abs_mass: float


def char_twist_weight(chi_q: DirichletCharacter, l: int, x: int, nu: int = 1) -> np.ndarray:
    """Weight f(n) = chi_q(n - l) gated by (n, q) = 1 and n = l (mod nu)."""
    q = chi_q.modulus
    require(math.gcd(nu, q) == 1, "nu", "need gcd(nu, q) = 1")
    require(math.gcd(l, q * nu) == 1, "l", "need gcd(l, q*nu) = 1")
    ns = np.arange(x + 1, dtype=np.int64)
    table = chi_q.value_table()
    out = table[(ns - l) % q].astype(np.complex128)
    out[np.gcd(ns, q) != 1] = 0
    out[ns % nu != l % nu] = 0
    out[0] = 0
    return out


def hb_decompose(f, x: int, u1: int, r: int) -> HBDecomposition:
    """Decompose sum_{n<=x} Lambda(n) f(n) into r truncated-Mobius head
    groups and one alternating tail; the identity is exact, so the reported
    residual is pure floating-point rounding."""
    require(1 <= u1 <= x, "u1", f"need 1 <= u1 <= x, got u1={u1}, x={x}")
    require(r >= 1, "r", "need r >= 1")
    if callable(f):
        farr = np.array([f(n) for n in range(x + 1)], dtype=np.complex128)
    else:
        farr = np.asarray(f, dtype=np.complex128)
        require(len(farr) >= x + 1, "f", "weight array must cover 0..x")
        farr = farr[: x + 1].copy()
    farr[0] = 0

    ones = np.ones(x + 1, dtype=np.float64)
    ones[0] = 0.0
    logs = np.zeros(x + 1, dtype=np.float64)
    logs[1:] = np.log(np.arange(1, x + 1, dtype=np.float64))
    lam_w = mangoldt_weights(x)
    g = mobius_sieve(x).astype(np.float64)
    g[u1 + 1 :] = 0.0

    lam_trunc = dirichlet_convolve(g, ones)
    tail_w = lam_trunc.copy()
    tail_w[: u1 + 1] = 0.0

    parts: list[SumValue] = []
    labels: list[str] = []
    gk = None
    pk = logs
    for k in range(1, r + 1):
        gk = g if gk is None else dirichlet_convolve(gk, g)
        if k > 1:
            pk = dirichlet_convolve(pk, ones)
        coeff = dirichlet_convolve(gk, pk)
        sign = 1 if k % 2 == 1 else -1
        binom = math.comb(r, k)
        terms = coeff * farr
        raw = complex_fsum(terms)
        parts.append(
            SumValue(sign * binom * raw, int(np.count_nonzero(terms)), binom * math.fsum(np.abs(terms)))
        )
        labels.append(f"head depth {k} (weight {sign * binom})")

    tail = tail_w
    for _ in range(r - 1):
        tail = dirichlet_convolve(tail, tail_w)
    tail = dirichlet_convolve(tail, lam_w)
    tail_terms = tail * farr
    tail_sign = 1 if r % 2 == 0 else -1
    parts.append(
        SumValue(
            tail_sign * complex_fsum(tail_terms),
            int(np.count_nonzero(tail_terms)),
            math.fsum(np.abs(tail_terms)),
        )
    )
    labels.append(f"tail (weight {tail_sign})")

    lhs_terms = lam_w * farr
    lhs = complex_fsum(lhs_terms)
    total = complex(
        math.fsum([p.value.real for p in parts]),
        math.fsum([p.value.imag for p in parts]),
    )
    abs_mass = math.fsum([p.abs_term_sum for p in parts]) + math.fsum(np.abs(lhs_terms))
    return HBDecomposition(parts, labels, lhs, total, abs(total - lhs), abs_mass)


# ---------------------------------------------------------------------------
# Coprime counting (exact rational deviation)


@dataclass(frozen=True)
class CoprimeCountCheck:
    count: int
    deviation: Fraction
    bound: int

    @property
    def holds(self) -> bool:
        return self.deviation <= self.bound


def coprime_count(q: int, U: int) -> int:
    """#{u <= U : (u, q) = 1} via Mobius over squarefree divisors."""
    require(q >= 1, "q", "need q >= 1")
    require(U >= 0, "U", "need U >= 0")
    primes = as_factored(q).primes
    total = 0
    stack = [(0, 1, 1)]
    while stack:
        i, prod, sign = stack.pop()
        total += sign * (U // prod)
        for j in range(i, len(primes)):
            nxt = prod * primes[j]
            if nxt <= U:
                stack.append((j + 1, nxt, -sign))
    return total


def coprime_count_check(q: int, U: int) -> CoprimeCountCheck:
    """Exact deviation |count - phi(q) U / q| as a rational, with the
    2^omega(q) bound asserted."""
    f = as_factored(q)
    count = coprime_count(f.value, U)
    deviation = Fraction(abs(f.value * count - euler_phi(f) * U), f.value)
    bound = 2 ** omega(f)
    check = CoprimeCountCheck(count, deviation, bound)
    assert check.holds, f"coprime-count deviation exceeded 2^omega for q={q}, U={U}"
    return check


def coprime_count_sweep(q_max: int, u_max: int) -> tuple[int, Fraction]:
    """Exact-integer sweep of the deviation bound over the full grid.

    Returns (number of checked pairs, worst deviation/bound ratio).
    Comparisons are integer cross-multiplications, no floats involved.
    """
    checked = 0
    worst = Fraction(0)
    for q in range(1, q_max + 1):
        f = factor(q)
        phi = euler_phi(f)
        bound = 2 ** len(f.factors)
        count = 0
        for U in range(1, u_max + 1):
            if math.gcd(U, q) == 1:
                count += 1
            lhs_num = abs(q * count - phi * U)  # deviation * q
            if lhs_num > bound * q:
                raise AssertionError(f"deviation bound failed at q={q}, U={U}")
            checked += 1
            ratio = Fraction(lhs_num, bound * q)
            if ratio > worst:
                worst = ratio
    return checked, worst


# ---------------------------------------------------------------------------
# Mobius recombination of the restricted sums


@dataclass
class MobiusRecombination:
    """Both sides of the divisor-recombination identity for T(chi)."""

    lhs: SumValue
    recombined: complex
    correction: complex
    residual: float
    abs_mass: float
    nus: list[int]


def mobius_recombination(chi: DirichletCharacter, l: int, x: int, *, threads=None) -> MobiusRecombination:
    """T(chi) equals sum over squarefree nu | q1 of mu(nu) T(chi_q, nu)
    plus the exactly-computed contribution of terms with (n, q) > 1."""
    D = chi.modulus
    require(not chi.is_principal, "chi", "need a non-principal character")
    require(math.gcd(l, D) == 1, "l", "need gcd(l, D) = 1")
    chi_q = induce_primitive(chi)
    q = chi_q.modulus
    q1_primes = [p for p in as_factored(D).primes if q % p != 0]
    q1 = math.prod(q1_primes) if q1_primes else 1

    lhs = shifted_prime_sum(chi, l, x, threads=threads)

    pieces = []
    masses = [lhs.abs_term_sum]
    nus = divisors(factor(q1))
    for nu in nus:
        mu_nu = mobius(factor(nu))
        part = restricted_sum(chi_q, nu, l, x, threads=threads)
        pieces.append(mu_nu * part.value)
        masses.append(part.abs_term_sum)
    recombined = complex(math.fsum(p.real for p in pieces), math.fsum(p.imag for p in pieces))

    # terms with (n, q) > 1, evaluated against chi itself
    corr = 0j
    if x >= 2:
        n, lam = _mangoldt_arrays(x)
        table = chi.value_table()
        mask = np.gcd(n, q) != 1
        corr_terms = lam[mask] * table[(n[mask] - l) % D]
        corr = complex_fsum(corr_terms)
        masses.append(math.fsum(np.abs(corr_terms)))

    residual = abs(lhs.value - (recombined + corr))
    return MobiusRecombination(lhs, recombined, corr, residual, math.fsum(masses), nus)


# ---------------------------------------------------------------------------
# Declarative dispatch


def evaluate_spec(spec: SumSpec, *, threads=None) -> SumValue:
    """Evaluate a declarative SumSpec; scalar results are wrapped."""
    p = spec.parameters
    tag = spec.lemma_tag
    chi = spec.character
    if tag == "THEOREM_T":
        return shifted_prime_sum(chi, p["l"], p["x"], threads=threads)
    if tag == "T_RESTRICTED":
        return restricted_sum(chi, p["nu"], p["l"], p["x"], threads=threads)
    if tag == "SHORT_S":
        return short_sum(chi, p["M"], p["N"], p["d"], p["k"], p["eta"], threads=threads)
    if tag == "SHORT_SY":
        return sy_sum(chi, p["u"], p["y"], p["eta"], p["nu"], threads=threads)
    if tag == "DOUBLE_W":
        return double_sum(
            chi, p.get("a_m", "one"), p.get("b_n", "one"),
            p["M"], p["N"], p["U"], p["nu"], p["l"], p["x"], threads=threads,
        )
    if tag == "BURGESS_2R":
        v = burgess_moment_2r(chi, p["Z"], p["r"])
        return SumValue(complex(v), chi.modulus, v)
    if tag == "BURGESS_SEXTIC":
        v = burgess_sextic(chi, p["Z"])
        return SumValue(complex(v), chi.modulus * p["Z"] ** 6, v)
    if tag == "HB_DECOMP":
        dec = hb_decompose(np.ones(p["x"] + 1), p["x"], p["u1"], p["r"])
        return SumValue(dec.total, sum(pt.term_count for pt in dec.parts), dec.abs_mass)
    if tag == "COPRIME_COUNT":
        chk = coprime_count_check(p["q"], p["U"])
        return SumValue(complex(chk.count), p["U"], float(chk.count))
    raise PreconditionError("lemma_tag", f"no evaluator for {tag}")
