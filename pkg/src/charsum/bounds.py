"""Right-hand sides of every bound in scope, and the ASSERT/MONITOR record
machinery that compares them against exactly computed left-hand sides.

Policy: only exact identities and explicit-constant inequalities are
asserted (test-failing).  Bounds stated with an implied constant for
sufficiently large moduli are monitored: the record carries the observed
lhs/rhs ratio and never fails the run.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .characters import (
    all_character_tables,
    enumerate_characters,
    induce_primitive,
    unit_group_basis,
)
from .integers import (
    divisor_count_sieve,
    divisors,
    euler_phi,
    factor,
    mobius,
    omega,
    primes_up_to,
    smooth_count,
    tau_r_sieve,
)
from .sums import (
    CongruenceInstance,
    _mangoldt_arrays,
    char_twist_weight,
    congruence_census,
    coprime_count_sweep,
    double_sum,
    hb_decompose,
    mobius_recombination,
    restricted_sum,
    short_sum,
    sy_sum,
)
from .util import (
    SplitMix64,
    WorkBudgetError,
    map_blocks,
    require,
    thread_width,
)

log = logging.getLogger("charsum")

ASSERT = "ASSERT"
MONITOR = "MONITOR"


@dataclass
class BoundConfig:
    """Tunable constants shared by the checks.

    ``delta`` is the small fixed exponent perturbation (<= 1e-4 in the
    source statements); ``epsilon`` the exponent margin in x >= D^(5/6+eps);
    ``c_omega`` and ``c_phi`` the absolute constants in the omega(q) and
    phi(q)/2q envelopes; ``theta`` the dyadic window exponent used by the
    bilinear-sum corollaries.
    """

    delta: float = 1e-4
    epsilon: float = 0.05
    c_omega: float = 1.5
    c_phi: float = 1.0
    theta: float = 1.0 / 12.0
    work_budget: int = 10**9

    def __post_init__(self):
        require(0 < self.delta <= 1, "delta", "need 0 < delta <= 1")
        require(0 < self.epsilon < 1 / 6, "epsilon", "need 0 < epsilon < 1/6")
        require(self.work_budget > 0, "work_budget", "must be positive")


@dataclass
class BoundCheckRecord:
    """One bound check: exact LHS, evaluated RHS, ratio, and a verdict."""

    lemma_tag: str
    parameters: dict
    lhs: float
    rhs: float
    ratio: float
    mode: str
    verdict: str
    runtime_ms: int | None = None


def make_record(lemma_tag, parameters, lhs, rhs, mode, passed=None, runtime_ms=None) -> BoundCheckRecord:
    lhs = float(lhs)
    rhs = float(rhs)
    ratio = lhs / rhs if rhs > 0 else math.inf
    if mode == ASSERT:
        ok = passed if passed is not None else ratio <= 1.0
        verdict = "pass" if (ok and ratio <= 1.0) else "fail"
    else:
        verdict = "observed"
    return BoundCheckRecord(lemma_tag, dict(parameters), lhs, rhs, ratio, mode, verdict, runtime_ms)


def _timed(fn, *args, **kwargs):
    t0 = time.perf_counter_ns()
    out = fn(*args, **kwargs)
    return out, (time.perf_counter_ns() - t0) // 1_000_000


# ---------------------------------------------------------------------------
# Plain right-hand sides


def theorem_rhs(D: int, x) -> float:
    """x * exp(-0.6 sqrt(ln D))."""
    require(D >= 3, "D", "need D >= 3")
    require(x >= 2, "x", "need x >= 2")
    return x * math.exp(-0.6 * math.sqrt(math.log(D)))


def lemma8_rhs(inst: CongruenceInstance, delta: float) -> float:
    """NY + 2Y^2/d + (2Y^2/d) rho + 2 (NY)^(1+delta) / d."""
    NY = inst.N * inst.Y
    return (
        NY
        + 2.0 * inst.Y**2 / inst.d
        + 2.0 * inst.Y**2 / inst.d * inst.rho
        + 2.0 * NY ** (1.0 + delta) / inst.d
    )


def big_divisor_tail(q: int, D: int) -> tuple[float, float]:
    """Exact tail sum of mu^2(d)/d over divisors d of q above exp(sqrt(2 ln D)),
    paired with the monitored envelope exp(-0.7 sqrt(ln D))."""
    require(D >= 3, "D", "need D >= 3")
    fq = factor(q)
    require(D % q == 0, "q|D", f"need q | D, got q={q}, D={D}")
    threshold = math.exp(math.sqrt(2.0 * math.log(D)))
    acc = Fraction(0)
    for d in divisors(fq):
        if d > threshold and mobius(factor(d)) != 0:
            acc += Fraction(1, d)
    rhs = math.exp(-0.7 * math.sqrt(math.log(D)))
    return float(acc), rhs


def burgess_2r_rhs(q: int, Z: int, r: int, delta: float) -> float:
    return Z**r * q + Z ** (2 * r) * q ** (0.5 + delta)


def divisor_moment_rhs(x: int, r: int, k: int) -> float:
    return x * math.log(x) ** (r**k - 1)


def short_sum_rhs(N: int, q: int, d: int, delta: float) -> float:
    return N ** (2 / 3) * q ** (1 / 9 + delta / 2) * d ** (2 / 3)


def sy_rhs(y, nu: int, D: int) -> float:
    return y / nu * math.exp(-0.7 * math.sqrt(math.log(D)))


def double_sum_rhs(M: int, N: int, q: int, B: float, c1: float, c2: float, D: int, delta: float) -> float:
    Lg = math.log(D)
    return (
        B
        * (M ** 0.75 * N**0.5 * q**0.25 + M ** 0.75 * N * q ** (0.125 + delta / 4))
        * Lg ** ((2 * c1 + c2) / 4 + 1)
    )


def corollary_rhs(x: int, nu: int, D: int) -> float:
    return x / nu * math.exp(-0.7 * math.sqrt(math.log(D)))


def restricted_envelope_rhs(q: int, nu: int, x: int) -> float:
    """Envelope 10 x ln^5 x (sqrt(1/(q nu^2) + q/x) + x^(-1/6) nu^(-1/2)
    + x^(-1/3) q^(1/6) nu^(-1/3)) tau(q)."""
    tau_q = 1
    for _, a in factor(q).factors:
        tau_q *= a + 1
    bracket = (
        math.sqrt(1.0 / (q * nu * nu) + q / x)
        + x ** (-1 / 6) * nu ** (-0.5)
        + x ** (-1 / 3) * q ** (1 / 6) * nu ** (-1 / 3)
    )
    return 10.0 * x * math.log(x) ** 5 * bracket * tau_q


# ---------------------------------------------------------------------------
# Single-check records


def divisor_moment_check(x: int, r: int, k: int) -> BoundCheckRecord:
    """Exact sum of tau_r^k(n) over n <= x against x (ln x)^(r^k - 1)."""
    require(x >= 2, "x", "need x >= 2")
    require(2 <= r <= 5, "r", "need r in 2..5")
    require(k in (1, 2), "k", "need k in {1, 2}")
    (tau, ms) = _timed(tau_r_sieve, x, r)
    lhs = int((tau[: x + 1].astype(object) ** k).sum())
    return make_record(
        "DIVISOR_MOMENT", {"x": x, "r": r, "k": k}, lhs, divisor_moment_rhs(x, r, k), MONITOR,
        runtime_ms=ms,
    )


def smooth_rhs_product(b: int) -> float:
    """prod over p | b of (1 - 1/p)."""
    out = 1.0
    for p in factor(b).primes:
        out *= 1.0 - 1.0 / p
    return out


def smooth_bound_check(x: int, z: int, b: int = 1, theta: float = 1.0) -> BoundCheckRecord:
    """Exact smooth count against the sieve envelope at worst-case theta."""
    require(math.log(x) <= z <= x ** (1 / math.e), "z",
            f"need ln x <= z <= x^(1/e), got x={x}, z={z}")
    (lhs, ms) = _timed(smooth_count, x, z, b)
    alpha = math.log(z) / math.log(x)
    la = math.log(1.0 / alpha)
    rhs = (
        x
        * smooth_rhs_product(b)
        * math.exp(-(la + math.log(la)) / alpha + 1.0 / alpha + 2.0 * theta / (alpha * la))
    )
    return make_record(
        "SMOOTH_COUNT", {"x": x, "z": z, "b": b, "theta": theta}, lhs, rhs, MONITOR, runtime_ms=ms,
    )


def burgess_check_2r(q: int, Z: int, r: int, delta: float = 1e-4) -> BoundCheckRecord:
    """Max over primitive characters of the 2r-th window moment against
    Z^r q + Z^(2r) q^(1/2+delta)."""
    fq = factor(q)
    require(mobius(fq) != 0 or r == 2, "q", "need squarefree q or r = 2")
    require(Z >= 1 and r >= 1, "Z,r", "need Z >= 1 and r >= 1")
    t0 = time.perf_counter_ns()
    basis = unit_group_basis(q)
    tables = all_character_tables(basis)
    prim = basis.conductor_grid().reshape(-1) == q
    require(prim.any(), "q", f"no primitive characters mod {q}")
    W = np.zeros_like(tables)
    col = np.arange(q, dtype=np.int64)
    for z in range(1, Z + 1):
        W += tables[:, (col + z) % q]
    moments = (np.abs(W) ** (2 * r)).sum(axis=1)
    lhs = float(moments[prim].max())
    ms = (time.perf_counter_ns() - t0) // 1_000_000
    return make_record(
        "BURGESS_2R", {"q": q, "Z": Z, "r": r, "delta": delta},
        lhs, burgess_2r_rhs(q, Z, r, delta), MONITOR, runtime_ms=ms,
    )


def census_records(inst: CongruenceInstance, delta: float = 1e-4) -> list[BoundCheckRecord]:
    """Two records per instance: the asserted explicit sub-bounds (worst
    normalized quotient vs 1) and the monitored full K envelope."""
    NY = inst.N * inst.Y
    tau_max = int(divisor_count_sieve(max(NY - 1, 1)).max()) if NY >= 2 else 1
    checks = (
        ("diagonal", inst.diagonal, NY),
        ("kappa1", inst.kappa1 * inst.d, 2 * inst.Y**2),
        ("kappa2", inst.kappa2 * inst.d, 2 * inst.Y**2 * inst.rho),
        ("kappa3", inst.kappa3 * inst.d, inst.N * (inst.Y + inst.d) * tau_max),
    )
    worst = 0.0
    ok = inst.K == inst.diagonal + 2 * inst.kappa_total
    for _, num, den in checks:
        quotient = num / den if den else (math.inf if num else 0.0)
        worst = max(worst, quotient)
        if num > den:
            ok = False
    params = inst.to_json_dict() | {"tau_max": tau_max, "worst_bound": worst}
    assert_rec = make_record("CONGRUENCE_CENSUS", params, worst, 1.0, ASSERT, passed=ok)
    monitor_rec = make_record(
        "CONGRUENCE_K", inst.to_json_dict() | {"delta": delta},
        inst.K, lemma8_rhs(inst, delta), MONITOR,
    )
    return [assert_rec, monitor_rec]


# ---------------------------------------------------------------------------
# Seeded instance generation


def random_census_instances(count: int, seed: int, q_max: int = 5000) -> list[tuple]:
    """Deterministic valid parameter tuples (q, d, eta, k, M, N, Y)."""
    rng = SplitMix64(seed)
    out = []
    while len(out) < count:
        q = rng.randint(16, q_max)
        d = rng.choice(divisors(factor(q)))
        y_hi = min((q - 1) // 2, 150)
        if d + 1 > y_hi:
            continue
        Y = rng.randint(d + 1, y_hi)
        n_hi = (q - 1) // (2 * Y)
        if n_hi < 1:
            continue
        N = rng.randint(1, min(n_hi, 300))
        if 2 * N * Y >= q:
            continue
        eta = 1 + rng.below(q)
        while math.gcd(eta, q) != 1:
            eta = 1 + rng.below(q)
        k = 1 + rng.below(1000)
        while math.gcd(k, d) != 1:
            k = 1 + rng.below(1000)
        M = rng.below(1000)
        out.append((q, d, eta, k, M, N, Y))
    return out


def lemma8_verify(instances=None, *, random_count=0, seed=0, q_max=5000,
                  delta=1e-4, work_budget=10**9) -> list[BoundCheckRecord]:
    """Census sub-bound assertions over explicit or seeded instances."""
    if instances is None:
        instances = random_census_instances(random_count, seed, q_max)
    records = []
    for (q, d, eta, k, M, N, Y) in instances:
        inst, ms = _timed(congruence_census, q, d, eta, k, M, N, Y, work_budget=work_budget)
        recs = census_records(inst, delta)
        for r in recs:
            r.runtime_ms = ms
        records.extend(recs)
    return records


# ---------------------------------------------------------------------------
# Identity verification sweeps (all ASSERT)


def hb_identity_records(cases: int = 50, seed: int = 0, x_max: int = 10**4,
                        d_max: int = 10**3) -> list[BoundCheckRecord]:
    """Seeded decomposition-identity cases; residual < 1e-8 x asserted."""
    rng = SplitMix64(seed)
    records = []
    for i in range(cases):
        x = rng.randint(30, x_max)
        u1 = math.ceil(x ** (1 / 3)) if rng.below(2) == 0 else math.ceil(math.sqrt(x))
        r = rng.randint(1, 3)
        twist = rng.below(2) == 1
        params = {"case": i, "x": x, "u1": u1, "r": r}
        if twist:
            while True:
                D = rng.randint(3, d_max)
                basis = unit_group_basis(D)
                if basis.phi > 1:
                    break
            cs = list(enumerate_characters(basis))
            chi = cs[1 + rng.below(len(cs) - 1)]
            chi_q = induce_primitive(chi)
            l = 1 + rng.below(D)
            while math.gcd(l, D) != 1:
                l = 1 + rng.below(D)
            f = char_twist_weight(chi_q, l, x, nu=1)
            params |= {"weight": "char-twist", "D": D, "q": chi_q.modulus, "l": l}
        else:
            f = np.ones(x + 1)
            params |= {"weight": "one"}
        dec, ms = _timed(hb_decompose, f, x, u1, r)
        records.append(
            make_record("HB_DECOMP", params, dec.residual, 1e-8 * x, ASSERT, runtime_ms=ms)
        )
    return records


def orthogonality_records(max_D: int = 500) -> list[BoundCheckRecord]:
    """Worst orthogonality defect per modulus family, asserted at 1e-9 phi."""
    worst = 0.0
    worst_D = 1
    t0 = time.perf_counter_ns()
    for D in range(1, max_D + 1):
        basis = unit_group_basis(D)
        tables = all_character_tables(basis)
        sums = tables.sum(axis=0)
        want = np.zeros(D)
        want[1 % D] = basis.phi
        dev = float(np.abs(sums - want).max()) / basis.phi
        if dev > worst:
            worst, worst_D = dev, D
    ms = (time.perf_counter_ns() - t0) // 1_000_000
    return [
        make_record(
            "ORTHOGONALITY", {"max_D": max_D, "worst_D": worst_D},
            worst, 1e-9, ASSERT, runtime_ms=ms,
        )
    ]


def gauss_modulus_records(max_q: int = 200) -> list[BoundCheckRecord]:
    """| |tau(chi_q)|^2 - q | < 1e-6 q over every primitive character."""
    worst = 0.0
    worst_q = 1
    count = 0
    t0 = time.perf_counter_ns()
    phases_cache = {}
    for q in range(1, max_q + 1):
        basis = unit_group_basis(q)
        tables = all_character_tables(basis)
        prim = basis.conductor_grid().reshape(-1) == q
        if not prim.any():
            continue
        if q not in phases_cache:
            phases_cache[q] = np.exp((2j * np.pi / q) * np.arange(q))
        taus = (tables[prim] * phases_cache[q][None, :]).sum(axis=1)
        devs = np.abs(np.abs(taus) ** 2 - q) / q
        count += int(prim.sum())
        dev = float(devs.max())
        if dev > worst:
            worst, worst_q = dev, q
    ms = (time.perf_counter_ns() - t0) // 1_000_000
    return [
        make_record(
            "GAUSS_MODULUS", {"max_q": max_q, "worst_q": worst_q, "characters": count},
            worst, 1e-6, ASSERT, runtime_ms=ms,
        )
    ]


def coprime_count_records(q_max: int = 1000, u_max: int = 1000) -> list[BoundCheckRecord]:
    """Exact-rational deviation bound over the full (q, U) grid."""
    (checked, worst), ms = _timed(coprime_count_sweep, q_max, u_max)
    return [
        make_record(
            "COPRIME_COUNT", {"q_max": q_max, "u_max": u_max, "pairs": checked},
            float(worst), 1.0, ASSERT, runtime_ms=ms,
        )
    ]


def recombination_records(cases: int = 20, seed: int = 0, d_max: int = 10**3,
                          x_max: int = 10**4) -> list[BoundCheckRecord]:
    """Seeded divisor-recombination identity checks, asserted at 1e-9 mass."""
    rng = SplitMix64(seed)
    records = []
    done = 0
    while done < cases:
        D = rng.randint(6, d_max)
        basis = unit_group_basis(D)
        if basis.phi <= 1:
            continue
        cs = list(enumerate_characters(basis))
        chi = cs[1 + rng.below(len(cs) - 1)]
        l = 1 + rng.below(D)
        if math.gcd(l, D) != 1:
            continue
        x = rng.randint(50, x_max)
        rec, ms = _timed(mobius_recombination, chi, l, x)
        records.append(
            make_record(
                "T_RECOMBINATION",
                {"case": done, "D": D, "q": induce_primitive(chi).modulus,
                 "l": l, "x": x, "nu_count": len(rec.nus)},
                rec.residual, 1e-9 * max(1.0, rec.abs_mass), ASSERT, runtime_ms=ms,
            )
        )
        done += 1
    return records


def identities_verify(max_D: int = 500, gauss_max_q: int = 200, hb_cases: int = 50,
                      coprime_max: int = 1000, recombination_cases: int = 20,
                      seed: int = 0, force_fail: bool = False) -> list[BoundCheckRecord]:
    """The full ASSERT suite: decomposition identity, orthogonality, Gauss
    moduli, coprime-count deviation, divisor recombination."""
    records = []
    records.extend(hb_identity_records(hb_cases, seed))
    records.extend(orthogonality_records(max_D))
    records.extend(gauss_modulus_records(gauss_max_q))
    records.extend(coprime_count_records(coprime_max, coprime_max))
    records.extend(recombination_records(recombination_cases, seed))
    if force_fail:
        # test-only hook: lets the exit-code contract be exercised end to end
        records.append(
            make_record("SELFTEST", {"injected": True}, 2.0, 1.0, ASSERT)
        )
    return records


# ---------------------------------------------------------------------------
# Monitored reports


def theorem_report(D_list, epsilon: float = 0.05, seed: int = 0, *, threads=None,
                   work_budget: int = 10**9) -> list[BoundCheckRecord]:
    """For each modulus: exact max of |T(chi, l)| over non-principal
    characters (all of them at once via the unit-group transform) and over a
    seeded sample of shifts l, against x exp(-0.6 sqrt(ln D)).

    Characters are additionally filtered by conductor > exp(sqrt(2 ln D));
    both the filtered and unfiltered maxima are recorded.  Moduli where no
    character passes the filter are skipped and logged.
    """

    def one(D: int) -> BoundCheckRecord | None:
        require(D >= 3, "D", "need D >= 3")
        t0 = time.perf_counter_ns()
        x = math.ceil(D ** (5.0 / 6.0 + epsilon))
        basis = unit_group_basis(D)
        phi = basis.phi
        if phi <= 1:
            log.warning("theorem_report: D=%d has no non-principal characters, skipped", D)
            return None
        threshold = math.exp(math.sqrt(2.0 * math.log(D)))
        cond = basis.conductor_grid().reshape(-1)
        pass_filter = cond > threshold
        pass_filter[0] = False  # principal
        nonprincipal = np.ones(phi, dtype=bool)
        nonprincipal[0] = False
        if not pass_filter.any():
            log.warning("theorem_report: no conductor above %.3f for D=%d, skipped", threshold, D)
            return None
        if phi <= 64:
            ls = [l for l in range(1, D) if math.gcd(l, D) == 1]
        else:
            rng = SplitMix64(SplitMix64(seed ^ D).next_u64())
            ls = rng.distinct(1, D - 1, 64, accept=lambda v: math.gcd(v, D) == 1)
        n, lam = _mangoldt_arrays(x)
        if len(ls) * (len(n) + phi * max(1, int(math.log2(max(phi, 2))))) > work_budget:
            raise WorkBudgetError(f"theorem_report D={D} exceeds work budget")
        flat = basis.unit_flat_index()
        shape = basis.orders if basis.factors else (1,)
        best = np.zeros(phi)
        for l in ls:
            idx = flat[(n - l) % D]
            keep = idx >= 0
            lattice = np.bincount(idx[keep], weights=lam[keep], minlength=phi)
            spectrum = np.fft.ifftn(lattice.reshape(shape)) * phi
            np.maximum(best, np.abs(spectrum.reshape(-1)), out=best)
        lhs = float(best[pass_filter].max())
        lhs_unfiltered = float(best[nonprincipal].max())
        ms = (time.perf_counter_ns() - t0) // 1_000_000
        return make_record(
            "THEOREM_T",
            {
                "D": D, "x": x, "epsilon": epsilon, "seed": seed,
                "l_count": len(ls), "conductor_threshold": threshold,
                "n_characters": phi - 1, "n_pass_filter": int(pass_filter.sum()),
                "lhs_unfiltered": lhs_unfiltered,
            },
            lhs, theorem_rhs(D, x), MONITOR, runtime_ms=ms,
        )

    results = map_blocks(one, list(D_list), thread_width(threads))
    return [r for r in results if r is not None]


def burgess_report(q_max: int = 300, Z: int = 20, r: int = 2, delta: float = 1e-4) -> list[BoundCheckRecord]:
    """Moment-vs-envelope ratios over primes q <= q_max, plus a summary
    record carrying the observed maximum ratio."""
    records = []
    worst = 0.0
    for q in (int(p) for p in primes_up_to(q_max)):
        if q < 3:
            continue
        rec = burgess_check_2r(q, min(Z, q - 1), r, delta)
        worst = max(worst, rec.ratio)
        records.append(rec)
    records.append(
        make_record(
            "BURGESS_2R", {"summary": True, "q_max": q_max, "Z": Z, "r": r, "max_ratio": worst},
            worst, 1.0, MONITOR,
        )
    )
    records[-1].verdict = "observed-max"
    return records


def divisor_moment_report(x_grid=(100, 1000, 10**4, 10**5), r_values=(2, 3, 4, 5),
                          k_values=(1, 2)) -> list[BoundCheckRecord]:
    """Moment records over an x-grid with the fitted constant (the observed
    max ratio, i.e. the least constant making the envelope hold there)."""
    records = []
    x_max = max(x_grid)
    for r in r_values:
        tau = tau_r_sieve(x_max, r)
        for k in k_values:
            powered = tau.astype(object) ** k
            csum = np.cumsum(powered)
            fitted = 0.0
            group = []
            for x in sorted(x_grid):
                lhs = int(csum[x])
                rec = make_record(
                    "DIVISOR_MOMENT", {"x": x, "r": r, "k": k},
                    lhs, divisor_moment_rhs(x, r, k), MONITOR,
                )
                fitted = max(fitted, rec.ratio)
                group.append(rec)
            summary = make_record(
                "DIVISOR_MOMENT",
                {"summary": True, "r": r, "k": k, "fitted_constant": fitted,
                 "x_grid": list(sorted(x_grid))},
                fitted, 1.0, MONITOR,
            )
            summary.verdict = "observed-max"
            records.extend(group)
            records.append(summary)
    return records


def smooth_report(grid=None, theta: float = 1.0) -> list[BoundCheckRecord]:
    """Smooth-count envelope over a fixed admissible (x, z, b) grid."""
    if grid is None:
        grid = []
        for x in (10**3, 10**4, 10**5):
            z_lo = math.ceil(math.log(x))
            z_hi = math.floor(x ** (1 / math.e))
            zs = sorted({z_lo, (z_lo + z_hi) // 2, z_hi})
            for z in zs:
                for b in (1, 30):
                    grid.append((x, z, b))
    return [smooth_bound_check(x, z, b, theta) for (x, z, b) in grid]


def tail_report(pairs=((30030, 30030), (510510, 510510), (9699690, 9699690), (30030, 9699690))) -> list[BoundCheckRecord]:
    """Big-divisor tail sums on a fixed (q, D) grid."""
    records = []
    for q, D in pairs:
        (pair, ms) = _timed(big_divisor_tail, q, D)
        lhs, rhs = pair
        records.append(
            make_record("BIG_DIVISOR_TAIL", {"q": q, "D": D}, lhs, rhs, MONITOR, runtime_ms=ms)
        )
    return records


def restricted_report(D: int, x: int, seed: int = 0, max_nu: int = 8) -> list[BoundCheckRecord]:
    """|T(chi_q, nu)| against the quoted intermediate envelope, for the
    first non-principal character and squarefree nu | q1."""
    basis = unit_group_basis(D)
    require(basis.phi > 1, "D", "need a non-principal character")
    chi = list(enumerate_characters(basis))[1]
    chi_q = induce_primitive(chi)
    q = chi_q.modulus
    rng = SplitMix64(seed)
    l = 1 + rng.below(D)
    while math.gcd(l, D) != 1:
        l = 1 + rng.below(D)
    q1_primes = [p for p in factor(D).primes if q % p != 0]
    q1 = math.prod(q1_primes) if q1_primes else 1
    records = []
    for nu in divisors(factor(q1))[:max_nu]:
        val, ms = _timed(restricted_sum, chi_q, nu, l, x)
        records.append(
            make_record(
                "T_RESTRICTED", {"D": D, "q": q, "nu": nu, "l": l, "x": x},
                abs(val.value), restricted_envelope_rhs(q, nu, x), MONITOR, runtime_ms=ms,
            )
        )
    return records


def short_sum_report(seed: int = 0, config: BoundConfig | None = None) -> list[BoundCheckRecord]:
    """Window-sum ratios for the two short-sum envelopes on seeded
    admissible parameters (D = q prime, d = nu = 1)."""
    cfg = config or BoundConfig()
    rng = SplitMix64(seed)
    records = []
    for q in (541, 1009, 2003):
        D = q
        basis = unit_group_basis(q)
        chi_q = list(enumerate_characters(basis))[1]
        d = 1
        n_cap = math.floor(q ** (7 / 12) / math.sqrt(d)) - 1
        N = rng.randint(max(2, n_cap // 2), n_cap)
        M = rng.below(q)
        eta = 1 + rng.below(q - 1)
        while math.gcd(eta, q) != 1:
            eta = 1 + rng.below(q - 1)
        k = 1
        val, ms = _timed(short_sum, chi_q, M, N, d, k, eta)
        records.append(
            make_record(
                "SHORT_S", {"D": D, "q": q, "M": M, "N": N, "d": d, "k": k, "eta": eta,
                            "delta": cfg.delta},
                abs(val.value), short_sum_rhs(N, q, d, cfg.delta), MONITOR, runtime_ms=ms,
            )
        )
        y_lo = math.ceil(q ** (1 / 3 + 8 * cfg.delta / 5))
        y = rng.randint(y_lo, q)
        u = rng.randint(y, 3 * q)
        val, ms = _timed(sy_sum, chi_q, u, y, eta, 1)
        records.append(
            make_record(
                "SHORT_SY", {"D": D, "q": q, "u": u, "y": y, "eta": eta, "nu": 1},
                abs(val.value), sy_rhs(y, 1, D), MONITOR, runtime_ms=ms,
            )
        )
    return records


def double_sum_report(seed: int = 0, config: BoundConfig | None = None) -> list[BoundCheckRecord]:
    """Bilinear-sum ratios: averaged-coefficient envelope plus the two
    corollary envelopes on their own admissible windows (D = q prime, nu=1)."""
    cfg = config or BoundConfig()
    rng = SplitMix64(seed)
    records = []
    for q in (1009, 4001):
        D = q
        basis = unit_group_basis(q)
        chi_q = list(enumerate_characters(basis))[1]
        # quartic-route window: N around q^(1/4)
        N = max(4, math.floor(q ** 0.25))
        U = N + rng.below(N - 1) + 1 if N > 1 else N
        U = min(U, 2 * N - 1)
        M = rng.randint(8, 40)
        x = 4 * M * N
        a_m = "tau5:" + str(seed)
        val, ms = _timed(double_sum, chi_q, a_m, "one", M, N, U, 1, 1, x)
        rhs = double_sum_rhs(M, N, q, 1.0, 4.0, 24.0, D, cfg.delta)
        records.append(
            make_record(
                "DOUBLE_W", {"D": D, "q": q, "M": M, "N": N, "U": U, "x": x,
                             "a_m": a_m, "b_n": "one", "delta": cfg.delta},
                abs(val.value), rhs, MONITOR, runtime_ms=ms,
            )
        )
        # corollary envelope x/nu exp(-0.7 sqrt(ln D)) on the same window
        x_cor = math.ceil(q ** (0.75 + cfg.theta + 1.1 * cfg.delta))
        val2, ms2 = _timed(double_sum, chi_q, a_m, "one", M, N, U, 1, 1, x_cor)
        records.append(
            make_record(
                "DOUBLE_W_COROLLARY",
                {"D": D, "q": q, "M": M, "N": N, "U": U, "x": x_cor, "theta": cfg.theta,
                 "a_m": a_m, "b_n": "one"},
                abs(val2.value), corollary_rhs(x_cor, 1, D), MONITOR, runtime_ms=ms2,
            )
        )
    return records


def constants_report(q_max: int = 1000, config: BoundConfig | None = None) -> list[BoundCheckRecord]:
    """Fitted constants for the omega(q) envelope and the phi(q)/2q display.

    Emits, per envelope, the observed extreme constant on the grid (the
    least c_omega making omega(q) <= c ln q / ln ln q hold, and both the
    least upper and greatest lower constant for phi(q) ln ln q / 2q).
    """
    cfg = config or BoundConfig()
    worst_omega = 0.0
    worst_omega_q = 3
    max_phi = 0.0
    min_phi = math.inf
    for q in range(3, q_max + 1):
        f = factor(q)
        lq = math.log(q)
        llq = math.log(lq)
        if llq <= 0:
            continue
        c_om = omega(f) * llq / lq
        if c_om > worst_omega:
            worst_omega, worst_omega_q = c_om, q
        ratio = euler_phi(f) * llq / (2.0 * q)
        max_phi = max(max_phi, ratio)
        min_phi = min(min_phi, ratio)
    rec1 = make_record(
        "OMEGA_ENVELOPE",
        {"q_max": q_max, "worst_q": worst_omega_q, "fitted_c_omega": worst_omega,
         "configured_c_omega": cfg.c_omega},
        worst_omega, cfg.c_omega, MONITOR,
    )
    rec2 = make_record(
        "PHI_RATIO",
        {"q_max": q_max, "fitted_c_phi_upper": max_phi, "fitted_c_phi_lower": min_phi,
         "configured_c_phi": cfg.c_phi},
        max_phi, cfg.c_phi, MONITOR,
    )
    return [rec1, rec2]
