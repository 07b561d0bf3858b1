"""Naive single-threaded oracles for every evaluator.

These follow the defining formulas term by term, calling the exact
character evaluation for each summand and accumulating in plain order.
They are deliberately independent of the table/FFT fast paths so that
agreement between the two routes is a meaningful check.
"""

from __future__ import annotations

import math

from .characters import DirichletCharacter
from .integers import factor
from .util import WorkBudgetError


def mangoldt_value(n: int) -> float:
    """Lambda(n) by direct factorization."""
    if n < 2:
        return 0.0
    f = factor(n)
    if len(f.factors) == 1:
        return math.log(f.factors[0][0])
    return 0.0


def shifted_prime_sum_oracle(chi: DirichletCharacter, l: int, x: int) -> complex:
    total = 0j
    for n in range(2, x + 1):
        lam = mangoldt_value(n)
        if lam:
            total += lam * chi(n - l).to_complex()
    return total


def restricted_sum_oracle(chi_q: DirichletCharacter, nu: int, l: int, x: int) -> complex:
    q = chi_q.modulus
    total = 0j
    for n in range(2, x + 1):
        if math.gcd(n, q) != 1 or (n - l) % nu != 0:
            continue
        lam = mangoldt_value(n)
        if lam:
            total += lam * chi_q(n - l).to_complex()
    return total


def short_sum_oracle(chi_q: DirichletCharacter, M: int, N: int, d: int, k: int, eta: int) -> complex:
    total = 0j
    for n in range(M - N + 1, M + 1):
        total += chi_q(n * d + eta * k).to_complex()
    return total


def sy_sum_oracle(chi_q: DirichletCharacter, u, y, eta: int, nu: int) -> complex:
    q = chi_q.modulus
    total = 0j
    lo = math.floor(u - y) + 1
    hi = math.floor(u)
    for n in range(lo, hi + 1):
        if math.gcd(n, q) == 1 and n % nu == eta % nu:
            total += chi_q(n - eta).to_complex()
    return total


def double_sum_oracle(chi_q, a_m, b_n, M, N, U, nu, l, x) -> complex:
    """Triple-condition loop over (m, n)."""
    q = chi_q.modulus
    total = 0j
    for m in range(M + 1, 2 * M + 1):
        for n in range(U + 1, 2 * N + 1):
            if m * n > x:
                break
            if math.gcd(m * n, q) != 1 or (m * n - l) % nu != 0:
                continue
            total += a_m(m) * b_n(n) * chi_q(m * n - l).to_complex()
    return total


def burgess_moment_2r_oracle(chi_q: DirichletCharacter, Z: int, r: int) -> float:
    q = chi_q.modulus
    total = 0.0
    for start in range(q):
        inner = 0j
        for z in range(1, Z + 1):
            inner += chi_q(start + z).to_complex()
        total += abs(inner) ** (2 * r)
    return total


def burgess_moment_2_expanded_oracle(chi_q: DirichletCharacter, Z: int) -> float:
    """r = 1 moment via the expanded double sum over (z1, z2)."""
    q = chi_q.modulus
    total = 0j
    for z1 in range(1, Z + 1):
        for z2 in range(1, Z + 1):
            for start in range(q):
                total += chi_q(start + z1).to_complex() * chi_q(start + z2).conjugate().to_complex()
    return total.real


def burgess_sextic_oracle(chi_q: DirichletCharacter, Z: int) -> float:
    q = chi_q.modulus
    total = 0.0
    for z1 in range(1, Z + 1):
        for z2 in range(1, Z + 1):
            for z3 in range(1, Z + 1):
                for z4 in range(1, Z + 1):
                    for z5 in range(1, Z + 1):
                        for z6 in range(1, Z + 1):
                            inner = 0j
                            for lam in range(q):
                                den = (lam + z4) * (lam + z5) * (lam + z6) % q
                                if math.gcd(den, q) != 1:
                                    continue
                                num = (lam + z1) * (lam + z2) * (lam + z3) % q
                                arg = num * pow(den, -1, q) % q
                                inner += chi_q(arg).to_complex()
                            total += abs(inner)
    return total


def congruence_census_oracle(q, d, eta, k, M, N, Y, *, work_budget: int = 10**9):
    """Literal quadruple loop over (n, n1, y, y1); returns the same census
    fields as the grouped path.  A second pass with the loops reordered
    re-counts K as an internal consistency check."""
    ys = [y for y in range(1, Y + 1) if math.gcd(y, q) == 1]
    n_range = range(M + 1, M + N + 1)
    if (len(ys) * N) ** 2 > work_budget:
        raise WorkBudgetError("quadruple loop exceeds budget")
    qd = q // d
    shift = eta * k
    K = diagonal = kappa1 = kappa2 = kappa3 = 0
    for n in n_range:
        for y in ys:
            lhs = (n * d + shift) * y % q
            for n1 in n_range:
                for y1 in ys:
                    if (n1 * d + shift) * y1 % q != lhs:
                        continue
                    K += 1
                    if y1 == y:
                        diagonal += 1
                    elif y < y1:
                        t = (y1 - y) // d
                        assert (y1 - y) % d == 0
                        w = (n1 * d + shift) % qd
                        if w == 0:
                            kappa1 += 1
                        elif (w * t) % qd == 0:
                            kappa2 += 1
                        else:
                            kappa3 += 1
    # independent re-count with the loop order reversed
    K2 = 0
    for y1 in ys:
        for n1 in n_range:
            rhs = (n1 * d + shift) * y1 % q
            for y in ys:
                for n in n_range:
                    if (n * d + shift) * y % q == rhs:
                        K2 += 1
    assert K2 == K, "reordered re-count disagrees"
    return {
        "K": K,
        "diagonal": diagonal,
        "kappa1": kappa1,
        "kappa2": kappa2,
        "kappa3": kappa3,
    }


def rho_divisor_count_oracle(q: int, d: int, Y: int) -> int:
    qd = q // d
    count = 0
    for beta in range(1, qd + 1):
        if qd % beta == 0 and beta * Y >= q and beta < qd and math.gcd(beta, d) == 1:
            count += 1
    return count


def coprime_count_oracle(q: int, U: int) -> int:
    return sum(1 for u in range(1, U + 1) if math.gcd(u, q) == 1)
