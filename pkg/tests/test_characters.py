"""Character algebra tests: basis structure, exact evaluation, conductor,
induction, Gauss sums.  Oracles are definition-level loops."""

import cmath
import math

import numpy as np
import pytest

from charsum.characters import (
    CharacterValue,
    DirichletCharacter,
    all_character_tables,
    character_from_json,
    character_weight_transform,
    conductor,
    enumerate_characters,
    gauss_sum,
    induce_primitive,
    is_primitive,
    principal_character,
    unit_group_basis,
)
from charsum.integers import divisors, euler_phi, factor
from charsum.util import PreconditionError, SplitMix64


def chars(D):
    return list(enumerate_characters(unit_group_basis(D)))


def conductor_oracle(chi):
    """Definition: smallest q | D with chi trivial on units = 1 (mod q)."""
    D = chi.modulus
    for q in divisors(factor(D)):
        if all(
            chi(u).is_one
            for u in range(1, max(D, 1) + 1, q)
            if math.gcd(u, max(D, 1)) == 1
        ):
            return q
    raise AssertionError("no divisor worked")


def test_basis_trivial_modulus():
    b = unit_group_basis(1)
    assert b.orders == ()
    assert b.phi == 1
    assert b.exponents_of(0) == ()  # everything is a unit mod 1


def test_basis_mod_8_structure():
    b = unit_group_basis(8)
    assert b.orders == (2, 2)
    gens = b.generators
    assert gens[0][0] == 7  # -1 mod 8
    assert gens[1][0] == 5


def test_basis_generator_orders():
    for D in (4, 8, 16, 24, 45, 360, 7200, 2 * 3**4 * 25):
        b = unit_group_basis(D)
        assert math.prod(b.orders) == euler_phi(factor(D)) == b.phi
        for (g, m), f in zip(b.generators, b.factors):
            assert pow(g, m, f.pe) == 1
            for q, _ in factor(m).factors:
                assert pow(g, m // q, f.pe) != 1


def test_exponent_vectors_unique_mod_45():
    b = unit_group_basis(45)
    seen = {}
    for u in range(45):
        ev = b.exponents_of(u)
        if math.gcd(u, 45) != 1:
            assert ev is None
        else:
            assert ev is not None
            assert all(0 <= e < m for e, m in zip(ev, b.orders))
            assert ev not in seen, f"duplicate vector for {u} and {seen.get(ev)}"
            seen[ev] = u
    assert len(seen) == 24


def test_enumerate_counts_and_distinctness():
    assert len(chars(1)) == 1
    assert len(chars(5)) == 4
    cs = chars(12)
    assert len(cs) == 4
    assert cs[0].is_principal
    assert sum(1 for c in cs if not c.is_principal) == 3
    tables = [tuple(np.round(c.value_table(), 9)) for c in cs]
    assert len(set(tables)) == 4


def test_character_count_matches_phi_sampled():
    for D in (2, 3, 16, 17, 100, 243, 512, 1023):
        assert len(chars(D)) == euler_phi(factor(D))


def test_eval_examples():
    chi0 = principal_character(12)
    assert chi0(7).is_one
    assert chi0(6).zero
    # quadratic character mod 5 via Euler criterion oracle
    quad = [c for c in chars(5) if not c.is_principal and (c(2) * c(2)).is_one]
    assert len(quad) == 1
    chi = quad[0]
    assert chi(2).to_complex() == pytest.approx(-1.0)
    for n in range(1, 5):
        ls = pow(n, (5 - 1) // 2, 5)  # Euler criterion
        want = 1.0 if ls == 1 else -1.0
        assert chi(n).to_complex() == pytest.approx(want)


def test_eval_zero_exactly_on_shared_factors():
    for D in (12, 45, 40):
        for chi in chars(D):
            for n in range(-5, 2 * D):
                v = chi(n)
                assert v.zero == (math.gcd(n % D, D) > 1)


def test_complete_multiplicativity_exact():
    rng = SplitMix64(5)
    for D in (9, 24, 35, 280):
        cs = chars(D)
        for _ in range(40):
            chi = cs[rng.below(len(cs))]
            u = rng.randint(1, 10 * D)
            v = rng.randint(1, 10 * D)
            assert chi(u * v) == chi(u) * chi(v)


def test_character_value_arithmetic():
    a = CharacterValue.root(1, 3)
    b = CharacterValue.root(1, 6)
    assert a * b == CharacterValue.root(1, 2)
    assert (a * a * a).is_one
    z = CharacterValue.zero_value()
    assert (a * z).zero
    assert abs(abs(b.to_complex()) - 1.0) < 1e-12
    assert a.conjugate() == CharacterValue.root(2, 3)


def test_conductor_examples_and_oracle():
    assert conductor(principal_character(12)).value == 1
    # quadratic character mod 8 viewed mod 24: match values, expect conductor 8
    chi8 = [c for c in chars(8) if c.exponents == (0, 1)][0]
    assert conductor(chi8).value == 8
    lifted = [
        c
        for c in chars(24)
        if all(
            c(u) == chi8(u)
            for u in range(1, 24)
            if math.gcd(u, 24) == 1
        )
    ]
    assert len(lifted) == 1
    assert conductor(lifted[0]).value == 8
    for p in (3, 7, 13):
        for chi in chars(p):
            assert conductor(chi).value == (1 if chi.is_principal else p)


def test_conductor_formula_matches_definition():
    for D in (1, 2, 4, 8, 16, 32, 12, 24, 45, 60, 72, 100, 120, 200):
        for chi in chars(D):
            assert conductor(chi).value == conductor_oracle(chi)


def test_induce_primitive_fixed_point_and_agreement():
    chi8 = [c for c in chars(8) if c.exponents == (0, 1)][0]
    assert induce_primitive(chi8) is chi8
    lifted = [
        c
        for c in chars(24)
        if not c.is_principal
        and all(c(u) == chi8(u) for u in range(1, 24) if math.gcd(u, 24) == 1)
    ][0]
    back = induce_primitive(lifted)
    assert back.modulus == 8
    assert back == chi8
    with pytest.raises(PreconditionError):
        induce_primitive(principal_character(24))


def test_induce_primitive_value_agreement_sampled():
    rng = SplitMix64(77)
    for D in (24, 45, 120, 360):
        for chi in chars(D):
            if chi.is_principal:
                continue
            chi_q = induce_primitive(chi)
            assert is_primitive(chi_q)
            assert conductor(chi).value == chi_q.modulus
            picked = 0
            while picked < 100:
                n = rng.randint(1, 50 * D)
                if math.gcd(n, D) != 1:
                    continue
                picked += 1
                assert chi(n) == chi_q(n)


def test_induced_character_has_period_q():
    chi = [c for c in chars(45) if not c.is_principal][3]
    chi_q = induce_primitive(chi)
    q = chi_q.modulus
    for n in range(1, q + 1):
        base = chi_q(n)
        assert chi_q(n + q) == base
        assert chi_q(n + 17 * q) == base


def test_gauss_sum_trivial_and_quadratic():
    assert gauss_sum(principal_character(1)) == pytest.approx(1.0)
    quad = [c for c in chars(5) if not c.is_principal and (c(2) * c(2)).is_one][0]
    tau = gauss_sum(quad)
    # classical value sqrt(5) for the quadratic character mod 5
    assert tau == pytest.approx(math.sqrt(5.0), abs=1e-12)
    assert abs(tau) ** 2 == pytest.approx(5.0, rel=1e-12)


def test_gauss_sum_modulus_sweep_small():
    for q in range(1, 61):
        for chi in chars(q):
            if not is_primitive(chi):
                continue
            tau = gauss_sum(chi)
            assert abs(abs(tau) ** 2 - q) < 1e-6 * q


def test_gauss_sum_rejects_imprimitive():
    chi = principal_character(12)
    with pytest.raises(PreconditionError):
        gauss_sum(chi)


def test_orthogonality_small_sweep():
    for D in (1, 2, 3, 8, 12, 45, 90):
        basis = unit_group_basis(D)
        tables = all_character_tables(basis)
        phi = basis.phi
        sums = tables.sum(axis=0)
        for n in range(D):
            want = phi if n % D == 1 % D else 0.0
            assert abs(sums[n] - want) < 1e-9 * phi


def test_all_character_tables_match_value_table():
    for D in (7, 16, 24, 45):
        basis = unit_group_basis(D)
        stacked = all_character_tables(basis)
        for i, chi in enumerate(enumerate_characters(basis)):
            assert np.allclose(stacked[i], chi.value_table(), atol=1e-12)


def test_character_weight_transform_matches_direct_sums():
    rng = SplitMix64(11)
    for D in (1, 2, 12, 45, 101):
        basis = unit_group_basis(D)
        weights = np.array(
            [complex(rng.below(1000) / 997.0, rng.below(1000) / 991.0) for _ in range(D)]
        )
        spectrum = character_weight_transform(basis, weights)
        flat = spectrum.reshape(-1)
        for i, chi in enumerate(enumerate_characters(basis)):
            direct = sum(
                chi(u).to_complex() * weights[u]
                for u in range(D)
                if math.gcd(u, max(D, 1)) == 1
            )
            assert abs(flat[i] - direct) < 1e-9 * (1 + np.abs(weights).sum())


def test_json_round_trip():
    chi = [c for c in chars(45) if not c.is_principal][5]
    blob = chi.to_json_dict()
    assert blob == {"modulus": 45, "exponents": list(chi.exponents)}
    back = character_from_json(blob)
    assert back == chi


def test_basis_rejects_bad_exponents():
    basis = unit_group_basis(12)
    with pytest.raises(PreconditionError):
        DirichletCharacter(basis, (99, 0))


def test_large_component_uses_bsgs_fallback():
    p = 1_000_003  # prime > table limit: scalar path only
    basis = unit_group_basis(p)
    f = basis.factors[0]
    assert f.dlog is None
    g = f.generator
    rng = SplitMix64(17)
    for _ in range(10):
        k = rng.below(p - 1)
        assert basis.exponents_of(pow(g, k, p)) == (k,)
    chi = DirichletCharacter(basis, (1,))
    u, v = 123456, 654321
    assert chi(u * v) == chi(u) * chi(v)
    assert chi(p + 1).is_one
    with pytest.raises(PreconditionError):
        basis.exponent_matrix()
