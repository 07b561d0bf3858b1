"""charsum: exact evaluation and empirical verification of Dirichlet
character sums over shifted primes, with ASSERT/MONITOR bound reports."""

from .characters import (
    CharacterValue,
    DirichletCharacter,
    UnitGroupBasis,
    character_from_json,
    conductor,
    enumerate_characters,
    gauss_sum,
    induce_primitive,
    is_primitive,
    principal_character,
    unit_group_basis,
)
from .integers import (
    FactoredInteger,
    MangoldtTable,
    NotInvertibleError,
    divisors,
    euler_phi,
    factor,
    mangoldt_sieve,
    mobius,
    mod_inverse,
    omega,
    smooth_count,
    tau_r,
    truncated_mobius,
)
from .sums import (
    CongruenceInstance,
    SumSpec,
    SumValue,
    burgess_moment_2r,
    burgess_sextic,
    congruence_census,
    coprime_count_check,
    double_sum,
    evaluate_spec,
    hb_decompose,
    mobius_recombination,
    restricted_sum,
    rho_divisor_count,
    shifted_prime_sum,
    short_sum,
    sy_sum,
)
from .bounds import (
    BoundCheckRecord,
    BoundConfig,
    big_divisor_tail,
    burgess_check_2r,
    divisor_moment_check,
    identities_verify,
    lemma8_rhs,
    lemma8_verify,
    smooth_bound_check,
    theorem_report,
    theorem_rhs,
)
from .util import PreconditionError, SplitMix64, WorkBudgetError

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
