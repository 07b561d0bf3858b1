"""Dirichlet characters mod composite D over an explicit unit-group basis.

Conventions
-----------
The unit group (Z/D)* is decomposed into cyclic factors in a fixed canonical
order: the 2-part first (nothing for 2, one order-2 factor generated by -1
for 4, the pair (-1, 5) with orders (2, 2^{k-2}) for 2^k with k >= 3), then
one factor per odd prime power p^a generated by its least primitive root.
A character is an exponent vector against that basis and evaluates to exact
roots of unity: floating point only enters when sums are accumulated.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .integers import FactoredInteger, as_factored, factor
from .util import PreconditionError, complex_fsum, require


@dataclass(frozen=True)
class CharacterValue:
    """Exact character value: zero, or the root of unity e(numerator/denominator)."""

    numerator: int
    denominator: int
    zero: bool = False

    @staticmethod
    def zero_value() -> "CharacterValue":
        return CharacterValue(0, 1, True)

    @staticmethod
    def root(numerator: int, denominator: int) -> "CharacterValue":
        require(denominator >= 1, "denominator", "must be positive")
        num = numerator % denominator
        g = math.gcd(num, denominator)
        return CharacterValue(num // g, denominator // g)

    @property
    def is_one(self) -> bool:
        return not self.zero and self.numerator == 0

    def __mul__(self, other: "CharacterValue") -> "CharacterValue":
        if self.zero or other.zero:
            return CharacterValue.zero_value()
        den = math.lcm(self.denominator, other.denominator)
        num = self.numerator * (den // self.denominator) + other.numerator * (
            den // other.denominator
        )
        return CharacterValue.root(num, den)

    def conjugate(self) -> "CharacterValue":
        if self.zero:
            return self
        return CharacterValue.root(-self.numerator, self.denominator)

    def to_complex(self) -> complex:
        if self.zero:
            return 0.0 + 0.0j
        angle = 2.0 * math.pi * self.numerator / self.denominator
        return complex(math.cos(angle), math.sin(angle))


# components up to this size get a full lookup table; beyond it the scalar
# path falls back to baby-step/giant-step per query
DLOG_TABLE_LIMIT = 10**6


@dataclass
class _CyclicFactor:
    """One cyclic factor of (Z/D)*, living inside the prime power p^k."""

    prime: int
    power: int
    pe: int
    order: int
    generator: int  # residue mod pe
    kind: str  # "odd" | "four" | "sign" | "five"
    dlog: np.ndarray | None  # residue mod pe -> exponent, -1 on non-units

    def dlog_of(self, r: int) -> int:
        if self.dlog is not None:
            return int(self.dlog[r])
        if self.kind == "sign":
            # r is +-5^j mod 2^k; the sign bit is decided by r mod 4
            return 0 if r % 4 == 1 else 1
        if self.kind == "five":
            target = r if r % 4 == 1 else (self.pe - r) % self.pe
            return _bsgs(5, target, self.pe, self.order)
        return _bsgs(self.generator, r, self.pe, self.order)


def _bsgs(g: int, h: int, modulus: int, order: int) -> int:
    """Discrete log of h in <g> (order known), meet-in-the-middle."""
    m = math.isqrt(order - 1) + 1
    baby = {}
    acc = 1
    for j in range(m):
        baby.setdefault(acc, j)
        acc = acc * g % modulus
    giant = pow(acc, -1, modulus)  # acc = g^m, a unit
    cur = h % modulus
    for i in range(m + 1):
        if cur in baby:
            return (i * m + baby[cur]) % order
        cur = cur * giant % modulus
    raise ValueError(f"{h} is not in the subgroup generated by {g} mod {modulus}")


def _least_primitive_root(pe: int, p: int) -> int:
    phi = pe // p * (p - 1)
    prime_divs = [q for q, _ in factor(phi).factors]
    g = 2
    while True:
        if math.gcd(g, pe) == 1 and all(pow(g, phi // q, pe) != 1 for q in prime_divs):
            return g
        g += 1


def _dlog_table_cyclic(pe: int, g: int, order: int) -> np.ndarray:
    dl = np.full(pe, -1, dtype=np.int64)
    acc = 1
    for j in range(order):
        dl[acc] = j
        acc = acc * g % pe
    return dl


def _two_part_factors(k: int) -> list[_CyclicFactor]:
    pe = 1 << k
    if k == 1:
        return []
    if k == 2:
        dl = np.full(4, -1, dtype=np.int64)
        dl[1], dl[3] = 0, 1
        return [_CyclicFactor(2, 2, 4, 2, 3, "four", dl)]
    half = 1 << (k - 2)
    if pe > DLOG_TABLE_LIMIT:
        return [
            _CyclicFactor(2, k, pe, 2, pe - 1, "sign", None),
            _CyclicFactor(2, k, pe, half, 5, "five", None),
        ]
    dl_sign = np.full(pe, -1, dtype=np.int64)
    dl_five = np.full(pe, -1, dtype=np.int64)
    acc = 1
    for j in range(half):
        dl_sign[acc], dl_five[acc] = 0, j
        dl_sign[pe - acc], dl_five[pe - acc] = 1, j
        acc = acc * 5 % pe
    return [
        _CyclicFactor(2, k, pe, 2, pe - 1, "sign", dl_sign),
        _CyclicFactor(2, k, pe, half, 5, "five", dl_five),
    ]


def _crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    m = m1 * m2
    u = pow(m1, -1, m2)
    return (r1 + m1 * ((r2 - r1) * u % m2)) % m, m


class UnitGroupBasis:
    """Canonical cyclic decomposition of (Z/D)* with discrete-log tables.

    Immutable after construction; safe to share across threads.  The lazy
    numpy caches are derived data and idempotent to rebuild.
    """

    def __init__(self, modulus: FactoredInteger):
        self.modulus = modulus
        facs: list[_CyclicFactor] = []
        for p, a in modulus.factors:
            if p == 2:
                facs.extend(_two_part_factors(a))
            else:
                pe = p**a
                g = _least_primitive_root(pe, p)
                order = pe // p * (p - 1)
                table = _dlog_table_cyclic(pe, g, order) if pe <= DLOG_TABLE_LIMIT else None
                facs.append(_CyclicFactor(p, a, pe, order, g, "odd", table))
        self.factors = tuple(facs)
        self.orders = tuple(f.order for f in facs)
        self.phi = math.prod(self.orders) if facs else 1
        self.exponent = math.lcm(*self.orders) if facs else 1
        self._emat = None
        self._unit_mask = None
        self._flat_index = None
        self._conductor_grid = None

    # -- exact per-integer path ------------------------------------------

    def exponents_of(self, n: int) -> tuple[int, ...] | None:
        """Exponent vector of n, or None when gcd(n, D) > 1."""
        D = self.modulus.value
        r = n % D
        if math.gcd(r, D) != 1:
            return None
        return tuple(f.dlog_of(r % f.pe) for f in self.factors)

    @property
    def generators(self) -> tuple[tuple[int, int], ...]:
        """(residue mod D, order) per cyclic factor, via CRT against the
        other prime-power components (where each generator acts as 1)."""
        out = []
        D = self.modulus.value
        for f in self.factors:
            r, m = f.generator % f.pe, f.pe
            for p, a in self.modulus.factors:
                pe = p**a
                if pe != f.pe:
                    r, m = _crt_pair(r, m, 1, pe)
            out.append((r if D > 1 else 0, f.order))
        return tuple(out)

    # -- vectorized caches -----------------------------------------------

    def exponent_matrix(self) -> np.ndarray:
        """Shape (t, D); column u is the exponent vector of u (-1 on non-units)."""
        if self._emat is None:
            D = self.modulus.value
            t = len(self.factors)
            emat = np.empty((t, D), dtype=np.int64)
            residues = np.arange(D, dtype=np.int64)
            for i, f in enumerate(self.factors):
                require(
                    f.dlog is not None,
                    "modulus",
                    f"component {f.pe} exceeds the discrete-log table limit "
                    f"({DLOG_TABLE_LIMIT}); only scalar evaluation is available",
                )
                emat[i] = f.dlog[residues % f.pe]
            self._emat = emat
        return self._emat

    def unit_mask(self) -> np.ndarray:
        if self._unit_mask is None:
            # component tables alone are not enough: when 2 || D the 2-part
            # contributes no cyclic factor yet even residues are non-units
            D = self.modulus.value
            self._unit_mask = np.gcd(np.arange(D, dtype=np.int64), D) == 1
        return self._unit_mask

    def unit_flat_index(self) -> np.ndarray:
        """Residue -> flat index into the exponent lattice (-1 on non-units)."""
        if self._flat_index is None:
            D = self.modulus.value
            if not self.factors:
                flat = np.zeros(D, dtype=np.int64)
                flat[~self.unit_mask()] = -1
                self._flat_index = flat
            else:
                strides = np.ones(len(self.orders), dtype=np.int64)
                for i in range(len(self.orders) - 2, -1, -1):
                    strides[i] = strides[i + 1] * self.orders[i + 1]
                emat = self.exponent_matrix()
                flat = (strides[:, None] * np.where(emat >= 0, emat, 0)).sum(axis=0)
                flat[~self.unit_mask()] = -1
                self._flat_index = flat
        return self._flat_index

    def conductor_grid(self) -> np.ndarray:
        """Conductor of every character, indexed by exponent vector."""
        if self._conductor_grid is None:
            shape = self.orders if self.factors else (1,)
            grid = np.ones(shape, dtype=np.int64)
            t = len(self.factors)
            i = 0
            while i < t:
                f = self.factors[i]
                if f.kind == "sign":
                    five = self.factors[i + 1]
                    block = np.ones((2, five.order), dtype=np.int64)
                    block[1, 0] = 4
                    for e1 in range(1, five.order):
                        d1 = five.order // math.gcd(e1, five.order)
                        block[0, e1] = block[1, e1] = 4 * d1
                    dims = [1] * t
                    dims[i], dims[i + 1] = 2, five.order
                    grid = grid * block.reshape(dims)
                    i += 2
                    continue
                contrib = np.ones(f.order, dtype=np.int64)
                if f.kind == "four":
                    contrib[1] = 4
                else:
                    for e in range(1, f.order):
                        d = f.order // math.gcd(e, f.order)
                        s = 0
                        while d % f.prime == 0:
                            d //= f.prime
                            s += 1
                        contrib[e] = f.prime ** (s + 1)
                dims = [1] * t
                dims[i] = f.order
                grid = grid * contrib.reshape(dims)
                i += 1
            self._conductor_grid = grid
        return self._conductor_grid


@lru_cache(maxsize=256)
def _cached_basis(D: int) -> UnitGroupBasis:
    return UnitGroupBasis(factor(D))


def unit_group_basis(D) -> UnitGroupBasis:
    """Canonical basis for (Z/D)*; cached per modulus."""
    f = as_factored(D)
    return _cached_basis(f.value)


class DirichletCharacter:
    """A character mod D as an exponent vector over the canonical basis."""

    __slots__ = ("basis", "exponents", "_table")

    def __init__(self, basis: UnitGroupBasis, exponents: tuple[int, ...]):
        exponents = tuple(int(e) for e in exponents)
        require(len(exponents) == len(basis.orders), "exponents", "length must match basis")
        for e, m in zip(exponents, basis.orders):
            require(0 <= e < m, "exponents", f"need 0 <= {e} < {m}")
        self.basis = basis
        self.exponents = exponents
        self._table = None

    @property
    def modulus(self) -> int:
        return self.basis.modulus.value

    @property
    def is_principal(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def __call__(self, n: int) -> CharacterValue:
        ev = self.basis.exponents_of(n)
        if ev is None:
            return CharacterValue.zero_value()
        E = self.basis.exponent
        num = 0
        for a, e, m in zip(self.exponents, ev, self.basis.orders):
            num += a * e * (E // m)
        return CharacterValue.root(num, E)

    def value_table(self) -> np.ndarray:
        """chi on residues 0..D-1 as complex128 (cached on the character)."""
        if self._table is None:
            basis = self.basis
            D = basis.modulus.value
            mask = basis.unit_mask()
            if not basis.factors:
                self._table = mask.astype(np.complex128)
            else:
                E = basis.exponent
                emat = basis.exponent_matrix()
                weights = np.array(
                    [a * (E // m) for a, m in zip(self.exponents, basis.orders)],
                    dtype=np.int64,
                )
                scaled = (weights[:, None] * np.where(emat >= 0, emat, 0)).sum(axis=0) % E
                table = np.exp((2j * np.pi / E) * scaled)
                table[~mask] = 0.0
                self._table = table
        return self._table

    def conjugate(self) -> "DirichletCharacter":
        exps = tuple((-a) % m for a, m in zip(self.exponents, self.basis.orders))
        return DirichletCharacter(self.basis, exps)

    def to_json_dict(self) -> dict:
        return {"modulus": self.modulus, "exponents": list(self.exponents)}

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DirichletCharacter)
            and self.modulus == other.modulus
            and self.exponents == other.exponents
        )

    def __hash__(self) -> int:
        return hash((self.modulus, self.exponents))

    def __repr__(self) -> str:
        return f"DirichletCharacter(mod {self.modulus}, exponents={self.exponents})"


def character_from_json(data: dict) -> DirichletCharacter:
    return DirichletCharacter(unit_group_basis(int(data["modulus"])), tuple(data["exponents"]))


def principal_character(D) -> DirichletCharacter:
    basis = unit_group_basis(D)
    return DirichletCharacter(basis, tuple(0 for _ in basis.orders))


def enumerate_characters(basis: UnitGroupBasis):
    """All phi(D) characters, lexicographic over exponent vectors, principal first."""
    for exps in itertools.product(*(range(m) for m in basis.orders)):
        yield DirichletCharacter(basis, exps)


def conductor(chi: DirichletCharacter) -> FactoredInteger:
    """Smallest q | D such that chi is trivial on units congruent to 1 mod q."""
    grid = chi.basis.conductor_grid()
    if not chi.basis.factors:
        return factor(1)
    return factor(int(grid[chi.exponents]))


def is_primitive(chi: DirichletCharacter) -> bool:
    return conductor(chi).value == chi.modulus


def _lift_unit(r: int, q: int, D: FactoredInteger) -> int:
    """Some u with u = r (mod q) and gcd(u, D) = 1."""
    acc_r, acc_m = 0, 1
    for p, a in D.factors:
        pe = p**a
        if q % p == 0:
            kq = 0
            qq = q
            while qq % p == 0:
                qq //= p
                kq += 1
            comp = r % (p**kq)
        else:
            comp = 1
        acc_r, acc_m = _crt_pair(acc_r, acc_m, comp, pe)
    return acc_r if D.value > 1 else 1


def induce_primitive(chi: DirichletCharacter) -> DirichletCharacter:
    """The primitive character mod conductor(chi) generating chi."""
    require(not chi.is_principal, "chi", "principal characters are not induced")
    q = conductor(chi).value
    if q == chi.modulus:
        return chi
    basis_q = unit_group_basis(q)
    exps = []
    for (g, m) in basis_q.generators:
        u = _lift_unit(g, q, chi.basis.modulus)
        v = chi(u)
        require(not v.zero, "chi", "lift landed on a non-unit")  # cannot happen
        num = v.numerator * m
        require(num % v.denominator == 0, "chi", "value is not an order-m root")
        exps.append((num // v.denominator) % m)
    out = DirichletCharacter(basis_q, tuple(exps))
    assert conductor(out).value == q
    return out


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum_a chi(a) e(a/q) for primitive chi mod q."""
    require(is_primitive(chi), "chi", "gauss_sum needs a primitive character")
    q = chi.modulus
    if q == 1:
        return 1.0 + 0.0j
    table = chi.value_table()
    phases = np.exp((2j * np.pi / q) * np.arange(q))
    return complex_fsum(table * phases)


# ---------------------------------------------------------------------------
# Whole-group machinery (all characters at once)


def all_character_tables(basis: UnitGroupBasis) -> np.ndarray:
    """Matrix of shape (phi(D), D): row i is the value table of the i-th
    character in enumeration order.  Intended for small moduli."""
    D = basis.modulus.value
    if not basis.factors:
        return basis.unit_mask().astype(np.complex128)[None, :]
    orders = basis.orders
    E = basis.exponent
    vecs = np.array(list(itertools.product(*(range(m) for m in orders))), dtype=np.int64)
    weights = np.array([E // m for m in orders], dtype=np.int64)
    emat = np.where(basis.exponent_matrix() >= 0, basis.exponent_matrix(), 0)
    phases = (vecs * weights[None, :]) @ emat % E
    tables = np.exp((2j * np.pi / E) * phases)
    tables[:, ~basis.unit_mask()] = 0.0
    return tables


def character_weight_transform(basis: UnitGroupBasis, weights: np.ndarray) -> np.ndarray:
    """S[a] = sum over units u of chi_a(u) * weights[u], for every character
    at once, returned on the exponent-vector lattice.

    This is the DFT over the unit group: identical (up to rounding) to
    evaluating each character sum separately, at O(phi log phi) cost.
    """
    D = basis.modulus.value
    require(len(weights) == D, "weights", "must have one entry per residue")
    shape = basis.orders if basis.factors else (1,)
    lattice = np.zeros(shape, dtype=np.complex128)
    flat = basis.unit_flat_index()
    units = flat >= 0
    np.add.at(lattice.reshape(-1), flat[units], np.asarray(weights, dtype=np.complex128)[units])
    if not basis.factors:
        return lattice
    return np.fft.ifftn(lattice) * basis.phi
