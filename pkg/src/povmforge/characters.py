"""Additive characters of GF(q) and characters of the norm-one subgroup N.

Character values are roots of unity, so every character sum is carried two
ways: as a floating complex number and as an exact integer histogram over
exponents (``RootOfUnityHistogram``). Bound-critical magnitudes are computed
from the histogram.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainMismatch, FieldMismatch, NotInSubgroup
from .finite_field import FieldElement, FieldSpec, TowerSpec, n_discrete_log, trace_table


def root_of_unity(j: int, n: int) -> complex:
    """Principal-branch ``exp(2*pi*i*j/n)``."""
    return cmath.exp(2j * math.pi * (j % n) / n)


def roots_table(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


@dataclass(frozen=True)
class RootOfUnityHistogram:
    """``counts[j]`` occurrences of ``exp(2*pi*i*j/order)``."""

    order: int
    counts: tuple[int, ...]

    @classmethod
    def from_exponents(cls, exponents: Iterable[int], order: int) -> RootOfUnityHistogram:
        counts = [0] * order
        for e in exponents:
            counts[int(e) % order] += 1
        return cls(order, tuple(counts))

    @property
    def size(self) -> int:
        return sum(abs(c) for c in self.counts)

    def value(self) -> complex:
        re = math.fsum(c * math.cos(2 * math.pi * j / self.order) for j, c in enumerate(self.counts) if c)
        im = math.fsum(c * math.sin(2 * math.pi * j / self.order) for j, c in enumerate(self.counts) if c)
        return complex(re, im)

    def abs2(self) -> float:
        """Squared modulus from the integer autocorrelation of ``counts``.

        ``|sum_j c_j w^j|^2 = sum_d R(d) cos(2 pi d / n)`` with
        ``R(d) = sum_j c_j c_(j+d)``; only the final cosine weighting is
        floating point.
        """
        n = self.order
        nz = [(j, c) for j, c in enumerate(self.counts) if c]
        corr: dict[int, int] = {}
        for j, cj in nz:
            for l, cl in nz:
                d = (l - j) % n
                corr[d] = corr.get(d, 0) + cj * cl
        terms = [r * math.cos(2 * math.pi * d / n) for d, r in sorted(corr.items()) if r]
        return max(math.fsum(terms), 0.0)

    def modulus(self) -> float:
        return math.sqrt(self.abs2())

    def to_json(self) -> dict:
        return {"order": self.order, "counts": list(self.counts)}


@dataclass(frozen=True)
class AdditiveCharacter:
    """``chi_a(b) = exp(2*pi*i*tr(ab)/p)``."""

    spec: FieldSpec
    a: int

    def __post_init__(self):
        if isinstance(self.a, FieldElement):
            self.spec.check(self.a)
            object.__setattr__(self, "a", self.a.value)
        if not 0 <= self.a < self.spec.q:
            raise ValueError(f"character index {self.a} outside GF({self.spec.q})")

    @property
    def order(self) -> int:
        return self.spec.p

    @property
    def is_trivial(self) -> bool:
        return self.a == 0

    def exponent(self, b) -> int:
        return int(trace_table(self.spec)[self.spec.mul(self.a, _as_int(self.spec, b))])

    def exponents(self, values) -> np.ndarray:
        """Trace exponents for an array of encoded elements."""
        return trace_table(self.spec)[self.spec.mul_array(self.a, np.asarray(values, dtype=np.int_))]

    def __call__(self, b) -> complex:
        return eval_additive(self, b)


def _as_int(spec: FieldSpec, b) -> int:
    if isinstance(b, FieldElement):
        if b.spec != spec:
            raise FieldMismatch(f"element of {b.spec!r} used with {spec!r}")
        return b.value
    b = int(b)
    if not 0 <= b < spec.q:
        raise DomainMismatch(f"{b} is not an element of GF({spec.q})")
    return b


def eval_additive(chi: AdditiveCharacter, b) -> complex:
    return root_of_unity(chi.exponent(b), chi.spec.p)


@dataclass(frozen=True)
class OrthogonalityReport:
    q: int
    max_deviation: float
    row_sums: tuple[complex, ...]
    column_sums: tuple[complex, ...]
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def additive_character_table(spec: FieldSpec) -> np.ndarray:
    """``T[a, b] = chi_a(b)``."""
    a = np.arange(spec.q)
    prod = spec.mul_array(a[:, None], a[None, :])
    return roots_table(spec.p)[trace_table(spec)[prod]]


def orthogonality_check(spec: FieldSpec) -> OrthogonalityReport:
    """Row sums ``q [a = 0]`` and column sums ``q [b = 0]`` of the character table."""
    q = spec.q
    T = additive_character_table(spec)
    rows = T.sum(axis=1)
    cols = T.sum(axis=0)
    expected = np.zeros(q)
    expected[0] = q
    dev = max(np.max(np.abs(rows - expected)), np.max(np.abs(cols - expected)))
    return OrthogonalityReport(q, float(dev), tuple(rows), tuple(cols), 1e-9 * q)


@dataclass(frozen=True)
class NSubgroupCharacter:
    """``psi_m(alpha^(j(q-1))) = zeta^(mj)`` with ``zeta`` a primitive ``(q^2+q+1)``-th root."""

    tower: TowerSpec
    m: int

    def __post_init__(self):
        object.__setattr__(self, "m", self.m % self.tower.n_order)

    @property
    def order(self) -> int:
        return self.tower.n_order

    @property
    def is_trivial(self) -> bool:
        return self.m == 0

    def exponent(self, x) -> int:
        return self.m * n_discrete_log(x, self.tower) % self.order

    def inverse(self) -> NSubgroupCharacter:
        return NSubgroupCharacter(self.tower, -self.m)

    def __mul__(self, other: NSubgroupCharacter) -> NSubgroupCharacter:
        return NSubgroupCharacter(self.tower, self.m + other.m)

    def __call__(self, x) -> complex:
        return eval_n_character(self, x)


def eval_n_character(psi: NSubgroupCharacter, x) -> complex:
    if isinstance(x, FieldElement):
        psi.tower.ext.check(x)
    return root_of_unity(psi.exponent(x), psi.order)


def n_character_table(tower: TowerSpec) -> np.ndarray:
    """``T[m, j] = psi_m(alpha^((j+1)(q-1)))``, rows indexed by character."""
    n = tower.n_order
    j = np.arange(1, n + 1)
    m = np.arange(n)
    return roots_table(n)[(m[:, None] * j[None, :]) % n]


def character_sum_over(values: Sequence, character) -> tuple[complex, RootOfUnityHistogram]:
    """Floating and exact forms of ``sum(character(v) for v in values)``."""
    try:
        exps = [character.exponent(v) for v in values]
    except NotInSubgroup as exc:
        raise DomainMismatch(str(exc)) from exc
    hist = RootOfUnityHistogram.from_exponents(exps, character.order)
    roots = roots_table(character.order)
    total = complex(np.sum(roots[np.asarray(exps, dtype=np.int_)])) if exps else 0j
    return total, hist


def pn_character_sum(f_table: Sequence[int], spec: FieldSpec, a: int, b: int, chi_index: int = 1):
    """``sum_x chi(a f(x) + b x)`` for a value table of ``f``."""
    xs = np.arange(spec.q)
    args = spec.add_array(spec.mul_array(a, np.asarray(f_table)), spec.mul_array(b, xs))
    return character_sum_over(args, AdditiveCharacter(spec, chi_index))
