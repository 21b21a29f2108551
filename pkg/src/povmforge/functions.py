"""2-to-1 mappings, PN functions and the f-permutation.

Predicates work on value tables (``table[x] = f(x)`` over encoded elements),
so they apply to arbitrary set maps as well as to polynomials.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EvenQ, NotTwoToOne, TooLarge
from .finite_field import FieldElement, FieldSpec


@dataclass(frozen=True)
class PolyFunction:
    """``f(x) = sum_i coeffs[i] x^i`` over ``spec``; coefficients are encoded elements."""

    spec: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = []
        for c in self.coeffs:
            if isinstance(c, FieldElement):
                self.spec.check(c)
                c = c.value
            c = int(c)
            if not 0 <= c < self.spec.q:
                raise ValueError(f"coefficient {c} outside GF({self.spec.q})")
            cs.append(c)
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs) or (0,))

    @classmethod
    def quadratic(cls, spec: FieldSpec, s: int, t: int = 0, w: int = 0) -> PolyFunction:
        return cls(spec, (w, t, s))

    def __call__(self, x) -> int:
        x = int(x)
        acc = 0
        for c in reversed(self.coeffs):
            acc = self.spec.add(self.spec.mul(acc, x), c)
        return acc

    def table(self) -> tuple[int, ...]:
        return _table(self)

    def shifted(self, d: int) -> PolyFunction:
        cs = list(self.coeffs)
        cs[0] = self.spec.add(cs[0], int(d))
        return PolyFunction(self.spec, tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if any(self.coeffs) else -1

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = str(c) if (c != 1 or i == 0) else ""
            terms.append(f"{coef}{'*' if coef and mono else ''}{mono}")
        return " + ".join(reversed(terms)) or "0"

    def to_json(self) -> dict:
        return {"coeffs": list(self.coeffs), "digits": [list(self.spec.digits(c)) for c in self.coeffs]}


@functools.lru_cache(maxsize=4096)
def _table(f: PolyFunction) -> tuple[int, ...]:
    spec = f.spec
    xs = np.arange(spec.q)
    acc = np.zeros(spec.q, dtype=np.int_)
    for c in reversed(f.coeffs):
        acc = spec.add_array(spec.mul_array(acc, xs), np.full(spec.q, c))
    return tuple(int(v) for v in acc)


@dataclass(frozen=True)
class FiberProfile:
    """Result of the 2-to-1 test: verdict, fibers and the exceptional image."""

    is_two_to_one: bool
    fibers: dict[int, tuple[int, ...]]
    exceptional: int | None

    def __bool__(self) -> bool:
        return self.is_two_to_one

    @property
    def sizes(self) -> dict[int, int]:
        return {y: len(xs) for y, xs in self.fibers.items()}


def fiber_profile(table: Sequence[int]) -> FiberProfile:
    """2-to-1 test on a value table of length ``q``.

    Even ``q``: every image has exactly two preimages. Odd ``q``: one image
    has a single preimage and every other image has two.
    """
    fibers: dict[int, list[int]] = {}
    for x, y in enumerate(table):
        fibers.setdefault(int(y), []).append(x)
    sizes = sorted(len(v) for v in fibers.values())
    q = len(table)
    singles = [y for y, xs in fibers.items() if len(xs) == 1]
    if q % 2 == 0:
        ok = all(s == 2 for s in sizes)
        exceptional = None
    else:
        ok = len(singles) == 1 and sizes.count(2) == (q - 1) // 2
        exceptional = singles[0] if ok else None
    return FiberProfile(ok, {y: tuple(xs) for y, xs in sorted(fibers.items())}, exceptional)


def is_two_to_one(f) -> FiberProfile:
    table = f.table() if isinstance(f, PolyFunction) else tuple(f)
    return fiber_profile(table)


def difference_table(f: PolyFunction, a: int) -> tuple[int, ...]:
    """``x -> f(x + a) - f(x)`` as a value table."""
    spec = f.spec
    t = np.asarray(f.table())
    xs = np.arange(spec.q)
    shifted = t[spec.add_array(xs, np.full(spec.q, int(a)))]
    return tuple(int(v) for v in spec.add_array(shifted, spec.neg_array(t)))


def is_pn(f: PolyFunction) -> bool:
    """Every difference map ``x -> f(x+a) - f(x)`` with ``a != 0`` is a bijection."""
    q = f.spec.q
    return all(len(set(difference_table(f, a))) == q for a in f.spec.nonzero())


def is_two_to_one_pn(f: PolyFunction) -> bool:
    return bool(is_two_to_one(f)) and is_pn(f)


@dataclass(frozen=True)
class FPermutation:
    """Ordering ``a_1, ..., a_q`` with ``f(a_i) = f(a_(q+2-i))`` for ``2 <= i <= (q+1)/2``."""

    order: tuple[int, ...]
    f: PolyFunction

    def pairs(self) -> list[tuple[int, int]]:
        """0-based index pairs ``(i, q - i)`` that share an f-value."""
        q = len(self.order)
        return [(i, q - i) for i in range(1, (q + 1) // 2)]

    def is_valid(self) -> bool:
        q = len(self.order)
        if sorted(self.order) != list(range(self.f.spec.q)) or q % 2 == 0:
            return False
        t = self.f.table()
        vals = [t[a] for a in self.order]
        if any(vals[i] != vals[j] for i, j in self.pairs()):
            return False
        return vals[0] not in {vals[i] for i in range(1, (q + 1) // 2)}

    def to_json(self) -> list[int]:
        return list(self.order)


def build_f_permutation(f: PolyFunction) -> FPermutation:
    """Deterministic f-permutation.

    ``a_1`` is the preimage of the exceptional image; the 2-element fibers
    fill positions ``(i, q+2-i)`` in order of their least element, which goes
    first.
    """
    q = f.spec.q
    if q % 2 == 0:
        raise EvenQ(f"an f-permutation needs odd q, got q={q}")
    prof = is_two_to_one(f)
    if not prof:
        raise NotTwoToOne(f"{f} is not a 2-to-1 mapping over GF({q})")
    order = [0] * q
    order[0] = prof.fibers[prof.exceptional][0]
    pairs = sorted(xs for xs in prof.fibers.values() if len(xs) == 2)
    for i, (lo, hi) in enumerate(pairs, start=1):
        order[i] = lo
        order[q - i] = hi
    return FPermutation(tuple(order), f)


def _stride_sample(items: list, limit: int | None) -> list:
    if limit is None or len(items) <= limit:
        return items
    step = len(items) / limit
    return [items[int(i * step)] for i in range(limit)]


def catalogue_2to1_pn(
    spec: FieldSpec,
    limit: int | None = 100,
    extra: Iterable[PolyFunction] = (),
) -> list[PolyFunction]:
    """2-to-1 PN functions over odd-characteristic GF(q).

    Emits ``x^2``, then quadratics ``s x^2 + t x + w`` with ``s w != 0``
    (deterministically stride-sampled down to ``limit``), then shifts
    ``x^2 + d`` and the shifts ``g + d`` of every user-supplied ``extra``
    function. Every returned function passes both predicates; duplicates are
    dropped while keeping first occurrence.
    """
    if spec.p == 2:
        raise EvenQ("quadratics are not PN in characteristic 2")
    nz = list(spec.nonzero())
    quads = [PolyFunction.quadratic(spec, s, t, w) for s in nz for t in spec.elements() for w in nz]
    candidates = [PolyFunction.quadratic(spec, 1)]
    candidates += _stride_sample(quads, limit)
    candidates += [PolyFunction.quadratic(spec, 1).shifted(d) for d in nz]
    for g in extra:
        candidates.append(g)
        candidates += [g.shifted(d) for d in nz]
    out, seen = [], set()
    for g in candidates:
        if g.coeffs in seen:
            continue
        seen.add(g.coeffs)
        if is_two_to_one_pn(g):
            out.append(g)
    return out


def count_two_to_one_formula(spec: FieldSpec) -> int:
    """Number of 2-to-1 set maps GF(q) -> GF(q), in exact integer arithmetic."""
    p, k = spec.p, spec.k
    f = math.factorial
    if p == 2:
        num = f(2**k) ** 2
        den = 2 ** (2 ** (k - 1)) * f(2 ** (k - 1)) ** 2
    else:
        q = p**k
        h = (q - 1) // 2
        num = p ** (2 * k) * f(q - 1) ** 2
        den = 2**h * f(h) ** 2
    count, rem = divmod(num, den)
    assert rem == 0
    return count


def count_two_to_one_bruteforce(spec: FieldSpec) -> int:
    """Enumerate all ``q^q`` value tables; only for ``q <= 5``."""
    q = spec.q
    if q > 5:
        raise TooLarge(f"brute-force enumeration of {q}^{q} maps refused (q > 5)")
    return sum(1 for t in itertools.product(range(q), repeat=q) if fiber_profile(t))
