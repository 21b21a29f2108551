"""Exact arithmetic in GF(p^k) and in the cubic extension GF(q^3).

Elements are encoded as integers in ``range(q)``: the base-``p`` digits of the
integer are the polynomial-basis coordinates, constant term first. Integer
order is therefore the enumeration order used everywhere in the package
(coefficient vectors ordered lexicographically, constant term fastest).

Multiplication goes through exponent/logarithm tables built once per field
from a primitive element; the tables are produced by the ``gf_power_table``
kernel.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import kernels
from .errors import FieldMismatch, NoModulusFound, NotInSubgroup, NotPrime, ZeroInput

_ADD_TABLE_LIMIT = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation by trial division."""
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q = p**k``; raises ``NotPrime`` if ``q`` is not a prime power."""
    fac = factorize(q) if q > 1 else {}
    if len(fac) != 1:
        raise NotPrime(f"{q} is not a prime power")
    ((p, k),) = fac.items()
    return p, k


# -- polynomials over GF(p), coefficient lists with constant term first ------

def _poly_rem(a: list[int], m: list[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv_lead % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return a[:dm]


def _monic_polys(deg: int, p: int) -> Iterator[list[int]]:
    for low in itertools.product(range(p), repeat=deg):
        # product() varies the last position fastest; reverse so the
        # constant term is fastest, matching the element enumeration order
        yield list(reversed(low)) + [1]


def is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree up to ``deg/2``."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for g in _monic_polys(d, p):
            if not any(_poly_rem(poly, g, p)):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^k) defined by a monic irreducible ``modulus`` of degree ``k``.

    ``modulus`` lists ``k + 1`` coefficients, constant term first.
    """

    p: int
    k: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if self.k < 1 or len(self.modulus) != self.k + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise ValueError("modulus coefficients must lie in [0, p)")
        if not is_irreducible(list(self.modulus), self.p):
            raise ValueError(f"modulus {self.modulus} is reducible over GF({self.p})")

    @property
    def q(self) -> int:
        return self.p**self.k

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, k={self.k}, modulus={self.modulus})"

    def __len__(self) -> int:
        return self.q

    # -- encoding ---------------------------------------------------------

    def digits(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def from_digits(self, digits) -> int:
        digits = list(digits)
        if len(digits) > self.k or any(not 0 <= int(d) < self.p for d in digits):
            raise ValueError(f"invalid coordinates {digits} for GF({self.p}^{self.k})")
        r = 0
        for d in reversed(digits):
            r = r * self.p + int(d)
        return r

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def element(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            self.check(value)
            return value
        if isinstance(value, (tuple, list)):
            value = self.from_digits(value)
        value = int(value)
        if not 0 <= value < self.q:
            raise ValueError(f"{value} is not an element of GF({self.q})")
        return FieldElement(self, value)

    def check(self, x: FieldElement) -> None:
        if x.spec != self:
            raise FieldMismatch(f"element of {x.spec!r} used with {self!r}")

    # -- tables -----------------------------------------------------------

    @functools.cached_property
    def _digit_matrix(self) -> np.ndarray:
        a = np.arange(self.q)
        return np.stack([(a // self.p**i) % self.p for i in range(self.k)], axis=1)

    @functools.cached_property
    def _weights(self) -> np.ndarray:
        return self.p ** np.arange(self.k)

    @functools.cached_property
    def _add_table(self) -> np.ndarray | None:
        if self.q > _ADD_TABLE_LIMIT:
            return None
        D = self._digit_matrix
        return (((D[:, None, :] + D[None, :, :]) % self.p) @ self._weights).astype(np.int_)

    @functools.cached_property
    def generator(self) -> int:
        """Enumeration-least element of multiplicative order ``q - 1``."""
        n = self.q - 1
        cofactors = [n // r for r in factorize(n)] if n > 1 else []
        for g in range(1, self.q):
            if all(self._raw_pow(g, c) != 1 for c in cofactors):
                return g
        raise NoModulusFound("no primitive element found")  # pragma: no cover

    @functools.cached_property
    def _exp(self) -> np.ndarray:
        return kernels.gf_power_table(self.generator, self.q - 1, self.p, self.k, self.modulus)

    @functools.cached_property
    def _log(self) -> np.ndarray:
        log = np.full(self.q, -1, dtype=np.int_)
        log[self._exp] = np.arange(self.q - 1)
        return log

    def _raw_pow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = kernels.gf_mul(result, base, self.p, self.k, self.modulus)
            base = kernels.gf_mul(base, base, self.p, self.k, self.modulus)
            e >>= 1
        return result

    # -- scalar arithmetic on encoded integers ------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        t = self._add_table
        if t is not None:
            return int(t[a, b])
        return self.from_digits((x + y) % self.p for x, y in zip(self.digits(a), self.digits(b)))

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return self.from_digits((-x) % self.p for x in self.digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        log = self._log
        return int(self._exp[(log[a] + log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return int(self._exp[(-self._log[a]) % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero has no inverse")
            return 1 if e == 0 else 0
        return int(self._exp[(self._log[a] * e) % (self.q - 1)])

    def log(self, a: int) -> int:
        """Discrete logarithm to the base ``self.generator``."""
        if a == 0:
            raise ZeroInput("logarithm of zero")
        return int(self._log[a])

    def scale(self, c: int, a: int) -> int:
        """Multiply ``a`` by the prime-field scalar ``c`` (an integer)."""
        return self.from_digits((c * x) % self.p for x in self.digits(a))

    # -- vectorised arithmetic ---------------------------------------------

    def add_array(self, a, b) -> np.ndarray:
        a = np.asarray(a)
        b = np.asarray(b)
        if self.p == 2:
            return np.bitwise_xor(a, b)
        D = self._digit_matrix
        return ((D[a] + D[b]) % self.p) @ self._weights

    def neg_array(self, a) -> np.ndarray:
        D = self._digit_matrix
        return ((-D[np.asarray(a)]) % self.p) @ self._weights

    def mul_array(self, a, b) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        out = np.zeros(a.shape, dtype=np.int_)
        nz = (a != 0) & (b != 0)
        out[nz] = self._exp[(self._log[a[nz]] + self._log[b[nz]]) % (self.q - 1)]
        return out

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}


@dataclass(frozen=True, eq=False)
class FieldElement:
    """An element of a ``FieldSpec`` with operator overloads."""

    spec: FieldSpec
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.spec.digits(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            self.spec.check(other)
            return other.value
        if isinstance(other, int):
            # integers act through the prime subfield
            return self.spec.from_digits([other % self.spec.p])
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.spec == other.spec and self.value == other.value
        if isinstance(other, int):
            return self.value == self._other(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self.value))

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"GF({self.spec.q})<{self.value}>"

    def _wrap(self, v: int) -> FieldElement:
        return FieldElement(self.spec, v)

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.spec.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.spec.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.spec.sub(o, self.value))

    def __neg__(self):
        return self._wrap(self.spec.neg(self.value))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.spec.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.spec.div(self.value, o))

    def __pow__(self, e: int):
        return self._wrap(self.spec.pow(self.value, e))

    def inverse(self) -> FieldElement:
        return self._wrap(self.spec.inv(self.value))

    def __bool__(self):
        return self.value != 0


@functools.lru_cache(maxsize=None)
def make_field(p: int, k: int) -> FieldSpec:
    """GF(p^k) with the lexicographically least monic irreducible modulus.

    Candidates are compared by their integer encoding (constant term least
    significant), so for ``k = 1`` the modulus is ``x``.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if k < 1:
        raise ValueError("extension degree must be positive")
    for poly in _monic_polys(k, p):
        if is_irreducible(poly, p):
            return FieldSpec(p, k, tuple(poly))
    raise NoModulusFound(f"no irreducible polynomial of degree {k} over GF({p})")  # pragma: no cover


def trace_to_prime(x: FieldElement) -> int:
    """Absolute trace ``x + x^p + ... + x^(p^(k-1))`` as a residue mod ``p``."""
    spec = x.spec
    acc = 0
    for i in range(spec.k):
        acc = spec.add(acc, spec.pow(x.value, spec.p**i))
    if acc >= spec.p:
        raise ArithmeticError("trace left the prime subfield")  # pragma: no cover
    return acc


def trace_table(spec: FieldSpec) -> np.ndarray:
    """Absolute trace of every element, indexed by encoding."""
    return _trace_table(spec)


@functools.lru_cache(maxsize=None)
def _trace_table(spec: FieldSpec) -> np.ndarray:
    t = np.array([trace_to_prime(FieldElement(spec, a)) for a in spec.elements()], dtype=np.int_)
    t.setflags(write=False)
    return t


@dataclass(frozen=True)
class TowerSpec:
    """GF(q) together with GF(q^3), built as a degree-3k extension of GF(p).

    ``embedding[a]`` is the image in ``ext`` of base element ``a``; ``alpha``
    generates the multiplicative group of ``ext``.
    """

    base: FieldSpec
    ext: FieldSpec
    embedding: tuple[int, ...] = field(repr=False)
    alpha: int

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def n_order(self) -> int:
        """Order ``q^2 + q + 1`` of the norm-one subgroup."""
        q = self.q
        return q * q + q + 1

    @functools.cached_property
    def restriction(self) -> dict[int, int]:
        return {v: a for a, v in enumerate(self.embedding)}

    @functools.cached_property
    def n_log(self) -> dict[int, int]:
        """Discrete-log table of N: element ``alpha^(j(q-1))`` maps to ``j mod n``."""
        return {x: (m + 1) % self.n_order for m, x in enumerate(norm_one_subgroup(self))}

    def embed(self, a) -> int:
        return self.embedding[int(a)]

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "ext": self.ext.to_json(), "alpha": self.alpha}


def _embedding(base: FieldSpec, ext: FieldSpec) -> tuple[int, ...]:
    if base.k == 1:
        return tuple(range(base.q))
    # the copy of GF(q) inside ext is {0} U {g^(j (ext.q - 1)/(q - 1))}
    step = (ext.q - 1) // (base.q - 1)
    sub = sorted(ext.pow(ext.generator, j * step) for j in range(base.q - 1))

    def eval_modulus(y: int) -> int:
        acc = 0
        for c in reversed(base.modulus):
            acc = ext.add(ext.mul(acc, y), c)
        return acc

    beta = next(y for y in sub if eval_modulus(y) == 0)
    images = []
    for a in base.elements():
        acc = 0
        for c in reversed(base.digits(a)):
            acc = ext.add(ext.mul(acc, beta), c)
        images.append(acc)
    return tuple(images)


@functools.lru_cache(maxsize=None)
def make_tower(p: int, k: int) -> TowerSpec:
    """GF(p^k) and its cubic extension with an explicit embedding."""
    base = make_field(p, k)
    ext = make_field(p, 3 * k)
    return TowerSpec(base, ext, _embedding(base, ext), find_generator(ext))


def find_generator(field_or_tower) -> int:
    """Deterministic generator of the multiplicative group.

    For a ``TowerSpec`` this is the generator ``alpha`` of GF(q^3)*; the
    enumeration-least element passing the order test is returned.
    """
    spec = field_or_tower.ext if isinstance(field_or_tower, TowerSpec) else field_or_tower
    return spec.generator


def element_order(spec: FieldSpec, a: int) -> int:
    if a == 0:
        raise ZeroInput("zero has no multiplicative order")
    n = spec.q - 1
    order = n
    for r, e in factorize(n).items():
        for _ in range(e):
            if spec.pow(a, order // r) == 1:
                order //= r
            else:
                break
    return order


def norm_to_base(x, tower: TowerSpec) -> FieldElement:
    """Norm ``x^(q^2+q+1)`` from GF(q^3)* down to GF(q)*."""
    v = int(x)
    if isinstance(x, FieldElement):
        tower.ext.check(x)
    if v == 0:
        raise ZeroInput("the norm is defined on nonzero elements")
    y = tower.ext.pow(v, tower.n_order)
    try:
        return FieldElement(tower.base, tower.restriction[y])
    except KeyError:  # pragma: no cover
        raise ArithmeticError("norm left the base field") from None


def norm_one_subgroup(tower: TowerSpec) -> list[int]:
    """``[alpha^(q-1), alpha^(2(q-1)), ..., alpha^(n(q-1)) = 1]`` with ``n = q^2+q+1``."""
    ext, q = tower.ext, tower.q
    step = ext.pow(tower.alpha, q - 1)
    out = []
    x = 1
    for _ in range(tower.n_order):
        x = ext.mul(x, step)
        out.append(x)
    return out


def n_discrete_log(x, tower: TowerSpec) -> int:
    """Index ``j`` (mod ``q^2+q+1``) with ``x = alpha^(j(q-1))``."""
    try:
        return tower.n_log[int(x)]
    except KeyError:
        raise NotInSubgroup(f"{int(x)} is not in the norm-one subgroup") from None
