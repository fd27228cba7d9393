"""Exact arithmetic in GF(p^e), flat representation GF(p)[x]/(modulus).

Elements are interned per field and carry their rank in the canonical
enumeration order (constant coefficient varies fastest), so ``x.index``
doubles as the symbol/tie-breaking key everywhere downstream.

When ``e`` is even the field plays the role of GF(q^2) with q = p^(e/2);
the subfield GF(q) is the fixed set of ``frobenius_q``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

MAX_DEGREE = 8
# fields up to this order get precomputed add/mul tables
TABLE_LIMIT = 256


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, m) with q = p**m, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    m, r = 0, q
    while r % p == 0:
        r //= p
        m += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, m


# -- polynomials over GF(p), coefficient lists with the constant term first --

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    m = _trim(list(m))
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for k, mk in enumerate(m):
            a[shift + k] = (a[shift + k] - c * mk) % p
        _trim(a)
    return a


def _is_irreducible(f: tuple[int, ...], p: int) -> bool:
    deg = len(f) - 1
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(list(f), list(low) + [1], p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    p: int
    e: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")
        if len(self.modulus) != self.e + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree e")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise ValueError("modulus coefficients must lie in [0, p)")
        if not _is_irreducible(self.modulus, self.p):
            raise ValueError(f"modulus {self.modulus} is reducible over GF({self.p})")

    @property
    def order(self) -> int:
        return self.p**self.e

    @property
    def is_quadratic(self) -> bool:
        return self.e % 2 == 0

    @property
    def q(self) -> int:
        self.require_quadratic()
        return self.p ** (self.e // 2)

    def require_quadratic(self) -> None:
        if self.e % 2:
            raise ValueError(
                f"GF({self.p}^{self.e}) has odd degree; relative GF(q^2)/GF(q) operations need even e"
            )

    def __str__(self) -> str:
        return f"GF({self.p}^{self.e})"


class FieldElement:
    """An element of GF(p^e); obtain instances from ``elements`` or ``element``."""

    __slots__ = ("spec", "coeffs", "index")

    def __init__(self, spec: FieldSpec, coeffs: tuple[int, ...], index: int):
        self.spec = spec
        self.coeffs = coeffs
        self.index = index

    def _other(self, other) -> FieldElement:
        if isinstance(other, int):
            return _kernel(self.spec).from_int(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.spec != self.spec:
            raise ValueError(f"operands belong to different fields: {self.spec} vs {other.spec}")
        return other

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return _kernel(self.spec).add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        k = _kernel(self.spec)
        return k.add(self, k.neg(other))

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return _kernel(self.spec).mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __neg__(self):
        return _kernel(self.spec).neg(self)

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inv() ** (-exponent)
        k = _kernel(self.spec)
        result, base = k.one, self
        while exponent:
            if exponent & 1:
                result = k.mul(result, base)
            base = k.mul(base, base)
            exponent >>= 1
        return result

    def inv(self) -> FieldElement:
        return _kernel(self.spec).inv(self)

    def is_zero(self) -> bool:
        return self.index == 0

    def __bool__(self) -> bool:
        return self.index != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.index == other.index and self.spec == other.spec
        if isinstance(other, int):
            return self == _kernel(self.spec).from_int(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.spec.p, self.spec.e, self.index))

    def __repr__(self) -> str:
        return f"FieldElement({format_element(self)} in {self.spec})"


class _Kernel:
    def __init__(self, spec: FieldSpec):
        self.spec = spec
        p, e = spec.p, spec.e
        self.elems = [
            FieldElement(spec, tuple(reversed(c)), i)
            for i, c in enumerate(itertools.product(range(p), repeat=e))
        ]
        self.zero = self.elems[0]
        self.one = self.elems[1] if spec.order > 1 else self.elems[0]
        self._weights = [p**k for k in range(e)]
        self._inv_cache: dict[int, FieldElement] = {}
        self.frob: list[int] | None = None
        self.add_table = self.mul_table = None
        if spec.order <= TABLE_LIMIT:
            n = spec.order
            self.add_table = [[self._poly_add(a, b).index for b in self.elems] for a in self.elems]
            self.mul_table = [[self._poly_mul(a, b).index for b in self.elems] for a in self.elems]
            self.neg_table = [self._poly_neg(a).index for a in self.elems]
            self.inv_table = [0] * n
            for a in range(1, n):
                self.inv_table[a] = self.mul_table[a].index(1)

    def lookup(self, coeffs) -> FieldElement:
        return self.elems[sum(c * w for c, w in zip(coeffs, self._weights))]

    def from_int(self, v: int) -> FieldElement:
        return self.lookup((v % self.spec.p,) + (0,) * (self.spec.e - 1))

    def _poly_add(self, a, b):
        p = self.spec.p
        return self.lookup([(x + y) % p for x, y in zip(a.coeffs, b.coeffs)])

    def _poly_neg(self, a):
        p = self.spec.p
        return self.lookup([(-x) % p for x in a.coeffs])

    def _poly_mul(self, a, b):
        p, e = self.spec.p, self.spec.e
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    prod[i + j] += x * y
        mod = self.spec.modulus
        for d in range(2 * e - 2, e - 1, -1):
            c = prod[d] % p
            if c:
                for k in range(e + 1):
                    prod[d - e + k] -= c * mod[k]
        return self.lookup([c % p for c in prod[:e]])

    def add(self, a, b):
        if self.add_table is not None:
            return self.elems[self.add_table[a.index][b.index]]
        return self._poly_add(a, b)

    def neg(self, a):
        if self.add_table is not None:
            return self.elems[self.neg_table[a.index]]
        return self._poly_neg(a)

    def mul(self, a, b):
        if self.mul_table is not None:
            return self.elems[self.mul_table[a.index][b.index]]
        return self._poly_mul(a, b)

    def inv(self, a):
        if a.index == 0:
            raise ZeroDivisionError(f"zero has no inverse in {self.spec}")
        if self.mul_table is not None:
            return self.elems[self.inv_table[a.index]]
        if a.index not in self._inv_cache:
            self._inv_cache[a.index] = a ** (self.spec.order - 2)
        return self._inv_cache[a.index]


@lru_cache(maxsize=None)
def _kernel(spec: FieldSpec) -> _Kernel:
    return _Kernel(spec)


@lru_cache(maxsize=None)
def make_field(p: int, e: int, max_degree: int = MAX_DEGREE) -> FieldSpec:
    """Field GF(p^e) with the lexicographically smallest monic irreducible modulus.

    Candidate moduli are compared coefficient by coefficient starting from the
    constant term.
    """
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if not 1 <= e <= max_degree:
        raise ValueError(f"degree {e} outside [1, {max_degree}]")
    for low in itertools.product(range(p), repeat=e):
        modulus = low + (1,)
        if _is_irreducible(modulus, p):
            return FieldSpec(p, e, modulus)
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


def field_for_q(q: int) -> FieldSpec:
    """GF(q^2) for a prime power q."""
    p, m = prime_power(q)
    return make_field(p, 2 * m)


def elements(spec: FieldSpec) -> list[FieldElement]:
    """All elements in canonical order; index 0 is 0 and index 1 is 1."""
    return list(_kernel(spec).elems)


def element(spec: FieldSpec, value) -> FieldElement:
    """Element from an enumeration index (int) or a coefficient sequence."""
    k = _kernel(spec)
    if isinstance(value, int):
        if not 0 <= value < spec.order:
            raise ValueError(f"index {value} out of range for {spec}")
        return k.elems[value]
    coeffs = tuple(value)
    if len(coeffs) != spec.e or any(not 0 <= c < spec.p for c in coeffs):
        raise ValueError(f"bad coefficient vector {coeffs} for {spec}")
    return k.lookup(coeffs)


def zero(spec: FieldSpec) -> FieldElement:
    return _kernel(spec).zero


def one(spec: FieldSpec) -> FieldElement:
    return _kernel(spec).one


def generator(spec: FieldSpec) -> FieldElement:
    """Class of x in GF(p)[x]/(modulus)."""
    if spec.e == 1:
        return element(spec, (-spec.modulus[0] % spec.p,))
    return element(spec, (0, 1) + (0,) * (spec.e - 2))


def format_element(x: FieldElement) -> str:
    """Coefficients joined by ':' with the constant term first, e.g. ``1:1``."""
    return ":".join(str(c) for c in x.coeffs)


def parse_element(spec: FieldSpec, text: str) -> FieldElement:
    try:
        coeffs = [int(c) for c in text.split(":")]
    except ValueError:
        raise ValueError(f"malformed field element {text!r}") from None
    return element(spec, coeffs)


# -- relative structure GF(q^2) / GF(q) --

def frobenius_q(x: FieldElement) -> FieldElement:
    """x -> x^q, the involutory automorphism fixing GF(q)."""
    k = _kernel(x.spec)
    if k.frob is None:
        q = x.spec.q
        k.frob = [(y**q).index for y in k.elems]
    return k.elems[k.frob[x.index]]


def rel_trace(x: FieldElement) -> FieldElement:
    return frobenius_q(x) + x


def rel_norm(x: FieldElement) -> FieldElement:
    return frobenius_q(x) * x


def in_subfield_q(x: FieldElement) -> bool:
    return frobenius_q(x) == x


@lru_cache(maxsize=None)
def subfield_elements(spec: FieldSpec) -> tuple[FieldElement, ...]:
    """GF(q) inside GF(q^2), in enumeration order."""
    return tuple(x for x in _kernel(spec).elems if in_subfield_q(x))


def multiplicative_order(x: FieldElement) -> int:
    if x.is_zero():
        raise ZeroDivisionError("zero has no multiplicative order")
    n = x.spec.order - 1
    order = n
    for d in _prime_divisors(n):
        while order % d == 0 and (x ** (order // d)) == 1:
            order //= d
    return order


def _prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def primitive_element(spec: FieldSpec) -> FieldElement:
    """First element in enumeration order generating the multiplicative group."""
    return next(x for x in _kernel(spec).elems[1:] if multiplicative_order(x) == spec.order - 1)


@dataclass(frozen=True)
class TraceData:
    t0: tuple[FieldElement, ...]
    coset_reps: tuple[FieldElement, ...]

    def rep_of(self, x: FieldElement) -> FieldElement:
        """Coset representative of x + T0 (cosets are the trace fibers)."""
        return self._by_trace[rel_trace(x)]

    @cached_property
    def _by_trace(self) -> dict[FieldElement, FieldElement]:
        return {rel_trace(c): c for c in self.coset_reps}


@lru_cache(maxsize=None)
def trace_data(spec: FieldSpec) -> TraceData:
    spec.require_quadratic()
    elems = _kernel(spec).elems
    t0 = tuple(x for x in elems if rel_trace(x).is_zero())
    reps, covered = [], set()
    for x in elems:
        if x not in covered:
            reps.append(x)
            covered.update(x + t for t in t0)
    return TraceData(t0, tuple(reps))


# -- bulk tables for exhaustive checks --

@dataclass(frozen=True)
class FieldTables:
    """Index-level operation tables; ``inv[0]`` is -1."""

    spec: FieldSpec
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray
    frob: np.ndarray | None
    trace: np.ndarray | None
    norm: np.ndarray | None


@lru_cache(maxsize=None)
def tables(spec: FieldSpec) -> FieldTables:
    if spec.order > 4096:
        raise ValueError(f"{spec} too large for dense tables")
    elems = _kernel(spec).elems
    add = np.array([[(a + b).index for b in elems] for a in elems], dtype=np.int32)
    mul = np.array([[(a * b).index for b in elems] for a in elems], dtype=np.int32)
    neg = np.array([(-a).index for a in elems], dtype=np.int32)
    inv = np.array([-1] + [a.inv().index for a in elems[1:]], dtype=np.int32)
    frob = trace = norm = None
    if spec.is_quadratic:
        frob = np.array([frobenius_q(a).index for a in elems], dtype=np.int32)
        trace = np.array([rel_trace(a).index for a in elems], dtype=np.int32)
        norm = np.array([rel_norm(a).index for a in elems], dtype=np.int32)
    return FieldTables(spec, add, mul, neg, inv, frob, trace, norm)


def field_table_text(spec: FieldSpec) -> str:
    """Plain-text dump: element legend, addition and multiplication rows, T0 and C."""
    elems = _kernel(spec).elems
    lines = [f"# {spec} modulus {' '.join(map(str, spec.modulus))} (constant term first)"]
    lines.append("# elements: index coefficients")
    lines += [f"{x.index} {format_element(x)}" for x in elems]
    lines.append("# addition")
    lines += [" ".join(str((a + b).index) for b in elems) for a in elems]
    lines.append("# multiplication")
    lines += [" ".join(str((a * b).index) for b in elems) for a in elems]
    if spec.is_quadratic:
        td = trace_data(spec)
        lines.append("# T0")
        lines.append(" ".join(str(x.index) for x in td.t0))
        lines.append("# C")
        lines.append(" ".join(str(x.index) for x in td.coset_reps))
    return "\n".join(lines) + "\n"
