"""Hermitian forms on AG(n, q^2), the translation group G, and affine Hermitian cones.

Points of W = {x_{n+1} = 1} are tuples of n field elements; the trailing 1
is implicit.  Group elements are never materialised as matrices: the affine
restriction of the translated form F^g only depends on the pair (a, c), with
a_t = i_t^q + j_t and c = i_1^{q+1} + ... + i_{n-1}^{q+1} + tr(i_n).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .errors import CapExceededError
from .ff import (
    FieldElement,
    FieldSpec,
    TraceData,
    elements,
    field_for_q,
    frobenius_q,
    primitive_element,
    rel_norm,
    rel_trace,
    subfield_elements,
    trace_data,
    zero,
)

AffinePoint = tuple[FieldElement, ...]


@dataclass(frozen=True)
class GroupElement:
    i: tuple[FieldElement, ...]
    j: tuple[FieldElement, ...]

    def __post_init__(self):
        if len(self.j) != len(self.i) - 1:
            raise ValueError("need n values i_1..i_n and n-1 values j_1..j_{n-1}")


@dataclass(frozen=True)
class TranslatedForm:
    a: tuple[FieldElement, ...]
    c: FieldElement

    @property
    def is_identity(self) -> bool:
        return self.c.is_zero() and all(x.is_zero() for x in self.a)


@dataclass(frozen=True)
class ConeSpec:
    omega: tuple[FieldElement, ...]
    v: FieldElement

    def __post_init__(self):
        if all(w.is_zero() for w in self.omega):
            raise ValueError("cone needs a nonzero omega vector")
        if not rel_trace(self.v).is_zero():
            raise ValueError("cone constant v must lie in T0")


def _check_point(x: Sequence[FieldElement], n: int) -> None:
    if len(x) != n:
        raise ValueError(f"expected {n} coordinates, got {len(x)}")


def eval_canonical(x: AffinePoint) -> FieldElement:
    """F(x_1, ..., x_n, 1) = sum of norms of x_1..x_{n-1} plus tr(x_n)."""
    value = rel_trace(x[-1])
    for xt in x[:-1]:
        value = value + rel_norm(xt)
    return value


def eval_translated(f: TranslatedForm, x: AffinePoint) -> FieldElement:
    _check_point(x, len(f.a) + 1)
    lin = zero(x[0].spec)
    for xt, at in zip(x, f.a):
        lin = lin + xt * at
    return eval_canonical(x) + rel_trace(lin) + f.c


def reduce_group_element(g: GroupElement) -> TranslatedForm:
    a = tuple(frobenius_q(it) + jt for it, jt in zip(g.i, g.j))
    c = rel_trace(g.i[-1])
    for it in g.i[:-1]:
        c = c + rel_norm(it)
    assert frobenius_q(c) == c, "form constant escaped GF(q)"
    return TranslatedForm(a, c)


def in_stabiliser(g: GroupElement) -> bool:
    """True when g preserves the canonical variety (j_t = -i_t^q and the norm condition)."""
    if any(jt != -frobenius_q(it) for it, jt in zip(g.i, g.j)):
        return False
    return reduce_group_element(g).c.is_zero()


def solve_special_coordinate(i_prefix: Sequence[FieldElement], td: TraceData) -> FieldElement:
    """The unique c in C with tr(c) = -(sum of norms of i_prefix)."""
    target = -sum((rel_norm(it) for it in i_prefix), zero(td.t0[0].spec))
    hits = [c for c in td.coset_reps if rel_trace(c) == target]
    assert len(hits) == 1, f"expected one coset representative, found {len(hits)}"
    return hits[0]


def enumerate_R(q: int, n: int) -> list[TranslatedForm]:
    if n < 2:
        raise ValueError("n must be at least 2")
    spec = field_for_q(q)
    td = trace_data(spec)
    zeros = (zero(spec),) * (n - 1)
    forms = []
    for prefix in itertools.product(elements(spec), repeat=n - 1):
        i_n = solve_special_coordinate(prefix, td)
        forms.append(reduce_group_element(GroupElement(prefix + (i_n,), zeros)))
    return forms


def affine_points(spec: FieldSpec, n: int) -> list[AffinePoint]:
    """All of W in lexicographic coordinate order (x_1 varies slowest)."""
    return list(itertools.product(elements(spec), repeat=n))


# -- Hermitian cones with vertex P_inf --

def cone_value(omega: Sequence[FieldElement], x: Sequence[FieldElement]) -> FieldElement:
    """sum_t (omega_t^q x_t^q - omega_t x_t); only x_1..x_{n-1} matter."""
    if all(w.is_zero() for w in omega):
        raise ValueError("cone needs a nonzero omega vector")
    total = zero(omega[0].spec)
    for wt, xt in zip(omega, x):
        y = wt * xt
        total = total + frobenius_q(y) - y
    assert rel_trace(total).is_zero(), "cone value escaped T0"
    return total


def on_cone(cone: ConeSpec, x: Sequence[FieldElement]) -> bool:
    return cone_value(cone.omega, x) == cone.v


def normalize_omega(omega: Sequence[FieldElement]) -> tuple[FieldElement, ...]:
    """Representative of the GF(q)* scalar class with the smallest index vector."""
    spec = omega[0].spec
    scaled = [tuple(lam * w for w in omega) for lam in subfield_elements(spec)[1:]]
    return min(scaled, key=lambda v: [w.index for w in v])


def enumerate_cones(q: int, n: int) -> list[ConeSpec]:
    """One ConeSpec per affine cone: normalized omega, then v in T0 order."""
    spec = field_for_q(q)
    td = trace_data(spec)
    cones = []
    for omega in itertools.product(elements(spec), repeat=n - 1):
        if all(w.is_zero() for w in omega) or normalize_omega(omega) != omega:
            continue
        cones.extend(ConeSpec(omega, v) for v in td.t0)
    return cones


# -- coordinate splitting of the hyperplane X_n = 0 over GF(q) --

@lru_cache(maxsize=None)
def _split_table(spec: FieldSpec) -> dict[FieldElement, tuple[FieldElement, FieldElement]]:
    eps = primitive_element(spec)
    sub = subfield_elements(spec)
    table = {u + eps * w: (u, w) for u in sub for w in sub}
    assert len(table) == spec.order, "{1, eps} is not a GF(q)-basis"
    return table


def theta(x: Sequence[FieldElement]) -> tuple[FieldElement, ...]:
    """Split each coordinate as a1 + eps*a2 with a1, a2 in GF(q); eps is primitive."""
    table = _split_table(x[0].spec)
    return tuple(part for xt in x for part in table[xt])


def theta_inv(y: Sequence[FieldElement]) -> tuple[FieldElement, ...]:
    if len(y) % 2:
        raise ValueError("AG(2m, q) point needs an even number of coordinates")
    eps = primitive_element(y[0].spec)
    return tuple(y[k] + eps * y[k + 1] for k in range(0, len(y), 2))


def is_affine_hyperplane(points: Sequence[Sequence[FieldElement]], dim: int) -> bool:
    """Whether ``points`` (vectors over the GF(q) subfield) form a hyperplane of AG(dim, q).

    Checks size q^(dim-1) and that the translate through the first point is
    closed under addition and GF(q)-scaling.
    """
    if not points:
        return False
    spec = points[0][0].spec
    sub = subfield_elements(spec)
    q = len(sub)
    if len(points) != q ** (dim - 1):
        return False
    base = tuple(points[0])
    diffs = {tuple(a - b for a, b in zip(p, base)) for p in points}
    if len(diffs) != len(points):
        return False
    for u in diffs:
        if any(tuple(lam * c for c in u) not in diffs for lam in sub):
            return False
        for w in diffs:
            if tuple(a + b for a, b in zip(u, w)) not in diffs:
                return False
    return True


# -- census of the canonical variety in PG(n, q^2) --

@dataclass
class Census:
    q: int
    n: int
    total_points: int
    affine_points: int
    line_sizes: dict[int, int]
    lines_examined: int
    exhaustive_lines: bool
    tangent_sizes: dict[int, int] = field(default_factory=dict)

    @property
    def allowed_line_sizes(self) -> set[int]:
        return {1, self.q + 1, self.q * self.q + 1}

    @property
    def ok(self) -> bool:
        return (
            self.affine_points == self.q ** (2 * self.n - 1)
            and set(self.line_sizes) <= self.allowed_line_sizes
        )

    def as_dict(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "total_points": self.total_points,
            "affine_points": self.affine_points,
            "expected_affine_points": self.q ** (2 * self.n - 1),
            "line_sizes": {str(k): v for k, v in sorted(self.line_sizes.items())},
            "lines_examined": self.lines_examined,
            "exhaustive_lines": self.exhaustive_lines,
            "tangent_hyperplane_sizes": {str(k): v for k, v in sorted(self.tangent_sizes.items())},
            "ok": self.ok,
        }


def projective_points(spec: FieldSpec, dim: int) -> list[tuple[FieldElement, ...]]:
    """Points of PG(dim, |spec|), normalized so the first nonzero coordinate is 1."""
    elems = elements(spec)
    pts = []
    for lead in range(dim + 1):
        for tail in itertools.product(elems, repeat=dim - lead):
            pts.append((elems[0],) * lead + (elems[1],) + tail)
    return pts


def _normalize(v: Sequence[FieldElement]) -> tuple[FieldElement, ...]:
    lead = next(c for c in v if not c.is_zero())
    inv = lead.inv()
    return tuple(c * inv for c in v)


def hermitian_form(x: Sequence[FieldElement]) -> FieldElement:
    """Homogeneous canonical form X_1^{q+1}+...+X_{n-1}^{q+1}+X_n^q X_{n+1}+X_n X_{n+1}^q."""
    value = rel_trace(x[-2] * frobenius_q(x[-1]))
    for xt in x[:-2]:
        value = value + rel_norm(xt)
    return value


def variety_census(q: int, n: int, point_cap: int = 200_000, line_cap: int = 2_000, sample: int = 50) -> Census:
    """Count points of the canonical variety and record line-intersection sizes.

    All lines are examined when PG(n, q^2) has at most ``line_cap`` points;
    otherwise only the lines through the first ``sample`` points.
    """
    spec = field_for_q(q)
    qq = spec.order
    n_points = (qq ** (n + 1) - 1) // (qq - 1)
    if n_points > point_cap:
        raise CapExceededError(f"PG({n},{qq}) has {n_points} points, cap is {point_cap}")
    pts = projective_points(spec, n)
    index = {p: k for k, p in enumerate(pts)}
    on_h = [hermitian_form(p).is_zero() for p in pts]
    total = sum(on_h)
    affine = sum(1 for p, h in zip(pts, on_h) if h and not p[-1].is_zero())

    exhaustive = n_points <= line_cap
    bases = range(n_points) if exhaustive else range(min(sample, n_points))
    seen: set[frozenset[int]] = set()
    sizes: Counter[int] = Counter()
    elems = elements(spec)
    for b in bases:
        pb = pts[b]
        covered = {b}
        for k in range(n_points):
            if k in covered:
                continue
            pk = pts[k]
            line = {b, k}
            for lam in elems[1:]:
                line.add(index[_normalize([x + lam * y for x, y in zip(pb, pk)])])
            covered |= line
            key = frozenset(line)
            if key in seen:
                continue
            seen.add(key)
            sizes[sum(on_h[m] for m in line)] += 1

    # tangent hyperplanes at the first few points of the variety
    tangent: Counter[int] = Counter()
    for p in [p for p, h in zip(pts, on_h) if h][:sample]:
        sp = [frobenius_q(c) for c in p]
        polar = list(sp[:-2]) + [sp[-1], sp[-2]]
        count = 0
        for y, h in zip(pts, on_h):
            if h:
                s = zero(spec)
                for yt, ct in zip(y, polar):
                    s = s + yt * ct
                count += s.is_zero()
        tangent[count] += 1
    return Census(q, n, total, affine, dict(sizes), len(seen), exhaustive, dict(tangent))
