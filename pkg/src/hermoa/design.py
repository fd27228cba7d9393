"""The incidence structure S: N-orbits of AG(n, q^2) against Hermitian-type and cone-type blocks.

Points are orbits x + (0, ..., 0, T0); each is stored as the representative
whose last coordinate lies in the coset system C, so the point list is W0
in the same order as the columns of A0.  Incidence is kept as one Python
int bitset per block.

All checks below read only the incidence bitsets; block parameters are
carried for export and for the OA correspondence.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Union

from .errors import CapExceededError, OAFormatError, cell_cap
from .ff import (
    FieldElement,
    FieldSpec,
    elements,
    field_for_q,
    format_element,
    parse_element,
    subfield_elements,
    trace_data,
)
from .geometry import (
    AffinePoint,
    ConeSpec,
    TranslatedForm,
    cone_value,
    enumerate_cones,
    eval_canonical,
    eval_translated,
)
from .oa import OrthogonalArray, symbol_of

HERMITIAN = "hermitian"
CONE = "cone"


@dataclass(frozen=True)
class DesignPoint:
    prefix: tuple[FieldElement, ...]
    last: FieldElement

    @property
    def coords(self) -> AffinePoint:
        return self.prefix + (self.last,)


@dataclass(frozen=True)
class Block:
    kind: str
    params: Union[TranslatedForm, ConeSpec]
    members: tuple[int, ...]


@dataclass
class IncidenceStructure:
    q: int
    n: int
    points: list[DesignPoint]
    blocks: list[Block]
    incidence: list[int]

    @property
    def v(self) -> int:
        return len(self.points)

    @property
    def b(self) -> int:
        return len(self.blocks)

    @cached_property
    def point_blocks(self) -> list[int]:
        """Transpose of the incidence: bitset of blocks through each point."""
        out = [0] * self.v
        for bi, bits in enumerate(self.incidence):
            for p in _bits(bits):
                out[p] |= 1 << bi
        return out

    @cached_property
    def _point_lookup(self) -> dict[tuple[FieldElement, ...], int]:
        return {pt.coords: k for k, pt in enumerate(self.points)}

    def point_index(self, x: AffinePoint) -> int:
        """Index of the orbit containing an arbitrary affine point."""
        rep = trace_data(x[-1].spec).rep_of(x[-1])
        return self._point_lookup[tuple(x[:-1]) + (rep,)]


def _bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def _mask(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def expected_parameters(q: int, n: int) -> dict[str, int]:
    v = q ** (2 * n - 1)
    k = q ** (2 * n - 2)
    lam = sum(q**i for i in range(2 * n - 2))
    cones = sum(q**i for i in range(1, 2 * n - 1))
    return {
        "v": v,
        "k": k,
        "lambda": lam,
        "b": v + cones,
        "hermitian_blocks": v,
        "cone_blocks": cones,
        "r": lam * (v - 1) // (k - 1),
        "intersection": q ** (2 * n - 3),
        "parallel_classes": (v + cones) // q,
    }


def build_points(q: int, n: int) -> list[DesignPoint]:
    if n < 2:
        raise ValueError("n must be at least 2")
    spec = field_for_q(q)
    reps = trace_data(spec).coset_reps
    return [
        DesignPoint(prefix, last)
        for prefix in itertools.product(elements(spec), repeat=n - 1)
        for last in reps
    ]


def build_blocks(q: int, n: int) -> IncidenceStructure:
    """All Hermitian-type blocks (one per (a, c)) then all cone-type blocks."""
    points = build_points(q, n)
    expected = expected_parameters(q, n)
    if expected["v"] * expected["b"] > cell_cap():
        raise CapExceededError(f"{expected['b']} x {expected['v']} incidence exceeds the cell cap")
    spec = field_for_q(q)
    sub = subfield_elements(spec)
    coords = [pt.coords for pt in points]
    blocks: list[Block] = []
    for a in itertools.product(elements(spec), repeat=n - 1):
        # F^(a,0) per point; block (a, c) is where it equals -c
        base = [eval_translated(TranslatedForm(a, sub[0]), x) for x in coords]
        for c in sub:
            members = tuple(k for k, val in enumerate(base) if (val + c).is_zero())
            blocks.append(Block(HERMITIAN, TranslatedForm(a, c), members))
    last_omega, values = None, None
    for cone in enumerate_cones(q, n):
        if cone.omega != last_omega:
            last_omega = cone.omega
            values = [cone_value(cone.omega, pt.prefix) for pt in points]
        members = tuple(k for k, val in enumerate(values) if val == cone.v)
        blocks.append(Block(CONE, cone, members))
    return IncidenceStructure(q, n, points, blocks, [_mask(bl.members) for bl in blocks])


build_design = build_blocks


# -- 2-design parameters --

@dataclass
class DesignReport:
    v: int
    b: int
    block_sizes: dict[int, int]
    lambdas: dict[int, int]
    replication: dict[int, int]
    expected: dict[str, int]
    violations: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        e = self.expected
        return (
            self.v == e["v"]
            and self.b == e["b"]
            and set(self.block_sizes) == {e["k"]}
            and set(self.lambdas) == {e["lambda"]}
            and set(self.replication) == {e["r"]}
            and e["r"] * (e["k"] - 1) == e["lambda"] * (e["v"] - 1)
        )

    def as_dict(self) -> dict:
        return {
            "v": self.v,
            "b": self.b,
            "block_sizes": _str_keys(self.block_sizes),
            "lambdas": _str_keys(self.lambdas),
            "replication": _str_keys(self.replication),
            "expected": self.expected,
            "violations": [{"points": [p, r], "common_blocks": c} for p, r, c in self.violations],
            "ok": self.ok,
        }


def _str_keys(d: dict) -> dict[str, int]:
    return {str(k): v for k, v in sorted(d.items())}


def verify_2design(S: IncidenceStructure, max_violations: int = 20) -> DesignReport:
    expected = expected_parameters(S.q, S.n)
    pb = S.point_blocks
    lambdas: Counter[int] = Counter()
    violations = []
    for i in range(S.v):
        for j in range(i + 1, S.v):
            lam = (pb[i] & pb[j]).bit_count()
            lambdas[lam] += 1
            if lam != expected["lambda"] and len(violations) < max_violations:
                violations.append((i, j, lam))
    return DesignReport(
        S.v,
        S.b,
        dict(Counter(bits.bit_count() for bits in S.incidence)),
        dict(lambdas),
        dict(Counter(bits.bit_count() for bits in pb)),
        expected,
        violations,
    )


# -- affine axioms and resolution --

@dataclass
class AffineReport:
    intersection_sizes: dict[int, int]
    allowed_sizes: tuple[int, int]
    parallel_classes: list[list[int]]
    classes_are_cliques: bool
    classes_partition: bool
    class_sizes: dict[int, int]
    axiom_b_failures: list[tuple[int, int, int]]
    mixed_disjoint_pairs: int
    expected_classes: int

    @property
    def axiom_a(self) -> bool:
        return set(self.intersection_sizes) <= set(self.allowed_sizes)

    @property
    def axiom_b(self) -> bool:
        return not self.axiom_b_failures

    @property
    def ok(self) -> bool:
        return (
            self.axiom_a
            and self.axiom_b
            and self.classes_are_cliques
            and self.classes_partition
            and len(self.parallel_classes) == self.expected_classes
            and self.mixed_disjoint_pairs == 0
        )

    def as_dict(self) -> dict:
        return {
            "intersection_sizes": _str_keys(self.intersection_sizes),
            "allowed_sizes": list(self.allowed_sizes),
            "axiom_a": self.axiom_a,
            "axiom_b": self.axiom_b,
            "axiom_b_failures": [
                {"point": p, "block": bl, "disjoint_blocks_through_point": c}
                for p, bl, c in self.axiom_b_failures
            ],
            "parallel_class_count": len(self.parallel_classes),
            "expected_parallel_classes": self.expected_classes,
            "class_sizes": _str_keys(self.class_sizes),
            "classes_are_cliques": self.classes_are_cliques,
            "classes_partition": self.classes_partition,
            "mixed_disjoint_pairs": self.mixed_disjoint_pairs,
            "ok": self.ok,
        }


def parallel_classes(S: IncidenceStructure) -> list[list[int]]:
    """Connected components of the block-disjointness graph, ordered by smallest block."""
    parent = list(range(S.b))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(S.b):
        for j in range(i + 1, S.b):
            if not S.incidence[i] & S.incidence[j]:
                parent[find(i)] = find(j)
    comps: dict[int, list[int]] = {}
    for i in range(S.b):
        comps.setdefault(find(i), []).append(i)
    return sorted(comps.values())


def verify_affine(S: IncidenceStructure, max_failures: int = 20) -> AffineReport:
    inc = S.incidence
    expected = expected_parameters(S.q, S.n)
    sizes: Counter[int] = Counter()
    disjoint: list[list[int]] = [[] for _ in range(S.b)]
    mixed = 0
    for i in range(S.b):
        for j in range(i + 1, S.b):
            common = (inc[i] & inc[j]).bit_count()
            sizes[common] += 1
            if common == 0:
                disjoint[i].append(j)
                disjoint[j].append(i)
                mixed += S.blocks[i].kind != S.blocks[j].kind

    failures = []
    for bi in range(S.b):
        for p in range(S.v):
            if inc[bi] >> p & 1:
                continue
            count = sum(inc[bj] >> p & 1 for bj in disjoint[bi])
            if count != 1 and len(failures) < max_failures:
                failures.append((p, bi, count))

    classes = parallel_classes(S)
    cliques = all(
        not inc[x] & inc[y] for cls in classes for x, y in itertools.combinations(cls, 2)
    )
    full = (1 << S.v) - 1
    partition = all(
        sum(inc[x].bit_count() for x in cls) == S.v and _union(inc, cls) == full for cls in classes
    )
    return AffineReport(
        dict(sizes),
        (0, expected["intersection"]),
        classes,
        cliques,
        partition,
        dict(Counter(len(c) for c in classes)),
        failures,
        mixed,
        expected["parallel_classes"],
    )


def _union(inc: list[int], idx) -> int:
    out = 0
    for i in idx:
        out |= inc[i]
    return out


# -- design lines --

def line_through(S: IncidenceStructure, p1: int, p2: int) -> list[int]:
    """Points lying on every block through both p1 and p2."""
    if p1 == p2:
        raise ValueError("a line needs two distinct points")
    through = S.point_blocks[p1] & S.point_blocks[p2]
    acc = (1 << S.v) - 1
    for bi in _bits(through):
        acc &= S.incidence[bi]
    return _bits(acc)


def line_sizes(S: IncidenceStructure) -> dict[int, int]:
    """Histogram of design-line sizes over all unordered point pairs."""
    out: Counter[int] = Counter()
    for i in range(S.v):
        for j in range(i + 1, S.v):
            out[len(line_through(S, i, j))] += 1
    return dict(out)


# -- A0 rows against Hermitian parallel classes --

@dataclass
class CorrespondenceReport:
    column_bijection: bool
    rows_matched: int
    hermitian_classes: int
    classes_covered: int
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.column_bijection
            and not self.mismatches
            and self.rows_matched == self.hermitian_classes == self.classes_covered
        )

    def as_dict(self) -> dict:
        return {
            "column_bijection": self.column_bijection,
            "rows_matched": self.rows_matched,
            "hermitian_classes": self.hermitian_classes,
            "classes_covered": self.classes_covered,
            "mismatches": self.mismatches,
            "ok": self.ok,
        }


def oa_design_correspondence(S: IncidenceStructure, A0: OrthogonalArray) -> CorrespondenceReport:
    """Each row of A0 splits the points into q symbol fibers; these must be exactly the q
    Hermitian blocks of one parallel class, with distinct rows hitting distinct classes."""
    if A0.col_keys is None:
        raise ValueError("correspondence needs an array with column keys")
    col_point = [S.point_index(x) for x in A0.col_keys]
    bijection = sorted(col_point) == list(range(S.v)) and A0.N == S.v
    by_members = {bits: bi for bi, bits in enumerate(S.incidence) if S.blocks[bi].kind == HERMITIAN}
    classes = parallel_classes(S)
    class_of = {bi: ci for ci, cls in enumerate(classes) for bi in cls}
    herm_classes = {ci for ci, cls in enumerate(classes) if S.blocks[cls[0]].kind == HERMITIAN}

    mismatches: list[str] = []
    matched, covered = 0, set()
    for r in range(A0.k):
        hit = []
        for s in range(A0.q):
            fiber = _mask(col_point[j] for j in range(A0.N) if A0.cells[r, j] == s)
            bi = by_members.get(fiber)
            if bi is None:
                mismatches.append(f"row {r} symbol {s}: fiber is not a Hermitian-type block")
                continue
            hit.append(bi)
            if A0.row_keys is not None:
                form = A0.row_keys[r]
                blk = S.blocks[bi].params
                # the fiber F^g = s is the block (a_g, c) with c = -s
                if blk.a != form.a or symbol_of(-blk.c) != s:
                    mismatches.append(f"row {r} symbol {s}: matched block {bi} has other parameters")
        if len(hit) != A0.q:
            continue
        cls = {class_of[bi] for bi in hit}
        if len(set(hit)) != A0.q or len(cls) != 1 or set(classes[cls.pop()]) != set(hit):
            mismatches.append(f"row {r}: symbol fibers do not form one parallel class")
            continue
        matched += 1
        covered.add(class_of[hit[0]])
    if len(covered) != matched:
        mismatches.append("two rows map to the same parallel class")
    return CorrespondenceReport(bijection, matched, len(herm_classes), len(covered), mismatches)


# -- JSON export/import --

def _point_str(x) -> str:
    return " ".join(format_element(c) for c in x)


def _params_json(block: Block) -> dict:
    p = block.params
    if block.kind == HERMITIAN:
        return {"a": [format_element(x) for x in p.a], "c": format_element(p.c)}
    return {"omega": [format_element(x) for x in p.omega], "v": format_element(p.v)}


def to_json(S: IncidenceStructure, classes: list[list[int]] | None = None) -> str:
    if classes is None:
        classes = parallel_classes(S)
    doc = {
        "q": S.q,
        "n": S.n,
        "v": S.v,
        "b": S.b,
        "points": [_point_str(pt.coords) for pt in S.points],
        "blocks": [
            {"kind": bl.kind, "params": _params_json(bl), "members": list(bl.members)} for bl in S.blocks
        ],
        "parallel_classes": classes,
    }
    return json.dumps(doc, separators=(",", ":")) + "\n"


def from_json(text: str) -> IncidenceStructure:
    try:
        doc = json.loads(text)
        q, n = int(doc["q"]), int(doc["n"])
        spec: FieldSpec = field_for_q(q)
        points = []
        for s in doc["points"]:
            coords = tuple(parse_element(spec, tok) for tok in s.split(" "))
            if len(coords) != n:
                raise OAFormatError(f"point {s!r} does not have {n} coordinates")
            points.append(DesignPoint(coords[:-1], coords[-1]))
        blocks = []
        for entry in doc["blocks"]:
            kind, prm = entry["kind"], entry["params"]
            if kind == HERMITIAN:
                params = TranslatedForm(
                    tuple(parse_element(spec, t) for t in prm["a"]), parse_element(spec, prm["c"])
                )
            elif kind == CONE:
                params = ConeSpec(
                    tuple(parse_element(spec, t) for t in prm["omega"]), parse_element(spec, prm["v"])
                )
            else:
                raise OAFormatError(f"unknown block kind {kind!r}")
            members = tuple(int(m) for m in entry["members"])
            if any(not 0 <= m < len(points) for m in members):
                raise OAFormatError("block member index out of range")
            blocks.append(Block(kind, params, members))
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise OAFormatError(f"malformed design file: {exc}") from None
    if doc.get("v", len(points)) != len(points) or doc.get("b", len(blocks)) != len(blocks):
        raise OAFormatError("declared v/b do not match the point/block lists")
    return IncidenceStructure(q, n, points, blocks, [_mask(bl.members) for bl in blocks])


def export_design(S: IncidenceStructure, path, classes=None) -> None:
    Path(path).write_text(to_json(S, classes), encoding="ascii")


def import_design(path) -> IncidenceStructure:
    return from_json(Path(path).read_text(encoding="ascii"))


def hermitian_variety_points(S: IncidenceStructure) -> list[int]:
    """Points of the affine canonical variety (orbits where F vanishes)."""
    return [k for k, pt in enumerate(S.points) if eval_canonical(pt.coords).is_zero()]
