"""Orthogonal arrays from translated Hermitian forms, plus an exact verifier.

The verifier only looks at the symbol matrix, so it applies equally to
arrays read from disk and cannot share bugs with the builders.
"""

from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import CapExceededError, OAFormatError, cell_cap
from .ff import FieldElement, field_for_q, subfield_elements, trace_data
from .geometry import AffinePoint, TranslatedForm, affine_points, enumerate_R, eval_translated


@dataclass(eq=False)
class OrthogonalArray:
    """k x N symbol matrix (rows = factors, columns = runs) with claimed strength and index."""

    q: int
    cells: np.ndarray
    strength: int
    index: int
    col_keys: list[AffinePoint] | None = None
    row_keys: list[TranslatedForm] | None = None

    def __post_init__(self):
        self.cells = np.asarray(self.cells, dtype=np.int64)
        if self.cells.ndim != 2:
            raise ValueError("cells must be a k x N matrix")
        if self.q < 2:
            raise ValueError("need at least two symbols")
        if self.cells.size and (self.cells.min() < 0 or self.cells.max() >= self.q):
            raise ValueError(f"symbols must lie in [0, {self.q})")
        if self.col_keys is not None and len(self.col_keys) != self.N:
            raise ValueError("one column key per run required")

    @property
    def k(self) -> int:
        return self.cells.shape[0]

    @property
    def N(self) -> int:
        return self.cells.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, OrthogonalArray):
            return NotImplemented
        return (
            (self.q, self.strength, self.index) == (other.q, other.strength, other.index)
            and self.cells.shape == other.cells.shape
            and bool(np.array_equal(self.cells, other.cells))
        )


def symbol_of(x: FieldElement) -> int:
    """Position of x in the enumeration-ordered list of GF(q) inside GF(q^2)."""
    try:
        return subfield_elements(x.spec).index(x)
    except ValueError:
        raise ValueError(f"{x!r} is not in the subfield GF(q)") from None


def _build(q: int, n: int, restrict: bool) -> OrthogonalArray:
    if n < 2:
        raise ValueError("n must be at least 2")
    spec = field_for_q(q)
    k = q ** (2 * n - 2)
    N = q ** (2 * n - 1) if restrict else q ** (2 * n)
    if k * N > cell_cap():
        raise CapExceededError(f"{k} x {N} array exceeds the cell cap {cell_cap()}")
    rows = enumerate_R(q, n)
    cols = affine_points(spec, n)
    if restrict:
        reps = set(trace_data(spec).coset_reps)
        cols = [x for x in cols if x[-1] in reps]
    symbols = {x: s for s, x in enumerate(subfield_elements(spec))}
    cells = np.array([[symbols[eval_translated(f, x)] for x in cols] for f in rows], dtype=np.int64)
    if restrict:
        return OrthogonalArray(q, cells, 2, q ** (2 * n - 3), cols, rows)
    return OrthogonalArray(q, cells, 2, q ** (2 * n - 2), cols, rows)


def build_A(q: int, n: int) -> OrthogonalArray:
    """Rows: forms F^g for g in R; columns: all of W.  OA(q^2n, q^(2n-2), q, 2)."""
    return _build(q, n, restrict=False)


def build_A0(q: int, n: int) -> OrthogonalArray:
    """Same rows, columns restricted to x_n in C.  Simple OA(q^(2n-1), q^(2n-2), q, 2)."""
    return _build(q, n, restrict=True)


# -- verification --

@dataclass
class VerificationReport:
    achieved_strength: int
    index_at: dict[int, int | str]
    simple: bool | None = None
    duplicate_classes: dict[int, int] = field(default_factory=dict)
    violations: list[tuple[tuple[int, ...], tuple[int, ...], int]] = field(default_factory=list)
    claimed_strength: int | None = None
    claimed_index: int | None = None

    @property
    def meets_claim(self) -> bool:
        if self.claimed_strength is None:
            return True
        t = self.claimed_strength
        return self.achieved_strength >= t and self.index_at.get(t) == self.claimed_index

    def first_violation(self) -> str | None:
        if not self.violations:
            return None
        rows, symbols, count = self.violations[0]
        return f"rows {list(rows)} see symbols {list(symbols)} {count} times"

    def as_dict(self) -> dict:
        return {
            "achieved_strength": self.achieved_strength,
            "index_at": {str(t): mu for t, mu in self.index_at.items()},
            "simple": self.simple,
            "duplicate_classes": {str(m): c for m, c in sorted(self.duplicate_classes.items())},
            "violations": [
                {"rows": list(r), "symbols": list(s), "count": c} for r, s, c in self.violations
            ],
            "claimed_strength": self.claimed_strength,
            "claimed_index": self.claimed_index,
            "meets_claim": self.meets_claim,
        }


def _scan(cells: np.ndarray, q: int, subsets: Sequence[tuple[int, ...]], mu: int, limit: int):
    bad = []
    uniform = True
    for rows in subsets:
        code = np.zeros(cells.shape[1], dtype=np.int64)
        for r in rows:
            code = code * q + cells[r]
        counts = np.bincount(code, minlength=q ** len(rows))
        if (counts != mu).any():
            uniform = False
            for c in np.flatnonzero(counts != mu):
                if len(bad) >= limit:
                    break
                digits = np.unravel_index(int(c), (q,) * len(rows))
                bad.append((tuple(rows), tuple(int(d) for d in digits), int(counts[c])))
            if len(bad) >= limit:
                break
    return uniform, bad


def _level(A: OrthogonalArray, s: int, threads: int, limit: int):
    N, q = A.N, A.q
    if N % q**s:
        mu = None
    else:
        mu = N // q**s
    subsets = list(itertools.combinations(range(A.k), s))
    target = -1 if mu is None else mu
    if threads <= 1 or len(subsets) < 64:
        uniform, bad = _scan(A.cells, q, subsets, target, limit)
    else:
        chunks = [subsets[i::threads] for i in range(threads)]
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda ch: _scan(A.cells, q, ch, target, limit), chunks))
        uniform = all(u for u, _ in parts)
        bad = sorted(v for _, b in parts for v in b)[:limit]
    return (mu if uniform and mu is not None else "non-uniform"), bad


def verify_strength(A: OrthogonalArray, t: int, threads: int = 1, max_violations: int = 20) -> VerificationReport:
    """Exact count of every s-tuple over every s-subset of rows, for s = 1..t."""
    if not 1 <= t <= A.k:
        raise ValueError(f"strength {t} outside [1, k={A.k}]")
    if A.q**t > A.N:
        raise ValueError(f"q^t = {A.q ** t} exceeds N = {A.N}")
    index_at: dict[int, int | str] = {}
    achieved = 0
    violations: list = []
    for s in range(1, t + 1):
        mu, bad = _level(A, s, threads, max_violations)
        index_at[s] = mu
        if mu == "non-uniform":
            if not violations:
                violations = bad
        elif achieved == s - 1:
            achieved = s
    return VerificationReport(
        achieved, index_at, violations=violations, claimed_strength=A.strength, claimed_index=A.index
    )


def duplicate_classes(A: OrthogonalArray) -> list[list[int]]:
    """Columns grouped by identical content, groups ordered by first occurrence."""
    groups: dict[bytes, list[int]] = {}
    cols = np.ascontiguousarray(A.cells.T)
    for j in range(A.N):
        groups.setdefault(cols[j].tobytes(), []).append(j)
    return list(groups.values())


def column_multiplicities(A: OrthogonalArray) -> dict[int, int]:
    """multiplicity -> number of distinct columns with that multiplicity."""
    return dict(Counter(len(g) for g in duplicate_classes(A)))


def verify_simple(A: OrthogonalArray) -> bool:
    return set(column_multiplicities(A)) <= {1}


def verify(A: OrthogonalArray, t: int | None = None, threads: int = 1) -> VerificationReport:
    report = verify_strength(A, A.strength if t is None else t, threads=threads)
    report.duplicate_classes = column_multiplicities(A)
    report.simple = set(report.duplicate_classes) <= {1}
    return report


# -- text format: header "N k q t mu", then one run (column) per line --

def to_text(A: OrthogonalArray) -> str:
    lines = [f"{A.N} {A.k} {A.q} {A.strength} {A.index}"]
    lines += [" ".join(map(str, col)) for col in A.cells.T.tolist()]
    return "\n".join(lines) + "\n"


def from_text(text: str) -> OrthogonalArray:
    if not text.isascii():
        raise OAFormatError("file is not ASCII")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise OAFormatError("empty file")
    try:
        header = [int(tok) for tok in lines[0].split(" ")]
    except ValueError:
        raise OAFormatError(f"malformed header {lines[0]!r}") from None
    if len(header) != 5:
        raise OAFormatError(f"header needs 5 fields 'N k q t mu', got {lines[0]!r}")
    N, k, q, t, mu = header
    if N < 1 or k < 1 or q < 2 or t < 0 or mu < 0:
        raise OAFormatError(f"implausible header {lines[0]!r}")
    runs = lines[1:]
    if len(runs) != N:
        raise OAFormatError(f"header declares N={N} runs but file has {len(runs)}")
    cells = np.empty((k, N), dtype=np.int64)
    for j, line in enumerate(runs):
        toks = line.split(" ")
        if len(toks) != k:
            raise OAFormatError(f"run {j + 1} has {len(toks)} symbols, expected {k}")
        try:
            vals = [int(tok) for tok in toks]
        except ValueError:
            raise OAFormatError(f"run {j + 1} is not numeric: {line!r}") from None
        for v in vals:
            if not 0 <= v < q:
                raise OAFormatError(f"run {j + 1} has symbol {v} outside [0, {q})")
        cells[:, j] = vals
    return OrthogonalArray(q, cells, t, mu)


def export_oa(A: OrthogonalArray, path) -> None:
    Path(path).write_bytes(to_text(A).encode("ascii"))


def import_oa(path) -> OrthogonalArray:
    return from_text(Path(path).read_bytes().decode("ascii", errors="replace"))


def shift_classes_match(A: OrthogonalArray) -> bool:
    """Whether the repeated-column classes of A are exactly the orbits x_n -> x_n + T0.

    Needs column keys.  Checks that shifting the last coordinate of any key by
    an element of T0 lands on an identical column, and that columns in
    different orbits differ.
    """
    if A.col_keys is None:
        raise ValueError("shift check needs column keys")
    spec = A.col_keys[0][0].spec
    t0 = trace_data(spec).t0
    where = {x: j for j, x in enumerate(A.col_keys)}
    for j, x in enumerate(A.col_keys):
        for r in t0:
            jj = where.get(x[:-1] + (x[-1] + r,))
            if jj is None or not np.array_equal(A.cells[:, j], A.cells[:, jj]):
                return False
    rep_of = trace_data(spec).rep_of
    for group in duplicate_classes(A):
        orbits = {A.col_keys[j][:-1] + (rep_of(A.col_keys[j][-1]),) for j in group}
        if len(orbits) != 1:
            return False
    return True
