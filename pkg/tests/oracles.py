"""Independent oracles shared by the unit and acceptance suites.

Field checks run on dense index tables; OA and design oracles use plain
Python counting and hand-written GF(4) tables so they share no code path
with the builders.
"""

import itertools
from collections import Counter

import numpy as np

from hermoa import ff

def check_field_axioms(F) -> bool:
    T = ff.tables(F)
    n = F.order
    idx = np.arange(n)
    add, mul = T.add, T.mul
    ok = True
    # associativity over all triples
    a, b, c = np.meshgrid(idx, idx, idx, indexing="ij")
    ok &= bool((add[add[a, b], c] == add[a, add[b, c]]).all())
    ok &= bool((mul[mul[a, b], c] == mul[a, mul[b, c]]).all())
    ok &= bool((mul[a, add[b, c]] == add[mul[a, b], mul[a, c]]).all())
    ok &= bool((add == add.T).all() and (mul == mul.T).all())
    ok &= bool((add[0] == idx).all() and (mul[1] == idx).all())
    ok &= bool((add[idx, T.neg] == 0).all())
    ok &= bool((mul[idx[1:], T.inv[1:]] == 1).all())
    return ok


def check_frobenius(F) -> bool:
    T = ff.tables(F)
    idx = np.arange(F.order)
    a, b = np.meshgrid(idx, idx, indexing="ij")
    s = T.frob
    return bool(
        (s[T.add[a, b]] == T.add[s[a], s[b]]).all()
        and (s[T.mul[a, b]] == T.mul[s[a], s[b]]).all()
        and (s[s] == idx).all()
    )


def check_trace_fibers(F) -> bool:
    """Trace is GF(q)-linear, onto GF(q), with fibers of size q (the T0 cosets)."""
    T = ff.tables(F)
    q = F.q
    sub = np.array([x.index for x in ff.subfield_elements(F)])
    idx = np.arange(F.order)
    a, b = np.meshgrid(idx, idx, indexing="ij")
    linear = (T.trace[T.add[a, b]] == T.add[T.trace[a], T.trace[b]]).all()
    scalar = all((T.trace[T.mul[lam, idx]] == T.mul[lam, T.trace[idx]]).all() for lam in sub)
    counts = np.bincount(T.trace, minlength=F.order)
    fibers = set(np.flatnonzero(counts)) == set(sub) and (counts[sub] == q).all()
    return bool(linear and scalar and fibers)


def check_trace_nondegenerate(F) -> bool:
    """For x != 0 some alpha has tr(alpha x) != 0."""
    T = ff.tables(F)
    return bool(all((T.trace[T.mul[1:, x]] != 0).any() for x in range(1, F.order)))


def check_norm_fibers(F) -> bool:
    T = ff.tables(F)
    q = F.q
    sub = [x.index for x in ff.subfield_elements(F)]
    counts = np.bincount(T.norm[1:], minlength=F.order)
    return set(np.flatnonzero(counts)) == set(sub[1:]) and all(counts[s] == q + 1 for s in sub[1:])




# -- collineations of G as explicit matrices --

def collineation_matrix(i, j):
    """The (n+1)x(n+1) matrix whose inverse represents g; x -> x K maps W to W."""
    n = len(i)
    spec = i[0].spec
    zero, one = ff.zero(spec), ff.one(spec)
    K = [[zero] * (n + 1) for _ in range(n + 1)]
    for t in range(n + 1):
        K[t][t] = one
    for t in range(n - 1):
        K[t][n - 1] = j[t]
    for t in range(n):
        K[n][t] = i[t]
    return K


def matmul(A, B):
    spec = A[0][0].spec
    size = len(A)
    out = []
    for r in range(size):
        row = []
        for c in range(size):
            acc = ff.zero(spec)
            for m in range(size):
                acc = acc + A[r][m] * B[m][c]
            row.append(acc)
        out.append(row)
    return out


def split_matrix(K):
    """Recover (i, j) from a matrix of the collineation shape, or None."""
    n = len(K) - 1
    spec = K[0][0].spec
    zero, one = ff.zero(spec), ff.one(spec)
    for r in range(n):
        for c in range(n + 1):
            if r == c:
                want = one
            elif c == n - 1 and r < n - 1:
                continue
            else:
                want = zero
            if K[r][c] != want:
                return None
    if K[n][n] != one:
        return None
    return tuple(K[n][:n]), tuple(K[t][n - 1] for t in range(n - 1))


def apply_collineation(K, x):
    """Affine point x (trailing 1 implicit) mapped by row-vector product x K."""
    vec = list(x) + [ff.one(x[0].spec)]
    size = len(vec)
    out = [ff.zero(x[0].spec)] * size
    for c in range(size):
        for m in range(size):
            out[c] = out[c] + vec[m] * K[m][c]
    assert out[-1] == 1
    return tuple(out[:-1])


def canonical_form_oracle(x):
    """F on W computed with plain powers, no trace/norm helpers."""
    q = x[0].spec.q
    total = ff.zero(x[0].spec)
    for xt in x[:-1]:
        total = total + xt ** (q + 1)
    return total + x[-1] ** q + x[-1]


# -- hand-written GF(4): 0, 1, w, w+1 as 0..3, addition is XOR --

GF4_MUL = [
    [0, 0, 0, 0],
    [0, 1, 2, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
]


def gf4_mul(a, b):
    return GF4_MUL[a][b]


def gf4_pow(a, k):
    out = 1
    for _ in range(k):
        out = gf4_mul(out, a)
    return out


def gf4_trace(a):
    return gf4_pow(a, 2) ^ a


def gf4_norm(a):
    return gf4_pow(a, 3)


def hand_A0_q2_n2():
    """A0 at (q, n) = (2, 2) straight from the definitions, using GF4_MUL only."""
    rows = []
    for i1 in range(4):
        # i2 in C = {0, w} with tr(i2) = norm(i1); only a = i1^2 matters
        a = gf4_pow(i1, 2)
        row = []
        for x1 in range(4):
            for x2 in (0, 2):
                value = gf4_norm(x1) ^ gf4_trace(x2) ^ gf4_trace(gf4_mul(x1, a))
                assert value in (0, 1)
                row.append(value)
        rows.append(row)
    return rows


# -- orthogonal-array counting without numpy --

def brute_force_index(cells, q, t):
    """Return the common count of every t-tuple over every t-subset of rows, or None."""
    k = len(cells)
    N = len(cells[0])
    common = None
    for rows in itertools.combinations(range(k), t):
        counts = Counter(tuple(cells[r][j] for r in rows) for j in range(N))
        for tup in itertools.product(range(q), repeat=t):
            c = counts.get(tup, 0)
            if common is None:
                common = c
            elif c != common:
                return None
    return common


def expected_lambda(q, n):
    return sum(q**i for i in range(2 * n - 2))
