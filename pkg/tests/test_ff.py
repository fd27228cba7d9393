import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_mul, gf_rem

from hermoa import ff
from hermoa.ff import (
    element,
    elements,
    field_for_q,
    frobenius_q,
    generator,
    in_subfield_q,
    make_field,
    rel_norm,
    rel_trace,
    trace_data,
)
from oracles import (
    check_field_axioms,
    check_frobenius,
    check_norm_fibers,
    check_trace_fibers,
    check_trace_nondegenerate,
)

QUADRATIC = [(2, 2), (3, 2), (2, 4), (5, 2), (7, 2), (2, 6), (3, 4)]


def gf4():
    F = make_field(2, 2)
    zero, one, w, w1 = elements(F)
    return F, zero, one, w, w1


# -- construction --

def test_make_field_examples():
    assert make_field(2, 2).modulus == (1, 1, 1)
    assert make_field(3, 2).modulus == (1, 0, 1)
    F = make_field(2, 1)
    assert F.modulus == (0, 1)
    assert [x.coeffs for x in elements(F)] == [(0,), (1,)]


@pytest.mark.parametrize("p,e", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2), (2, 6), (3, 4)])
def test_modulus_is_smallest_irreducible(p, e):
    # sympy irreducibility test, scanning candidates constant term first
    def irreducible(low):
        return gf_irreducible_p([1] + list(reversed(low)), p, ZZ)

    expected = next(low for low in itertools.product(range(p), repeat=e) if irreducible(low))
    assert make_field(p, e).modulus == expected + (1,)


def test_make_field_rejects_bad_input():
    with pytest.raises(ValueError):
        make_field(4, 2)
    with pytest.raises(ValueError):
        make_field(2, 9)
    with pytest.raises(ValueError):
        make_field(2, 0)
    with pytest.raises(ValueError):
        ff.FieldSpec(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2 over GF(2)


def test_prime_power():
    assert ff.prime_power(2) == (2, 1)
    assert ff.prime_power(9) == (3, 2)
    assert ff.prime_power(64) == (2, 6)
    for bad in (1, 6, 12, 100):
        with pytest.raises(ValueError):
            ff.prime_power(bad)


def test_enumeration_order():
    F, zero, one, w, w1 = gf4()
    assert [x.coeffs for x in elements(F)] == [(0, 0), (1, 0), (0, 1), (1, 1)]
    assert w == generator(F)
    G = make_field(3, 2)
    assert [x.coeffs for x in elements(G)[:3]] == [(0, 0), (1, 0), (2, 0)]
    assert len(elements(G)) == 9
    assert [x.index for x in elements(G)] == list(range(9))


# -- arithmetic examples --

def test_gf4_examples():
    F, zero, one, w, w1 = gf4()
    assert one.inv() == one
    assert w.inv() == w1
    assert w * w1 == one
    assert frobenius_q(w) == w1
    assert frobenius_q(one) == one
    assert rel_trace(zero) == zero
    assert rel_trace(w) == one
    assert rel_trace(one) == zero
    assert rel_norm(zero) == zero
    assert rel_norm(w) == one


def test_gf9_examples():
    G = make_field(3, 2)
    x = generator(G)
    assert x**8 == 1
    assert frobenius_q(frobenius_q(x)) == x
    # x^2 = -1 under x^2 + 1, so x^4 = 1
    assert rel_norm(x) == element(G, (1, 0))
    assert rel_norm(x) == x**4


def test_errors():
    F, zero, one, w, w1 = gf4()
    with pytest.raises(ZeroDivisionError):
        zero.inv()
    with pytest.raises(ZeroDivisionError):
        one / zero
    G = make_field(3, 2)
    with pytest.raises(ValueError):
        one + elements(G)[1]
    odd = make_field(2, 3)
    for op in (frobenius_q, rel_trace, rel_norm):
        with pytest.raises(ValueError):
            op(elements(odd)[2])
    with pytest.raises(ValueError):
        trace_data(odd)


@pytest.mark.parametrize("p,e", [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 4), (2, 6)])
def test_multiplication_matches_sympy(p, e):
    F = make_field(p, e)
    mod = list(reversed(F.modulus))
    elems = elements(F)
    for a in elems:
        for b in elems:
            expected = gf_rem(gf_mul(list(reversed(a.coeffs)), list(reversed(b.coeffs)), p, ZZ), mod, p, ZZ)
            got = [int(c) for c in expected][::-1]
            got += [0] * (e - len(got))
            assert (a * b).coeffs == tuple(got)


def test_polynomial_path_matches_tables():
    # GF(3^6) has 729 elements: above the table limit, so arithmetic is polynomial
    F = make_field(3, 6)
    x = generator(F)
    assert x ** (F.order - 1) == 1
    y = x**100 + x**7 + 2
    assert y * y.inv() == 1
    assert frobenius_q(frobenius_q(y)) == y
    assert in_subfield_q(rel_trace(y))


@pytest.mark.parametrize("p,e", QUADRATIC)
def test_subfield_and_trace_data(p, e):
    F = make_field(p, e)
    q = F.q
    sub = ff.subfield_elements(F)
    assert len(sub) == q
    assert sub[0] == 0 and sub[1] == 1
    td = trace_data(F)
    assert len(td.t0) == q and all(rel_trace(t) == 0 for t in td.t0)
    assert len(td.coset_reps) == q and td.coset_reps[0] == 0
    sums = [c + t for c in td.coset_reps for t in td.t0]
    assert len(set(sums)) == F.order


def test_trace_data_gf4():
    F, zero, one, w, w1 = gf4()
    td = trace_data(F)
    assert td.t0 == (zero, one)
    assert td.coset_reps == (zero, w)
    assert td.rep_of(w1) == w


def test_primitive_element():
    F, zero, one, w, w1 = gf4()
    assert ff.primitive_element(F) == w
    G = make_field(3, 2)
    eps = ff.primitive_element(G)
    assert len({eps**k for k in range(8)}) == 8


def test_field_table_text():
    text = ff.field_table_text(make_field(2, 2))
    lines = text.splitlines()
    assert "# T0" in lines and lines[lines.index("# T0") + 1] == "0 1"
    assert lines[lines.index("# C") + 1] == "0 2"
    assert lines[lines.index("# multiplication") + 3] == "0 2 3 1"


def test_format_roundtrip():
    G = make_field(5, 2)
    for x in elements(G):
        assert ff.parse_element(G, ff.format_element(x)) == x
    with pytest.raises(ValueError):
        ff.parse_element(G, "a:b")


# -- property tests --

@settings(max_examples=200, deadline=None)
@given(st.sampled_from(QUADRATIC), st.data())
def test_power_laws(pe, data):
    F = make_field(*pe)
    x = element(F, data.draw(st.integers(1, F.order - 1)))
    a = data.draw(st.integers(-50, 50))
    b = data.draw(st.integers(-50, 50))
    assert x ** (a + b) == x**a * x**b
    assert (x**a) ** 2 == x ** (2 * a)
    assert x * x.inv() == 1
    assert rel_norm(x) == x ** (F.q + 1)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(QUADRATIC), st.data())
def test_norm_multiplicative(pe, data):
    F = make_field(*pe)
    x = element(F, data.draw(st.integers(0, F.order - 1)))
    y = element(F, data.draw(st.integers(0, F.order - 1)))
    assert rel_norm(x * y) == rel_norm(x) * rel_norm(y)
    assert rel_trace(x + y) == rel_trace(x) + rel_trace(y)


EXHAUSTIVE_FIELDS = [(2, 2), (3, 2), (2, 4), (5, 2), (7, 2), (2, 6), (3, 4)]


@pytest.mark.parametrize("p,e", EXHAUSTIVE_FIELDS)
def test_exhaustive_field_suite(p, e):
    F = make_field(p, e)
    assert check_field_axioms(F)
    assert check_frobenius(F)
    assert check_trace_fibers(F)
    assert check_trace_nondegenerate(F)
    assert check_norm_fibers(F)


def test_tables_agree_with_elements():
    F = field_for_q(3)
    T = ff.tables(F)
    for x in elements(F):
        assert T.frob[x.index] == frobenius_q(x).index
        assert T.norm[x.index] == (x ** 4).index
