import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modrep.gf import GF, FieldError, factor_prime_power

FIELDS = [GF(2), GF(3), GF(4), GF(5), GF(7), GF(8), GF(9), GF(11), GF(16), GF(25)]


def test_prime_power_detection():
    assert factor_prime_power(8) == (2, 3)
    assert factor_prime_power(121) == (11, 2)
    with pytest.raises(FieldError):
        factor_prime_power(12)
    with pytest.raises(FieldError):
        factor_prime_power(1)


@pytest.mark.parametrize("f", FIELDS, ids=lambda f: repr(f))
def test_field_axioms_exhaustive_small(f):
    if f.q > 16:
        pytest.skip("exhaustive check only for tiny fields")
    els = range(f.q)
    for a in els:
        assert f.add(a, 0) == a
        assert f.mul(a, 1) == a
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
        for b in els:
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, b) == f.mul(b, a)
            for c in els:
                assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
                assert f.add(a, f.add(b, c)) == f.add(f.add(a, b), c)
                assert f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c)


@given(st.integers(0, 24), st.integers(0, 24), st.integers(0, 24))
def test_gf25_random_triples(a, b, c):
    f = GF(25)
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))


@pytest.mark.parametrize("f", FIELDS, ids=lambda f: repr(f))
def test_frobenius_and_generator(f):
    for a in range(f.q):
        assert f.frobenius_inverse(f.FROB[a]) == a
        assert f.FROB[a] == f.pow(a, f.p) if a else f.FROB[a] == 0
    g = f.generator
    seen = {1}
    x = g
    while x != 1:
        seen.add(x)
        x = int(f.mul(x, g))
    assert len(seen) == f.q - 1


def test_gf4_structure():
    f = GF(4)
    w = f.generator
    assert f.mul(w, w) == f.add(w, 1)  # w^2 = w + 1
    assert f.pow(w, 3) == 1


def test_defining_polynomial_irreducible():
    # the defining polynomial has no roots in GF(p) (degree <= 3 suffices here)
    for f in FIELDS:
        if f.m == 1 or f.m > 3:
            continue
        for r in range(f.p):
            acc = 0
            for i, c in enumerate(f.poly):
                term = (c * pow(r, i)) % f.p
                acc = (acc + term) % f.p
            assert acc != 0


def test_field_cache():
    assert GF(4) is GF(4)
    with pytest.raises(FieldError):
        GF(512)
