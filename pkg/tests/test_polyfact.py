import numpy as np
import pytest

from modrep.gf import GF
from modrep.polyfact import (
    factor,
    is_irreducible,
    poly_add,
    poly_deg,
    poly_divmod,
    poly_gcd,
    poly_mul,
    poly_monic,
    _trim,
)


def test_divmod_roundtrip(rng):
    f = GF(4)
    for _ in range(20):
        a = tuple(int(x) for x in rng.integers(0, 4, size=9))
        b = tuple(int(x) for x in rng.integers(0, 4, size=4))
        if not any(b):
            continue
        q, r = poly_divmod(f, a, b)
        assert poly_deg(r) < poly_deg(b)
        assert poly_add(f, poly_mul(f, q, b), r) == _trim(a)


@pytest.mark.parametrize("q", [2, 3, 4, 9])
def test_factor_reassembles(q, rng):
    f = GF(q)
    for _ in range(10):
        a = tuple(int(x) for x in rng.integers(0, q, size=8))
        if sum(a) == 0:
            continue
        fac = factor(f, a)
        prod = (1,)
        for g, mult in fac:
            assert is_irreducible(f, g)
            for _ in range(mult):
                prod = poly_mul(f, prod, g)
        assert prod == poly_monic(f, a)


def test_known_factorizations():
    f2 = GF(2)
    # x^2 + x + 1 irreducible over GF(2)
    assert is_irreducible(f2, (1, 1, 1))
    # x^2 + 1 = (x+1)^2 over GF(2)
    assert factor(f2, (1, 0, 1)) == [((1, 1), 2)]
    f4 = GF(4)
    # over GF(4), x^2+x+1 splits into two linear factors
    fac = factor(f4, (1, 1, 1))
    assert len(fac) == 2 and all(m == 1 and len(g) == 2 for g, m in fac)


def test_gcd_of_coprime():
    f = GF(3)
    assert poly_gcd(f, (1, 1), (2, 1)) == (1,)
