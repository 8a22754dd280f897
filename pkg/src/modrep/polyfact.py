"""Univariate polynomial arithmetic and factorization over GF(q).

Polynomials are little-endian coefficient tuples of field codes.  Factoring
is distinct-degree followed by equal-degree splitting (Cantor-Zassenhaus,
with the trace-map variant in characteristic 2).  Degrees here stay in the
hundreds, so nothing is asymptotically clever.
"""

from __future__ import annotations

import numpy as np

from .gf import FF


def _trim(c):
    i = len(c) - 1
    while i >= 0 and c[i] == 0:
        i -= 1
    return tuple(c[: i + 1])


def poly_deg(a) -> int:
    return len(a) - 1  # zero polynomial is the empty tuple, degree -1


def poly_add(f: FF, a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = int(f.add(out[i], c))
    return _trim(out)


def poly_sub(f: FF, a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = int(f.sub(out[i], c))
    return _trim(out)


def poly_mul(f: FF, a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            row = f.MUL[ca, np.asarray(b, dtype=np.uint8)]
            for j, cb in enumerate(row):
                out[i + j] = int(f.add(out[i + j], int(cb)))
    return _trim(out)


def poly_scale(f: FF, a, c):
    return _trim([int(f.MUL[c, x]) for x in a])


def poly_divmod(f: FF, a, b):
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(_trim(a))
    db, lb = poly_deg(b), b[-1]
    ilb = int(f.INV[lb])
    q = [0] * max(0, len(a) - db)
    while len(a) - 1 >= db and any(a):
        da = len(a) - 1
        if a[-1] == 0:
            a.pop()
            continue
        c = int(f.MUL[a[-1], ilb])
        q[da - db] = c
        for j in range(db + 1):
            a[da - db + j] = int(f.sub(a[da - db + j], int(f.MUL[c, b[j]])))
        a.pop()
    return _trim(q), _trim(a)


def poly_mod(f: FF, a, b):
    return poly_divmod(f, a, b)[1]


def poly_gcd(f: FF, a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_mod(f, a, b)
    if a:
        a = poly_scale(f, a, int(f.INV[a[-1]]))
    return a


def poly_pow_mod(f: FF, a, n: int, mod):
    result = (1,)
    base = poly_mod(f, a, mod)
    while n:
        if n & 1:
            result = poly_mod(f, poly_mul(f, result, base), mod)
        base = poly_mod(f, poly_mul(f, base, base), mod)
        n >>= 1
    return result


def poly_monic(f: FF, a):
    a = _trim(a)
    if a and a[-1] != 1:
        a = poly_scale(f, a, int(f.INV[a[-1]]))
    return a


def poly_lcm(f: FF, a, b):
    a, b = _trim(a), _trim(b)
    if not a or not b:
        return ()
    g = poly_gcd(f, a, b)
    q = poly_divmod(f, a, g)[0]
    return poly_monic(f, poly_mul(f, q, b))


def poly_eval_matrix(f: FF, a, M):
    """Evaluate the polynomial at a square Mat by Horner."""
    from .matrix import Mat

    n = M.rows
    out = Mat.zeros(f, n, n)
    for c in reversed(a):
        out = out @ M
        if c:
            out = out + Mat.identity(f, n).scale(c)
    return out


def poly_derivative(f: FF, a):
    # an integer s < p is encoded by the code s itself (prime subfield)
    out = []
    for i in range(1, len(a)):
        s = i % f.p
        out.append(int(f.MUL[s, a[i]]) if s else 0)
    return _trim(out)


def squarefree_part_factors(f: FF, a):
    """Split a monic polynomial into (factor, multiplicity) squarefree layers."""
    # standard char-p squarefree decomposition, pulling p-th roots as needed
    out = []
    a = poly_monic(f, a)
    mult = 1
    while poly_deg(a) > 0:
        d = poly_derivative(f, a)
        if not d:
            # a is a p-th power: take p-th root coefficientwise
            root = [int(f.frobenius_inverse(a[i])) for i in range(0, len(a), f.p)]
            a = _trim(root)
            mult *= f.p
            continue
        g = poly_gcd(f, a, d)
        w = poly_divmod(f, a, g)[0]  # squarefree
        i = 1
        while poly_deg(w) > 0:
            y = poly_gcd(f, w, g)
            z = poly_divmod(f, w, y)[0]
            if poly_deg(z) > 0:
                out.append((z, i * mult))
            w = y
            g = poly_divmod(f, g, y)[0]
            i += 1
        a = g
    return out


def _distinct_degree(f: FF, a):
    """Split squarefree monic a into products of factors of equal degree."""
    out = []
    x = (0, 1)
    h = x
    d = 0
    rest = a
    while poly_deg(rest) > 2 * d:
        d += 1
        h = poly_pow_mod(f, h, f.q, rest)
        g = poly_gcd(f, rest, poly_sub(f, h, x))
        if poly_deg(g) > 0:
            out.append((g, d))
            rest = poly_divmod(f, rest, g)[0]
            h = poly_mod(f, h, rest)
    if poly_deg(rest) > 0:
        out.append((rest, poly_deg(rest)))
    return out


def _equal_degree_split(f: FF, a, d: int, rng: np.random.Generator):
    """One random split of a squarefree product of degree-d irreducibles."""
    n = poly_deg(a)
    while True:
        coeffs = tuple(int(c) for c in rng.integers(0, f.q, size=n))
        b = _trim(coeffs)
        if poly_deg(b) < 1:
            continue
        g = poly_gcd(f, a, b)
        if 0 < poly_deg(g) < n:
            return g
        if f.p == 2:
            # trace map T(b) = b + b^2 + b^4 + ... over GF(2^k), k = m*d
            t = b
            cur = b
            for _ in range(f.m * d - 1):
                cur = poly_mod(f, poly_mul(f, cur, cur), a)
                t = poly_add(f, t, cur)
            g = poly_gcd(f, a, t)
        else:
            e = (f.q**d - 1) // 2
            g = poly_gcd(f, a, poly_sub(f, poly_pow_mod(f, b, e, a), (1,)))
        if 0 < poly_deg(g) < n:
            return g


def factor(f: FF, a, rng: np.random.Generator | None = None):
    """Full factorization: list of (irreducible monic, multiplicity)."""
    if rng is None:
        rng = np.random.default_rng(0x5EED)
    a = poly_monic(f, _trim(a))
    if poly_deg(a) <= 0:
        return []
    out = {}
    for sqfree, mult in squarefree_part_factors(f, a):
        for prod, d in _distinct_degree(f, sqfree):
            stack = [prod]
            while stack:
                g = stack.pop()
                if poly_deg(g) == d:
                    out[g] = out.get(g, 0) + mult
                    continue
                h = _equal_degree_split(f, g, d, rng)
                stack.append(h)
                stack.append(poly_divmod(f, g, h)[0])
    return sorted(out.items())


def is_irreducible(f: FF, a) -> bool:
    a = poly_monic(f, _trim(a))
    if poly_deg(a) <= 0:
        return False
    fac = factor(f, a)
    return len(fac) == 1 and fac[0][1] == 1 and poly_deg(fac[0][0]) == poly_deg(a)
