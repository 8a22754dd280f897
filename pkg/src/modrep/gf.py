"""Small finite fields GF(p^m) with table-driven exact arithmetic.

Elements are encoded as integers 0..q-1.  For GF(p^m) the encoding is the
base-p digit vector of the integer, read as coefficients of a polynomial in
the generator `w`, so addition in characteristic 2 is plain XOR.  All
arithmetic is exact; fields are cached per (p, m).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

MAX_Q = 256


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def factor_prime_power(q: int):
    """Return (p, m) with q = p^m, or raise FieldError."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if is_prime(p) and q % p == 0:
            m = 0
            n = q
            while n % p == 0:
                n //= p
                m += 1
            if n != 1:
                raise FieldError(f"{q} is not a prime power")
            return p, m
    raise FieldError(f"{q} is not a prime power")


def _poly_mul_mod(a, b, modpoly, p):
    # polynomials as little-endian coefficient lists over GF(p)
    res = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                res[i + j] = (res[i + j] + ca * cb) % p
    # reduce mod modpoly (monic, degree m)
    m = len(modpoly) - 1
    for i in range(len(res) - 1, m - 1, -1):
        c = res[i]
        if c:
            for j in range(m + 1):
                res[i - m + j] = (res[i - m + j] - c * modpoly[j]) % p
    return res[:m]


def _find_irreducible(p: int, m: int):
    """Lexicographically first monic irreducible of degree m over GF(p)
    whose root generates the multiplicative group."""
    q = p**m
    if m == 1:
        # x - g for the smallest primitive root g mod p
        for g in range(1, p):
            x, order = g, 1
            while x != 1:
                x = (x * g) % p
                order += 1
            if order == p - 1:
                return [(-g) % p, 1]
        return [p - 1, 1]  # p == 2

    def encode(coeffs):
        v = 0
        for c in reversed(coeffs):
            v = v * p + c
        return v

    for tail in range(p**m):
        coeffs = []
        t = tail
        for _ in range(m):
            coeffs.append(t % p)
            t //= p
        poly = coeffs + [1]
        # irreducibility by trial: x has multiplicative order dividing q-1 and
        # not dividing any (p^d - 1) for proper divisor d of m; cheap at q<=256
        # via direct order computation of x in the quotient ring
        x = [0, 1][:m] + [0] * max(0, m - 2)
        if m == 1:
            x = [1]
        elem = x[:m] + [0] * (m - len(x))
        seen_one = None
        cur = [1] + [0] * (m - 1)
        order = 0
        ok = True
        for k in range(1, q):
            cur = _poly_mul_mod(cur, elem, poly, p)
            order = k
            if cur == [1] + [0] * (m - 1):
                seen_one = k
                break
            if all(c == 0 for c in cur):
                ok = False  # x is a zero divisor: poly reducible with x | poly
                break
        if not ok or seen_one is None:
            continue
        if seen_one == q - 1:
            # x primitive ==> ring has q-1 units among powers of x ==> field
            return poly
    raise FieldError(f"no primitive irreducible found for GF({p}^{m})")


@dataclass(frozen=True)
class FF:
    """The field GF(p^m) for q = p^m <= 256."""

    p: int
    m: int
    poly: tuple  # monic defining polynomial, little-endian over GF(p)
    q: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.p**self.m)
        object.__setattr__(self, "_tables", _build_tables(self.p, self.m, self.poly))

    # -- table accessors -------------------------------------------------
    @property
    def ADD(self) -> np.ndarray:
        return self._tables[0]

    @property
    def SUB(self) -> np.ndarray:
        return self._tables[1]

    @property
    def MUL(self) -> np.ndarray:
        return self._tables[2]

    @property
    def INV(self) -> np.ndarray:
        return self._tables[3]

    @property
    def NEG(self) -> np.ndarray:
        return self._tables[4]

    @property
    def FROB(self) -> np.ndarray:
        """x -> x^p as a table."""
        return self._tables[5]

    def add(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return self.ADD[a, b]

    def sub(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return self.SUB[a, b]

    def mul(self, a, b):
        return self.MUL[a, b]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inversion of 0 in GF(q)")
        return self.INV[a]

    def neg(self, a):
        if self.p == 2:
            return np.asarray(a, dtype=np.uint8)
        return self.NEG[a]

    def pow(self, a: int, n: int) -> int:
        n = int(n)
        if n < 0:
            a = int(self.inv(a))
            n = -n
        r, base = 1, int(a)
        while n:
            if n & 1:
                r = int(self.MUL[r, base])
            base = int(self.MUL[base, base])
            n >>= 1
        return r

    def frobenius_inverse(self, a):
        """The inverse of x -> x^p (the field is perfect)."""
        return self._tables[6][a]

    @property
    def generator(self) -> int:
        """A multiplicative generator (the class of x for m>1)."""
        if self.m > 1:
            return self.p  # encoding of the polynomial x
        for g in range(2, self.q):
            if self._mult_order(g) == self.q - 1:
                return g
        return 1

    def _mult_order(self, a: int) -> int:
        r, k = a, 1
        while r != 1:
            r = int(self.MUL[r, a])
            k += 1
        return k

    def element_repr(self, a: int) -> str:
        if self.m == 1:
            return str(a)
        digits = []
        t = a
        for _ in range(self.m):
            digits.append(t % self.p)
            t //= self.p
        terms = []
        for i, c in enumerate(digits):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(("" if c == 1 else str(c)) + "w")
            else:
                terms.append(("" if c == 1 else str(c)) + f"w^{i}")
        return "+".join(terms) if terms else "0"

    def __repr__(self):
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    def __hash__(self):
        return hash((self.p, self.m, self.poly))


def _build_tables(p, m, poly):
    q = p**m

    def decode(v):
        digits = []
        for _ in range(m):
            digits.append(v % p)
            v //= p
        return digits

    def encode(digits):
        v = 0
        for c in reversed(digits):
            v = v * p + c
        return v

    add = np.zeros((q, q), dtype=np.uint8)
    mul = np.zeros((q, q), dtype=np.uint8)
    for a in range(q):
        da = decode(a)
        for b in range(q):
            db = decode(b)
            add[a, b] = encode([(x + y) % p for x, y in zip(da, db)])
            mul[a, b] = encode(_poly_mul_mod(da, db, list(poly), p))
    neg = np.zeros(q, dtype=np.uint8)
    for a in range(q):
        neg[a] = encode([(-x) % p for x in decode(a)])
    sub = add[:, neg]
    inv = np.zeros(q, dtype=np.uint8)
    for a in range(1, q):
        for b in range(1, q):
            if mul[a, b] == 1:
                inv[a] = b
                break
    frob = np.zeros(q, dtype=np.uint8)
    for a in range(q):
        r = 1
        for _ in range(p):
            r = int(mul[r, a])
        frob[a] = r
    frob_inv = np.zeros(q, dtype=np.uint8)
    frob_inv[frob] = np.arange(q, dtype=np.uint8)
    return add, sub, mul, inv, neg, frob, frob_inv


@functools.lru_cache(maxsize=None)
def GF(q: int, p: int | None = None, m: int | None = None) -> FF:
    """Construct (and cache) GF(q).  `GF(4)`, `GF(2, m=2)` etc."""
    if p is None or m is None:
        p, m = factor_prime_power(q)
    if p**m != q:
        raise FieldError(f"inconsistent field spec q={q}, p={p}, m={m}")
    if q > MAX_Q:
        raise FieldError(f"GF({q}) exceeds the supported table size ({MAX_Q})")
    poly = tuple(_find_irreducible(p, m))
    return FF(p, m, poly)
