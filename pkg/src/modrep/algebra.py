"""Finite-dimensional algebras by structure constants: radical, locality,
idempotent lifting, and splitting of commutative semisimple quotients.

The radical is computed module-theoretically: chop the regular module,
intersect the annihilators of its composition factors.  That is correct in
any characteristic (J(A) annihilates exactly the semisimple part), and the
brute-force checks below dimension 200 serve as the differential oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import FF
from .matrix import Mat, Subspace
from .polyfact import factor, poly_monic


class AlgebraError(RuntimeError):
    pass


@dataclass
class FDAlgebra:
    """Unital associative algebra with basis; mult[i,j] = coords of b_i b_j."""

    field: FF
    dim: int
    mult: np.ndarray  # (dim, dim, dim) uint8, field codes
    one: np.ndarray  # (dim,) coords of the identity

    @staticmethod
    def from_matrices(basis: list[Mat]) -> "FDAlgebra":
        """Algebra spanned by the given matrices (must be closed, contain 1)."""
        if not basis:
            raise AlgebraError("empty basis")
        f = basis[0].field
        e = len(basis)
        flat = Mat(f, np.array([m.a.reshape(-1) for m in basis], dtype=np.uint8))
        space = Subspace.from_rows(flat)
        if space.dim != e:
            raise AlgebraError("basis matrices are dependent")
        mult = np.zeros((e, e, e), dtype=np.uint8)
        for i in range(e):
            for j in range(e):
                prod = (basis[i] @ basis[j]).a.reshape(1, -1)
                mult[i, j] = space.coords_matrix(Mat(f, prod)).a[0]
        n = basis[0].rows
        ident = Mat.identity(f, n).a.reshape(1, -1)
        one = space.coords_matrix(Mat(f, ident)).a[0]
        return FDAlgebra(f, e, mult, one)

    # -- element arithmetic (coordinate vectors) -----------------------------
    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        f = self.field
        out = np.zeros(self.dim, dtype=np.uint8)
        for i in np.nonzero(x)[0]:
            acc = np.zeros(self.dim, dtype=np.uint8)
            for j in np.nonzero(y)[0]:
                acc = f.add(acc, f.MUL[int(y[j]), self.mult[i, j]])
            out = f.add(out, f.MUL[int(x[i]), acc])
        return out

    def regular_ops(self) -> list[Mat]:
        """Right-multiplication operators on coordinate ROW vectors.

        Row convention: an element y (row) maps to y * R_x = coords of y*x,
        so R_x[j, :] = coords of b_j x."""
        ops = []
        f = self.field
        for i in range(self.dim):
            # R for basis element b_i:  row j = coords of b_j b_i
            R = np.zeros((self.dim, self.dim), dtype=np.uint8)
            for j in range(self.dim):
                R[j] = self.mult[j, i]
            ops.append(Mat(f, R))
        return ops

    def power(self, x: np.ndarray, n: int) -> np.ndarray:
        out = self.one.copy()
        base = x.copy()
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.mult, np.swapaxes(self.mult, 0, 1)))

    def is_nilpotent_element(self, x: np.ndarray) -> bool:
        n = self.dim
        y = x.copy()
        k = 1
        while k < 2 * n + 2:
            if not y.any():
                return True
            y = self.mul(y, y)
            k *= 2
        return False

    # -- radical ----------------------------------------------------------------
    def radical(self, rng: np.random.Generator) -> Subspace:
        """J(A) = intersection of the annihilators of the simple quotients of
        the regular module."""
        from .meataxe import OpModule, chop

        ops = self.regular_ops()
        reg = OpModule(self.field, self.dim, ops)
        factors = chop(reg, rng)
        f = self.field
        J = Subspace.full(f, self.dim)
        for fac in factors:
            # annihilator of the factor: x = sum c_i b_i with sum c_i op_i = 0
            d = fac.dim
            blocks = np.zeros((self.dim, d * d), dtype=np.uint8)
            for i in range(self.dim):
                blocks[i] = fac.ops[i].a.reshape(-1)
            ann = Mat(f, blocks).nullspace_left()
            J = J.intersect(Subspace.from_rows(ann))
            if J.dim == 0:
                break
        return J

    def verify_radical(self, J: Subspace) -> bool:
        """Oracle checks: J is a nil ideal and dim A/J matches Wedderburn."""
        # ideal: closed under left/right multiplication by basis elements
        for i in range(J.dim):
            x = J.basis.a[i]
            for b in range(self.dim):
                eb = np.zeros(self.dim, dtype=np.uint8)
                eb[b] = 1
                if not J.contains_vec(self.mul(x, eb)):
                    return False
                if not J.contains_vec(self.mul(eb, x)):
                    return False
        # nil: every basis element of J is nilpotent (enough for an ideal in
        # a finite-dimensional algebra: a nil ideal is nilpotent)
        for i in range(J.dim):
            if not self.is_nilpotent_element(J.basis.a[i].copy()):
                return False
        return True

    def quotient(self, J: Subspace) -> tuple["FDAlgebra", Mat, list[int]]:
        """(A/J, section rows, complement column indices)."""
        f = self.field
        comp_cols = [c for c in range(self.dim) if c not in set(J.pivots)]
        k = len(comp_cols)

        def reduce_coords(v: np.ndarray) -> np.ndarray:
            _, resid = J.reduce_vec(v)
            return resid[comp_cols]

        mult = np.zeros((k, k, k), dtype=np.uint8)
        for a in range(k):
            ea = np.zeros(self.dim, dtype=np.uint8)
            ea[comp_cols[a]] = 1
            for b in range(k):
                eb = np.zeros(self.dim, dtype=np.uint8)
                eb[comp_cols[b]] = 1
                mult[a, b] = reduce_coords(self.mul(ea, eb))
        one = reduce_coords(self.one.copy())
        section = Mat.zeros(f, k, self.dim)
        for a in range(k):
            section.a[a, comp_cols[a]] = 1
        return FDAlgebra(f, k, mult, one), section, comp_cols

    # -- idempotents ---------------------------------------------------------------
    def lift_idempotent(self, e: np.ndarray, J: Subspace) -> np.ndarray:
        """Newton-lift e (idempotent mod J) to a true idempotent."""
        f = self.field
        cur = e.copy()
        for _ in range(self.dim + 2):
            e2 = self.mul(cur, cur)
            defect = f.sub(e2, cur)
            if not defect.any():
                return cur
            # 3e^2 - 2e^3; in characteristic 2 this is e^2
            e3 = self.mul(e2, cur)
            three = 3 % f.p
            two = 2 % f.p
            cur = f.sub(f.MUL[three, e2], f.MUL[two, e3])
        raise AlgebraError("idempotent lifting failed to converge")

    def frobenius_fixed_dim(self) -> int:
        """GF(p)-dimension of {x : x^q = x}; for commutative semisimple A
        this is m * (number of simple factors)."""
        f = self.field
        if not self.is_commutative():
            raise AlgebraError("frobenius splitting needs a commutative algebra")
        # x -> x^q is GF(p)-linear in commutative characteristic p; build it
        # on the GF(p)-basis {w^dig * b_i} and take the kernel of x^q - x
        n, m, q = self.dim, f.m, f.q
        T = np.zeros((n * m, n * m), dtype=np.int64)
        for i in range(n):
            for dig in range(m):
                x = np.zeros(n, dtype=np.uint8)
                x[i] = f.pow(f.generator, dig) if m > 1 else 1
                diff = f.sub(self.power(x, q), x)
                T[i * m + dig] = _digits_of_vector(diff, f)
        return n * m - _gfp_rank(T % f.p, f.p)

    def idempotents_of_commutative_semisimple(self, rng: np.random.Generator):
        """Primitive orthogonal idempotents of a commutative semisimple A.

        Factors that are proper field extensions of k are returned whole;
        the second component reports how many factors are non-split."""
        f = self.field
        pieces = [self.one.copy()]
        done = []
        guard = 0
        while pieces:
            guard += 1
            if guard > 4 * self.dim + 16:
                raise AlgebraError("commutative splitting did not terminate")
            e = pieces.pop()
            split = self._split_piece(e, rng)
            if split is None:
                done.append(e)
            else:
                pieces.extend(split)
        done.sort(key=lambda v: v.tobytes())
        return done

    def _split_piece(self, e: np.ndarray, rng: np.random.Generator):
        """Split the ideal eA (commutative, semisimple) or None if primitive
        over the base field (including the non-split field-extension case)."""
        f = self.field
        # try elements z = e*b_i*e and random combos; factor the local minimal
        # polynomial of z on eA; distinct factors -> Lagrange idempotents
        candidates = []
        for i in range(self.dim):
            ei = np.zeros(self.dim, dtype=np.uint8)
            ei[i] = 1
            candidates.append(self.mul(e, self.mul(ei, e)))
        for _ in range(8):
            r = rng.integers(0, f.q, size=self.dim, dtype=np.uint8)
            candidates.append(self.mul(e, self.mul(r, e)))
        split_found = None
        for z in candidates:
            mp = self._local_minpoly(z, e)
            fac = factor(f, mp)
            if len(fac) < 2:
                continue
            g1 = fac[0][0]
            from .polyfact import poly_divmod, poly_mul

            others = poly_divmod(f, mp, g1)[0]
            # idempotent: h = others * (others^{-1} mod g1), evaluated at z
            inv = _poly_inverse_mod(f, others, g1)
            h = poly_mul(f, others, inv)
            val = self._eval_poly(h, z, e)
            # val is idempotent in eA, nonzero, not e
            if not val.any() or np.array_equal(val, e):
                continue
            comp = f.sub(e, val)
            split_found = [val, comp]
            break
        return split_found

    def _local_minpoly(self, z: np.ndarray, e: np.ndarray):
        """Minimal polynomial of z acting on the ideal eA (unit e)."""
        from .matrix import Echelonizer

        f = self.field
        n = self.dim
        aug = Echelonizer(f, 2 * n + 1)
        iterates = []
        v = e.copy()  # z^0 within eA
        while True:
            k = len(iterates)
            row = np.zeros(2 * n + 1, dtype=np.uint8)
            row[:n] = v
            row[n + k] = 1
            reduced = aug.reduce(row)
            if not reduced[:n].any():
                return poly_monic(f, tuple(int(c) for c in reduced[n : n + k + 1]))
            aug.insert(row)
            iterates.append(v)
            v = self.mul(v, z)

    def _eval_poly(self, poly, z: np.ndarray, e: np.ndarray) -> np.ndarray:
        f = self.field
        out = np.zeros(self.dim, dtype=np.uint8)
        for c in reversed(poly):
            out = self.mul(out, z)
            if c:
                out = f.add(out, f.MUL[int(c), e])
        return out


def _digits_of_vector(v: np.ndarray, f: FF) -> np.ndarray:
    out = np.zeros(len(v) * f.m, dtype=np.int64)
    for i in range(len(v)):
        val = int(v[i])
        for dig in range(f.m):
            out[i * f.m + dig] = val % f.p
            val //= f.p
    return out


def _gfp_rank(a: np.ndarray, p: int) -> int:
    a = a % p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
        r += 1
    return r


def _poly_inverse_mod(f: FF, a, mod):
    """a^{-1} mod `mod` via extended Euclid (coprime inputs)."""
    from .polyfact import poly_divmod, poly_mul, poly_sub, _trim

    r0, r1 = _trim(mod), _trim(a)
    s0, s1 = (), (1,)
    while r1:
        q, r = poly_divmod(f, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(f, s0, poly_mul(f, q, s1))
    if len(r0) != 1:
        raise AlgebraError("polynomial not invertible modulo the given modulus")
    c = int(f.INV[r0[0]])
    from .polyfact import poly_scale

    return poly_scale(f, s0, c)


# ---------------------------------------------------------------------------
# locality of endomorphism algebras
# ---------------------------------------------------------------------------

@dataclass
class LocalityReport:
    is_local: bool
    end_dim: int
    radical_dim: int
    residue_dim: int
    residue_commutative: bool


def analyze_endomorphism_algebra(basis: list[Mat], rng: np.random.Generator):
    """(LocalityReport, FDAlgebra, radical, quotient data) for an End basis."""
    A = FDAlgebra.from_matrices(basis)
    J = A.radical(rng)
    Q, section, comp_cols = A.quotient(J)
    comm = Q.is_commutative()
    if comm:
        fixed = Q.frobenius_fixed_dim()
        local = fixed == A.field.m  # exactly one simple factor
    else:
        local = False  # a matrix factor of size >= 2 exists
    report = LocalityReport(local, A.dim, J.dim, Q.dim, comm)
    return report, A, J, (Q, section, comp_cols)


def find_splitting_idempotent(A: FDAlgebra, J: Subspace, quot_data,
                              rng: np.random.Generator) -> np.ndarray:
    """A nontrivial idempotent of A (exists when A is not local)."""
    Q, section, comp_cols = quot_data
    if Q.is_commutative():
        idems = Q.idempotents_of_commutative_semisimple(rng)
        if len(idems) < 2:
            raise AlgebraError("no splitting idempotent in a local algebra")
        eq = idems[0]
    else:
        eq = _idempotent_in_noncommutative(Q, rng)
    lifted_seed = (Mat(A.field, eq[None, :]) @ section).a[0]
    e = A.lift_idempotent(lifted_seed, J)
    if not e.any() or np.array_equal(e, A.one):
        raise AlgebraError("lifted idempotent degenerated")
    return e


def _idempotent_in_noncommutative(Q: FDAlgebra, rng: np.random.Generator) -> np.ndarray:
    from .polyfact import poly_deg, poly_divmod, poly_mul

    f = Q.field
    for _ in range(256):
        z = rng.integers(0, f.q, size=Q.dim, dtype=np.uint8)
        mp = Q._local_minpoly(z, Q.one.copy())
        fac = factor(f, mp)
        if len(fac) < 2:
            continue
        g1 = fac[0][0]
        others = poly_divmod(f, mp, g1)[0]
        inv = _poly_inverse_mod(f, others, g1)
        h = poly_mul(f, others, inv)
        val = Q._eval_poly(h, z, Q.one.copy())
        # h(z) need not be idempotent when mp has repeated factors; Newton
        # steps inside the commutative subalgebra k[z] fix that
        for _ in range(Q.dim + 2):
            d = f.sub(Q.mul(val, val), val)
            if not d.any():
                break
            e2 = Q.mul(val, val)
            e3 = Q.mul(e2, val)
            val = f.sub(f.MUL[3 % f.p, e2], f.MUL[2 % f.p, e3])
        if val.any() and not np.array_equal(val, Q.one) and not f.sub(Q.mul(val, val), val).any():
            return val
    raise AlgebraError("failed to find an idempotent in the semisimple quotient")
