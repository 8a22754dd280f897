"""Dense exact matrices over GF(p^m), row-vector convention.

Vectors are rows and modules are right modules: the action of a matrix A on
a vector v is v @ A, and composing actions multiplies matrices left to
right.  Entries are element codes (see gf.py) stored in uint8 arrays.

Products route through per-digit integer BLAS multiplies (exact: the
integer counts stay far below the float mantissa), so a 4000^3 product over
GF(4) costs a few sgemm calls.  Reduction uses a bit-packed eliminator for
GF(2)/GF(4) at large sizes and a table-driven one otherwise.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .gf import FF, GF

_PACK_THRESHOLD = 1 << 20  # rows*cols above which GF(2)/GF(4) rref packs bits


class ShapeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# low-level kernels on raw uint8 code arrays
# ---------------------------------------------------------------------------

def _digit_planes(a: np.ndarray, p: int, m: int):
    planes = []
    t = a
    for _ in range(m):
        planes.append((t % p).astype(np.uint8))
        t = t // p
    return planes


def _encode_planes(planes, p: int):
    out = np.zeros_like(planes[0])
    for d in reversed(planes):
        out = out * p + d
    return out


def _int_matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact (a @ b) mod p for digit matrices, chunked float BLAS."""
    dt = np.float32 if p == 2 else np.float64
    rows = a.shape[0]
    out = np.empty((rows, b.shape[1]), dtype=np.uint8)
    bf = b.astype(dt)
    step = max(1, (1 << 24) // max(1, b.shape[1]))
    for lo in range(0, rows, step):
        hi = min(rows, lo + step)
        c = a[lo:hi].astype(dt) @ bf
        if p == 2:
            out[lo:hi] = c.astype(np.int64) & 1
        else:
            out[lo:hi] = (c.astype(np.int64) % p).astype(np.uint8)
    return out


def _raw_matmul(a: np.ndarray, b: np.ndarray, field: FF) -> np.ndarray:
    p, m = field.p, field.m
    if m == 1:
        return _int_matmul_mod(a, b, p)
    pa = _digit_planes(a, p, m)
    pb = _digit_planes(b, p, m)
    # w^k expanded in the polynomial basis, k up to 2(m-1)
    wpow = []
    cur = 1
    for _ in range(2 * m - 1):
        digits = []
        t = cur
        for _ in range(m):
            digits.append(t % p)
            t //= p
        wpow.append(np.array(digits, dtype=np.int64))
        cur = int(field.MUL[cur, field.generator])
    out_planes = [np.zeros((a.shape[0], b.shape[1]), dtype=np.int64) for _ in range(m)]
    for i in range(m):
        for j in range(m):
            prod = _int_matmul_mod(pa[i], pb[j], p).astype(np.int64)
            coeffs = wpow[i + j]
            for d in range(m):
                if coeffs[d]:
                    out_planes[d] += coeffs[d] * prod
    planes = [(pl % p).astype(np.uint8) for pl in out_planes]
    return _encode_planes(planes, p)


def _rref_generic(a: np.ndarray, field: FF, full: bool = True):
    a = np.ascontiguousarray(a.copy())
    rows, cols = a.shape
    MUL, SUB, INV = field.MUL, field.SUB, field.INV
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        v = int(a[r, c])
        if v != 1:
            a[r] = MUL[INV[v], a[r]]
        if full:
            others = np.nonzero(a[:, c])[0]
            others = others[others != r]
        else:
            others = r + 1 + np.nonzero(a[r + 1:, c])[0]
        if others.size:
            a[others] = SUB[a[others], MUL[a[others, c][:, None], a[r][None, :]]]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _pack_planes(a: np.ndarray, m: int):
    planes = []
    for bit in range(m):
        planes.append(np.packbits((a >> bit) & 1, axis=1, bitorder="little"))
    return planes


def _unpack_planes(planes, cols: int):
    out = None
    for bit, pl in enumerate(planes):
        u = np.unpackbits(pl, axis=1, count=cols, bitorder="little")
        out = u.astype(np.uint8) << bit if out is None else out | (u << bit)
    return out


def _scale_packed_gf4(r0, r1, v):
    # returns planes of v * row for v in {1, 2(w), 3(w^2=w+1)}
    if v == 1:
        return r0, r1
    if v == 2:
        return r1, r0 ^ r1
    return r0 ^ r1, r0


def _rref_packed(a: np.ndarray, field: FF, full: bool = True):
    """Bit-packed reduction for GF(2) and GF(4); returns (rref, pivots)."""
    rows, cols = a.shape
    m = field.m
    planes = _pack_planes(a, m)
    p0 = planes[0]
    p1 = planes[1] if m == 2 else None
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        byte, bit = c >> 3, c & 7
        v0 = (p0[:, byte] >> bit) & 1
        vals = v0 if m == 1 else (v0 | (((p1[:, byte] >> bit) & 1) << 1))
        nz = np.nonzero(vals[r:])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            p0[[r, i]] = p0[[i, r]]
            if m == 2:
                p1[[r, i]] = p1[[i, r]]
            vals[i], vals[r] = vals[r], vals[i]
        if m == 2 and vals[r] != 1:
            inv = int(field.INV[vals[r]])
            p0[r], p1[r] = _scale_packed_gf4(p0[r].copy(), p1[r].copy(), inv)
        lo = 0 if full else r + 1
        if m == 1:
            mask = vals.astype(bool).copy()
            mask[r] = False
            mask[:lo] = False
            if mask.any():
                p0[mask] ^= p0[r]
        else:
            pr0, pr1 = p0[r].copy(), p1[r].copy()
            for v in (1, 2, 3):
                mask = vals == v
                mask[r] = False
                mask[:lo] = False
                if mask.any():
                    s0, s1 = _scale_packed_gf4(pr0, pr1, v)
                    p0[mask] ^= s0
                    p1[mask] ^= s1
        pivots.append(c)
        r += 1
    planes = [p0[:r]] if m == 1 else [p0[:r], p1[:r]]
    return _unpack_planes(planes, cols), pivots


def _raw_rref(a: np.ndarray, field: FF, full: bool = True):
    if a.size == 0:
        return a.copy()[:0], []
    if field.p == 2 and field.m <= 2 and a.size >= _PACK_THRESHOLD:
        return _rref_packed(a, field, full)
    return _rref_generic(a, field, full)


# ---------------------------------------------------------------------------
# Mat
# ---------------------------------------------------------------------------

class Mat:
    """An exact matrix over a finite field."""

    __slots__ = ("field", "a")

    def __init__(self, field: FF, data):
        self.field = field
        a = np.asarray(data, dtype=np.uint8)
        if a.ndim != 2:
            raise ShapeError("Mat expects a 2-d array")
        if a.size and int(a.max()) >= field.q:
            raise ValueError("entry code out of field range")
        self.a = np.ascontiguousarray(a)

    # -- constructors ------------------------------------------------------
    @staticmethod
    def zeros(field: FF, rows: int, cols: int) -> "Mat":
        return Mat(field, np.zeros((rows, cols), dtype=np.uint8))

    @staticmethod
    def identity(field: FF, n: int) -> "Mat":
        return Mat(field, np.eye(n, dtype=np.uint8))

    @staticmethod
    def from_rows(field: FF, rows) -> "Mat":
        return Mat(field, np.array(rows, dtype=np.uint8))

    @staticmethod
    def random(field: FF, rows: int, cols: int, rng: np.random.Generator) -> "Mat":
        return Mat(field, rng.integers(0, field.q, size=(rows, cols), dtype=np.uint8))

    # -- basic structure -----------------------------------------------------
    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    def copy(self) -> "Mat":
        return Mat(self.field, self.a.copy())

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.field is other.field
            and self.a.shape == other.a.shape
            and bool(np.array_equal(self.a, other.a))
        )

    def __hash__(self):
        return hash((self.field.q, self.a.shape, self.a.tobytes()))

    def is_zero(self) -> bool:
        return not self.a.any()

    def is_identity(self) -> bool:
        return self.rows == self.cols and bool(
            np.array_equal(self.a, np.eye(self.rows, dtype=np.uint8))
        )

    def __repr__(self):
        return f"Mat({self.field}, {self.rows}x{self.cols})"

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other: "Mat") -> "Mat":
        self._check_same_shape(other)
        return Mat(self.field, self.field.add(self.a, other.a))

    def __sub__(self, other: "Mat") -> "Mat":
        self._check_same_shape(other)
        return Mat(self.field, self.field.sub(self.a, other.a))

    def __neg__(self) -> "Mat":
        return Mat(self.field, self.field.neg(self.a))

    def scale(self, c: int) -> "Mat":
        return Mat(self.field, self.field.MUL[int(c), self.a])

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ShapeError(f"matmul shape mismatch {self.shape} @ {other.shape}")
        if self.field is not other.field:
            raise ValueError("field mismatch")
        return Mat(self.field, _raw_matmul(self.a, other.a, self.field))

    def T(self) -> "Mat":
        return Mat(self.field, np.ascontiguousarray(self.a.T))

    def kron(self, other: "Mat") -> "Mat":
        f = self.field
        prod = f.MUL[self.a[:, None, :, None], other.a[None, :, None, :]]
        return Mat(f, prod.reshape(self.rows * other.rows, self.cols * other.cols))

    def pow(self, n: int) -> "Mat":
        if self.rows != self.cols:
            raise ShapeError("pow needs a square matrix")
        n = int(n)
        if n < 0:
            return self.inv().pow(-n)
        result = Mat.identity(self.field, self.rows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def trace(self) -> int:
        t = 0
        for i in range(min(self.rows, self.cols)):
            t = int(self.field.add(t, int(self.a[i, i])))
        return t

    # -- reduction and solving ------------------------------------------------
    def rref(self, full: bool = True):
        r, pivots = _raw_rref(self.a, self.field, full)
        return Mat(self.field, r), pivots

    def rank(self) -> int:
        return len(self.rref(full=False)[1])

    def inv(self) -> "Mat":
        if self.rows != self.cols:
            raise ShapeError("inv needs a square matrix")
        n = self.rows
        aug = np.hstack([self.a, np.eye(n, dtype=np.uint8)])
        r, pivots = _raw_rref(aug, self.field, full=True)
        if pivots[:n] != list(range(n)) or len(pivots) != n:
            raise ZeroDivisionError("matrix is singular")
        return Mat(self.field, np.ascontiguousarray(r[:, n:]))

    def stack(self, other: "Mat") -> "Mat":
        return Mat(self.field, np.vstack([self.a, other.a]))

    def hstack(self, other: "Mat") -> "Mat":
        return Mat(self.field, np.hstack([self.a, other.a]))

    def solve_left(self, b: "Mat"):
        """X with X @ self == b, or None.  b may be a Mat of stacked rows."""
        f = self.field
        n = self.rows
        aug = np.hstack([self.a, np.eye(n, dtype=np.uint8)])
        r, pivots = _raw_rref(aug, f, full=True)
        apiv = [p for p in pivots if p < self.cols]
        k = len(apiv)
        rr = r[:k]
        coeff = np.zeros((b.rows, k), dtype=np.uint8)
        resid = b.a.copy()
        for i, pc in enumerate(apiv):
            c = resid[:, pc].copy()
            coeff[:, i] = c
            nz = np.nonzero(c)[0]
            if nz.size:
                resid[nz] = f.sub(resid[nz], f.MUL[c[nz][:, None], rr[i][None, : self.cols]])
        if resid.any():
            return None
        return Mat(f, coeff) @ Mat(f, np.ascontiguousarray(rr[:, self.cols:]))

    def nullspace_left(self) -> "Mat":
        """Rows spanning {v : v @ self == 0}, in canonical RREF."""
        f = self.field
        n = self.rows
        aug = np.hstack([self.a, np.eye(n, dtype=np.uint8)])
        r, pivots = _raw_rref(aug, f, full=True)
        null_rows = r[[i for i, p in enumerate(pivots) if p >= self.cols]][:, self.cols:]
        extra = r[len(pivots):][:, self.cols:]
        if extra.size:
            null_rows = np.vstack([null_rows, extra])
        rr, _ = _raw_rref(np.ascontiguousarray(null_rows), f, full=True)
        return Mat(f, rr)

    def row_space(self) -> "Subspace":
        return Subspace.from_rows(self)

    # -- serialization ---------------------------------------------------------
    FORMAT_VERSION = 1

    def dumps(self) -> str:
        head = f"MREPMAT {self.FORMAT_VERSION} {self.field.p} {self.field.m} {self.rows} {self.cols}"
        lines = [head] + [bytes(row).hex() for row in self.a]
        return "\n".join(lines) + "\n"

    @staticmethod
    def loads(text: str) -> "Mat":
        lines = [ln for ln in text.strip().splitlines() if ln]
        tag, ver, p, m, rows, cols = lines[0].split()
        if tag != "MREPMAT" or int(ver) != Mat.FORMAT_VERSION:
            raise ValueError("unknown matrix format header")
        p, m, rows, cols = int(p), int(m), int(rows), int(cols)
        f = GF(p**m)
        data = np.zeros((rows, cols), dtype=np.uint8)
        for i in range(rows):
            data[i] = np.frombuffer(bytes.fromhex(lines[1 + i]), dtype=np.uint8)
        return Mat(f, data)

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.field.p},{self.field.m},{self.rows},{self.cols};".encode())
        h.update(self.a.tobytes())
        return h.hexdigest()

    def _check_same_shape(self, other: "Mat"):
        if self.a.shape != other.a.shape or self.field is not other.field:
            raise ShapeError("shape or field mismatch")


# ---------------------------------------------------------------------------
# Subspace
# ---------------------------------------------------------------------------

class Subspace:
    """A subspace of row vectors, stored as an RREF basis matrix."""

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, field: FF, ambient: int, basis: Mat, pivots):
        self.field = field
        self.ambient = ambient
        self.basis = basis
        self.pivots = list(pivots)

    @staticmethod
    def from_rows(rows: Mat) -> "Subspace":
        r, pivots = rows.rref(full=True)
        return Subspace(rows.field, rows.cols, r, pivots)

    @staticmethod
    def zero(field: FF, ambient: int) -> "Subspace":
        return Subspace(field, ambient, Mat.zeros(field, 0, ambient), [])

    @staticmethod
    def full(field: FF, ambient: int) -> "Subspace":
        return Subspace(field, ambient, Mat.identity(field, ambient), list(range(ambient)))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def reduce_vec(self, v: np.ndarray):
        """Reduce v against the basis; returns (coords, residual)."""
        f = self.field
        resid = v.astype(np.uint8).copy()
        coords = np.zeros(self.dim, dtype=np.uint8)
        for i, pc in enumerate(self.pivots):
            c = int(resid[pc])
            if c:
                coords[i] = c
                resid = f.sub(resid, f.MUL[c, self.basis.a[i]])
        return coords, resid

    def contains_vec(self, v) -> bool:
        _, resid = self.reduce_vec(np.asarray(v, dtype=np.uint8))
        return not resid.any()

    def coords_matrix(self, rows: Mat) -> Mat:
        """Coordinates of the given member rows in this basis (must lie inside)."""
        f = self.field
        out = np.zeros((rows.rows, self.dim), dtype=np.uint8)
        resid = rows.a.copy()
        for i, pc in enumerate(self.pivots):
            c = resid[:, pc].copy()
            out[:, i] = c
            nz = np.nonzero(c)[0]
            if nz.size:
                resid[nz] = f.sub(resid[nz], f.MUL[c[nz][:, None], self.basis.a[i][None, :]])
        if resid.any():
            raise ValueError("rows do not lie in the subspace")
        return Mat(f, out)

    def contains(self, other: "Subspace") -> bool:
        return all(self.contains_vec(other.basis.a[i]) for i in range(other.dim))

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def sum(self, other: "Subspace") -> "Subspace":
        return Subspace.from_rows(self.basis.stack(other.basis))

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient)
        stacked = self.basis.stack(-other.basis)
        ker = stacked.nullspace_left()
        if ker.rows == 0:
            return Subspace.zero(self.field, self.ambient)
        xpart = Mat(self.field, np.ascontiguousarray(ker.a[:, : self.dim]))
        return Subspace.from_rows(xpart @ self.basis)

    def complement_pivot_rows(self) -> Mat:
        """Unit vectors on the non-pivot columns: a canonical complement."""
        free = [c for c in range(self.ambient) if c not in set(self.pivots)]
        out = np.zeros((len(free), self.ambient), dtype=np.uint8)
        for i, c in enumerate(free):
            out[i, c] = 1
        return Mat(self.field, out)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, {self.field})"


# ---------------------------------------------------------------------------
# spinning (submodule generation)
# ---------------------------------------------------------------------------

class Echelonizer:
    """Incremental row-echelon accumulator used by spins and chops."""

    def __init__(self, field: FF, ambient: int):
        self.field = field
        self.ambient = ambient
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        f = self.field
        v = v.astype(np.uint8).copy()
        for pc, row in zip(self.pivots, self.rows):
            c = int(v[pc])
            if c:
                v = f.sub(v, f.MUL[c, row])
        return v

    def insert(self, v: np.ndarray):
        """Reduce v and keep it if independent; returns the kept row or None."""
        f = self.field
        v = self.reduce(v)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return None
        pc = int(nz[0])
        c = int(v[pc])
        if c != 1:
            v = f.MUL[f.INV[c], v]
        idx = 0
        while idx < len(self.pivots) and self.pivots[idx] < pc:
            idx += 1
        self.pivots.insert(idx, pc)
        self.rows.insert(idx, v)
        return v

    def to_subspace(self) -> Subspace:
        if not self.rows:
            return Subspace.zero(self.field, self.ambient)
        return Subspace.from_rows(Mat(self.field, np.array(self.rows, dtype=np.uint8)))


def spin(seed: Subspace | Mat, actions: list[Mat]) -> Subspace:
    """Smallest subspace containing the seed and invariant under the actions."""
    seed_rows = seed.basis if isinstance(seed, Subspace) else seed
    ambient = seed.ambient if isinstance(seed, Subspace) else seed_rows.cols
    if seed_rows.rows == 0:
        return Subspace.zero(seed_rows.field, ambient)
    f = seed_rows.field
    ech = Echelonizer(f, ambient)
    queue = []
    for i in range(seed_rows.rows):
        kept = ech.insert(seed_rows.a[i])
        if kept is not None:
            queue.append(kept)
    qi = 0
    while qi < len(queue):
        vm = Mat(f, queue[qi][None, :])
        qi += 1
        for A in actions:
            kept = ech.insert((vm @ A).a[0])
            if kept is not None:
                queue.append(kept)
    return ech.to_subspace()
