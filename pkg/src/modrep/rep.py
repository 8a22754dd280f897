"""kG-modules as matrix representations (right modules, row vectors).

A Representation carries the group handle, the field, and one invertible
matrix per group generator; the matrix of an arbitrary element is obtained
by factoring it through the stabilizer chain (cached).  Permutation modules
keep their point actions and build matrices on demand, which is what makes
the large coset modules workable.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .gf import FF
from .group import CosetTable, PermGroup, Subgroup, normalizer
from .matrix import Mat, Subspace, spin
from .perm import Permutation


class RepError(ValueError):
    pass


class Representation:
    def __init__(self, group: PermGroup, field: FF, gen_mats: list[Mat], name=None):
        if len(gen_mats) != len(group.generators):
            raise RepError("one matrix per group generator required")
        dims = {m.rows for m in gen_mats} | {m.cols for m in gen_mats}
        if len(dims) > 1:
            raise RepError("generator matrices must be square of equal size")
        self.group = group
        self.field = field
        self.gen_mats = gen_mats
        self.dim = gen_mats[0].rows if gen_mats else 0
        self.name = name
        self._cache: dict[bytes, Mat] = {}

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"Representation(dim={self.dim}, {self.field},{label} over {self.group!r})"

    # -- trivial/zero dimensions need a dim hint ----------------------------
    @staticmethod
    def of_dim(group: PermGroup, field: FF, gen_mats: list[Mat], dim: int, name=None):
        r = Representation(group, field, gen_mats, name=name)
        if not gen_mats:
            r.dim = dim
        return r

    def matrix_of(self, g: Permutation) -> Mat:
        key = g.key
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        word = self.group.factor_word(g)
        out = Mat.identity(self.field, self.dim)
        for s in word:
            m = self.gen_mats[abs(s) - 1]
            out = out @ (m if s > 0 else m.inv())
        if len(self._cache) < 4096:
            self._cache[key] = out
        return out

    def matrices_for_all_elements(self):
        """BFS over the (enumerable) group, composing matrices; returns
        a dict element-key -> Mat.  Also validates the defining relations."""
        elements = self.group.elements()
        index = {g.key: i for i, g in enumerate(elements)}
        mats: list[Mat | None] = [None] * len(elements)
        mats[index[self.group.identity().key]] = Mat.identity(self.field, self.dim)
        queue = [self.group.identity()]
        qi = 0
        while qi < len(queue):
            g = queue[qi]
            qi += 1
            mg = mats[index[g.key]]
            for s, ms in zip(self.group.generators, self.gen_mats):
                gs = g * s
                j = index[gs.key]
                prod = mg @ ms
                if mats[j] is None:
                    mats[j] = prod
                    queue.append(gs)
                elif mats[j] != prod:
                    raise RepError("generator matrices violate a group relation")
        return {g.key: mats[i] for i, g in enumerate(elements)}

    def verify_relations(self):
        """Exhaustive relation check (enumerable groups only)."""
        self.matrices_for_all_elements()
        return True

    # -- functors -------------------------------------------------------------
    def restrict(self, H: PermGroup) -> "Representation":
        if H is self.group:
            return self
        mats = [self.matrix_of(h) for h in H.generators]
        return Representation.of_dim(H, self.field, mats, self.dim,
                                     name=f"{self.name}|" if self.name else None)

    def dual(self) -> "Representation":
        mats = [m.inv().T() for m in self.gen_mats]
        return Representation.of_dim(self.group, self.field, mats, self.dim,
                                     name=f"({self.name})*" if self.name else None)

    def tensor(self, other: "Representation") -> "Representation":
        """Inner (diagonal) tensor product over the same group."""
        if other.group is not self.group:
            raise RepError("diagonal tensor needs a common group")
        mats = [a.kron(b) for a, b in zip(self.gen_mats, other.gen_mats)]
        return Representation.of_dim(self.group, self.field, mats, self.dim * other.dim)

    def direct_sum(self, other: "Representation") -> "Representation":
        if other.group is not self.group:
            raise RepError("direct sum needs a common group")
        mats = []
        for a, b in zip(self.gen_mats, other.gen_mats):
            m = Mat.zeros(self.field, a.rows + b.rows, a.cols + b.cols)
            m.a[: a.rows, : a.cols] = a.a
            m.a[a.rows:, a.cols:] = b.a
            mats.append(m)
        return Representation.of_dim(self.group, self.field, mats, self.dim + other.dim)

    def subrep(self, space: Subspace, name=None) -> "Representation":
        """The action on an invariant subspace, in the basis of `space`."""
        mats = []
        for A in self.gen_mats:
            rows = space.basis @ A
            mats.append(space.coords_matrix(rows))
        return Representation.of_dim(self.group, self.field, mats, space.dim, name=name)

    def quotient_rep(self, space: Subspace, name=None):
        """The action on (ambient / space); returns (rep, SubquotientMap)."""
        full = Subspace.full(self.field, self.dim)
        sq = SubquotientMap(full, space)
        mats = [sq.operator_matrix(self, A) for A in self.gen_mats]
        return Representation.of_dim(self.group, self.field, mats, sq.dim, name=name), sq

    def conjugate_by(self, basis: Mat) -> "Representation":
        """Rewrite in a new basis: rows of `basis` are the new basis vectors."""
        binv = basis.inv()
        mats = [basis @ A @ binv for A in self.gen_mats]
        return Representation.of_dim(self.group, self.field, mats, self.dim)

    # -- invariants -------------------------------------------------------------
    def fixed_points(self, Q: PermGroup | None = None) -> Subspace:
        """Common 1-eigenspace of the generators of Q (default: whole group)."""
        gens = self.group.generators if Q is None else Q.generators
        if not gens:
            return Subspace.full(self.field, self.dim)
        blocks = []
        for g in gens:
            blocks.append((self.matrix_of(g) - Mat.identity(self.field, self.dim)).a)
        stacked = Mat(self.field, np.hstack(blocks))
        return Subspace.from_rows(stacked.nullspace_left())

    def spin_space(self, seed: Mat) -> Subspace:
        return spin(seed, self.gen_mats)

    def content_key(self) -> str:
        import hashlib

        h = hashlib.sha256()
        h.update(f"{self.field.p}^{self.field.m};{self.dim};".encode())
        for m in self.gen_mats:
            h.update(m.a.tobytes())
        return h.hexdigest()


class SubquotientMap:
    """Coordinates for V/W given subspaces W <= V of an ambient row space."""

    def __init__(self, V: Subspace, W: Subspace):
        self.V = V
        self.W = W
        f = V.field
        if W.dim:
            w_in_v = V.coords_matrix(W.basis)
            self.w_in_v, self.w_pivots = w_in_v.rref()
        else:
            self.w_in_v = Mat.zeros(f, 0, V.dim)
            self.w_pivots = []
        self.comp_cols = [c for c in range(V.dim) if c not in set(self.w_pivots)]
        self.dim = len(self.comp_cols)
        self.field = f

    def quotient_basis_rows(self) -> Mat:
        """Ambient rows representing the quotient basis."""
        coords = Mat.zeros(self.field, self.dim, self.V.dim)
        for i, c in enumerate(self.comp_cols):
            coords.a[i, c] = 1
        return coords @ self.V.basis

    def project_rows(self, rows: Mat) -> Mat:
        """Ambient member rows -> quotient coordinates."""
        f = self.field
        coords = self.V.coords_matrix(rows).a.copy()
        for i, pc in enumerate(self.w_pivots):
            c = coords[:, pc].copy()
            nz = np.nonzero(c)[0]
            if nz.size:
                coords[nz] = f.sub(coords[nz], f.MUL[c[nz][:, None], self.w_in_v.a[i][None, :]])
        return Mat(f, np.ascontiguousarray(coords[:, self.comp_cols]))

    def operator_matrix(self, rep: Representation, A: Mat) -> Mat:
        """Matrix of an ambient operator on V/W (must preserve V and W)."""
        rows = self.quotient_basis_rows() @ A
        return self.project_rows(rows)


# ---------------------------------------------------------------------------
# permutation modules
# ---------------------------------------------------------------------------

def _perm_mat(field: FF, images: np.ndarray) -> Mat:
    n = len(images)
    a = np.zeros((n, n), dtype=np.uint8)
    a[np.arange(n), images] = 1
    return Mat(field, a)


class PermutationModule(Representation):
    """k[G/H] on the permutation basis of right cosets of H."""

    def __init__(self, G: PermGroup, H: PermGroup, field: FF):
        self.table = CosetTable(G, H)
        self.base_subgroup = H
        mats = [_perm_mat(field, act) for act in self.table.gen_actions]
        super().__init__(G, field, mats, name=f"k[{G.name or 'G'}/{H.name or 'H'}]")
        if not mats:
            self.dim = self.table.n

    def point_action(self, g: Permutation) -> np.ndarray:
        return self.table.action_of(g)

    def matrix_of(self, g: Permutation) -> Mat:
        key = g.key
        hit = self._cache.get(key)
        if hit is None:
            hit = _perm_mat(self.field, self.point_action(g))
            if len(self._cache) < 4096:
                self._cache[key] = hit
        return hit

    def action_table_via_group(self, S: PermGroup, lift=None) -> dict[bytes, np.ndarray]:
        """Point actions of lift(s) for every s in the enumerable group S."""
        lift = lift or (lambda x: x)
        idact = np.arange(self.table.n, dtype=np.int32)
        out: dict[bytes, np.ndarray] = {S.identity().key: idact}
        gen_actions = [self.point_action(lift(g)) for g in S.generators]
        queue = [S.identity()]
        qi = 0
        while qi < len(queue):
            s = queue[qi]
            act = out[s.key]
            qi += 1
            for g, ga in zip(S.generators, gen_actions):
                sg = s * g
                if sg.key not in out:
                    out[sg.key] = ga[act]
                    queue.append(sg)
        return out

    def all_ones_vector(self) -> Mat:
        return Mat(self.field, np.ones((1, self.dim), dtype=np.uint8))


def permutation_module(G: PermGroup, H: PermGroup, field: FF) -> PermutationModule:
    return PermutationModule(G, H, field)


def trivial_module(G: PermGroup, field: FF) -> Representation:
    mats = [Mat.identity(field, 1) for _ in G.generators]
    return Representation.of_dim(G, field, mats, 1, name="k")


def regular_module(G: PermGroup, field: FF) -> PermutationModule:
    return PermutationModule(G, G.trivial_subgroup(), field)


def induce(N: Representation, G: PermGroup) -> Representation:
    """N (a module over H <= G) induced up to G on coset-representative blocks."""
    H = N.group
    table = CosetTable(G, H)
    r, n = table.n, N.dim
    f = N.field
    mats = []
    for g in G.generators:
        big = Mat.zeros(f, r * n, r * n)
        for i, t in enumerate(table.reps):
            tg = t * g
            j = table.coset_of(tg)
            h = tg * table.reps[j].inverse()
            block = N.matrix_of(h)
            big.a[i * n : (i + 1) * n, j * n : (j + 1) * n] = block.a
        mats.append(big)
    return Representation.of_dim(G, f, mats, r * n,
                                 name=f"({N.name})^{G.name}" if N.name else None)


# ---------------------------------------------------------------------------
# fixed points, relative traces, the Brauer construction
# ---------------------------------------------------------------------------

def relative_trace_matrix(M: Representation, R: PermGroup, Q: PermGroup) -> Mat:
    """Matrix of tr_R^Q = sum over [R\\Q] of the action; acts on M^R."""
    from .group import coset_reps

    for g in R.generators:
        if g not in Q:
            raise RepError("relative trace needs R <= Q")
    reps = coset_reps(Q, R)
    total = Mat.zeros(M.field, M.dim, M.dim)
    for t in reps:
        total = total + M.matrix_of(t)
    return total


def relative_trace_image(M: Representation, R: PermGroup, Q: PermGroup) -> Subspace:
    fixed_r = M.fixed_points(R)
    T = relative_trace_matrix(M, R, Q)
    rows = fixed_r.basis @ T
    return Subspace.from_rows(rows)


class BrauerConstruction:
    """M(Q) = M^Q / sum of relative traces from maximal subgroups of Q.

    Carries the induced action of any subgroup of N_G(Q) on request; the
    module over `over` (default N_G(Q)) is in `module`."""

    def __init__(self, M: Representation, Q: PermGroup, over: PermGroup | None = None):
        self.source = M
        self.Q = Q
        p = M.field.p
        n = Q.order()
        while n % p == 0:
            n //= p
        if n != 1:
            raise RepError("Brauer construction needs a p-subgroup")
        self.fixed = M.fixed_points(Q)
        from .subgroups import maximal_subgroups_of_p_group

        trace_rows = []
        for R in maximal_subgroups_of_p_group(Q):
            img = relative_trace_image(M, R, Q)
            if img.dim:
                trace_rows.append(img.basis)
        if trace_rows:
            stacked = trace_rows[0]
            for extra in trace_rows[1:]:
                stacked = stacked.stack(extra)
            self.traces = Subspace.from_rows(stacked)
        else:
            self.traces = Subspace.zero(M.field, M.dim)
        self.sq = SubquotientMap(self.fixed, self.traces)
        self.dim = self.sq.dim
        self._over = over
        self._module: Representation | None = None

    @property
    def over(self) -> PermGroup:
        if self._over is None:
            self._over = normalizer(_ambient(self.source.group), self.Q)
        return self._over

    @property
    def module(self) -> Representation:
        if self._module is None:
            mats = [self.sq.operator_matrix(self.source, self.source.matrix_of(n))
                    for n in self.over.generators]
            self._module = Representation.of_dim(
                self.over, self.source.field, mats, self.dim,
                name=f"{self.source.name}({self.Q.name or 'Q'})",
            )
        return self._module

    def project_rows(self, rows: Mat) -> Mat:
        return self.sq.project_rows(rows)


def _ambient(group: PermGroup) -> PermGroup:
    return group.parent if isinstance(group, Subgroup) else group


def brauer_construction(M: Representation, Q: PermGroup,
                        over: PermGroup | None = None) -> BrauerConstruction:
    return BrauerConstruction(M, Q, over=over)
