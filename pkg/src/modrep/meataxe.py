"""MeatAxe machinery: chop, hom spaces, decomposition, vertices.

Everything here works on *operator modules*: a field, a dimension, and a
list of square matrices generating the acting algebra.  Group
representations pass their generator matrices through, and structure-
constant algebras pass their regular representation, so one chop serves
both.

Irreducibility uses Norton's criterion with good elements (an irreducible
factor of the minimal polynomial whose kernel has dimension equal to its
degree); hom spaces use the standard-basis method (spin with provenance),
which stays cubic instead of solving dim^2-variable systems.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .gf import FF
from .group import PermGroup, Subgroup, coset_reps, sylow_subgroup
from .matrix import Echelonizer, Mat, Subspace, spin
from .polyfact import factor, poly_eval_matrix, poly_lcm, poly_monic
from .rep import Representation, SubquotientMap

GENERIC_DIM_CAP = 700  # standard-basis hom memory wall: dim_M * dim_N^2 bytes


class MeatAxeError(RuntimeError):
    pass


@dataclass
class OpModule:
    """A module over an implicit algebra, given by generating operators."""

    field: FF
    dim: int
    ops: list[Mat]

    @staticmethod
    def of(rep: Representation) -> "OpModule":
        return OpModule(rep.field, rep.dim, rep.gen_mats)

    def sub(self, space: Subspace) -> "OpModule":
        ops = [space.coords_matrix(space.basis @ A) for A in self.ops]
        return OpModule(self.field, space.dim, ops)

    def quotient(self, space: Subspace) -> "OpModule":
        sq = SubquotientMap(Subspace.full(self.field, self.dim), space)
        qb = sq.quotient_basis_rows()
        ops = [sq.project_rows(qb @ A) for A in self.ops]
        return OpModule(self.field, sq.dim, ops)

    def transposed(self) -> "OpModule":
        return OpModule(self.field, self.dim, [A.T() for A in self.ops])


# ---------------------------------------------------------------------------
# minimal polynomials
# ---------------------------------------------------------------------------

def minimal_polynomial(A: Mat):
    """Minimal polynomial via Krylov spaces over standard-basis seeds.

    For each seed e, iterates [e A^j | marker e_j] are reduced in an
    augmented echelon; kept rows always pivot in the vector part, so when
    e A^k goes dependent the reduced marker tail *is* the monic local
    minimal polynomial (t[k] = 1 untouched, t[j] = coefficient of x^j)."""
    f = A.field
    d = A.rows
    processed = Echelonizer(f, d)
    mp = (1,)
    for i in range(d):
        seed = np.zeros(d, dtype=np.uint8)
        seed[i] = 1
        if not processed.reduce(seed).any():
            continue
        aug = Echelonizer(f, 2 * d + 1)
        iterates = []
        v = seed
        while True:
            k = len(iterates)
            row = np.zeros(2 * d + 1, dtype=np.uint8)
            row[:d] = v
            row[d + k] = 1
            reduced = aug.reduce(row)
            if not reduced[:d].any():
                local = poly_monic(f, tuple(int(c) for c in reduced[d : d + k + 1]))
                mp = poly_lcm(f, mp, local)
                break
            aug.insert(row)
            iterates.append(v)
            v = (Mat(f, v[None, :]) @ A).a[0]
        for it in iterates:
            processed.insert(it)
    return mp


def random_algebra_element(op: OpModule, rng: np.random.Generator) -> Mat:
    """A random short word-sum in the acting algebra (plus a scalar)."""
    f = op.field
    if not op.ops:
        return Mat.identity(f, op.dim)
    total = Mat.zeros(f, op.dim, op.dim)
    terms = int(rng.integers(2, 5))
    for _ in range(terms):
        length = int(rng.integers(1, 5))
        word = Mat.identity(f, op.dim)
        for _ in range(length):
            word = word @ op.ops[int(rng.integers(0, len(op.ops)))]
        c = int(rng.integers(1, f.q))
        total = total + word.scale(c)
    if rng.integers(0, 2):
        total = total + Mat.identity(f, op.dim).scale(int(rng.integers(1, f.q)))
    return total


# ---------------------------------------------------------------------------
# chop (composition factors) with Norton certificates
# ---------------------------------------------------------------------------

def find_proper_submodule(op: OpModule, rng: np.random.Generator,
                          max_tries: int = 60):
    """A proper nonzero invariant subspace, or None = certified irreducible."""
    f = op.field
    d = op.dim
    if d <= 1:
        return None
    for attempt in range(max_tries):
        if attempt < len(op.ops):
            a = op.ops[attempt]
        else:
            a = random_algebra_element(op, rng)
        mp = minimal_polynomial(a)
        for phi, _mult in factor(f, mp):
            B = poly_eval_matrix(f, phi, a)
            K = B.nullspace_left()
            if K.rows == 0:
                continue
            good = K.rows == len(phi) - 1
            for i in range(min(K.rows, 4)):
                W = spin(Mat(f, K.a[i][None, :]), op.ops)
                if 0 < W.dim < d:
                    return W
                if good:
                    break  # one vector decides on the sub side
            if good:
                Kt = B.T().nullspace_left()
                Wt = spin(Mat(f, Kt.a[0][None, :]), [A.T() for A in op.ops])
                if Wt.dim < d:
                    perp = Subspace.from_rows(Wt.basis.T().nullspace_left())
                    if 0 < perp.dim < d:
                        return perp
                    raise MeatAxeError("perp of a proper transpose-submodule degenerated")
                return None  # both spins full: irreducible
    raise MeatAxeError(
        f"chop stalled on a dim-{d} module after {max_tries} attempts"
    )


def chop(op: OpModule, rng: np.random.Generator) -> list[OpModule]:
    """Composition factors (with multiplicity), as operator modules."""
    if op.dim == 0:
        return []
    stack = [op]
    out = []
    while stack:
        cur = stack.pop()
        if cur.dim == 0:
            continue
        if cur.dim == 1:
            out.append(cur)
            continue
        W = find_proper_submodule(cur, rng)
        if W is None:
            out.append(cur)
        else:
            stack.append(cur.sub(W))
            stack.append(cur.quotient(W))
    return out


# ---------------------------------------------------------------------------
# hom spaces by the standard-basis method
# ---------------------------------------------------------------------------

class _AugEchelon:
    """Echelonizer over [vector | coefficients-over-kept-rows]."""

    def __init__(self, f: FF, d: int, max_kept: int):
        self.ech = Echelonizer(f, d + max_kept)
        self.d = d
        self.max_kept = max_kept
        self.kept_count = 0

    def insert(self, v: np.ndarray):
        """Returns None if v was independent (and kept), else the coefficient
        vector expressing v over the previously kept rows."""
        row = np.zeros(self.d + self.max_kept, dtype=np.uint8)
        row[: self.d] = v
        reduced = self.ech.reduce(row)
        if reduced[: self.d].any():
            reduced = reduced.copy()
            reduced[self.d + self.kept_count] = 1
            self.ech.insert(reduced)
            self.kept_count += 1
            return None
        f = self.ech.field
        coeffs = f.neg(reduced[self.d : self.d + self.kept_count].copy())
        return coeffs


def hom_space(M: OpModule | Representation, N: OpModule | Representation,
              max_relation_slack: int = 8) -> list[Mat]:
    """A basis of the intertwiner space Hom(M, N) as dM x dN matrices.

    M and N must be modules over the same operator list (for group
    representations: the same group and generator order)."""
    if isinstance(M, Representation):
        M = OpModule.of(M)
    if isinstance(N, Representation):
        N = OpModule.of(N)
    f = M.field
    dM, dN = M.dim, N.dim
    if dM == 0 or dN == 0:
        return []
    if len(M.ops) != len(N.ops):
        raise MeatAxeError("operator lists do not match")
    if dM * dN * dN > (1 << 28):
        raise MeatAxeError("hom space exceeds the generic solver cap")

    # pass 1: spin with provenance; kept rows stay raw (never reduced)
    aug = _AugEchelon(f, dM, dM)
    kept_rows: list[np.ndarray] = []
    kept_seed: list[int] = []
    kept_parent: list[tuple] = []  # (parent_index, op_index) or None for seeds
    relations: list[tuple] = []  # (parent_index, op_index, coeffs over kept)
    seeds: list[int] = []
    queue: list[int] = []
    basis_done = 0

    def add_row(v, seed_idx, parent):
        coeffs = aug.insert(v)
        if coeffs is None:
            kept_rows.append(v)
            kept_seed.append(seed_idx)
            kept_parent.append(parent)
            queue.append(len(kept_rows) - 1)
            return True
        if parent is not None:
            relations.append((parent[0], parent[1], coeffs))
        return False

    for i in range(dM):
        if len(kept_rows) == dM:
            break
        e = np.zeros(dM, dtype=np.uint8)
        e[i] = 1
        if not aug.ech.reduce(np.concatenate([e, np.zeros(dM, dtype=np.uint8)]))[:dM].any():
            continue
        seeds.append(i)
        seed_idx = len(seeds) - 1
        add_row(e, seed_idx, None)
        while queue:
            r = queue.pop(0)
            vm = Mat(f, kept_rows[r][None, :])
            for gi, A in enumerate(M.ops):
                add_row((vm @ A).a[0], kept_seed[r], (r, gi))

    ns = len(seeds)
    L = ns * dN

    # pass 2: shadows in BFS order
    shadows: list[Mat] = [None] * len(kept_rows)  # type: ignore[list-item]
    for r in range(len(kept_rows)):
        if kept_parent[r] is None:
            shadows[r] = Mat.identity(f, dN)
        else:
            pr, gi = kept_parent[r]
            shadows[r] = shadows[pr] @ N.ops[gi]

    # constraint accumulation with verification-driven early stop
    cons = Echelonizer(f, L)
    last_rank = -1
    stable = 0

    def block_for(rel):
        pr, gi, coeffs = rel
        T = shadows[pr] @ N.ops[gi]
        W = np.zeros((L, dN), dtype=np.uint8)
        s_par = kept_seed[pr]
        W[s_par * dN : (s_par + 1) * dN] = T.a
        for r, c in enumerate(coeffs):
            if c:
                s_r = kept_seed[r]
                blk = W[s_r * dN : (s_r + 1) * dN]
                W[s_r * dN : (s_r + 1) * dN] = f.sub(blk, f.MUL[int(c), shadows[r].a])
        return W

    def solutions():
        if not cons.rows:
            return Mat.identity(f, L)
        C = Mat(f, np.array(cons.rows, dtype=np.uint8))
        return C.T().nullspace_left()

    V = Mat(f, np.array(kept_rows, dtype=np.uint8))
    Vinv = V.inv()

    def verify(sols: Mat) -> list[Mat] | None:
        out = []
        for si in range(sols.rows):
            x = sols.a[si]
            rows = []
            for r in range(len(kept_rows)):
                s = kept_seed[r]
                u = Mat(f, x[s * dN : (s + 1) * dN][None, :].copy())
                rows.append((u @ shadows[r]).a[0])
            phi = Vinv @ Mat(f, np.array(rows, dtype=np.uint8))
            for A, B in zip(M.ops, N.ops):
                if A @ phi != phi @ B:
                    return None
            out.append(phi)
        return out

    ri = 0
    while ri < len(relations):
        W = block_for(relations[ri])
        for j in range(dN):
            cons.insert(W[:, j] if W.flags["C_CONTIGUOUS"] else W[:, j].copy())
        ri += 1
        if cons.dim == L:
            return []
        if cons.dim == last_rank:
            stable += 1
            if stable >= max_relation_slack:
                sols = solutions()
                got = verify(sols)
                if got is not None:
                    return _canonical_hom_basis(got, f, dM, dN)
                stable = 0
        else:
            last_rank = cons.dim
            stable = 0
    sols = solutions()
    got = verify(sols)
    if got is None:
        raise MeatAxeError("hom solver produced an unverified solution set")
    return _canonical_hom_basis(got, f, dM, dN)


def _canonical_hom_basis(mats: list[Mat], f: FF, dM: int, dN: int) -> list[Mat]:
    if not mats:
        return []
    flat = Mat(f, np.array([m.a.reshape(-1) for m in mats], dtype=np.uint8))
    r, _ = flat.rref()
    return [Mat(f, r.a[i].reshape(dM, dN).copy()) for i in range(r.rows)]


def end_algebra(M: OpModule | Representation) -> list[Mat]:
    return hom_space(M, M)


# ---------------------------------------------------------------------------
# decomposition into indecomposable summands
# ---------------------------------------------------------------------------

@dataclass
class Decomposition:
    """Summands with inclusion/projection maps back into the parent.

    inclusion i: rows are summand basis vectors in parent coordinates;
    projection i: parent -> summand, so inclusion @ projection = identity on
    the summand and the sum of projection @ inclusion is the identity."""

    parent: Representation
    summands: list[Representation]
    inclusions: list[Mat]
    projections: list[Mat]

    def dims(self) -> list[int]:
        return [s.dim for s in self.summands]

    def verify(self) -> bool:
        f = self.parent.field
        total = Mat.zeros(f, self.parent.dim, self.parent.dim)
        for inc, proj in zip(self.inclusions, self.projections):
            if not (inc @ proj).is_identity():
                return False
            total = total + proj @ inc
        return total.is_identity()


def is_indecomposable(M: Representation | OpModule,
                      rng: np.random.Generator | None = None) -> bool:
    """Certified locality of the endomorphism algebra."""
    if isinstance(M, Representation):
        M = OpModule.of(M)
    if M.dim == 0:
        return False
    rng = rng if rng is not None else np.random.default_rng(0xDEC0)
    from .algebra import analyze_endomorphism_algebra

    basis = end_algebra(M)
    report, *_ = analyze_endomorphism_algebra(basis, rng)
    return report.is_local


def _split_once(op: OpModule, rng: np.random.Generator, fitting_budget: int = 64):
    """None if op is indecomposable (certified); else (spaceA, spaceB)."""
    from .algebra import (
        analyze_endomorphism_algebra,
        find_splitting_idempotent,
    )

    if op.dim == 1:
        return None
    basis = end_algebra(op)
    report, A, J, quot = analyze_endomorphism_algebra(basis, rng)
    if report.is_local:
        return None
    f = op.field
    # randomized Fitting on elements of End, retry budget then the
    # deterministic idempotent route through End/J
    for _ in range(fitting_budget):
        coeffs = rng.integers(0, f.q, size=len(basis), dtype=np.uint8)
        if not coeffs.any():
            continue
        theta = Mat.zeros(f, op.dim, op.dim)
        for c, b in zip(coeffs, basis):
            if c:
                theta = theta + b.scale(int(c))
        mp = minimal_polynomial(theta)
        fac = factor(f, mp)
        if len(fac) < 2:
            continue
        phi, mult = fac[0]
        B = poly_eval_matrix(f, phi, theta).pow(mult)
        stable = B
        k = 1
        while k < op.dim:
            stable = stable @ stable
            k *= 2
        ker = Subspace.from_rows(stable.nullspace_left())
        if not 0 < ker.dim < op.dim:
            continue
        img = Subspace.from_rows(stable)
        if ker.dim + img.dim != op.dim:
            continue
        return ker, img
    e = find_splitting_idempotent(A, J, quot, rng)
    E = Mat.zeros(f, op.dim, op.dim)
    for c, b in zip(e, basis):
        if c:
            E = E + b.scale(int(c))
    img = Subspace.from_rows(E)
    ker = Subspace.from_rows(E.nullspace_left())
    if not 0 < img.dim < op.dim or img.dim + ker.dim != op.dim:
        raise MeatAxeError("idempotent split degenerated")
    return ker, img


def decompose(M: Representation, rng: np.random.Generator | None = None) -> Decomposition:
    """Full decomposition into indecomposable summands (deterministic order:
    dimension, then lexicographic basis)."""
    rng = rng if rng is not None else np.random.default_rng(0xDEC0)
    f = M.field
    if M.dim == 0:
        return Decomposition(M, [], [], [])
    pieces = [Subspace.full(f, M.dim).basis]
    final: list[Mat] = []
    while pieces:
        U = pieces.pop()
        space = Subspace.from_rows(U)
        op = OpModule.of(M).sub(space)
        split = _split_once(op, rng)
        if split is None:
            final.append(space.basis)
            continue
        sa, sb = split
        pieces.append(sa.basis @ space.basis)
        pieces.append(sb.basis @ space.basis)
    final.sort(key=lambda u: (u.rows, u.a.tobytes()))
    B = final[0]
    for u in final[1:]:
        B = B.stack(u)
    Binv = B.inv()
    summands, incs, projs = [], [], []
    offset = 0
    for u in final:
        k = u.rows
        inc = u
        proj = Mat(f, np.ascontiguousarray(Binv.a[:, offset : offset + k]))
        summands.append(M.subrep(Subspace.from_rows(u)))
        incs.append(inc)
        projs.append(proj)
        offset += k
    return Decomposition(M, summands, incs, projs)


# ---------------------------------------------------------------------------
# module isomorphism
# ---------------------------------------------------------------------------

def find_module_isomorphism(M: Representation | OpModule, N: Representation | OpModule,
                            rng: np.random.Generator | None = None):
    """An invertible intertwiner M -> N, or None."""
    if isinstance(M, Representation):
        M = OpModule.of(M)
    if isinstance(N, Representation):
        N = OpModule.of(N)
    if M.dim != N.dim:
        return None
    if M.dim == 0:
        return Mat.zeros(M.field, 0, 0)
    rng = rng if rng is not None else np.random.default_rng(0x150)
    homs = hom_space(M, N)
    if not homs:
        return None
    f = M.field
    for phi in homs:
        if phi.rank() == M.dim:
            return phi
    for _ in range(64):
        coeffs = rng.integers(0, f.q, size=len(homs), dtype=np.uint8)
        phi = Mat.zeros(f, M.dim, N.dim)
        for c, b in zip(coeffs, homs):
            if c:
                phi = phi + b.scale(int(c))
        if phi.rank() == M.dim:
            return phi
    if f.q ** len(homs) <= 4096:
        # exhaustive sweep for tiny hom spaces settles it for sure
        from itertools import product as iproduct

        for coeffs in iproduct(range(f.q), repeat=len(homs)):
            phi = Mat.zeros(f, M.dim, N.dim)
            for c, b in zip(coeffs, homs):
                if c:
                    phi = phi + b.scale(int(c))
            if phi.rank() == M.dim:
                return phi
        return None
    return None


def modules_isomorphic(M, N, rng=None) -> bool:
    return find_module_isomorphism(M, N, rng) is not None


# ---------------------------------------------------------------------------
# relative projectivity (Higman) and vertices
# ---------------------------------------------------------------------------

def relative_trace_of_endo(M: Representation, Q: PermGroup, phi: Mat) -> Mat:
    """tr_Q^G(phi) = sum over right-coset representatives t of rho(t)^-1 phi rho(t)."""
    reps = coset_reps(M.group, Q)
    f = M.field
    out = Mat.zeros(f, M.dim, M.dim)
    for t in reps:
        rt = M.matrix_of(t)
        out = out + rt.inv() @ phi @ rt
    return out


def is_relatively_projective(M: Representation, Q: PermGroup):
    """(bool, certificate) by Higman's criterion: id lies in the image of
    tr_Q^G on End_{kQ}(M).  The certificate phi satisfies tr(phi) = id."""
    f = M.field
    G = M.group
    index = G.order() // Q.order()
    scalar = index % f.p
    if scalar:
        # p does not divide the index: id = tr(1/[G:Q] * id)
        cert = Mat.identity(f, M.dim).scale(int(f.INV[scalar]))
        return True, cert
    if Q.generators:
        MQ = M.restrict(Q)
        basis = hom_space(MQ, MQ)
    else:
        basis = _full_matrix_basis(f, M.dim)
    traces = [relative_trace_of_endo(M, Q, b) for b in basis]
    if not traces:
        return False, None
    flat = Mat(f, np.array([t.a.reshape(-1) for t in traces], dtype=np.uint8))
    target = Mat(f, Mat.identity(f, M.dim).a.reshape(1, -1))
    x = flat.solve_left(target)
    if x is None:
        return False, None
    cert = Mat.zeros(f, M.dim, M.dim)
    for c, b in zip(x.a[0], basis):
        if c:
            cert = cert + b.scale(int(c))
    check = relative_trace_of_endo(M, Q, cert)
    if not check.is_identity():
        raise MeatAxeError("Higman certificate failed verification")
    return True, cert


def _full_matrix_basis(f: FF, d: int) -> list[Mat]:
    out = []
    for i in range(d):
        for j in range(d):
            m = Mat.zeros(f, d, d)
            m.a[i, j] = 1
            out.append(m)
    return out


def is_rel_projective_direct(M: Representation, Q: PermGroup,
                             rng: np.random.Generator | None = None) -> bool:
    """Oracle: M | (M restricted to Q) induced back up (small cases only)."""
    from .rep import induce

    ind = induce(M.restrict(Q), M.group)
    return is_direct_summand_of(M, ind, rng)


def is_direct_summand_of(M: Representation | OpModule, W: Representation | OpModule,
                         rng: np.random.Generator | None = None) -> bool:
    """M | W for indecomposable M: some composite W -> M -> W of hom basis
    elements avoids the radical of End(M); by locality a product
    beta o alpha is then invertible."""
    if isinstance(M, Representation):
        Mop = OpModule.of(M)
    else:
        Mop = M
    if isinstance(W, Representation):
        Wop = OpModule.of(W)
    else:
        Wop = W
    rng = rng if rng is not None else np.random.default_rng(0x51D)
    into = hom_space(Mop, Wop)
    back = hom_space(Wop, Mop)
    for a in into:
        for b in back:
            prod = a @ b
            if prod.rank() == Mop.dim:
                return True
    # combinations (the pairing can vanish pairwise yet span): random sweep
    f = Mop.field
    for _ in range(64):
        ca = rng.integers(0, f.q, size=len(into), dtype=np.uint8)
        cb = rng.integers(0, f.q, size=len(back), dtype=np.uint8)
        A = Mat.zeros(f, Mop.dim, Wop.dim)
        for c, m in zip(ca, into):
            if c:
                A = A + m.scale(int(c))
        B = Mat.zeros(f, Wop.dim, Mop.dim)
        for c, m in zip(cb, back):
            if c:
                B = B + m.scale(int(c))
        if (A @ B).rank() == Mop.dim:
            return True
    return False


def vertex(M: Representation, rng: np.random.Generator | None = None) -> Subgroup:
    """A vertex of an indecomposable module, by Higman descent from a Sylow
    p-subgroup; minimality is certified by failure at every maximal subgroup."""
    from .subgroups import maximal_subgroups_of_p_group

    if not is_indecomposable(M, rng):
        raise MeatAxeError("vertex needs an indecomposable module")
    G = M.group
    p = M.field.p
    current = sylow_subgroup(G, p)
    ok, _ = is_relatively_projective(M, current)
    if not ok:
        raise MeatAxeError("module is not projective relative to a Sylow subgroup")
    while True:
        descended = False
        for R in maximal_subgroups_of_p_group(current):
            ok, _ = is_relatively_projective(M, R)
            if ok:
                current = R
                descended = True
                break
        if not descended:
            return current


def sylow_permutation_structure(M: Representation,
                                rng: np.random.Generator | None = None):
    """If M restricted to a Sylow p-subgroup P is a permutation module,
    return the list of point stabilizers R with M|_P = (+) k[P/R]; else None.

    A module is p-permutation iff this succeeds (classical criterion)."""
    from .rep import permutation_module
    from .subgroups import all_subgroups

    rng = rng if rng is not None else np.random.default_rng(0x9E12)
    G = M.group
    P = sylow_subgroup(G, M.field.p)
    MP = M.restrict(P)
    dec = decompose(MP, rng)
    subs = all_subgroups(P)
    out = []
    for summand in dec.summands:
        match = None
        for R in subs:
            if P.order() // R.order() != summand.dim:
                continue
            cand = permutation_module(P, R, M.field)
            if find_module_isomorphism(summand, cand, rng) is not None:
                match = R
                break
        if match is None:
            return None
        out.append(match)
    return out


def is_p_permutation(M: Representation, rng=None) -> bool:
    return sylow_permutation_structure(M, rng) is not None


def is_trivial_source(M: Representation, rng=None) -> bool:
    """Indecomposable M is a trivial source module iff its Sylow restriction
    is a permutation module."""
    if not is_indecomposable(M, rng):
        raise MeatAxeError("trivial-source test needs an indecomposable module")
    return is_p_permutation(M, rng)


def vertex_of_p_permutation(M: Representation, rng=None) -> Subgroup:
    """Vertex of an indecomposable p-permutation module by Brauer vanishing:
    among subgroups Q of a Sylow p-subgroup, M(Q) != 0 exactly when Q lies
    in a vertex, so any nonvanishing Q of maximal order is a vertex."""
    from .rep import brauer_construction
    from .subgroups import all_subgroups

    G = M.group
    P = sylow_subgroup(G, M.field.p)
    best = None
    for Q in sorted(all_subgroups(P), key=lambda s: -s.order()):
        QG = Subgroup(G, Q.generators, check=False)
        bc = brauer_construction(M, QG, over=QG)
        if bc.dim:
            best = QG
            break
    if best is None:
        raise MeatAxeError("p-permutation module with vanishing Brauer constructions")
    return best


# ---------------------------------------------------------------------------
# simple modules
# ---------------------------------------------------------------------------

class SplittingFieldError(MeatAxeError):
    pass


_SIMPLES_CACHE: dict = {}


def count_p_regular_classes(G: PermGroup, p: int) -> int:
    return sum(1 for rep, _ in G.conjugacy_classes if rep.order() % p != 0)


def simple_modules_of_group(G: PermGroup, field: FF,
                            rng: np.random.Generator | None = None,
                            check_splitting: bool = True) -> list[Representation]:
    """All simple kG-modules up to isomorphism, sorted by dimension.

    Completeness is certified against the p-regular class count; if the
    count cannot be reached (or some End(S) exceeds k) the field is not a
    splitting field and SplittingFieldError reports the suggested degree."""
    key = (id(G), field.p, field.m)
    hit = _SIMPLES_CACHE.get(key)
    if hit is not None and hit[0] is G:
        return hit[1]
    rng = rng if rng is not None else np.random.default_rng(0x51117)
    p = field.p
    target = count_p_regular_classes(G, p)
    from .group import core_p, quotient_group

    N = core_p(G, p)
    if N.order() > 1:
        Q = quotient_group(G, N)
        quotient_simples = simple_modules_of_group(Q, field, rng, check_splitting)
        out = []
        for S in quotient_simples:
            mats = [S.matrix_of(Q.project(g)) for g in G.generators]
            out.append(Representation.of_dim(G, field, mats, S.dim,
                                             name=f"{S.name or 'S'}^infl"))
    else:
        out = _harvest_simples(G, field, target, rng)
    out.sort(key=lambda S: (S.dim, S.content_key()))
    if len(out) != target:
        raise SplittingFieldError(
            f"found {len(out)} simples but {target} p-regular classes; "
            f"GF({field.p}^{2 * field.m}) should split"
        )
    if check_splitting:
        for S in out:
            if len(hom_space(S, S)) != 1:
                raise SplittingFieldError(
                    f"End of a dim-{S.dim} simple exceeds k; "
                    f"try field degree {2 * field.m}"
                )
    _SIMPLES_CACHE[key] = (G, out)
    return out


def _harvest_simples(G: PermGroup, field: FF, target: int,
                     rng: np.random.Generator) -> list[Representation]:
    from .rep import permutation_module, regular_module

    found: list[Representation] = []

    def absorb(rep_source: Representation):
        for fac in chop(OpModule.of(rep_source), rng):
            S = Representation.of_dim(G, field, fac.ops, fac.dim)
            if not any(
                S.dim == T.dim and modules_isomorphic(S, T, rng) for T in found
            ):
                found.append(S)
                if len(found) == target:
                    return True
        return False

    P = sylow_subgroup(G, field.p)
    if absorb(permutation_module(G, P, field)):
        return found
    # tensor harvest: products of found simples often exhaust the rest
    tried = set()
    changed = True
    while changed and len(found) < target:
        changed = False
        for i in range(len(found)):
            for j in range(len(found)):
                if (i, j) in tried or found[i].dim * found[j].dim > 4096:
                    continue
                tried.add((i, j))
                if absorb(found[i].tensor(found[j])):
                    return found
                changed = True
    if len(found) < target:
        absorb(regular_module(G, field))
    return found


# ---------------------------------------------------------------------------
# radical, socle, top
# ---------------------------------------------------------------------------

def radical_submodule(M: Representation, rng=None) -> Subspace:
    """rad M = intersection of the kernels of all maps onto simples."""
    if M.dim == 0:
        return Subspace.zero(M.field, 0)
    simples = simple_modules_of_group(M.group, M.field, rng)
    blocks = []
    for S in simples:
        for phi in hom_space(M, S):
            blocks.append(phi.a)
    if not blocks:
        raise MeatAxeError("nonzero module with no maps onto simples")
    stacked = Mat(M.field, np.hstack(blocks))
    return Subspace.from_rows(stacked.nullspace_left())


def socle_submodule(M: Representation, rng=None) -> Subspace:
    """soc M = sum of the images of all maps from simples."""
    if M.dim == 0:
        return Subspace.zero(M.field, 0)
    simples = simple_modules_of_group(M.group, M.field, rng)
    rows = []
    for S in simples:
        for phi in hom_space(S, M):
            rows.append(phi.a)
    if not rows:
        return Subspace.zero(M.field, M.dim)
    return Subspace.from_rows(Mat(M.field, np.vstack(rows)))


def top_quotient(M: Representation, rng=None):
    """(M / rad M, quotient map data)."""
    return M.quotient_rep(radical_submodule(M, rng), name=f"top({M.name})")


def radical_via_group_algebra(M: Representation, rng=None) -> Subspace:
    """Differential oracle: rad M = M * J(kG), via the regular module."""
    from .rep import regular_module

    G = M.group
    if G.order() > 512:
        raise MeatAxeError("group-algebra radical oracle is for small groups")
    reg = regular_module(G, M.field)
    simples = simple_modules_of_group(G, M.field, rng)
    # J(kG) = elements annihilating every simple
    blocks = []
    table = reg.action_table_via_group(G)
    elements = G.elements()
    f = M.field
    for S in simples:
        mats = S.matrices_for_all_elements()
        arr = np.zeros((len(elements), S.dim * S.dim), dtype=np.uint8)
        for i, g in enumerate(elements):
            arr[i] = mats[g.key].a.reshape(-1)
        blocks.append(arr)
    ann = Mat(f, np.hstack(blocks)).nullspace_left()
    mats_m = M.matrices_for_all_elements()
    rows = []
    for i in range(ann.rows):
        x = ann.a[i]
        act = Mat.zeros(f, M.dim, M.dim)
        for j, g in enumerate(elements):
            c = int(x[j])
            if c:
                act = act + mats_m[g.key].scale(c)
        rows.append(act.a)
    if not rows:
        return Subspace.zero(f, M.dim)
    return Subspace.from_rows(Mat(f, np.vstack(rows)))
