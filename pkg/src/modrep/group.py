"""Permutation groups: stabilizer chains, enumeration, and subgroup queries.

The stabilizer chain (Schreier-Sims) backs membership, order, element
factorization into the original generators, and canonical coset
representatives.  Base points are always the smallest moved points, so the
chain doubles as a lexicographic minimizer.  Exhaustive enumeration (BFS
closure, capped at ENUM_CAP) is kept alongside as the differential oracle
and as the workhorse for class/coset bookkeeping in small groups.
"""

from __future__ import annotations

import math
from functools import cached_property, lru_cache

import numpy as np

from .perm import Permutation, parse_cycles

ENUM_CAP = 100_000
ORBIT_CAP = 400_000


class GroupError(ValueError):
    pass


class EnumerationCapError(GroupError):
    pass


def _invert_word(word):
    return tuple(-s for s in reversed(word))


class _Level:
    __slots__ = ("base", "gens", "orbit", "schreier", "_transversal")

    def __init__(self, base: int):
        self.base = base
        self.gens: list[tuple[Permutation, tuple]] = []
        self.orbit: list[int] = []
        self.schreier: dict[int, tuple] = {}
        self._transversal: dict[int, tuple] = {}


class StabilizerChain:
    """Deterministic Schreier-Sims with smallest-moved-point base."""

    def __init__(self, gens: list[Permutation], degree: int):
        self.degree = degree
        self.levels: list[_Level] = []
        todo = [(g, (i + 1,)) for i, g in enumerate(gens) if not g.is_identity()]
        for g, w in todo:
            self._add_generator(g, w)
        self._close()

    # -- construction ------------------------------------------------------
    def _level_index_for(self, g: Permutation) -> int:
        pt = g.smallest_moved()
        for i, lvl in enumerate(self.levels):
            if lvl.base == pt:
                return i
            if lvl.base > pt:
                self.levels.insert(i, _Level(pt))
                return i
        self.levels.append(_Level(pt))
        return len(self.levels) - 1

    def _add_generator(self, g: Permutation, word: tuple):
        idx = self._level_index_for(g)
        self.levels[idx].gens.append((g, word))
        for lvl in self.levels[: idx + 1]:
            self._recompute_orbit(self.levels.index(lvl))

    def _gens_at(self, idx: int):
        out = []
        for lvl in self.levels[idx:]:
            out.extend(lvl.gens)
        return out

    def _recompute_orbit(self, idx: int):
        lvl = self.levels[idx]
        gens = self._gens_at(idx)
        pairs = [(g, g.inverse()) for g, _ in gens]
        lvl.orbit = [lvl.base]
        lvl.schreier = {lvl.base: None}
        lvl._transversal = {lvl.base: (Permutation.identity(self.degree), ())}
        qi = 0
        while qi < len(lvl.orbit):
            x = lvl.orbit[qi]
            qi += 1
            for gi, (g, ginv) in enumerate(pairs):
                for sign, perm in ((1, g), (-1, ginv)):
                    y = perm(x)
                    if y not in lvl.schreier:
                        lvl.schreier[y] = (x, gi, sign)
                        lvl.orbit.append(y)

    def _transversal_at(self, idx: int, x: int):
        lvl = self.levels[idx]
        if x in lvl._transversal:
            return lvl._transversal[x]
        path = []
        y = x
        while lvl.schreier[y] is not None:
            prev, gi, sign = lvl.schreier[y]
            path.append((gi, sign))
            y = prev
        gens = self._gens_at(idx)
        perm = Permutation.identity(self.degree)
        word: tuple = ()
        for gi, sign in reversed(path):
            g, w = gens[gi]
            if sign == 1:
                perm = perm * g
                word = word + w
            else:
                perm = perm * g.inverse()
                word = word + _invert_word(w)
        lvl._transversal[x] = (perm, word)
        return perm, word

    def _close(self):
        # add sifted Schreier generators until a full scan finds no violation
        guard = 0
        while self._scan_once():
            guard += 1
            if guard > 20_000:
                raise GroupError("stabilizer chain failed to close")

    def _scan_once(self) -> bool:
        for idx in range(len(self.levels)):
            lvl = self.levels[idx]
            gens = self._gens_at(idx)
            for x in list(lvl.orbit):
                ux, wx = self._transversal_at(idx, x)
                for g, wg in gens:
                    y = g(x)
                    uy, wy = self._transversal_at(idx, y)
                    sg = ux * g * uy.inverse()
                    if sg.is_identity():
                        continue
                    residue, rword = self._sift(sg, wx + wg + _invert_word(wy), idx + 1)
                    if residue is not None:
                        self._add_generator(residue, rword)
                        return True
        return False

    def _sift(self, g: Permutation, word: tuple, start: int = 0):
        """Strip g through levels >= start; returns (residue, word) or (None, ())."""
        for idx in range(start, len(self.levels)):
            if g.is_identity():
                return None, ()
            lvl = self.levels[idx]
            pt = g.smallest_moved()
            if pt is None:
                return None, ()
            if pt < lvl.base:
                return g, word  # belongs above this level
            x = g(lvl.base)
            if x == lvl.base:
                continue
            if x not in lvl.schreier:
                return g, word
            u, uw = self._transversal_at(idx, x)
            g = g * u.inverse()
            word = word + _invert_word(uw)
        if g.is_identity():
            return None, ()
        return g, word

    # -- queries -------------------------------------------------------------
    def order(self) -> int:
        n = 1
        for lvl in self.levels:
            n *= len(lvl.orbit)
        return n

    def contains(self, g: Permutation) -> bool:
        residue, _ = self._sift_plain(g)
        return residue is None

    def _sift_plain(self, g: Permutation):
        transversals = []
        for idx, lvl in enumerate(self.levels):
            if g.is_identity():
                break
            x = g(lvl.base)
            if x == lvl.base:
                continue
            if x not in lvl.schreier:
                return g, None
            u, _ = self._transversal_at(idx, x)
            g = g * u.inverse()
            transversals.append((idx, x))
        if g.is_identity():
            return None, transversals
        return g, None

    def factor(self, g: Permutation):
        """Express g as a word in the original generators (signed 1-based)."""
        word: tuple = ()
        for idx, lvl in enumerate(self.levels):
            if g.is_identity():
                break
            x = g(lvl.base)
            if x == lvl.base:
                continue
            if x not in lvl.schreier:
                raise GroupError("element is not in the group")
            u, uw = self._transversal_at(idx, x)
            g = g * u.inverse()
            word = uw + word
        if not g.is_identity():
            raise GroupError("element is not in the group")
        return word

    def random_element(self, rng: np.random.Generator) -> Permutation:
        g = Permutation.identity(self.degree)
        for idx, lvl in enumerate(self.levels):
            x = lvl.orbit[int(rng.integers(0, len(lvl.orbit)))]
            u, _ = self._transversal_at(idx, x)
            g = u * g
        return g

    def canonical_coset_rep(self, t: Permutation) -> Permutation:
        """Lexicographically minimal element of (this chain's group) * t."""
        for idx, lvl in enumerate(self.levels):
            best_x, best_img = None, None
            for x in lvl.orbit:
                img = t(x)
                if best_img is None or img < best_img:
                    best_img, best_x = img, x
            if best_x != lvl.base:
                u, _ = self._transversal_at(idx, best_x)
                t = u * t
        return t


class PermGroup:
    """A finite permutation group given by generators on 0..degree-1."""

    def __init__(self, generators, degree: int | None = None, name: str | None = None):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise GroupError("degree required for the trivial group")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise GroupError("generators have mixed degree")
        self.generators: list[Permutation] = gens
        self.degree = degree
        self.name = name

    # -- identity, hashing ---------------------------------------------------
    def __repr__(self):
        label = self.name or f"<{len(self.generators)} gens, deg {self.degree}>"
        return f"PermGroup({label}, order={self.order()})"

    @cached_property
    def chain(self) -> StabilizerChain:
        return StabilizerChain(self.generators, self.degree)

    @lru_cache(maxsize=None)
    def order(self) -> int:
        return self.chain.order()

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def __contains__(self, g: Permutation) -> bool:
        return g.degree == self.degree and self.chain.contains(g)

    def factor_word(self, g: Permutation):
        return self.chain.factor(g)

    def evaluate_word(self, word) -> Permutation:
        g = Permutation.identity(self.degree)
        for s in word:
            h = self.generators[abs(s) - 1]
            g = g * (h if s > 0 else h.inverse())
        return g

    # -- enumeration (the differential oracle; capped) ------------------------
    @cached_property
    def _element_table(self):
        order = self.order()
        if order > ENUM_CAP:
            raise EnumerationCapError(
                f"group order {order} exceeds the enumeration cap {ENUM_CAP}"
            )
        elements = [Permutation.identity(self.degree)]
        index = {elements[0].key: 0}
        qi = 0
        while qi < len(elements):
            g = elements[qi]
            qi += 1
            for h in self.generators:
                gh = g * h
                if gh.key not in index:
                    index[gh.key] = len(elements)
                    elements.append(gh)
        if len(elements) != order:
            raise GroupError("enumeration disagrees with the stabilizer chain")
        return elements, index

    def elements(self) -> list[Permutation]:
        return self._element_table[0]

    def element_index(self, g: Permutation) -> int:
        return self._element_table[1][g.key]

    def random_element(self, rng: np.random.Generator) -> Permutation:
        return self.chain.random_element(rng)

    # -- structure ------------------------------------------------------------
    def subgroup(self, gens, name: str | None = None) -> "Subgroup":
        return Subgroup(self, gens, name=name)

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, [], name="1")

    def full_subgroup(self) -> "Subgroup":
        return Subgroup(self, self.generators, name=self.name)

    def is_abelian(self) -> bool:
        return all(
            (a * b) == (b * a) for i, a in enumerate(self.generators) for b in self.generators[i:]
        )

    def is_cyclic(self) -> bool:
        n = self.order()
        return any(e.order() == n for e in self.elements())

    @cached_property
    def conjugacy_classes(self):
        """List of (representative, sorted element indices), deterministic."""
        elements, index = self._element_table
        n = len(elements)
        class_id = np.full(n, -1, dtype=np.int64)
        classes = []
        gens = self.generators
        gen_invs = [g.inverse() for g in gens]
        for i in range(n):
            if class_id[i] >= 0:
                continue
            cid = len(classes)
            members = [i]
            class_id[i] = cid
            qi = 0
            while qi < len(members):
                g = elements[members[qi]]
                qi += 1
                for s, si in zip(gens, gen_invs):
                    c = si * g * s
                    j = index[c.key]
                    if class_id[j] < 0:
                        class_id[j] = cid
                        members.append(j)
            classes.append((elements[i], sorted(members)))
        return classes

    def class_index_of(self, g: Permutation) -> int:
        elements, index = self._element_table
        i = index[g.key]
        for cid, (_, members) in enumerate(self.conjugacy_classes):
            if i in members:
                return cid
        raise GroupError("element not found in any class")

    @cached_property
    def _class_lookup(self):
        lookup = np.zeros(self.order(), dtype=np.int64)
        for cid, (_, members) in enumerate(self.conjugacy_classes):
            lookup[members] = cid
        return lookup

    def class_of_element_index(self, i: int) -> int:
        return int(self._class_lookup[i])

    def exponent_of(self, p: int) -> int:
        """p-part of the group order."""
        n = self.order()
        e = 1
        while n % p == 0:
            n //= p
            e *= p
        return e


class Subgroup(PermGroup):
    """A subgroup carrying its parent handle; generators are checked."""

    def __init__(self, parent: PermGroup, gens, name: str | None = None, check: bool = True):
        super().__init__(list(gens), degree=parent.degree, name=name)
        self.parent = parent
        if check:
            for g in self.generators:
                if g not in parent:
                    raise GroupError("subgroup generator lies outside the parent")

    def __repr__(self):
        label = self.name or f"<{len(self.generators)} gens>"
        return f"Subgroup({label}, order={self.order()}, of deg {self.degree})"


# ---------------------------------------------------------------------------
# orbits, cosets, conjugation machinery
# ---------------------------------------------------------------------------

def element_set(S: PermGroup) -> frozenset:
    return frozenset(g.key for g in S.elements())


def coset_reps(G: PermGroup, H: PermGroup) -> list[Permutation]:
    """Right-coset representatives Ht, canonical reps, BFS from the identity."""
    chain = H.chain
    start = chain.canonical_coset_rep(G.identity())
    reps = [start]
    index = {start.key: 0}
    qi = 0
    while qi < len(reps):
        t = reps[qi]
        qi += 1
        for g in G.generators:
            c = chain.canonical_coset_rep(t * g)
            if c.key not in index:
                index[c.key] = len(reps)
                reps.append(c)
    return reps


class CosetTable:
    """Right cosets of H in G with the G-action as point permutations."""

    def __init__(self, G: PermGroup, H: PermGroup):
        self.G = G
        self.H = H
        self.reps = coset_reps(G, H)
        self.index = {t.key: i for i, t in enumerate(self.reps)}
        self.n = len(self.reps)

    def coset_of(self, g: Permutation) -> int:
        return self.index[self.H.chain.canonical_coset_rep(g).key]

    def action_of(self, g: Permutation) -> np.ndarray:
        """The permutation of coset indices induced by right multiplication."""
        out = np.empty(self.n, dtype=np.int32)
        for i, t in enumerate(self.reps):
            out[i] = self.coset_of(t * g)
        return out

    @cached_property
    def gen_actions(self) -> list[np.ndarray]:
        return [self.action_of(g) for g in self.G.generators]


def double_coset_reps(G: PermGroup, H: PermGroup, K: PermGroup) -> list[Permutation]:
    """Representatives of H\\G/K via H-orbits on the cosets of K."""
    table = CosetTable(G, K)
    h_actions = [table.action_of(h) for h in H.generators]
    seen = np.zeros(table.n, dtype=bool)
    reps = []
    for start in range(table.n):
        if seen[start]:
            continue
        seen[start] = True
        orbit = [start]
        qi = 0
        while qi < len(orbit):
            x = orbit[qi]
            qi += 1
            for act in h_actions:
                y = int(act[x])
                if not seen[y]:
                    seen[y] = True
                    orbit.append(y)
        reps.append(table.reps[start])
    return reps


def double_coset_count_burnside(G: PermGroup, H: PermGroup, K: PermGroup) -> int:
    """|H\\G/K| as the Burnside orbit count of H acting on G/K."""
    table = CosetTable(G, K)
    total = 0
    for h in H.elements():
        act = table.action_of(h)
        total += int(np.count_nonzero(act == np.arange(table.n, dtype=np.int32)))
    assert total % H.order() == 0
    return total // H.order()


def _orbit_stabilizer(G: PermGroup, start, act, key):
    """Generic orbit of `start` under conjugation-style actions with Schreier
    stabilizer generators.  act(x, g) -> y; key(x) hashable."""
    orbit = [start]
    index = {key(start): 0}
    witness = [G.identity()]  # witness[i] maps start to orbit[i]
    stab_gens: list[Permutation] = []
    stab_seen = set()
    qi = 0
    while qi < len(orbit):
        x = orbit[qi]
        u = witness[qi]
        qi += 1
        for g in G.generators:
            y = act(x, g)
            ky = key(y)
            if ky not in index:
                index[ky] = len(orbit)
                orbit.append(y)
                witness.append(u * g)
                if len(orbit) > ORBIT_CAP:
                    raise EnumerationCapError("orbit exceeds cap")
            else:
                v = witness[index[ky]]
                s = u * g * v.inverse()
                if not s.is_identity() and s.key not in stab_seen:
                    stab_seen.add(s.key)
                    stab_gens.append(s)
    return orbit, index, witness, stab_gens


def _conj_subgroup_set(keyset: frozenset, g: Permutation, degree: int):
    gi = g.inverse()
    out = set()
    for k in keyset:
        h = Permutation(np.frombuffer(k, dtype=np.int32).copy())
        out.add((gi * h * g).key)
    return frozenset(out)


def normalizer(G: PermGroup, S: PermGroup) -> Subgroup:
    """N_G(S) via the conjugation orbit of S's element set."""
    if S.order() > 4096:
        raise EnumerationCapError("normalizer via orbits needs |S| <= 4096")
    start = element_set(S)
    _, _, _, stab = _orbit_stabilizer(
        G, start, lambda x, g: _conj_subgroup_set(x, g, G.degree), lambda x: x
    )
    return reduce_generators(G, stab, name=f"N({S.name or 'S'})")


def centralizer_of_element(G: PermGroup, x: Permutation) -> Subgroup:
    _, _, _, stab = _orbit_stabilizer(
        G, x, lambda e, g: g.inverse() * e * g, lambda e: e.key
    )
    return reduce_generators(G, stab)


def reduce_generators(G: PermGroup, gens: list[Permutation], name=None) -> Subgroup:
    """Greedily drop redundant generators (keeps the subgroup identical)."""
    kept: list[Permutation] = []
    sub = Subgroup(G, [], check=False)
    for g in sorted(set(gens), key=lambda p: p.key):
        if g.is_identity():
            continue
        if g not in sub:
            kept.append(g)
            sub = Subgroup(G, kept, check=False, name=name)
    sub.name = name
    return sub


def centralizer(G: PermGroup, S: PermGroup) -> Subgroup:
    """C_G(S): intersect element centralizers of S's generators."""
    if not S.generators:
        return Subgroup(G, G.generators, name="C(1)")
    current: PermGroup | None = None
    for x in S.generators:
        cx = centralizer_of_element(G, x)
        current = cx if current is None else intersect_subgroups(G, current, cx)
    current.name = f"C({S.name or 'S'})"
    return current


def intersect_subgroups(G: PermGroup, A: PermGroup, B: PermGroup) -> Subgroup:
    small, big = (A, B) if A.order() <= B.order() else (B, A)
    if small.order() > ENUM_CAP:
        raise EnumerationCapError("subgroup intersection needs an enumerable factor")
    members = [g for g in small.elements() if g in big]
    return reduce_generators(G, members)


def center(G: PermGroup) -> Subgroup:
    z = centralizer(G, G)
    z.name = "Z"
    return z


def conjugating_element(G: PermGroup, H: PermGroup, K: PermGroup):
    """g with H^g = K, or None."""
    if H.order() != K.order():
        return None
    target = element_set(K)
    start = element_set(H)
    if start == target:
        return G.identity()
    orbit = [start]
    index = {start: 0}
    witness = [G.identity()]
    qi = 0
    while qi < len(orbit):
        x = orbit[qi]
        u = witness[qi]
        qi += 1
        for g in G.generators:
            y = _conj_subgroup_set(x, g, G.degree)
            if y not in index:
                index[y] = len(orbit)
                orbit.append(y)
                witness.append(u * g)
                if y == target:
                    return witness[-1]
                if len(orbit) > ORBIT_CAP:
                    raise EnumerationCapError("conjugacy orbit exceeds cap")
    return None


def sub_conjugating_element(G: PermGroup, H: PermGroup, K: PermGroup):
    """g with H^g <= K, or None (the <=_G relation)."""
    kset = element_set(K)
    if H.order() > K.order():
        return None
    start = element_set(H)
    orbit = [start]
    index = {start: 0}
    witness = [G.identity()]
    qi = 0
    while qi < len(orbit):
        if orbit[qi] <= kset:
            return witness[qi]
        x = orbit[qi]
        u = witness[qi]
        qi += 1
        for g in G.generators:
            y = _conj_subgroup_set(x, g, G.degree)
            if y not in index:
                index[y] = len(orbit)
                orbit.append(y)
                witness.append(u * g)
                if len(orbit) > ORBIT_CAP:
                    raise EnumerationCapError("conjugacy orbit exceeds cap")
    return None


def conjugate_subgroup(G: PermGroup, S: PermGroup, g: Permutation) -> Subgroup:
    gi = g.inverse()
    return Subgroup(G, [gi * s * g for s in S.generators], check=False,
                    name=f"{S.name}^g" if S.name else None)


# ---------------------------------------------------------------------------
# Sylow subgroups, p-structure
# ---------------------------------------------------------------------------

def _p_part_element(x: Permutation, p: int) -> Permutation:
    o = x.order()
    odd = o
    while odd % p == 0:
        odd //= p
    return x**odd


def sylow_subgroup(G: PermGroup, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown through normalizers; deterministic."""
    target = G.exponent_of(p)
    S = Subgroup(G, [], check=False, name=f"Syl_{p}")
    if target == 1:
        return S
    while S.order() < target:
        N = normalizer(G, S) if S.generators else G
        found = None
        if N.order() <= ENUM_CAP:
            for x in N.elements():
                y = _p_part_element(x, p)
                if not y.is_identity() and y not in S:
                    found = y
                    break
        else:
            rng = np.random.default_rng(0xC0FFEE)
            for _ in range(10_000):
                y = _p_part_element(N.random_element(rng), p)
                if not y.is_identity() and y not in S:
                    found = y
                    break
        if found is None:
            raise GroupError("sylow search stalled (should not happen)")
        S = Subgroup(G, S.generators + [found], check=False, name=f"Syl_{p}")
        if S.order() % p != 0 and S.order() != 1:
            raise GroupError("sylow growth left the p-world")
    if S.order() != target:
        raise GroupError("sylow subgroup has wrong order")
    return S


def core_p(G: PermGroup, p: int) -> Subgroup:
    """O_p(G): intersection of the Sylow p-subgroup's conjugates."""
    P = sylow_subgroup(G, p)
    if P.order() == 1:
        return G.trivial_subgroup()
    orbit = [element_set(P)]
    index = {orbit[0]: 0}
    qi = 0
    while qi < len(orbit):
        x = orbit[qi]
        qi += 1
        for g in G.generators:
            y = _conj_subgroup_set(x, g, G.degree)
            if y not in index:
                index[y] = len(orbit)
                orbit.append(y)
    common = frozenset.intersection(*orbit)
    members = [Permutation(np.frombuffer(k, dtype=np.int32).copy()) for k in common]
    return reduce_generators(G, members, name=f"O_{p}")


def is_p_nilpotent(G: PermGroup, p: int) -> bool:
    """True iff G has a normal p-complement: <p'-elements> has p'-order."""
    if G.order() > ENUM_CAP:
        raise EnumerationCapError("p-nilpotency test enumerates the group")
    odd_part = G.order() // G.exponent_of(p)
    gens = []
    sub = Subgroup(G, [], check=False)
    for x in G.elements():
        o = x.order()
        if o % p == 0:
            xo = x ** G_pow_reduce(o, p)
        else:
            xo = x
        if not xo.is_identity() and xo not in sub:
            gens.append(xo)
            sub = Subgroup(G, gens, check=False)
    return sub.order() == odd_part


def G_pow_reduce(o: int, p: int) -> int:
    """p-part of o (power to reach the p'-part of an element)."""
    e = 1
    while o % p == 0:
        o //= p
        e *= p
    return e


# ---------------------------------------------------------------------------
# products, diagonals, quotients
# ---------------------------------------------------------------------------

class DirectProduct(PermGroup):
    """G1 x G2 on the disjoint union of the two point sets."""

    def __init__(self, G1: PermGroup, G2: PermGroup):
        self.factors = (G1, G2)
        d1, d2 = G1.degree, G2.degree
        gens = []
        for g in G1.generators:
            gens.append(Permutation(np.concatenate([g.images, np.arange(d1, d1 + d2)])))
        for g in G2.generators:
            gens.append(Permutation(np.concatenate([np.arange(d1), g.images + d1])))
        name = None
        if G1.name and G2.name:
            name = f"{G1.name}x{G2.name}"
        super().__init__(gens, degree=d1 + d2, name=name)
        self._d1 = d1

    def embed(self, g1: Permutation | None = None, g2: Permutation | None = None) -> Permutation:
        d1, d2 = self.factors[0].degree, self.factors[1].degree
        a = g1.images if g1 is not None else np.arange(d1)
        b = g2.images if g2 is not None else np.arange(d2)
        return Permutation(np.concatenate([a, b + d1]))

    def project(self, g: Permutation):
        d1 = self._d1
        return (
            Permutation(g.images[:d1]),
            Permutation(g.images[d1:] - d1),
        )


def direct_product(G1: PermGroup, G2: PermGroup) -> DirectProduct:
    return DirectProduct(G1, G2)


class GroupIso:
    """An isomorphism source -> target, given on generators and verified."""

    def __init__(self, source: PermGroup, target: PermGroup, gen_images, check: bool = True):
        self.source = source
        self.target = target
        self.gen_images = list(gen_images)
        if len(self.gen_images) != len(source.generators):
            raise GroupError("one image per source generator required")
        self._map: dict[bytes, Permutation] = {}
        if check:
            self._verify()

    def _verify(self):
        if self.source.order() != self.target.order():
            raise GroupError("orders differ: not an isomorphism")
        if self.source.order() > ENUM_CAP:
            raise EnumerationCapError("isomorphism check enumerates the source")
        idmap = {self.source.identity().key: self.target.identity()}
        queue = [self.source.identity()]
        qi = 0
        while qi < len(queue):
            g = queue[qi]
            img = idmap[g.key]
            qi += 1
            for s, si in zip(self.source.generators, self.gen_images):
                gs = g * s
                expected = img * si
                if gs.key in idmap:
                    if idmap[gs.key] != expected:
                        raise GroupError("generator images do not define a homomorphism")
                else:
                    idmap[gs.key] = expected
                    queue.append(gs)
        if len({v.key for v in idmap.values()}) != len(idmap):
            raise GroupError("map is not injective")
        if len(idmap) != self.source.order():
            raise GroupError("map does not cover the source")
        self._map = idmap

    def apply(self, g: Permutation) -> Permutation:
        if self._map:
            return self._map[g.key]
        word = self.source.factor_word(g)
        out = self.target.identity()
        for s in word:
            img = self.gen_images[abs(s) - 1]
            out = out * (img if s > 0 else img.inverse())
        return out

    def inverse(self) -> "GroupIso":
        inv_map = {v.key: k for k, v in self._map.items()}
        gen_images = []
        for t in self.target.generators:
            k = inv_map[t.key]
            gen_images.append(Permutation(np.frombuffer(k, dtype=np.int32).copy()))
        return GroupIso(self.target, self.source, gen_images)

    def describe(self) -> list[tuple[str, str]]:
        return [
            (g.cycle_string(), img.cycle_string())
            for g, img in zip(self.source.generators, self.gen_images)
        ]


def diagonal_subgroup(product: DirectProduct, iso: GroupIso) -> Subgroup:
    """Delta H = {(h, iso(h))} inside G1 x G2, for iso: H <= G1 -> H' <= G2."""
    gens = [product.embed(h, iso.apply(h)) for h in iso.source.generators]
    name = f"D({iso.source.name or 'H'})"
    sub = Subgroup(product, gens, check=False, name=name)
    if sub.order() != iso.source.order():
        raise GroupError("diagonal subgroup has unexpected order")
    return sub


class QuotientGroup(PermGroup):
    """G/N acting faithfully on the right cosets of N."""

    def __init__(self, G: PermGroup, N: PermGroup):
        for g in G.generators:
            for n in N.generators:
                if g.inverse() * n * g not in N:
                    raise GroupError("subgroup is not normal")
        table = CosetTable(G, N)
        gens = [Permutation(table.action_of(g)) for g in G.generators]
        super().__init__(gens, degree=table.n, name=f"{G.name or 'G'}/{N.name or 'N'}")
        self._table = table
        self.numerator = G
        self.denominator = N

    def project(self, g: Permutation) -> Permutation:
        return Permutation(self._table.action_of(g))

    def section(self, i: int) -> Permutation:
        """A coset representative for coset index i."""
        return self._table.reps[i]


def quotient_group(G: PermGroup, N: PermGroup) -> QuotientGroup:
    return QuotientGroup(G, N)


# ---------------------------------------------------------------------------
# isomorphism search and recognition
# ---------------------------------------------------------------------------

def _order_profile(G: PermGroup):
    from collections import Counter

    return Counter(g.order() for g in G.elements())


def find_isomorphism(A: PermGroup, B: PermGroup):
    """Backtracking isomorphism search for small groups; None if none exists."""
    if A.order() != B.order():
        return None
    if A.order() > 4096:
        raise EnumerationCapError("isomorphism search needs order <= 4096")
    if _order_profile(A) != _order_profile(B):
        return None
    # minimal generating sequence of A, greedy over the element list
    gens_a: list[Permutation] = []
    sub = Subgroup(A, [], check=False)
    for x in sorted(A.elements(), key=lambda e: (-e.order(), e.key)):
        if x not in sub:
            gens_a.append(x)
            sub = Subgroup(A, gens_a, check=False)
            if sub.order() == A.order():
                break
    b_elements = B.elements()

    def extend(partial: list[Permutation]):
        k = len(partial)
        if k == len(gens_a):
            try:
                iso_small = GroupIso(
                    PermGroup(gens_a, degree=A.degree), B, partial
                )
            except GroupError:
                return None
            return iso_small
        want = gens_a[k].order()
        for y in b_elements:
            if y.order() != want:
                continue
            if not _partial_hom_ok(gens_a[: k + 1], partial + [y], A, B):
                continue
            result = extend(partial + [y])
            if result is not None:
                return result
        return None

    iso_small = extend([])
    if iso_small is None:
        return None
    # re-express on A's declared generators
    images = []
    helper = PermGroup(gens_a, degree=A.degree)
    for g in A.generators:
        word = helper.factor_word(g)
        out = B.identity()
        for s in word:
            img = iso_small.gen_images[abs(s) - 1]
            out = out * (img if s > 0 else img.inverse())
        images.append(out)
    return GroupIso(A, B, images)


def _partial_hom_ok(gens_a, gens_b, A, B) -> bool:
    """Closure-based consistency of a partial generator assignment."""
    sub_a = PermGroup(list(gens_a), degree=A.degree)
    if sub_a.order() > 4096:
        return True
    idmap = {A.identity().key: B.identity()}
    queue = [A.identity()]
    qi = 0
    while qi < len(queue):
        g = queue[qi]
        img = idmap[g.key]
        qi += 1
        for s, si in zip(gens_a, gens_b):
            gs = g * s
            expected = img * si
            if gs.key in idmap:
                if idmap[gs.key] != expected:
                    return False
            else:
                idmap[gs.key] = expected
                queue.append(gs)
    return len({v.key for v in idmap.values()}) == len(idmap)


def is_isomorphic(A: PermGroup, B: PermGroup) -> bool:
    return find_isomorphism(A, B) is not None


def recognize_label(G: PermGroup) -> str:
    """A human label for small groups (cyclic, Klein, Q8, ...)."""
    n = G.order()
    if n == 1:
        return "1"
    if G.is_cyclic():
        return f"C{n}"
    if n == 4:
        return "C2xC2"
    if n == 8:
        orders = sorted(g.order() for g in G.elements())
        if orders.count(2) == 1:
            return "Q8"
        if orders.count(2) == 5:
            return "D8"
    if n == 12 and not G.is_abelian():
        if is_isomorphic(G, alternating_group(4)):
            return "A4"
    if G.is_abelian():
        return f"abelian({n})"
    return f"group({n})"


# ---------------------------------------------------------------------------
# named constructions
# ---------------------------------------------------------------------------

def cyclic_group(n: int) -> PermGroup:
    if n == 1:
        return PermGroup([], degree=1, name="C1")
    images = np.roll(np.arange(n, dtype=np.int32), -1)
    return PermGroup([Permutation(images)], name=f"C{n}")


def symmetric_group(n: int) -> PermGroup:
    if n <= 1:
        return PermGroup([], degree=max(n, 1), name=f"S{n}")
    cyc = np.roll(np.arange(n, dtype=np.int32), -1)
    swap = np.arange(n, dtype=np.int32)
    swap[0], swap[1] = 1, 0
    return PermGroup([Permutation(cyc), Permutation(swap)], name=f"S{n}")


def alternating_group(n: int) -> PermGroup:
    if n <= 2:
        return PermGroup([], degree=max(n, 1), name=f"A{n}")
    g1 = np.arange(n, dtype=np.int32)
    g1[0], g1[1], g1[2] = 1, 2, 0
    if n % 2 == 1:
        g2 = np.roll(np.arange(n, dtype=np.int32), -1)
    else:
        g2 = np.concatenate([[0], np.roll(np.arange(1, n, dtype=np.int32), -1)])
    return PermGroup([Permutation(g1), Permutation(g2)], name=f"A{n}")


def dihedral_group(n: int) -> PermGroup:
    """Dihedral group of order 2n acting on an n-gon."""
    rot = np.roll(np.arange(n, dtype=np.int32), -1)
    refl = (np.arange(n, dtype=np.int32) * -1) % n
    return PermGroup([Permutation(rot), Permutation(refl)], name=f"D{2 * n}")


def quaternion_group() -> PermGroup:
    """Q8 in its regular action; elements 1,-1,i,-i,j,-j,k,-k."""
    # element indices: 0:1 1:-1 2:i 3:-i 4:j 5:-j 6:k 7:-k
    sign = [1, -1, 1, -1, 1, -1, 1, -1]
    kind = [0, 0, 1, 1, 2, 2, 3, 3]

    def compose(a, b):
        sa, ka = sign[a], kind[a]
        sb, kb = sign[b], kind[b]
        if ka == 0:
            s, k = sa * sb, kb
        elif kb == 0:
            s, k = sa * sb, ka
        elif ka == kb:
            s, k = -sa * sb, 0
        else:
            table = {(1, 2): (1, 3), (2, 1): (-1, 3), (2, 3): (1, 1),
                     (3, 2): (-1, 1), (3, 1): (1, 2), (1, 3): (-1, 2)}
            t, k = table[(ka, kb)]
            s = sa * sb * t
        return kind.index(k) + (0 if s == 1 else 1)

    perms = []
    for g in (2, 4):  # right multiplication by i and by j
        perms.append(Permutation([compose(x, g) for x in range(8)]))
    return PermGroup(perms, name="Q8")


def sl2_group(q: int) -> PermGroup:
    """SL2(q) acting faithfully on the q^2-1 nonzero vectors of GF(q)^2."""
    from .gf import GF, FieldError, factor_prime_power

    try:
        p, m = factor_prime_power(q)
    except FieldError as e:
        raise GroupError(f"SL2({q}): {e}") from e
    if q > 32:
        raise GroupError("SL2(q) constructor supports q <= 32")
    f = GF(q)
    points = [(x, y) for x in range(q) for y in range(q) if (x, y) != (0, 0)]
    index = {pt: i for i, pt in enumerate(points)}

    def perm_of_matrix(a, b, c, d):
        images = np.empty(len(points), dtype=np.int32)
        for i, (x, y) in enumerate(points):
            nx = int(f.add(f.mul(x, a), f.mul(y, c)))
            ny = int(f.add(f.mul(x, b), f.mul(y, d)))
            images[i] = index[(nx, ny)]
        return Permutation(images)

    gens = []
    for i in range(m):
        c = f.pow(f.generator, i) if m > 1 else 1 if i == 0 else None
        gens.append(perm_of_matrix(1, c, 0, 1))
        gens.append(perm_of_matrix(1, 0, c, 1))
    G = PermGroup(gens, name=f"SL2({q})")
    expected = q * (q - 1) * (q + 1)
    if G.order() != expected:
        raise GroupError(f"SL2({q}) construction has order {G.order()} != {expected}")
    return G


def klein_four_group() -> PermGroup:
    a = parse_cycles("(1,2)(3,4)")
    b = parse_cycles("(1,3)(2,4)")
    G = PermGroup([a, b], name="C2xC2")
    return G


_NAMED = {
    "Q8": quaternion_group,
    "V4": klein_four_group,
}


def group_from_text(text: str) -> PermGroup:
    """Parse the CLI group format: named shorthand or cycle lines (1-based)."""
    text = text.strip()
    if not text:
        raise GroupError("empty group description")
    import re as _re

    m = _re.fullmatch(r"SL2\((\d+)\)", text)
    if m:
        return sl2_group(int(m.group(1)))
    m = _re.fullmatch(r"C(\d+)", text)
    if m:
        return cyclic_group(int(m.group(1)))
    m = _re.fullmatch(r"S(\d+)", text)
    if m:
        return symmetric_group(int(m.group(1)))
    m = _re.fullmatch(r"A(\d+)", text)
    if m:
        return alternating_group(int(m.group(1)))
    m = _re.fullmatch(r"D(\d+)", text)
    if m:
        order = int(m.group(1))
        if order % 2:
            raise GroupError("dihedral shorthand Dn needs even order n")
        return dihedral_group(order // 2)
    if text in _NAMED:
        return _NAMED[text]()
    perms = [parse_cycles(line) for line in text.splitlines() if line.strip()]
    degree = max(p.degree for p in perms)
    padded = []
    for p in perms:
        if p.degree < degree:
            images = np.concatenate([p.images, np.arange(p.degree, degree, dtype=np.int32)])
            padded.append(Permutation(images))
        else:
            padded.append(p)
    return PermGroup(padded, degree=degree)


def find_common_sylow_identification(G: PermGroup, Gp: PermGroup, p: int):
    """(P <= G, P' <= G', iso P->P') or a GroupError if the Sylows differ."""
    P = sylow_subgroup(G, p)
    Pp = sylow_subgroup(Gp, p)
    if P.order() != Pp.order():
        raise GroupError(
            f"Sylow {p}-subgroups have different orders {P.order()} vs {Pp.order()}"
        )
    iso = find_isomorphism(P, Pp)
    if iso is None:
        raise GroupError(f"Sylow {p}-subgroups are not isomorphic")
    return P, Pp, iso
