"""Subgroup lattices of small groups (the fusion systems need |P| <= 64)."""

from __future__ import annotations

import numpy as np

from .group import ENUM_CAP, GroupError, PermGroup, Subgroup, reduce_generators
from .perm import Permutation

LATTICE_CAP = 64


def _closure_keys(G: PermGroup, gens: list[Permutation]) -> frozenset:
    seen = {G.identity().key}
    frontier = [G.identity()]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                gh = g * h
                if gh.key not in seen:
                    seen.add(gh.key)
                    nxt.append(gh)
        frontier = nxt
    return frozenset(seen)


def all_subgroups(P: PermGroup) -> list[Subgroup]:
    """Every subgroup of P, via join-closure of the cyclic subgroups.

    Deterministic order: by (order, sorted element keys)."""
    if P.order() > LATTICE_CAP:
        raise GroupError(f"subgroup enumeration is capped at order {LATTICE_CAP}")
    elements = P.elements()
    by_keyset: dict[frozenset, list[Permutation]] = {}
    trivial = frozenset([P.identity().key])
    by_keyset[trivial] = []
    for x in elements:
        if x.is_identity():
            continue
        ks = _closure_keys(P, [x])
        if ks not in by_keyset:
            by_keyset[ks] = [x]
    # join closure
    changed = True
    while changed:
        changed = False
        items = list(by_keyset.items())
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                ka, ga = items[i]
                kb, gb = items[j]
                if ka <= kb or kb <= ka:
                    continue
                gens = ga + gb
                ks = _closure_keys(P, gens)
                if ks not in by_keyset:
                    by_keyset[ks] = gens
                    changed = True
    subs = []
    for ks, gens in by_keyset.items():
        sub = reduce_generators(P, [_perm_from_key(k) for k in sorted(ks)],)
        subs.append((len(ks), tuple(sorted(ks)), sub))
    subs.sort(key=lambda t: (t[0], t[1]))
    return [s for _, _, s in subs]


def _perm_from_key(key: bytes) -> Permutation:
    return Permutation(np.frombuffer(key, dtype=np.int32).copy())


def subgroup_key(S: PermGroup) -> frozenset:
    return frozenset(g.key for g in S.elements())


def maximal_subgroups_of_p_group(Q: PermGroup) -> list[Subgroup]:
    """Maximal proper subgroups (those of index p) of a p-group Q."""
    n = Q.order()
    if n == 1:
        return []
    p = min(q for q in range(2, n + 1) if n % q == 0)
    m = n
    while m % p == 0:
        m //= p
    if m != 1:
        raise GroupError("not a p-group")
    return [s for s in all_subgroups(Q) if s.order() == n // p]


def subgroups_of_order(P: PermGroup, order: int) -> list[Subgroup]:
    return [s for s in all_subgroups(P) if s.order() == order]
