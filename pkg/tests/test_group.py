import numpy as np
import pytest

from modrep.group import (
    CosetTable,
    DirectProduct,
    GroupError,
    GroupIso,
    PermGroup,
    Subgroup,
    alternating_group,
    center,
    centralizer,
    conjugating_element,
    coset_reps,
    cyclic_group,
    diagonal_subgroup,
    dihedral_group,
    direct_product,
    double_coset_count_burnside,
    double_coset_reps,
    find_common_sylow_identification,
    find_isomorphism,
    group_from_text,
    is_isomorphic,
    is_p_nilpotent,
    klein_four_group,
    normalizer,
    quaternion_group,
    quotient_group,
    recognize_label,
    sl2_group,
    sub_conjugating_element,
    sylow_subgroup,
    symmetric_group,
)
from modrep.perm import Permutation, parse_cycles


def brute_order(G):
    seen = {G.identity().key}
    frontier = [G.identity()]
    while frontier:
        nxt = []
        for g in frontier:
            for h in G.generators:
                gh = g * h
                if gh.key not in seen:
                    seen.add(gh.key)
                    nxt.append(gh)
        frontier = nxt
    return len(seen)


@pytest.mark.parametrize(
    "make,expected",
    [
        (lambda: cyclic_group(12), 12),
        (lambda: symmetric_group(5), 120),
        (lambda: alternating_group(5), 60),
        (lambda: dihedral_group(7), 14),
        (lambda: quaternion_group(), 8),
        (lambda: sl2_group(3), 24),
    ],
)
def test_order_against_enumeration(make, expected):
    G = make()
    assert G.order() == expected == brute_order(G)


def test_sl2_orders():
    assert sl2_group(2).order() == 6
    assert sl2_group(3).order() == 24
    assert sl2_group(11).order() == 1320
    assert center(sl2_group(2)).order() == 1  # S3 has trivial center
    with pytest.raises(GroupError):
        sl2_group(6)


def test_sl2_center_is_order_two():
    G = sl2_group(3)
    Z = center(G)
    assert Z.order() == 2


def test_direct_product_and_embeddings():
    G = sl2_group(3)
    H = cyclic_group(5)
    P = direct_product(G, H)
    assert P.order() == 120
    g = P.embed(G.generators[0], None)
    h = P.embed(None, H.generators[0])
    assert g * h == h * g
    a, b = P.project(g * h)
    assert a == G.generators[0] and b == H.generators[0]


def test_product_of_sl2_11_and_sl2_3():
    P = direct_product(sl2_group(11), sl2_group(3))
    assert P.order() == 31680


def test_membership_and_factorization():
    G = symmetric_group(6)
    rng = np.random.default_rng(7)
    for _ in range(20):
        g = G.random_element(rng)
        assert g in G
        word = G.factor_word(g)
        assert G.evaluate_word(word) == g
    odd = parse_cycles("(1,2)", 6)
    A = alternating_group(6)
    assert odd not in A


def test_conjugacy_classes_s4():
    G = symmetric_group(4)
    sizes = sorted(len(m) for _, m in G.conjugacy_classes)
    assert sizes == [1, 3, 6, 6, 8]


def test_sylow_subgroups():
    assert sylow_subgroup(symmetric_group(4), 2).order() == 8
    assert sylow_subgroup(symmetric_group(4), 3).order() == 3
    assert sylow_subgroup(cyclic_group(15), 7).order() == 1
    P = sylow_subgroup(sl2_group(3), 2)
    assert P.order() == 8
    assert recognize_label(P) == "Q8"
    P11 = sylow_subgroup(sl2_group(11), 2)
    assert P11.order() == 8
    assert recognize_label(P11) == "Q8"


def test_centralizers_in_sl2():
    G = sl2_group(11)
    P = sylow_subgroup(G, 2)
    # C_G(P) = Z of order 2; pick a cyclic order-4 subgroup for C12
    assert centralizer(G, P).order() == 2
    x = next(g for g in P.elements() if g.order() == 4)
    Q1 = Subgroup(G, [x], name="Q1")
    C = centralizer(G, Q1)
    assert C.order() == 12 and C.is_cyclic()
    Gp = sl2_group(3)
    Pp = sylow_subgroup(Gp, 2)
    xp = next(g for g in Pp.elements() if g.order() == 4)
    Cp = centralizer(Gp, Subgroup(Gp, [xp]))
    assert Cp.order() == 4 and Cp.is_cyclic()
    assert center(cyclic_group(9)).order() == 9


def test_normalizer_contains_centralizer():
    G = symmetric_group(4)
    S = Subgroup(G, [parse_cycles("(1,2,3)", 4)])
    N = normalizer(G, S)
    C = centralizer(G, S)
    assert N.order() == 6 and C.order() == 3
    for g in C.generators:
        assert g in N


def test_conjugating_element_q8_in_sl23():
    G = sl2_group(3)
    P = sylow_subgroup(G, 2)
    fours = [g for g in P.elements() if g.order() == 4]
    subs = []
    seen = set()
    for g in fours:
        S = Subgroup(G, [g])
        key = frozenset(e.key for e in S.elements())
        if key not in seen:
            seen.add(key)
            subs.append(S)
    assert len(subs) == 3
    w = conjugating_element(G, subs[0], subs[1])
    assert w is not None
    wi = w.inverse()
    for s in subs[0].generators:
        assert wi * s * w in subs[1]
    # order obstruction
    assert conjugating_element(G, P, subs[0]) is None
    # symmetric witness
    w2 = conjugating_element(G, subs[1], subs[0])
    assert w2 is not None


def test_sub_conjugating_element():
    G = symmetric_group(4)
    H = Subgroup(G, [parse_cycles("(1,2)", 4)])
    K = sylow_subgroup(G, 2)
    g = sub_conjugating_element(G, H, K)
    assert g is not None
    gi = g.inverse()
    for h in H.generators:
        assert gi * h * g in K


def test_coset_reps_partition():
    G = symmetric_group(4)
    H = Subgroup(G, [parse_cycles("(1,2,3)", 4)])
    reps = coset_reps(G, H)
    assert len(reps) == 8
    seen = set()
    for t in reps:
        for h in H.elements():
            seen.add((h * t).key)
    assert len(seen) == 24
    assert len(coset_reps(G, G.trivial_subgroup())) == 24
    assert len(coset_reps(G, G.full_subgroup())) == 1


def test_double_cosets_partition_group():
    G = symmetric_group(4)
    H = sylow_subgroup(G, 2)
    K = Subgroup(G, [parse_cycles("(1,2,3)", 4)])
    reps = double_coset_reps(G, H, K)
    assert len(reps) == double_coset_count_burnside(G, H, K)
    total = set()
    for t in reps:
        for h in H.elements():
            for k in K.elements():
                total.add((h * t * k).key)
    assert len(total) == G.order()
    assert len(double_coset_reps(G, G.full_subgroup(), G.full_subgroup())) == 1


def test_quotients():
    G = sl2_group(3)
    Z = center(G)
    Q = quotient_group(G, Z)
    assert Q.order() == 12
    assert is_isomorphic(Q, alternating_group(4))
    # projection is a homomorphism hitting every coset
    for g in G.generators:
        assert Q.project(g) in Q
    Q8 = quaternion_group()
    ZQ = center(Q8)
    V = quotient_group(Q8, ZQ)
    assert V.order() == 4 and recognize_label(V) == "C2xC2"
    full = quotient_group(G, G.full_subgroup())
    assert full.order() == 1
    with pytest.raises(GroupError):
        quotient_group(symmetric_group(4), Subgroup(symmetric_group(4), [parse_cycles("(1,2)", 4)]))


def test_quotient_projection_section():
    G = sl2_group(3)
    Z = center(G)
    Q = quotient_group(G, Z)
    hit = set()
    for i in range(Q.degree):
        rep = Q.section(i)
        j = Q._table.coset_of(rep)
        assert j == i
        hit.add(j)
    assert len(hit) == Q.degree


def test_is_p_nilpotent():
    assert is_p_nilpotent(quaternion_group(), 2)
    assert is_p_nilpotent(direct_product(cyclic_group(12), cyclic_group(4)), 2)
    assert not is_p_nilpotent(sl2_group(3), 2)
    assert not is_p_nilpotent(symmetric_group(4), 2)
    assert is_p_nilpotent(symmetric_group(3), 2)
    assert not is_p_nilpotent(symmetric_group(3), 3)


def test_group_iso_validation():
    C4 = cyclic_group(4)
    V = klein_four_group()
    assert find_isomorphism(C4, V) is None
    bad_images = [V.generators[0]]
    with pytest.raises(GroupError):
        GroupIso(C4, V, bad_images)
    Q8a = quaternion_group()
    G = sl2_group(3)
    Q8b = sylow_subgroup(G, 2)
    iso = find_isomorphism(Q8a, Q8b)
    assert iso is not None
    inv = iso.inverse()
    for g in Q8a.elements():
        assert inv.apply(iso.apply(g)) == g


def test_common_sylow_identification():
    G, Gp = sl2_group(11), sl2_group(3)
    P, Pp, iso = find_common_sylow_identification(G, Gp, 2)
    assert P.order() == Pp.order() == 8
    assert iso.apply(P.generators[0]) in Pp
    # identity case
    P2, P2p, iso2 = find_common_sylow_identification(G, G, 2)
    assert P2.order() == 8
    # failure case: C4 vs C2xC2 sylows
    with pytest.raises(GroupError):
        find_common_sylow_identification(cyclic_group(4), klein_four_group(), 2)


def test_diagonal_subgroup():
    G, Gp = sl2_group(11), sl2_group(3)
    P, Pp, iso = find_common_sylow_identification(G, Gp, 2)
    prod = direct_product(G, Gp)
    D = diagonal_subgroup(prod, iso)
    assert D.order() == 8
    assert prod.order() // D.order() == 3960
    trivial_iso = GroupIso(G.trivial_subgroup(), Gp.trivial_subgroup(), [])
    assert diagonal_subgroup(prod, trivial_iso).order() == 1


def test_group_from_text():
    assert group_from_text("SL2(3)").order() == 24
    assert group_from_text("C6").order() == 6
    assert group_from_text("Q8").order() == 8
    assert group_from_text("S4").order() == 24
    assert group_from_text("D8").order() == 8
    G = group_from_text("(1,2,3)\n(1,2)")
    assert G.order() == 6
    with pytest.raises(ValueError):
        group_from_text("(1,2,2)")


def test_cycle_string_roundtrip():
    g = parse_cycles("(1,2,3)(4,5)")
    assert parse_cycles(g.cycle_string()) == g
    assert parse_cycles("()", 3).is_identity()
