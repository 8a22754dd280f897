import numpy as np
import pytest

from modrep.blocks import (
    Block,
    block_as_bimodule,
    block_decomposition,
    block_of,
    defect_group,
    lemma_central_vertex_check,
    principal_block,
)
from modrep.gf import GF
from modrep.group import (
    center,
    cyclic_group,
    direct_product,
    quaternion_group,
    recognize_label,
    sl2_group,
    sylow_subgroup,
    symmetric_group,
)
from modrep.meataxe import simple_modules_of_group
from modrep.rep import regular_module, trivial_module


@pytest.fixture
def rng():
    return np.random.default_rng(0xB10C5)


def test_p_group_single_block(rng):
    Q8 = quaternion_group()
    dec = block_decomposition(Q8, GF(2), rng)
    assert len(dec.blocks) == 1
    b = dec.blocks[0]
    assert b.is_principal
    assert b.dim() == 8


def test_sl2_3_single_block(rng):
    dec = block_decomposition(sl2_group(3), GF(4), rng)
    assert len(dec.blocks) == 1
    assert dec.blocks[0].dim() == 24
    assert dec.verify_axioms()


def test_c3_three_blocks_gf4(rng):
    dec = block_decomposition(cyclic_group(3), GF(4), rng)
    assert len(dec.blocks) == 3
    assert all(b.dim() == 1 for b in dec.blocks)
    assert dec.verify_axioms()
    # brute-force cross-check: all central idempotents of the 3-dim algebra
    from modrep.blocks import class_multiplication_constants

    Z = class_multiplication_constants(cyclic_group(3), GF(4))
    idempotents = []
    import itertools

    for coords in itertools.product(range(4), repeat=3):
        e = np.array(coords, dtype=np.uint8)
        if np.array_equal(Z.mul(e, e), e) and e.any():
            idempotents.append(tuple(int(x) for x in e))
    # 2^3 - 1 nonzero idempotents in a split commutative semisimple algebra
    assert len(idempotents) == 7
    prims = {tuple(int(x) for x in b.class_coords) for b in dec.blocks}
    assert prims <= set(idempotents)


def test_c3_blocks_gf2_merge(rng):
    # over GF(2) the two Galois-conjugate blocks merge; the merged factor is
    # flagged as not split over the field
    dec = block_decomposition(cyclic_group(3), GF(2), rng)
    assert len(dec.blocks) == 2
    assert sorted(b.dim() for b in dec.blocks) == [1, 2]
    nonsplit = [b for b in dec.blocks if not b.split_over_field]
    assert len(nonsplit) == 1


def test_principal_block_sl2_11(rng):
    G = sl2_group(11)
    f = GF(4)
    b0 = principal_block(G, f, rng)
    simples = b0.simples(rng)
    assert sorted(S.dim for S in simples) == [1, 5, 5]
    assert b0.acts_as_identity_on(trivial_module(G, f))
    # the 10- and 12-dimensional simples lie outside the principal block
    outside = [
        S.dim
        for S in simple_modules_of_group(G, f, rng)
        if not b0.acts_as_identity_on(S)
    ]
    assert sorted(outside) == [10, 12, 12]
    # every non-principal idempotent annihilates the trivial module
    dec = block_decomposition(G, f, rng)
    for b in dec.blocks:
        if not b.is_principal:
            assert b.acts_as_zero_on(trivial_module(G, f))


def test_block_of(rng):
    G = sl2_group(11)
    f = GF(4)
    b0 = principal_block(G, f, rng)
    assert block_of(trivial_module(G, f), rng).is_principal
    simples = simple_modules_of_group(G, f, rng)
    five = next(S for S in simples if S.dim == 5)
    twelve = next(S for S in simples if S.dim == 12)
    assert block_of(five, rng).is_principal
    assert not block_of(twelve, rng).is_principal
    # decomposable across blocks: returns None
    mixed = five.direct_sum(twelve)
    assert block_of(mixed, rng) is None


def test_block_sum_of_dims(rng):
    G = sl2_group(11)
    dec = block_decomposition(G, GF(4), rng)
    assert sum(b.dim() for b in dec.blocks) == 1320


def test_block_as_bimodule(rng):
    G = sl2_group(3)
    f = GF(4)
    b = principal_block(G, f, rng)
    bim = block_as_bimodule(b)
    assert bim.dim == 24
    bim.verify_relations()
    # B0 of a p-group as bimodule is the regular bimodule
    Q8 = quaternion_group()
    bq = principal_block(Q8, GF(2), rng)
    assert block_as_bimodule(bq).dim == 8


def test_block_bimodule_vertex_is_diagonal_sylow(rng):
    from modrep.meataxe import vertex_of_p_permutation

    G = sl2_group(3)
    f = GF(2)
    b = principal_block(G, f, rng)
    prod = direct_product(G, G)
    bim = block_as_bimodule(b, prod)
    V = vertex_of_p_permutation(bim, rng)
    assert V.order() == 8
    # the vertex is a diagonal copy of the Sylow 2-subgroup: both projections
    # have full order 8
    firsts = {prod.project(g)[0].key for g in V.elements()}
    seconds = {prod.project(g)[1].key for g in V.elements()}
    assert len(firsts) == 8 and len(seconds) == 8


def test_defect_groups(rng):
    G = sl2_group(11)
    b0 = principal_block(G, GF(4), rng)
    D = defect_group(b0, rng)
    assert D.order() == 8
    assert recognize_label(D) == "Q8"
    # defect group of the principal block of a p-group is the group
    Q8 = quaternion_group()
    assert defect_group(principal_block(Q8, GF(2), rng), rng).order() == 8


def test_lemma_central_vertex_check(rng):
    # abelian p-group: P = Z(G), one simple
    C4 = cyclic_group(4)
    b = principal_block(C4, GF(2), rng)
    rep = lemma_central_vertex_check(b, rng)
    assert rep["side_i_simple_with_central_vertex"]
    assert rep["side_ii_P_central"]
    assert rep["agree"]
    assert rep["unique_simple_consequence"]
    # C2 at p=2
    C2 = cyclic_group(2)
    rep2 = lemma_central_vertex_check(principal_block(C2, GF(2), rng), rng)
    assert rep2["agree"] and rep2["side_ii_P_central"]
    # SL2(3): P = Q8 not central; no simple with vertex Z
    G = sl2_group(3)
    rep3 = lemma_central_vertex_check(principal_block(G, GF(4), rng), rng)
    assert not rep3["side_ii_P_central"]
    assert not rep3["side_i_simple_with_central_vertex"]
    assert rep3["agree"]
