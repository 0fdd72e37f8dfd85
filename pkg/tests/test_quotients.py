"""Orbit posets, the base-group factorization, grids, and the local grid
isomorphisms."""

from itertools import product

import pytest

from symchains import (CycleSpec, GeneratedGroup, Permutation,
                       base_quotient_factorization, boolean_lattice,
                       chain_product, greene_kleitman_scd, grids_from_scds,
                       parse_permutations, quotient, symmetric_group,
                       verify_scd)
from symchains.perms import act_on_tuple
from symchains.posets import ChainDecomposition
from symchains.quotients import coordinate_action


def group_of(text, degree):
    gens, _ = parse_permutations(text, degree)
    return GeneratedGroup(degree, gens)


def burnside_subset_orbits(n, group):
    """Independent orbit count: average number of fixed subsets."""
    total = 0
    for g in group.elements():
        total += sum(1 for mask in range(1 << n)
                     if g.apply_mask(mask) == mask)
    return total // group.order


# --- quotient construction -----------------------------------------------------

def test_quotient_necklace_six():
    g = group_of("(1 2 3 4 5 6)", 6)
    q = quotient(boolean_lattice(6), g)
    assert len(q.poset) == burnside_subset_orbits(6, g) == 14
    assert q.poset.level_sizes() == (1, 1, 3, 4, 3, 1, 1)


def test_quotient_b4_dihedral():
    g = group_of("(1 2 3 4), (1 3)", 4)
    q = quotient(boolean_lattice(4), g)
    assert len(q.poset) == burnside_subset_orbits(4, g) == 6


def test_quotient_trivial_group_is_a_copy():
    from symchains.perms import trivial_group
    p = boolean_lattice(3)
    q = quotient(p, trivial_group(3))
    assert q.poset.labels == p.labels
    assert q.poset.covers == p.covers
    assert all(len(o) == 1 for o in q.orbits)


def test_quotient_orbits_partition_and_reps_are_least():
    g = group_of("(1 2 3 4 5)", 5)
    q = quotient(boolean_lattice(5), g)
    seen = set()
    for i, orbit in enumerate(q.orbits):
        assert q.reps[i] == min(orbit)
        assert not (set(orbit) & seen)
        seen.update(orbit)
    assert len(seen) == 32


def test_quotient_rank_law():
    cases = [
        (boolean_lattice(6), group_of("(1 2 3)(4 5 6), (1 4)", 6)),
        (boolean_lattice(5), group_of("(1 2 3 4 5), (1 2)", 5)),
        (chain_product([2, 2, 2]), group_of("(1 2 3)", 3)),
    ]
    for base, g in cases:
        q = quotient(base, g)
        for i, rep in enumerate(q.reps):
            assert q.poset.rank[i] == base.rank[rep]


def test_quotient_rejects_non_automorphism():
    # swapping coordinates of unequal lengths does not preserve the poset
    p = chain_product([1, 2])
    g = group_of("(1 2)", 2)
    with pytest.raises(ValueError):
        quotient(p, g, coordinate_action)


def test_quotient_rejects_degree_mismatch():
    with pytest.raises(ValueError):
        quotient(boolean_lattice(3), group_of("(1 2 3 4)", 4))


def test_quotient_of_chain_power_by_coordinates():
    p = chain_product([2, 2])
    q = quotient(p, group_of("(1 2)", 2))
    assert len(q.poset) == 6
    assert q.poset.level_sizes() == (1, 1, 2, 1, 1)


# --- base-group factorization ----------------------------------------------------

def test_factorization_k1_binary_expansion():
    from symchains.perms import trivial_group
    f = base_quotient_factorization(1, 3, trivial_group(1))
    assert len(f.block_quotient.poset) == 2
    assert len(f.whole.poset) == 8
    f.check_isomorphism()
    # splitting an orbit of B_3 mod nothing reads off the bits
    for mask in range(8):
        i = f.whole.orbit_of[mask]
        assert f.split(i) == tuple((mask >> b) & 1 for b in range(3))


def test_factorization_k2_t2_swap():
    K = group_of("(1 2)", 2)
    f = base_quotient_factorization(2, 2, K)
    assert len(f.block_quotient.poset) == 3
    assert len(f.whole.poset) == 9
    f.check_isomorphism()


def test_factorization_k3_symmetric_is_a_chain():
    f = base_quotient_factorization(3, 1, symmetric_group(3))
    assert len(f.block_quotient.poset) == 4
    assert f.block_quotient.poset.level_sizes() == (1, 1, 1, 1)
    f.check_isomorphism()


# --- grids ------------------------------------------------------------------------

def test_grids_single_chain():
    q = quotient(boolean_lattice(2), group_of("(1 2)", 2))
    dec = ChainDecomposition.from_element_lists(q.poset, [[0, 1, 2]])
    gp = grids_from_scds([dec, dec])
    assert len(gp.grids) == 1
    assert gp.grids[0].span == gp.product.top_rank


def test_grids_from_gk_b2():
    gk2 = greene_kleitman_scd(2)
    gp = grids_from_scds([gk2, gk2])
    assert len(gp.grids) == 4
    sizes = sorted((g.lengths[0] + 1) * (g.lengths[1] + 1) for g in gp.grids)
    assert sizes == [1, 3, 3, 9]
    # offsets mirror spans
    for g in gp.grids:
        assert 2 * g.offset + g.span == gp.product.top_rank


def test_grids_partition_the_product():
    gk2 = greene_kleitman_scd(2)
    gp = grids_from_scds([gk2, gk2, gk2])
    assert len(gp.grids) == 8
    counts = {g.index: 0 for g in gp.grids}
    for e in range(len(gp.product)):
        counts[gp.grid_of(e).index] += 1
    for g in gp.grids:
        expected = 1
        for length in g.lengths:
            expected *= length + 1
        assert counts[g.index] == expected


def test_grids_reject_mismatched_decompositions():
    gk2 = greene_kleitman_scd(2)
    gk3 = greene_kleitman_scd(3)
    with pytest.raises(ValueError):
        grids_from_scds([gk2, gk3])


# --- local isomorphisms -----------------------------------------------------------

def test_transport_identity():
    gk2 = greene_kleitman_scd(2)
    gp = grids_from_scds([gk2, gk2])
    ident = Permutation.identity(2)
    for e in range(len(gp.product)):
        assert gp.transport(ident, e) == e


def test_transport_swap_moves_between_mirror_grids():
    gk2 = greene_kleitman_scd(2)
    gp = grids_from_scds([gk2, gk2])
    swap = Permutation((2, 1))
    for e in range(len(gp.product)):
        f = gp.transport(swap, e)
        src = gp.grid_of(e).index
        assert gp.grid_of(f).index == act_on_tuple(swap, src)
        assert gp.transport(swap, f) == e


def test_transport_composition():
    gk2 = greene_kleitman_scd(2)
    gp = grids_from_scds([gk2, gk2, gk2])
    from itertools import permutations as iperms
    perms = [Permutation(im) for im in iperms((1, 2, 3))]
    for f in perms:
        for g in perms:
            for e in range(0, len(gp.product), 7):
                assert gp.transport(f * g, e) == \
                    gp.transport(f, gp.transport(g, e))


def test_transport_is_an_order_isomorphism_between_grids():
    gk2 = greene_kleitman_scd(2)
    gp = grids_from_scds([gk2, gk2])
    swap = Permutation((2, 1))
    cover_set = gp.product.cover_set
    for lo, hi in gp.product.covers:
        # covers inside one grid map to covers of the image grid
        if gp.grid_of(lo).index == gp.grid_of(hi).index:
            assert (gp.transport(swap, lo), gp.transport(swap, hi)) in cover_set
