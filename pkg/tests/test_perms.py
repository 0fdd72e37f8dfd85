"""Permutations, closures, wreath products, tuple actions, stabilizers,
and cycle-power witnesses."""

from itertools import permutations as iperms
from itertools import product

import pytest

from symchains import (CycleSpec, GeneratedGroup, Permutation,
                       ResourceCapError, act_on_tuple, close_group,
                       format_generators, format_permutation,
                       is_powers_of_disjoint_cycles, orbit_of_tuple,
                       orbit_reps_lex, parse_permutations, stabilizer_brute,
                       stabilizer_cyclic_powers, symmetric_group,
                       trivial_group, wreath_product)


def perm_of(text, degree):
    gens, _ = parse_permutations(text, degree)
    return gens[0]


def group_of(text, degree):
    gens, _ = parse_permutations(text, degree)
    return GeneratedGroup(degree, gens)


# --- permutations -------------------------------------------------------------

def test_composition_and_inverse():
    f = perm_of("(1 2 3)", 3)
    g = perm_of("(1 2)", 3)
    fg = f * g
    assert [fg(x) for x in (1, 2, 3)] == [f(g(1)), f(g(2)), f(g(3))]
    assert (f * f.inverse()).is_identity()
    assert f.order() == 3
    assert (f ** 3).is_identity()


def test_cycle_notation_round_trip():
    for text in ["(1 2 3)(4 5 6)", "(1 4)", "(2 6)(3 5)", "()"]:
        p = perm_of(text, 6)
        assert perm_of(format_permutation(p), 6) == p
    gens, m = parse_permutations("(1 2 3)(4 5 6), (1 4)")
    assert m == 6
    assert format_generators(gens) == "(1 2 3)(4 5 6), (1 4)"


def test_parse_whitespace_and_commas():
    a, _ = parse_permutations("( 1   2 3 ) (4,5,6),(1 4)")
    b, _ = parse_permutations("(1 2 3)(4 5 6), (1 4)")
    assert a == b


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_permutations("(1 2")
    with pytest.raises(ValueError):
        parse_permutations("(1 2)(2 3)")  # repeated point in one generator
    with pytest.raises(ValueError):
        parse_permutations("(1 x)")
    with pytest.raises(ValueError):
        parse_permutations("(1 7)", degree=6)


def test_apply_mask_is_an_action():
    f = perm_of("(1 2 3)", 3)
    g = perm_of("(1 2)", 3)
    for mask in range(8):
        assert (f * g).apply_mask(mask) == f.apply_mask(g.apply_mask(mask))


# --- closures -----------------------------------------------------------------

def test_close_group_examples():
    assert group_of("(1 2)", 2).order == 2
    # the two transitive table rows with stated orders
    assert group_of("(1 2 3 4 5 6), (1 2)", 6).order == 720
    assert group_of("(1 2 3)(4 5 6), (1 4)", 6).order == 24


def test_close_group_cap():
    g = group_of("(1 2 3 4 5 6), (1 2)", 6)
    with pytest.raises(ResourceCapError):
        close_group(g, cap=100)


def test_trivial_group():
    t = trivial_group(4)
    assert t.order == 1
    assert t.elements()[0].is_identity()


# --- wreath products ------------------------------------------------------------

def cycle_type(p):
    return tuple(sorted(len(c) for c in p.cycles()))


def test_wreath_product_orders_from_table():
    z2 = group_of("(1 2)", 2)
    assert wreath_product(z2, z2).order == 8
    z3 = group_of("(1 2 3)", 3)
    assert wreath_product(z3, group_of("(1 2)", 2)).order == 18
    s3 = symmetric_group(3)
    assert wreath_product(s3, group_of("(1 2)", 2)).order == 72


def test_wreath_product_fingerprint_matches_dihedral_presentation():
    # order plus cycle-type multiset agrees with <(1 2 3 4), (1 3)>
    w = wreath_product(group_of("(1 2)", 2), group_of("(1 2)", 2))
    d8 = group_of("(1 2 3 4), (1 3)", 4)
    assert w.order == d8.order == 8
    assert sorted(map(cycle_type, w.elements())) == \
        sorted(map(cycle_type, d8.elements()))


def test_wreath_product_equals_explicit_map_set():
    # oracle: all maps (i, r) -> (rho_r(i), tau(r)) for rho in K^t, tau in T
    k, t = 2, 2
    K = group_of("(1 2)", k)
    for T in (group_of("(1 2)", t), trivial_group(t)):
        expected = set()
        kels = K.elements()
        tels = T.elements()
        for rhos in product(kels, repeat=t):
            for tau in tels:
                images = [0] * (k * t)
                for r in range(1, t + 1):
                    for i in range(1, k + 1):
                        src = (r - 1) * k + i
                        dst = (tau(r) - 1) * k + rhos[r - 1](i)
                        images[src - 1] = dst
                expected.add(Permutation(images))
        w = wreath_product(K, T)
        assert set(w.elements()) == expected


def test_wreath_order_formula():
    for ktext, k in (("(1 2)", 2), ("(1 2 3)", 3)):
        for ttext, t in (("", 2), ("(1 2)", 2), ("(1 2 3)", 3)):
            K = group_of(ktext, k)
            T = group_of(ttext, t) if ttext else trivial_group(t)
            w = wreath_product(K, T)
            assert w.order == K.order ** t * T.order


# --- tuple action ---------------------------------------------------------------

def test_act_on_tuple_examples():
    ident = Permutation.identity(3)
    assert act_on_tuple(ident, (3, 1, 2)) == (3, 1, 2)
    tau = perm_of("(1 2 3)", 3)
    assert act_on_tuple(tau, ("a", "b", "c")) == ("c", "a", "b")
    tau4 = perm_of("(1 2 3 4)", 4)
    assert act_on_tuple(tau4, (1, 2, 1, 2)) == (2, 1, 2, 1)


def test_act_on_tuple_is_a_group_action():
    tuples = list(product((1, 2), repeat=4))
    perms = [Permutation(images) for images in iperms((1, 2, 3, 4))]
    ident = Permutation.identity(4)
    for tup in tuples:
        assert act_on_tuple(ident, tup) == tup
    for f in perms[:8]:
        for g in perms[:8]:
            for tup in tuples[:4]:
                assert act_on_tuple(f * g, tup) == \
                    act_on_tuple(f, act_on_tuple(g, tup))


def test_act_on_tuple_length_mismatch():
    with pytest.raises(ValueError):
        act_on_tuple(Permutation.identity(3), (1, 2))


# --- stabilizers -----------------------------------------------------------------

def brute_stabilizer_elements(T, tup):
    return sorted(g for g in T.elements() if act_on_tuple(g, tup) == tup)


def test_stabilizer_brute_examples():
    z4 = CycleSpec.parse("(1 2 3 4)", 4).group()
    assert sorted(stabilizer_brute(z4, (5, 5, 5, 5)).elements()) == \
        sorted(z4.elements())

    stab = stabilizer_brute(z4, (1, 2, 1, 2))
    els = stab.elements()
    assert len(els) == 2
    assert perm_of("(1 3)(2 4)", 4) in els

    s3 = symmetric_group(3)
    stab3 = stabilizer_brute(s3, (1, 1, 2))
    assert len(stab3.elements()) == 2
    assert perm_of("(1 2)", 3) in stab3.elements()


def test_stabilizer_cyclic_powers_examples():
    z4 = CycleSpec.parse("(1 2 3 4)", 4).group()
    stab = stabilizer_cyclic_powers(z4, (1, 2, 1, 2))
    assert stab.cycle_spec.powers == (((1, 2, 3, 4), 2),)
    assert sorted(stab.elements()) == brute_stabilizer_elements(z4, (1, 2, 1, 2))

    whole = stabilizer_cyclic_powers(z4, (7, 7, 7, 7))
    assert whole.cycle_spec.powers == (((1, 2, 3, 4), 1),)

    # one generator moving (1 2)(3 4) as a squared 4-cycle, one moving (5 6)
    spec = CycleSpec(6, (((1, 3, 2, 4), 2), ((5, 6), 1)))
    group = spec.group()
    stab2 = stabilizer_cyclic_powers(group, (1, 2, 1, 2, 7, 7))
    assert stab2.cycle_spec.powers == (((1, 3, 2, 4), 4), ((5, 6), 1))
    assert sorted(stab2.elements()) == \
        brute_stabilizer_elements(group, (1, 2, 1, 2, 7, 7))


def test_stabilizer_requires_cycle_power_spec():
    s3 = symmetric_group(3)
    with pytest.raises(ValueError):
        stabilizer_cyclic_powers(s3, (1, 1, 2))


def test_stabilizer_agreement_small_family():
    # stabilizer equality on every tuple, small s and t (Lemma-scale check;
    # the acceptance suite runs the exhaustive version)
    specs = [CycleSpec.trivial(4), CycleSpec.full_cycle(4),
             CycleSpec.full_cycle(4, 2), CycleSpec(4, (((1, 2), 1), ((3, 4), 1)))]
    for spec in specs:
        group = spec.group()
        for tup in product((1, 2, 3), repeat=4):
            fast = stabilizer_cyclic_powers(group, tup)
            assert sorted(fast.elements()) == \
                brute_stabilizer_elements(group, tup)


# --- orbits ---------------------------------------------------------------------

def test_orbit_reps_trivial_group():
    reps = orbit_reps_lex(trivial_group(2), 3, 2)
    assert reps == list(product((1, 2, 3), repeat=2))


def test_orbit_reps_examples():
    z2 = CycleSpec.parse("(1 2)", 2).group()
    assert orbit_reps_lex(z2, 2, 2) == [(1, 1), (1, 2), (2, 2)]

    z3 = CycleSpec.parse("(1 2 3)", 3).group()
    reps = orbit_reps_lex(z3, 2, 3)
    # oracle: Burnside for the rotation action on 2^3 tuples
    fixed = 8 + 2 + 2
    assert len(reps) == fixed // 3 == 4


def test_orbit_partition_properties():
    z4 = CycleSpec.parse("(1 2 3 4)", 4).group()
    seen = set()
    total = 0
    for rep in orbit_reps_lex(z4, 2, 4):
        orbit = orbit_of_tuple(z4, rep)
        assert rep == min(orbit)
        assert z4.order % len(orbit) == 0
        assert not (set(orbit) & seen)
        seen.update(orbit)
        total += len(orbit)
    assert total == 2 ** 4


def test_orbit_reps_cap():
    with pytest.raises(ResourceCapError):
        orbit_reps_lex(trivial_group(21), 2, 21)


# --- cycle-power witnesses --------------------------------------------------------

def test_witness_for_product_of_equal_cycles():
    gens, _ = parse_permutations("(1 2 3)(4 5 6)", degree=6)
    spec = is_powers_of_disjoint_cycles(gens, degree=6)
    assert spec is not None
    assert spec.powers == (((1, 4, 2, 5, 3, 6), 2),)
    # the witness really is a square of the interleaved 6-cycle
    big = perm_of("(1 4 2 5 3 6)", 6)
    assert big ** 2 == gens[0]


def test_witness_disjoint_single_cycles():
    gens, _ = parse_permutations("(1 2), (3 4 5)", degree=5)
    spec = is_powers_of_disjoint_cycles(gens, degree=5)
    assert spec is not None
    assert spec.powers == (((1, 2), 1), ((3, 4, 5), 1))


def test_no_witness_for_overlapping_generators():
    a, _ = parse_permutations("(1 2)", degree=3)
    b, _ = parse_permutations("(2 3)", degree=3)
    assert is_powers_of_disjoint_cycles([a[0], b[0]], degree=3) is None


def test_no_witness_for_unequal_cycle_lengths():
    gens, _ = parse_permutations("(1 2)(3 4 5)", degree=5)
    assert is_powers_of_disjoint_cycles(gens, degree=5) is None


def test_identity_generator_gets_empty_witness():
    gens = [Permutation.identity(4), perm_of("(1 2 3 4)", 4)]
    spec = is_powers_of_disjoint_cycles(gens, degree=4)
    assert spec is not None
    assert spec.powers[0] == ((), 1)


def test_cycle_spec_validation():
    with pytest.raises(ValueError):
        CycleSpec(4, (((1, 2), 1), ((2, 3), 1)))
    with pytest.raises(ValueError):
        CycleSpec(4, (((1, 5), 1),))
    with pytest.raises(ValueError):
        CycleSpec(4, (((1, 2), 0),))
