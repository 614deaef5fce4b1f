import random

from brute import brute_orbits, group_closure

from k3hiso.perm import IsoCoset, PermGroup, compose, from_cycles, identity, inverse


def test_from_generators_examples():
    assert PermGroup.from_generators(3, []).order() == 1
    s3 = PermGroup.from_generators(3, [from_cycles(3, (0, 1)), from_cycles(3, (0, 1, 2))])
    assert s3.order() == 6
    v4 = PermGroup.from_generators(4, [from_cycles(4, (0, 1), (2, 3)), from_cycles(4, (0, 2), (1, 3))])
    assert v4.order() == 4


def test_order_examples():
    assert PermGroup.symmetric(4).order() == 24
    assert PermGroup.trivial(5).order() == 1
    dihedral = PermGroup.from_generators(5, [from_cycles(5, (0, 1, 2, 3, 4)), from_cycles(5, (1, 4), (2, 3))])
    assert dihedral.order() == 10


def test_contains_examples():
    c3 = PermGroup.from_generators(3, [from_cycles(3, (0, 1, 2))])
    assert c3.contains(identity(3))
    assert not c3.contains(from_cycles(3, (0, 1)))
    g = PermGroup.from_generators(6, [from_cycles(6, (0, 1, 2)), from_cycles(6, (2, 3, 4, 5))])
    x = compose(compose(g.strong_gens[0], g.strong_gens[-1]), inverse(g.strong_gens[0]))
    assert g.contains(x)


def test_orbits_examples():
    assert PermGroup.trivial(3).orbits() == [[0], [1], [2]]
    assert PermGroup.from_generators(4, [from_cycles(4, (0, 1), (2, 3))]).orbits() == [[0, 1], [2, 3]]
    g = PermGroup.from_generators(5, [from_cycles(5, (0, 1, 2)), from_cycles(5, (3, 4))])
    assert g.orbits() == [[0, 1, 2], [3, 4]]


def test_stabilizer_examples():
    assert PermGroup.symmetric(3).pointwise_stabilizer([0]).order() == 2
    s4 = PermGroup.symmetric(4)
    assert s4.pointwise_stabilizer([]).order() == 24
    assert s4.pointwise_stabilizer([0, 1]).order() == 2


def test_restrict_to_invariant_examples():
    g = PermGroup.from_generators(4, [from_cycles(4, (0, 1)), from_cycles(4, (2, 3))])
    r, idx = g.restrict_to_invariant([0, 1])
    assert r.order() == 2 and idx == [0, 1]
    r, _ = g.restrict_to_invariant(range(4))
    assert r.order() == 4
    c = PermGroup.from_generators(6, [from_cycles(6, (0, 1, 2), (3, 4, 5))])
    r, _ = c.restrict_to_invariant([3, 4, 5])
    assert r.order() == 3


def test_two_power_order():
    d4 = PermGroup.from_generators(4, [from_cycles(4, (0, 1, 2, 3)), from_cycles(4, (0, 2))])
    assert d4.order() == 8 and d4.has_two_power_order()
    assert not PermGroup.symmetric(3).has_two_power_order()
    assert PermGroup.trivial(2).has_two_power_order()


def test_young_subgroup():
    y = PermGroup.young(5, [[0, 1], [2, 3, 4]])
    assert y.order() == 12 and y.orbits() == [[0, 1], [2, 3, 4]]


def test_elements_enumerate_the_group():
    rnd = random.Random(6)
    for _ in range(10):
        d = rnd.randint(2, 6)
        gens = []
        for _ in range(rnd.randint(1, 2)):
            p = list(range(d))
            rnd.shuffle(p)
            gens.append(tuple(p))
        g = PermGroup.from_generators(d, gens)
        assert set(g.elements()) == group_closure(d, gens)


def test_coset_membership_and_size():
    g = PermGroup.from_generators(4, [from_cycles(4, (0, 1))])
    rep = from_cycles(4, (2, 3))
    c = IsoCoset(g, rep)
    assert c.size() == 2
    assert c.contains(rep) and c.contains(compose(from_cycles(4, (0, 1)), rep))
    assert not c.contains(identity(4))
    assert IsoCoset.empty().size() == 0 and not IsoCoset.empty().contains(rep)
    assert set(c.elements()) == {rep, compose(from_cycles(4, (0, 1)), rep)}


def test_random_group_against_closure():
    rnd = random.Random(7)
    for _ in range(15):
        d = rnd.randint(3, 7)
        gens = []
        for _ in range(rnd.randint(1, 3)):
            p = list(range(d))
            rnd.shuffle(p)
            gens.append(tuple(p))
        g = PermGroup.from_generators(d, gens)
        elems = group_closure(d, gens)
        assert g.order() == len(elems)
        assert g.orbits() == brute_orbits(d, elems)
