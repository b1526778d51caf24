import random
from itertools import permutations
from math import factorial

import pytest

from coxconf.builders import cox, k_dagger
from coxconf.core import FiniteSubset, subsets
from coxconf.symmetry import (BRUTE_FORCE_CAP, CoxGroup, CoxMap, apply, brute_force_automorphisms,
                              brute_force_correlations, compose, conjugate_stabilizers, even_subsets_closed,
                              flag_orbit, full_group, kdagger_extension_maps, kdagger_map_is_automorphism,
                              oracle_matches_generators, parity_law_holds, permutation_is_multiplicative,
                              point_orbit, stabilizer_of_empty, translation_preserves_parity)


def naive_apply(g, a):
    # plain set arithmetic, no bit tricks
    img = {g.phi[e - 1] + 1 for e in a}
    return FiniteSubset.of(a.n, img ^ set(g.A))


def random_map(rng, n):
    phi = list(range(n))
    rng.shuffle(phi)
    return CoxMap(tuple(phi), FiniteSubset(rng.randrange(1 << n), n))


def test_apply_examples(s):
    assert apply(CoxMap.translation(s(4, 1, 2)), s(4)) == s(4, 1, 2)
    img = apply(CoxMap.translation(s(4, 1)), s(4))
    assert img == s(4, 1) and img in cox(4).blocks
    assert apply(CoxMap.permutation(4, [(1, 2)]), s(4, 1, 3)) == s(4, 2, 3)


def test_apply_preserves_covering():
    C = cox(5)
    rng = random.Random(5)
    for _ in range(50):
        g = random_map(rng, 5)
        for p, b in C.flags:
            assert apply(g, C.points[p]).adjacent(apply(g, C.blocks[b]))


def test_identity():
    e = CoxMap.identity(4)
    assert all(apply(e, a) == a for a in subsets(4))
    rng = random.Random(1)
    for _ in range(20):
        g = random_map(rng, 4)
        assert compose(g, e) == g == compose(e, g)
        assert compose(g, g.inverse()) == e


def test_conjugation_identity():
    for phi in permutations(range(4)):
        f = CoxMap(phi, FiniteSubset.empty(4))
        for A in subsets(4):
            lhs = compose(compose(f, CoxMap.translation(A)), f.inverse())
            assert lhs == CoxMap.translation(f.permute(A))


@pytest.mark.parametrize("n", [3, 4])
def test_composition_exhaustive(n):
    G = list(full_group(n).elements())
    everything = subsets(n)
    rng = random.Random(n)
    for g1 in G:
        for g2 in rng.sample(G, 12):
            g = compose(g1, g2)
            assert all(apply(g, a) == apply(g1, apply(g2, a)) for a in everything)


def test_composition_exhaustive_n5_translations():
    # every permutation against every translation, all subsets
    n = 5
    everything = subsets(n)
    for phi in permutations(range(n)):
        f = CoxMap(phi, FiniteSubset.empty(n))
        for A in everything:
            t = CoxMap.translation(A)
            for g1, g2 in ((f, t), (t, f)):
                g = compose(g1, g2)
                assert all(apply(g, a) == apply(g1, apply(g2, a)) for a in everything)


@pytest.mark.parametrize("n", range(1, 11))
def test_composition_randomized(n):
    rng = random.Random(1000 + n)
    for _ in range(1000):
        g1, g2 = random_map(rng, n), random_map(rng, n)
        a = FiniteSubset(rng.randrange(1 << n), n)
        assert apply(compose(g1, g2), a) == naive_apply(g1, naive_apply(g2, a))


@pytest.mark.parametrize("n", [1, 4, 7, 10])
def test_apply_matches_naive(n):
    rng = random.Random(n)
    for _ in range(200):
        g = random_map(rng, n)
        a = FiniteSubset(rng.randrange(1 << n), n)
        assert apply(g, a) == naive_apply(g, a)


def test_parity_law():
    rng = random.Random(2)
    for _ in range(500):
        assert parity_law_holds(random_map(rng, 6), random_map(rng, 6))


@pytest.mark.parametrize("n", [3, 6, 10])
def test_translation_parity(n):
    rng = random.Random(n)
    for _ in range(10):
        assert translation_preserves_parity(FiniteSubset(rng.randrange(1 << n), n))


def test_group_orders():
    G = full_group(4)
    assert (G.order, G.collineation_order) == (384, 192)
    assert full_group(3).collineation_order == 24
    assert sum(1 for _ in G.elements()) == 384
    assert sum(1 for _ in G.collineations()) == 192
    with pytest.raises(ValueError):
        full_group(11)


@pytest.mark.parametrize("n", [3, 6])
def test_even_subsets_subgroup(n):
    assert even_subsets_closed(n)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_generators_generate(n):
    # closure of the generators reaches the whole group
    gens = CoxGroup(n).generators()
    seen = {CoxMap.identity(n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                x = compose(h, g)
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
        frontier = nxt
    assert len(seen) == factorial(n) * 2 ** n


@pytest.mark.parametrize("n", [3, 4, 5])
def test_multiplicative(n):
    assert permutation_is_multiplicative(n)


@pytest.mark.parametrize("n,aut", [(3, 24), (4, 192)])
def test_brute_force_counts(n, aut):
    C = cox(n)
    assert len(brute_force_automorphisms(C)) == aut
    assert len(brute_force_correlations(C)) == aut


@pytest.mark.parametrize("n", [3, 4])
def test_oracle_equivalence(n):
    rep = oracle_matches_generators(n)
    assert rep["automorphisms_equal"] and rep["correlations_equal"]
    assert rep["automorphisms"] + rep["correlations"] == factorial(n) * 2 ** n


def test_brute_force_is_sound():
    C = cox(4)
    for pm, bm in brute_force_automorphisms(C):
        assert len(set(pm.values())) == 8
        for p, b in C.flags:
            assert C.incident(pm[C.points[p]], bm[C.blocks[b]])


def test_tau1_is_a_correlation(s):
    C = cox(4)
    t = CoxMap.translation(s(4, 1))
    assert t.kind == "correlation"
    maps = {(frozenset(pm.items()), frozenset(bm.items())) for pm, bm in brute_force_correlations(C)}
    pm, bm = t.point_map(C), t.block_map(C)
    assert (frozenset(pm.items()), frozenset(bm.items())) in maps


def test_brute_force_cap():
    with pytest.raises(ValueError):
        brute_force_automorphisms(cox(7), cap=BRUTE_FORCE_CAP)
    with pytest.raises(ValueError):
        brute_force_correlations(cox(5), cap=20)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_flag_orbit_is_everything(n):
    e = FiniteSubset.empty(n)
    orbit = flag_orbit(n, (e, FiniteSubset.of(n, [1])))
    C = cox(n)
    assert len(orbit) == n * 2 ** (n - 1)
    assert orbit == {(C.points[p], C.blocks[b]) for p, b in C.flags}


def test_flag_orbit_rejects_nonflag(s):
    with pytest.raises(ValueError):
        flag_orbit(4, (s(4), s(4, 1, 2, 3)))


@pytest.mark.parametrize("n", [3, 5, 8])
def test_point_orbit(n):
    assert len(point_orbit(n, FiniteSubset.empty(n))) == 2 ** (n - 1)


@pytest.mark.parametrize("n,order", [(3, 6), (4, 24)])
def test_stabilizer_of_empty(n, order):
    rep = stabilizer_of_empty(n)
    assert rep.order == order and rep.equals_permutations


def test_stabilizer_limit():
    with pytest.raises(ValueError):
        stabilizer_of_empty(6)


def test_conjugate_stabilizers(s):
    for p in (s(4, 1, 2), s(4, 2, 4), s(4, 1, 2, 3, 4)):
        assert conjugate_stabilizers(4, p)


def test_kdagger_63():
    K = k_dagger(6, 3)
    auts = brute_force_automorphisms(K)
    assert len(auts) == 1440 == 2 * factorial(6)
    maps = kdagger_extension_maps(6, 3)
    assert len(maps) == 1440
    assert all(kdagger_map_is_automorphism(g, K) for g in maps)
    # the induced point maps are pairwise distinct and all found by brute force
    induced = {tuple(g(p) for p in K.points) for g in maps}
    brute = {tuple(pm[p] for p in K.points) for pm, _ in auts}
    assert induced == brute


def test_kdagger_maps_need_n_2k():
    with pytest.raises(ValueError):
        kdagger_extension_maps(5, 2)


def test_str():
    g = CoxMap.permutation(4, [(1, 2, 3)])
    assert str(g) == "(1 2 3) then ^{}"
    assert str(CoxMap.identity(3)) == "id then ^{}"
