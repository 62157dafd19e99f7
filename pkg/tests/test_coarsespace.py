import pytest

from equiloc import coarsespace as cs
from equiloc import fingroup as fg
from equiloc import orbitcat as oc


def two_point_swap(coarse="max", born="max"):
    G = fg.cyclic(2)
    cgen = cs.max_coarse(2) if coarse == "max" else ()
    bgen = cs.max_bornology(2) if born == "max" else (frozenset({0}),)
    space = cs.BornCoarseSpace(2, cgen, bgen)
    return cs.GBornCoarseSpace(G, space, [(1, 0)])


def test_closure_idempotent():
    sp = cs.BornCoarseSpace(4, [frozenset({(0, 1)}), frozenset({(1, 2)})], [frozenset({0})])
    regen = cs.BornCoarseSpace(4, [sp.max_entourage()], [sp.max_bounded])
    assert regen.max_entourage() == sp.max_entourage()
    assert regen.max_bounded == sp.max_bounded
    # 0,1,2 in one component; 3 alone; diagonal present
    assert sp.is_entourage([(0, 2), (3, 3)])
    assert not sp.is_entourage([(0, 3)])


def test_check_morphism_identity():
    sp = cs.BornCoarseSpace(3, cs.max_coarse(3), cs.max_bornology(3))
    out = cs.check_morphism([0, 1, 2], sp, sp)
    assert isinstance(out, cs.CoarseMap)


def test_check_morphism_into_absorbing_target():
    src = cs.BornCoarseSpace(3, (), cs.max_bornology(3))  # bounded X
    dst = cs.BornCoarseSpace(2, cs.max_coarse(2), cs.max_bornology(2))
    out = cs.check_morphism([0, 0, 1], src, dst)
    assert isinstance(out, cs.CoarseMap)


def test_check_morphism_rejects_min_target():
    # id: {0,1}_max,max -> {0,1}_min,max rejected with a witness entourage pair
    src = cs.BornCoarseSpace(2, cs.max_coarse(2), cs.max_bornology(2))
    dst = cs.BornCoarseSpace(2, (), cs.max_bornology(2))
    out = cs.check_morphism([0, 1], src, dst)
    assert isinstance(out, cs.Rejection)
    assert out.reason == "controlled"
    assert tuple(out.witness["pair"]) in {(0, 1), (1, 0)}


def test_check_morphism_proper_rejection():
    src = cs.BornCoarseSpace(2, (), (frozenset({0}),))  # point 1 unbounded
    dst = cs.BornCoarseSpace(1, (), cs.max_bornology(1))
    out = cs.check_morphism([0, 0], src, dst)
    assert isinstance(out, cs.Rejection) and out.reason == "proper"


def test_g_completion_trivial_action_unchanged():
    G = fg.cyclic(2)
    sp = cs.BornCoarseSpace(3, (), (frozenset({0}),))
    X = cs.trivial_action(G, sp)
    BX = cs.g_completion(X)
    assert BX.space.max_bounded == frozenset({0})


def test_g_completion_swap():
    X = two_point_swap(born="gen0")
    assert X.space.max_bounded == frozenset({0})
    BX = cs.g_completion(X)
    assert BX.space.max_bounded == frozenset({0, 1})


def test_g_completion_free_action_orbits_bounded():
    G = fg.cyclic(3)
    sp = cs.BornCoarseSpace(3, (), tuple(frozenset({i}) for i in range(3)))
    X = cs.GBornCoarseSpace(G, sp, [(1, 2, 0)])
    BX = cs.g_completion(X)
    assert BX.space.is_bounded({0, 1, 2})


def test_fixed_points_full_group_on_swap():
    G = fg.cyclic(2)
    sp = cs.BornCoarseSpace(3, cs.max_coarse(3), cs.max_bornology(3))
    X = cs.GBornCoarseSpace(G, sp, [(1, 0, 2)])  # swap 0,1; fix 2
    full = fg.Subgroup(G, frozenset(range(2)))
    FP = cs.fixed_points(X, full)
    assert FP.points == (2,)
    assert FP.space.group.order == 1


def test_fixed_points_trivial_subgroup_gives_completion():
    X = two_point_swap(born="gen0")
    triv = fg.Subgroup(X.group, frozenset({X.group.identity_id}))
    FP = cs.fixed_points(X, triv)
    assert FP.points == (0, 1)
    assert FP.space.group.order == 2  # W = G
    assert FP.space.space.max_bounded == frozenset({0, 1})  # completed bornology


def test_restrict_morphism_fixed_battery():
    G = fg.cyclic(2)
    sp = cs.BornCoarseSpace(4, [frozenset({(0, 1), (2, 3)})], cs.max_bornology(4))
    X = cs.GBornCoarseSpace(G, sp, [(1, 0, 3, 2)])
    f = cs.check_morphism([2, 3, 2, 3], X, X)
    assert isinstance(f, cs.CoarseMap)
    for cls in fg.subgroup_classes(G):
        H = fg.Subgroup(G, cls.representative)
        out = cs.restrict_morphism_fixed(f, X, X, H)
        assert not isinstance(out, cs.Rejection)


def test_orbit_hom_space_point_and_free():
    G = fg.cyclic(2)
    C = oc.build_orbit_category(G)
    X = two_point_swap()
    # S = G/G: X^(S) = fixed points = empty for the free swap
    hom_gg = cs.orbit_hom_space(X, C, 1)
    assert hom_gg.space.carrier == 0
    # S = G/1: X^(S) = X as a set
    hom_g1 = cs.orbit_hom_space(X, C, 0)
    assert hom_g1.space.carrier == 2


def test_restriction_maps_functorial():
    G = fg.cyclic(2)
    C = oc.build_orbit_category(G)
    sp = cs.BornCoarseSpace(3, cs.max_coarse(3), cs.max_bornology(3))
    X = cs.GBornCoarseSpace(G, sp, [(1, 0, 2)])
    # (psi . phi)^* == phi^* . psi^* over all composable pairs
    maps = {m: cs.restriction_map(X, C, m) for m in range(C.n_morphisms)}
    for g, f in C.composable_pairs():
        comp = C.compose(g, f)
        lhs = maps[comp]
        rhs_vals = tuple(maps[f].mapping[maps[g].mapping[x]]
                         for x in range(len(maps[g].mapping)))
        assert lhs.mapping == rhs_vals


def test_tensor_min_max_point():
    G = fg.cyclic(2)
    X = two_point_swap()
    S = cs.orbit_gset(oc.build_orbit_category(G), 1)  # G/G = point
    T = cs.tensor_min_max(S, X)
    assert T.carrier == 2
    assert T.space.max_entourage() == X.space.max_entourage()


def test_tensor_min_max_never_merges_s_coordinates():
    G = fg.cyclic(2)
    X = two_point_swap()
    S = cs.orbit_gset(oc.build_orbit_category(G), 0)  # G/1, two points
    T = cs.tensor_min_max(S, X)
    n = X.carrier
    for s in range(2):
        for s2 in range(2):
            if s != s2:
                for x in range(n):
                    for y in range(n):
                        assert not T.space.is_entourage([(s * n + x, s2 * n + y)])


def test_evaluation_map_accepted_point_orbit():
    G = fg.cyclic(2)
    C = oc.build_orbit_category(G)
    sp = cs.BornCoarseSpace(3, cs.max_coarse(3), cs.max_bornology(3))
    X = cs.GBornCoarseSpace(G, sp, [(1, 0, 2)])
    for obj in range(C.n_objects):
        e = cs.evaluation_map(X, C, obj)
        assert isinstance(e, cs.CoarseMap)


def test_evaluation_map_free_action_is_action_map():
    G = fg.cyclic(2)
    C = oc.build_orbit_category(G)
    X = two_point_swap()
    e = cs.evaluation_map(X, C, 0)
    # carrier G x X with X^(G/1) = X: mapping is the action
    assert sorted(e.mapping) == [0, 0, 1, 1]


def test_flasqueness_empty_accepted():
    sp = cs.BornCoarseSpace(0)
    rep = cs.flasqueness_witness_check(sp, [])
    assert rep.accepted


def test_flasqueness_bounded_identity_rejected():
    sp = cs.BornCoarseSpace(3, cs.max_coarse(3), cs.max_bornology(3))
    rep = cs.flasqueness_witness_check(sp, [0, 1, 2])
    assert not rep.accepted and not rep.escapes_bounded


def test_flasqueness_truncation_model():
    # carrier {0..n}, max coarse, bornology generated by singletons below n,
    # f = min(x+1, n): all three conditions hold
    n = 5
    sp = cs.BornCoarseSpace(
        n + 1, cs.max_coarse(n + 1), tuple(frozenset({i}) for i in range(n))
    )
    f = [min(x + 1, n) for x in range(n + 1)]
    rep = cs.flasqueness_witness_check(sp, f)
    assert rep.is_morphism and rep.close_to_identity
    assert rep.iterates_controlled and rep.escapes_bounded
    assert rep.accepted


def test_flasqueness_completion_compatible():
    G = fg.cyclic(2)
    n = 6  # points 0..5, swap pairs (0,1),(2,3),(4,5) under the action x -> x^1
    sp = cs.BornCoarseSpace(
        n, cs.max_coarse(n), (frozenset({0}), frozenset({1}), frozenset({2}), frozenset({3}))
    )
    act = (1, 0, 3, 2, 5, 4)
    X = cs.GBornCoarseSpace(G, sp, [act])
    f = (2, 3, 4, 5, 4, 5)  # shift pairs toward the unbounded end, equivariantly
    rep = cs.flasqueness_witness_check(X, f)
    assert rep.equivariant
    assert rep.accepted and rep.completion_preserved


def test_complementary_pair_trivial_cases():
    sp = cs.BornCoarseSpace(3, cs.max_coarse(3), cs.max_bornology(3))
    assert cs.complementary_pair_check(sp, {0, 1, 2}, [set()])
    assert cs.complementary_pair_check(sp, set(), [{0, 1, 2}])


def test_complementary_pair_z2_with_fixed_points():
    G = fg.cyclic(2)
    sp = cs.BornCoarseSpace(4, cs.max_coarse(4), cs.max_bornology(4))
    X = cs.GBornCoarseSpace(G, sp, [(1, 0, 3, 2)])
    rep = cs.complementary_pair_check(X, {0, 1}, [{2, 3}])
    assert rep.is_complementary and rep.invariant
    assert all(rep.fixed_point_pairs.values())


def test_space_json_roundtrip(tmp_path):
    import json

    data = {
        "carrier": 4,
        "coarse_generators": [[[0, 1]], [[2, 3]]],
        "bornology_generators": [[0, 1, 2, 3]],
        "action": [[1, 0, 3, 2]],
    }
    p = tmp_path / "space.json"
    p.write_text(json.dumps(data))
    X = cs.load_space(p, fg.cyclic(2))
    assert isinstance(X, cs.GBornCoarseSpace)
    assert X.space.is_entourage([(0, 1)])
    assert not X.space.is_entourage([(1, 2)])
