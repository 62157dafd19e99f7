from equiloc import fingroup as fg
from equiloc import orbitcat as oc


def orbit_cat(G):
    return oc.build_orbit_category(G)


def test_build_s3_objects():
    C = orbit_cat(fg.symmetric(3))
    assert C.n_objects == 4
    assert [len(r) for r in C.reps] == [1, 2, 3, 6]


def test_end_of_free_orbit_is_group_battery():
    for G in (fg.cyclic(2), fg.cyclic(4), fg.klein_four(), fg.symmetric(3),
              fg.dihedral(4), fg.quaternion8(), fg.alternating(4)):
        C = orbit_cat(G)
        assert len(C.hom(0, 0)) == G.order, G.name


def test_terminal_object():
    for G in (fg.cyclic(2), fg.symmetric(3)):
        C = orbit_cat(G)
        t = C.n_objects - 1
        for x in range(C.n_objects):
            assert len(C.hom(x, t)) == 1
            if x != t:
                assert len(C.hom(t, x)) == 0


def test_hom_counts_s3():
    G = fg.symmetric(3)
    C = orbit_cat(G)
    # objects: 0 = G/1, 1 = G/C2, 2 = G/C3, 3 = G/G
    assert len(oc.hom_set(C, 1, 1)) == 1
    assert len(oc.hom_set(C, 0, 1)) == 3
    assert len(oc.hom_set(C, 1, 2)) == 0


def test_hom_matches_fixed_point_count():
    # |Hom(G/H, G/K)| equals the number of H-fixed points of G/K
    for G in (fg.cyclic(4), fg.symmetric(3), fg.dihedral(4)):
        C = orbit_cat(G)
        for hi, H in enumerate(C.reps):
            for ki, K in enumerate(C.reps):
                cosets = {frozenset(G.mul(g, k) for k in K) for g in range(G.order)}
                fixed = sum(
                    1
                    for c in cosets
                    if all(frozenset(G.mul(h, x) for x in c) == c for h in H)
                )
                assert len(C.hom(hi, ki)) == fixed


def test_composition_is_coset_multiplication():
    G = fg.symmetric(3)
    C = orbit_cat(G)
    for g, f in C.composable_pairs():
        mf, mg = C.morphisms[f], C.morphisms[g]
        a, b = min(mf.payload), min(mg.payload)
        K = C.reps[mg.dst]
        expected = frozenset(G.mul(G.mul(a, b), k) for k in K)
        assert C.morphisms[C.compose(g, f)].payload == expected


def test_twisted_arrow_point_and_arrow():
    point = oc.build_category(["*"], [], lambda x: "id", lambda g, f: "id")
    tw = oc.twisted_arrow_category(point)
    assert tw.n_objects == 1

    arrow = oc.build_category(
        ["a", "b"], [(0, 1, "f")], lambda x: ("id", x), lambda g, f: _arrow_comp(g, f)
    )
    tw2 = oc.twisted_arrow_category(arrow)
    assert tw2.n_objects == 3


def _arrow_comp(gspec, fspec):
    if fspec[2] == ("id", fspec[0]):
        return gspec[2]
    if gspec[2] == ("id", gspec[0]):
        return fspec[2]
    raise AssertionError


def test_twisted_arrow_z2():
    # GOrb(Z/2) has morphisms: End(G/1) = 2, G/1 -> G/G, id_{G/G}
    C = orbit_cat(fg.cyclic(2))
    assert C.n_morphisms == 4
    tw = oc.twisted_arrow_category(C)
    assert tw.n_objects == 4
    assert oc.check_tw_projection(C, tw)


def test_twisted_arrow_projection_s3():
    C = orbit_cat(fg.symmetric(3))
    tw = oc.twisted_arrow_category(C)
    assert tw.n_objects == C.n_morphisms
    assert oc.check_tw_projection(C, tw)


def test_full_subcategory_family():
    G = fg.symmetric(3)
    C = orbit_cat(G)
    transp = next(c for c in fg.conjugacy_classes(G) if c.size() == 3)
    F = fg.family_of_gamma(G, transp)
    sub, incl = oc.full_subcategory_family(C, F)
    assert sub.n_objects == 2
    assert sorted(len(C.reps[i]) for i in incl.obj_map) == [1, 3]

    all_sub, _ = oc.full_subcategory_family(C, fg.full_family(G))
    assert all_sub.n_objects == C.n_objects
    empty, _ = oc.full_subcategory_family(C, fg.empty_family(G))
    assert empty.n_objects == 0


def test_comma_terminal_when_subcategory_is_everything():
    G = fg.symmetric(3)
    C = orbit_cat(G)
    _, incl = oc.full_subcategory_family(C, fg.full_family(G))
    for S in range(C.n_objects):
        comma, _ = oc.comma_over(incl, S, "co")
        # (S, id) is terminal: exactly one morphism from every object
        idx = next(
            i for i, o in enumerate(comma.objects)
            if incl.obj_map[o[1]] == S and C.is_identity(o[2])
        )
        for i in range(comma.n_objects):
            assert len(comma.hom(i, idx)) == 1


def test_comma_covariant_empty_footnote_case():
    # S3, F-perp = {C2, S3}, S = G/1, covariant: empty
    G = fg.symmetric(3)
    C = orbit_cat(G)
    sub, incl = oc.full_subcategory(C, [1, 3])
    comma, _ = oc.comma_over(incl, 0, "co")
    assert comma.n_objects == 0


def test_comma_contra_z2():
    G = fg.cyclic(2)
    C = orbit_cat(G)
    sub, incl = oc.full_subcategory(C, [1])  # {G/G}
    comma, _ = oc.comma_over(incl, 0, "contra")
    assert comma.n_objects == 1


def test_covariant_comma_empty_for_family_targets():
    # for subgroup-closed F: covariant comma over S with stabilizer in F,
    # relative to F-perp, is empty
    for G in (fg.cyclic(4), fg.symmetric(3)):
        C = orbit_cat(G)
        classes = fg.conjugacy_classes(G)
        for gamma in classes:
            F = fg.family_of_gamma(G, gamma)
            perp = sorted(set(range(C.n_objects)) - set(F.class_ids))
            if not perp:
                continue
            _, incl = oc.full_subcategory(C, perp)
            for s in sorted(F.class_ids):
                comma, _ = oc.comma_over(incl, s, "co")
                assert comma.n_objects == 0


def test_opposite_and_group_category():
    G = fg.cyclic(3)
    B = oc.group_as_category(G)
    assert B.n_objects == 1 and B.n_morphisms == 3
    Bop = oc.opposite_category(B)
    assert Bop.n_morphisms == 3


def test_category_dump_deterministic():
    C1 = orbit_cat(fg.symmetric(3)).dump()
    C2 = oc.OrbitCategory(fg.symmetric(3)).dump()
    assert C1 == C2
    assert len(C1["hom_sizes"]) == 4


def test_slice_equivalence_terminal():
    G = fg.symmetric(3)
    full = fg.Subgroup(G, frozenset(range(G.order)))
    rep = oc.slice_equivalence_check(G, full, fg.full_family(G))
    assert rep.equivalence


def test_slice_equivalence_s3_c2():
    G = fg.symmetric(3)
    c2 = next(c for c in fg.subgroup_classes(G) if len(c.representative) == 2)
    rep = oc.slice_equivalence_check(G, fg.Subgroup(G, c2.representative), fg.full_family(G))
    assert rep.equivalence


def test_slice_equivalence_z4():
    G = fg.cyclic(4)
    c2 = next(c for c in fg.subgroup_classes(G) if len(c.representative) == 2)
    F = fg.family_from_ids(G, [0, 1])  # {1, Z/2}
    rep = oc.slice_equivalence_check(G, fg.Subgroup(G, c2.representative), F)
    assert rep.equivalence
