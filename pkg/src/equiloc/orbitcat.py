"""Explicit finite categories and the orbit category of a finite group.

Morphisms G/H -> G/K are cosets gK with g^-1 H g <= K, stored by payload so
that composition can always be recomputed independently of the tables.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import lru_cache

from . import fingroup as fg


@dataclass(frozen=True)
class Morph:
    src: int
    dst: int
    payload: object


class FinCategory:
    """Finite category with a total composition table, validated at build."""

    def __init__(self, objects, morphisms: list[Morph], identities: list[int], comp: dict):
        self.objects = tuple(objects)
        self.morphisms = tuple(morphisms)
        self.identities = tuple(identities)
        self._comp = comp
        self._hom: dict[tuple[int, int], tuple[int, ...]] = {}
        for i, m in enumerate(self.morphisms):
            self._hom.setdefault((m.src, m.dst), ())
            self._hom[(m.src, m.dst)] += (i,)
        self._check()

    def hom(self, a: int, b: int) -> tuple[int, ...]:
        return self._hom.get((a, b), ())

    def compose(self, g: int, f: int) -> int:
        """g after f."""
        return self._comp[(g, f)]

    def is_identity(self, f: int) -> bool:
        return f in self._ident_set

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        return len(self.morphisms)

    def composable_pairs(self):
        for (a, b), fs in self._hom.items():
            for c in range(self.n_objects):
                gs = self._hom.get((b, c), ())
                for f in fs:
                    for g in gs:
                        yield g, f

    def _check(self):
        self._ident_set = set(self.identities)
        assert len(self.identities) == len(self.objects)
        for x, i in enumerate(self.identities):
            m = self.morphisms[i]
            assert m.src == m.dst == x, "identity endpoints"
        for (a, b), fs in self._hom.items():
            assert len(set(fs)) == len(fs), "duplicate morphisms in hom set"
            payloads = [self.morphisms[f].payload for f in fs]
            assert len(set(payloads)) == len(payloads), "duplicate payloads"
        for g, f in self.composable_pairs():
            h = self._comp[(g, f)]
            mf, mg, mh = self.morphisms[f], self.morphisms[g], self.morphisms[h]
            assert (mh.src, mh.dst) == (mf.src, mg.dst), "composite endpoints"
        for f, m in enumerate(self.morphisms):
            assert self._comp[(f, self.identities[m.src])] == f, "right unit"
            assert self._comp[(self.identities[m.dst], f)] == f, "left unit"
        # associativity, over all composable triples
        for (a, b), fs in self._hom.items():
            for f in fs:
                for c in range(self.n_objects):
                    for g in self._hom.get((b, c), ()):
                        gf = self._comp[(g, f)]
                        for d in range(self.n_objects):
                            for h in self._hom.get((c, d), ()):
                                assert self._comp[(h, gf)] == self._comp[(self._comp[(h, g)], f)]

    def dump(self) -> dict:
        hom_sizes = [
            [len(self.hom(a, b)) for b in range(self.n_objects)]
            for a in range(self.n_objects)
        ]
        comp_listing = sorted((g, f, h) for (g, f), h in self._comp.items())
        digest = hashlib.sha256(json.dumps(comp_listing).encode()).hexdigest()
        return {
            "objects": [str(o) for o in self.objects],
            "hom_sizes": hom_sizes,
            "composition_hash": digest,
        }


def _payload_key(p):
    """Deterministic sort key for heterogeneous morphism payloads."""
    if isinstance(p, frozenset):
        return ("fs", tuple(sorted(_payload_key(x) for x in p)))
    if isinstance(p, tuple):
        return ("tu", tuple(_payload_key(x) for x in p))
    return (type(p).__name__, p)


def build_category(objects, morph_specs, identity_payload, compose_payload) -> FinCategory:
    """Assemble a FinCategory from payload-level data.

    morph_specs: iterable of (src, dst, payload); identities are added when
    missing.  compose_payload(g_spec, f_spec) must return the composite's
    payload.
    """
    objects = tuple(objects)
    specs = []
    seen = set()
    for src in range(len(objects)):
        key = (src, src, identity_payload(src))
        specs.append(key)
        seen.add(key)
    for src, dst, payload in morph_specs:
        key = (src, dst, payload)
        if key not in seen:
            specs.append(key)
            seen.add(key)
    specs.sort(key=lambda s: (s[0], s[1], _payload_key(s[2])))
    index = {key: i for i, key in enumerate(specs)}
    morphisms = [Morph(*key) for key in specs]
    identities = [index[(x, x, identity_payload(x))] for x in range(len(objects))]
    comp = {}
    for gi, g in enumerate(morphisms):
        for fi, f in enumerate(morphisms):
            if f.dst != g.src:
                continue
            payload = compose_payload((g.src, g.dst, g.payload), (f.src, f.dst, f.payload))
            comp[(gi, fi)] = index[(f.src, g.dst, payload)]
    return FinCategory(objects, morphisms, identities, comp)


@dataclass
class FunctorData:
    """Functor between explicit finite categories, checked exhaustively."""

    source: FinCategory
    target: FinCategory
    obj_map: tuple[int, ...]
    mor_map: tuple[int, ...]

    def __post_init__(self):
        S, T = self.source, self.target
        assert len(self.obj_map) == S.n_objects
        assert len(self.mor_map) == S.n_morphisms
        for f, m in enumerate(S.morphisms):
            im = T.morphisms[self.mor_map[f]]
            assert (im.src, im.dst) == (self.obj_map[m.src], self.obj_map[m.dst])
        for x in range(S.n_objects):
            assert self.mor_map[S.identities[x]] == T.identities[self.obj_map[x]]
        for g, f in S.composable_pairs():
            assert self.mor_map[S.compose(g, f)] == T.compose(self.mor_map[g], self.mor_map[f])


class OrbitCategory(FinCategory):
    """The orbit category of a finite group.

    Objects are subgroup conjugacy classes ordered by subgroup order (G/1
    first, G/G last); a morphism G/H -> G/K is the coset gK realizing
    eH |-> gK, stored as a frozenset of element ids.
    """

    def __init__(self, G: fg.PermGroup):
        self.group = G
        classes = fg.subgroup_classes(G)
        self.subgroup_classes = classes
        self.reps = [cls.representative for cls in classes]
        e = G.identity_id

        def coset(g: int, K: frozenset) -> frozenset:
            return frozenset(G.mul(g, k) for k in K)

        self._coset = coset
        specs = []
        for hi, H in enumerate(self.reps):
            for ki, K in enumerate(self.reps):
                seen = set()
                for g in range(G.order):
                    c = coset(g, K)
                    if c in seen:
                        continue
                    seen.add(c)
                    ginv = G.inv(g)
                    if all(G.mul(G.mul(ginv, h), g) in K for h in H):
                        specs.append((hi, ki, c))

        def identity_payload(x):
            return coset(e, self.reps[x])

        def compose_payload(gspec, fspec):
            # f: G/H -> G/K coset aK ; g: G/K -> G/L coset bL ; composite abL
            _, _, fpay = fspec
            _, ldst, gpay = gspec
            a = min(fpay)
            b = min(gpay)
            return coset(G.mul(a, b), self.reps[ldst])

        cat = build_category(
            [f"G/{len(r)}.{i}" for i, r in enumerate(self.reps)],
            specs,
            identity_payload,
            compose_payload,
        )
        super().__init__(cat.objects, cat.morphisms, cat.identities, cat._comp)
        terminal = self.n_objects - 1
        assert len(self.reps[terminal]) == G.order
        assert len(self.hom(0, 0)) == G.order, "End(G/1) must have size |G|"
        for x in range(self.n_objects):
            assert len(self.hom(x, terminal)) == 1
            if x != terminal:
                assert len(self.hom(terminal, x)) == 0

    def object_of_subgroup_class(self, class_id: int) -> int:
        return class_id

    def coset_rep(self, f: int) -> int:
        """Canonical element id representing the morphism's coset."""
        return min(self.morphisms[f].payload)


@lru_cache(maxsize=None)
def build_orbit_category(G: fg.PermGroup) -> OrbitCategory:
    return OrbitCategory(G)


def hom_set(C: OrbitCategory, h_obj: int, k_obj: int) -> list[int]:
    return sorted(C.hom(h_obj, k_obj), key=C.coset_rep)


def twisted_arrow_category(C: FinCategory):
    """Tw(C) together with the projection data to C^op x C.

    Objects are the morphisms f: i -> j of C; a morphism (f) => (f') is a
    pair (a: i' -> i, b: j -> j') with f' = b f a.
    """
    specs = []
    for f, mf in enumerate(C.morphisms):
        for f2, mf2 in enumerate(C.morphisms):
            for a in C.hom(mf2.src, mf.src):
                fa = C.compose(f, a)
                for b in C.hom(mf.dst, mf2.dst):
                    if C.compose(b, fa) == f2:
                        specs.append((f, f2, (a, b)))

    def identity_payload(x):
        mf = C.morphisms[x]
        return (C.identities[mf.src], C.identities[mf.dst])

    def compose_payload(gspec, fspec):
        # fspec: f0 => f1 via (a1, b1); gspec: f1 => f2 via (a2, b2)
        _, _, (a1, b1) = fspec
        _, _, (a2, b2) = gspec
        return (C.compose(a1, a2), C.compose(b2, b1))

    tw = build_category(
        [("tw", f) for f in range(C.n_morphisms)],
        specs,
        identity_payload,
        compose_payload,
    )
    return tw


def check_tw_projection(C: FinCategory, tw: FinCategory) -> bool:
    """pi: Tw(C) -> C^op x C respects identities and composition."""
    for x in range(tw.n_objects):
        a, b = tw.morphisms[tw.identities[x]].payload
        f = tw.objects[x][1]
        if a != C.identities[C.morphisms[f].src] or b != C.identities[C.morphisms[f].dst]:
            return False
    for g, f in tw.composable_pairs():
        a1, b1 = tw.morphisms[f].payload
        a2, b2 = tw.morphisms[g].payload
        ac, bc = tw.morphisms[tw.compose(g, f)].payload
        if ac != C.compose(a1, a2) or bc != C.compose(b2, b1):
            return False
    return True


def full_subcategory(C: FinCategory, object_ids) -> tuple[FinCategory, FunctorData]:
    object_ids = tuple(sorted(object_ids))
    back = {x: i for i, x in enumerate(object_ids)}
    mor_ids = [
        f
        for f, m in enumerate(C.morphisms)
        if m.src in back and m.dst in back
    ]
    specs = [
        (back[C.morphisms[f].src], back[C.morphisms[f].dst], C.morphisms[f].payload)
        for f in mor_ids
    ]

    def identity_payload(x):
        return C.morphisms[C.identities[object_ids[x]]].payload

    def compose_payload(gspec, fspec):
        # look up in C by payload
        gsrc, gdst, gpay = gspec
        fsrc, fdst, fpay = fspec
        fid = _find(C, object_ids[fsrc], object_ids[fdst], fpay)
        gid = _find(C, object_ids[gsrc], object_ids[gdst], gpay)
        return C.morphisms[C.compose(gid, fid)].payload

    sub = build_category([C.objects[x] for x in object_ids], specs, identity_payload, compose_payload)
    mor_map = []
    for m in sub.morphisms:
        mor_map.append(_find(C, object_ids[m.src], object_ids[m.dst], m.payload))
    incl = FunctorData(sub, C, object_ids, tuple(mor_map))
    return sub, incl


def _find(C: FinCategory, src: int, dst: int, payload) -> int:
    for f in C.hom(src, dst):
        if C.morphisms[f].payload == payload:
            return f
    raise KeyError((src, dst, payload))


def full_subcategory_family(C: OrbitCategory, F: fg.Family):
    """Full subcategory of the orbit category on the family's objects."""
    return full_subcategory(C, sorted(F.class_ids))


def comma_over(incl: FunctorData, S: int, variance: str):
    """Comma category of the inclusion over the object S of the big category.

    covariant: objects (T, f: iT -> S); contravariant: objects (T, f: S -> iT).
    Morphisms are maps g: T -> T' in the subcategory with the evident triangle
    over S commuting.  Returns (category, projection functor to the
    subcategory).
    """
    sub, C = incl.source, incl.target
    assert variance in ("co", "contra")
    objs = []
    for t in range(sub.n_objects):
        it = incl.obj_map[t]
        fs = C.hom(it, S) if variance == "co" else C.hom(S, it)
        for f in fs:
            objs.append((t, f))
    obj_index = {o: i for i, o in enumerate(objs)}
    specs = []
    for i, (t, f) in enumerate(objs):
        for j, (t2, f2) in enumerate(objs):
            for g in sub.hom(t, t2):
                ig = incl.mor_map[g]
                ok = (
                    C.compose(f2, ig) == f
                    if variance == "co"
                    else C.compose(ig, f) == f2
                )
                if ok:
                    specs.append((i, j, g))

    def identity_payload(x):
        return sub.identities[objs[x][0]]

    def compose_payload(gspec, fspec):
        return sub.compose(gspec[2], fspec[2])

    cat = build_category([("comma",) + o for o in objs], specs, identity_payload, compose_payload)
    proj_obj = tuple(o[0] for o in objs)
    proj_mor = tuple(m.payload for m in cat.morphisms)
    proj = FunctorData(cat, sub, proj_obj, proj_mor)
    return cat, proj


def opposite_category(C: FinCategory) -> FinCategory:
    specs = [(m.dst, m.src, ("op", m.payload)) for m in C.morphisms]

    def identity_payload(x):
        return ("op", C.morphisms[C.identities[x]].payload)

    def compose_payload(gspec, fspec):
        gid = _find(C, gspec[1], gspec[0], gspec[2][1])
        fid = _find(C, fspec[1], fspec[0], fspec[2][1])
        return ("op", C.morphisms[C.compose(fid, gid)].payload)

    return build_category(C.objects, specs, identity_payload, compose_payload)


def group_as_category(G: fg.PermGroup) -> FinCategory:
    """One-object category with End = G (for bar-construction tests)."""

    def identity_payload(_):
        return G.identity_id

    def compose_payload(gspec, fspec):
        return G.mul(gspec[2], fspec[2])

    return build_category(
        ["*"], [(0, 0, g) for g in range(G.order)], identity_payload, compose_payload
    )


# --- slice equivalence (induction into the slice over G/H) -----------------

@dataclass
class SliceReport:
    group: str
    subgroup_order: int
    functor_ok: bool
    fully_faithful: bool
    essentially_surjective: bool
    bijective_on_iso_classes: bool
    n_source_objects: int
    n_slice_objects: int

    @property
    def equivalence(self) -> bool:
        return (
            self.functor_ok
            and self.fully_faithful
            and self.essentially_surjective
            and self.bijective_on_iso_classes
        )


def _iso_classes(C: FinCategory) -> list[set[int]]:
    iso = {x: {x} for x in range(C.n_objects)}
    for x in range(C.n_objects):
        for y in range(C.n_objects):
            if y in iso[x]:
                continue
            for f in C.hom(x, y):
                if any(
                    C.compose(g, f) == C.identities[x] and C.compose(f, g) == C.identities[y]
                    for g in C.hom(y, x)
                ):
                    iso[x].add(y)
                    iso[y].add(x)
                    break
    out = []
    left = set(range(C.n_objects))
    while left:
        x = min(left)
        cls = set(iso[x])
        for y in list(cls):
            cls |= iso[y]
        left -= cls
        out.append(cls)
    return out


def slice_equivalence_check(G: fg.PermGroup, H: fg.Subgroup, F: fg.Family) -> SliceReport:
    """Check H_{F|H}Orb ~ G_F Orb/(G/H) through the induction functor."""
    C = build_orbit_category(G)
    g_classes = fg.subgroup_classes(G)
    h_class_id = next(
        i for i, c in enumerate(g_classes) if H.members in c.members
    )
    h_rep = g_classes[h_class_id].representative
    # work with the class representative subgroup; the slice is invariant
    # under replacing H by a conjugate
    H0 = fg.Subgroup(G, h_rep)

    sub, incl = full_subcategory_family(C, F)
    slice_cat, _ = comma_over(incl, h_class_id, "co")

    Hgrp = fg.PermGroup(
        G.degree, [G.elements[a] for a in sorted(H0.members)], name=f"{G.name}|H{H0.order}"
    )
    assert Hgrp.order == H0.order
    h_classes = fg.subgroup_classes(Hgrp)

    def g_class_of(members_in_H: frozenset) -> int:
        members = frozenset(G.id_of(Hgrp.elements[a]) for a in members_in_H)
        return next(i for i, c in enumerate(g_classes) if members in c.members)

    fh_ids = [i for i, c in enumerate(h_classes) if g_class_of(c.representative) in F.class_ids]
    HC = build_orbit_category(Hgrp)
    h_sub, h_incl = full_subcategory(HC, fh_ids)

    # object images: U = H/K  |->  (G/K0, tau_K H0) with K0 = tau_K K tau_K^-1
    slice_objs = {o[1:]: i for i, o in enumerate(slice_cat.objects)}
    obj_map = []
    taus = []
    functor_ok = True
    for t in range(h_sub.n_objects):
        k_class_h = fh_ids[t]
        K_in_H = h_classes[k_class_h].representative
        K = frozenset(G.id_of(Hgrp.elements[a]) for a in K_in_H)
        kg = next(i for i, c in enumerate(g_classes) if K in c.members)
        K0 = g_classes[kg].representative
        tau = next(
            g for g in range(G.order)
            if frozenset(G.conj(a, g) for a in K) == K0
        )
        taus.append(tau)
        # slice map G/K0 -> G/H0 with payload tau H0: tau^-1 K0 tau = K <= H0
        payload = frozenset(G.mul(tau, h) for h in H0.members)
        fid = next(
            f for f in C.hom(kg, h_class_id) if C.morphisms[f].payload == payload
        )
        sub_pos = incl.obj_map.index(kg)
        obj_map.append(slice_objs[(sub_pos, fid)])

    # morphism images: hK' |-> coset (tau_K^-1 h tau_K') K0'
    mor_map = []
    for mi, m in enumerate(h_sub.morphisms):
        h_elt_H = min(m.payload) if isinstance(m.payload, frozenset) else None
        assert h_elt_H is not None
        h_elt = G.id_of(Hgrp.elements[h_elt_H])
        t, t2 = m.src, m.dst
        dst_slice = slice_cat.objects[obj_map[t2]]
        kg2 = incl.obj_map[dst_slice[1]]
        K0p = g_classes[kg2].representative
        # image payload (tau_K h tau_K'^-1) K0'
        g_val = G.mul(taus[t], G.mul(h_elt, G.inv(taus[t2])))
        payload = frozenset(G.mul(g_val, k) for k in K0p)
        # find the corresponding slice morphism
        found = None
        for f in slice_cat.hom(obj_map[t], obj_map[t2]):
            inner = slice_cat.morphisms[f].payload  # morphism id of `sub`
            csub = sub.morphisms[inner]
            if csub.payload == payload:
                found = f
                break
        if found is None:
            functor_ok = False
            break
        mor_map.append(found)

    if functor_ok:
        try:
            functor = FunctorData(h_sub, slice_cat, tuple(obj_map), tuple(mor_map))
        except AssertionError:
            functor_ok = False

    fully_faithful = False
    ess_surj = False
    bij_iso = False
    if functor_ok:
        fully_faithful = True
        for t in range(h_sub.n_objects):
            for t2 in range(h_sub.n_objects):
                src_homs = h_sub.hom(t, t2)
                images = [functor.mor_map[f] for f in src_homs]
                tgt_homs = slice_cat.hom(obj_map[t], obj_map[t2])
                if len(set(images)) != len(src_homs) or set(images) != set(tgt_homs):
                    fully_faithful = False
        slice_iso = _iso_classes(slice_cat)
        hit = set()
        for i, cls in enumerate(slice_iso):
            if any(obj_map[t] in cls for t in range(h_sub.n_objects)):
                hit.add(i)
        ess_surj = len(hit) == len(slice_iso)
        src_iso = _iso_classes(h_sub)
        img_classes = set()
        for cls in src_iso:
            t = min(cls)
            img_classes.add(
                next(i for i, scls in enumerate(slice_iso) if obj_map[t] in scls)
            )
        bij_iso = ess_surj and len(img_classes) == len(src_iso)

    return SliceReport(
        group=G.name,
        subgroup_order=H.order,
        functor_ok=functor_ok,
        fully_faithful=fully_faithful,
        essentially_surjective=ess_surj,
        bijective_on_iso_classes=bij_iso,
        n_source_objects=h_sub.n_objects,
        n_slice_objects=slice_cat.n_objects,
    )
