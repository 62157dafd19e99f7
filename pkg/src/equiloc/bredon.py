"""G-simplicial complexes, fixed-point presheaves, coend homology and the
localization verifiers.

Fixed points are modeled as full subcomplexes on fixed vertices, which is
valid once the action is regular (setwise stabilizers fix simplices
pointwise); equivariant_subdivision enforces regularity.  The derived Kan
extension underlying the family-localization comparison is modeled by the
nerve of the Grothendieck construction over the comma diagram, truncated at
the bar degree N; homology is certified in degrees <= N-2 after comparing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from . import fingroup as fg
from . import homalg as ha
from . import orbitcat as oc
from . import repring as rr
from .exact import SparseMatrix


class NotRegular(ValueError):
    pass


class NotAFamily(ValueError):
    pass


class EDoesNotVanish(ValueError):
    pass


# --- G-simplicial complexes ----------------------------------------------------

class GSimplicialComplex:
    """Simplicial complex with a vertex-level action of a finite group."""

    def __init__(self, group: fg.PermGroup, n_vertices: int, simplices,
                 generator_images):
        self.group = group
        self.n_vertices = n_vertices
        simp: dict[int, list] = {}
        for s in simplices:
            t = tuple(sorted(set(int(v) for v in s)))
            assert len(t) == len(s), f"repeated vertex in simplex {s}"
            assert all(0 <= v < n_vertices for v in t)
            simp.setdefault(len(t) - 1, []).append(t)
        self.simplices = {n: sorted(set(v)) for n, v in simp.items()}
        gens = [tuple(int(x) for x in p) for p in generator_images]
        assert len(gens) == len(group.generators)
        for p in gens:
            assert sorted(p) == list(range(n_vertices))
        self.action = _extend_action(group, gens, n_vertices)
        self._check()

    def _check(self):
        index = {n: set(v) for n, v in self.simplices.items()}
        for n, simps in self.simplices.items():
            for s in simps:
                if n:
                    for i in range(n + 1):
                        assert s[:i] + s[i + 1:] in index[n - 1], f"face missing for {s}"
                for g in range(self.group.order):
                    img = tuple(sorted(self.action[g][v] for v in s))
                    assert img in index[n], f"action does not preserve simplices at {s}"

    def act_vertex(self, g: int, v: int) -> int:
        return self.action[g][v]

    def act_simplex(self, g: int, s: tuple) -> tuple:
        return tuple(sorted(self.action[g][v] for v in s))

    def dim(self) -> int:
        return max(self.simplices) if self.simplices else -1

    def is_empty(self) -> bool:
        return not self.simplices

    def is_regular(self) -> bool:
        """Every element fixing a simplex setwise fixes it pointwise."""
        for n, simps in self.simplices.items():
            for s in simps:
                for g in range(self.group.order):
                    if self.act_simplex(g, s) == s:
                        if any(self.action[g][v] != v for v in s):
                            return False
        return True

    def stabilizer(self, s: tuple) -> frozenset[int]:
        return frozenset(
            g for g in range(self.group.order) if self.act_simplex(g, s) == s
        )

    def orbit(self, s: tuple) -> list[tuple]:
        return sorted({self.act_simplex(g, s) for g in range(self.group.order)})

    def fixed_vertices(self, members) -> list[int]:
        return [v for v in range(self.n_vertices)
                if all(self.action[h][v] == v for h in members)]

    def full_subcomplex(self, vertices) -> dict[int, list[tuple]]:
        vs = set(vertices)
        return {
            n: [s for s in simps if set(s) <= vs]
            for n, simps in self.simplices.items()
            if any(set(s) <= vs for s in simps)
        }

    def to_json(self) -> dict:
        return {
            "vertices": self.n_vertices,
            "simplices": [list(s) for n in sorted(self.simplices)
                          for s in self.simplices[n]],
            "action": [
                [self.action[self.group.id_of(g)][v] for v in range(self.n_vertices)]
                for g in self.group.generators
            ],
        }


def _extend_action(G: fg.PermGroup, gens, n: int) -> dict[int, tuple]:
    act = {G.identity_id: tuple(range(n))}
    gen_ids = [G.id_of(g) for g in G.generators]
    frontier = [G.identity_id]
    while frontier:
        nxt = []
        for a in frontier:
            for gi, gp in zip(gen_ids, gens):
                b = G.mul(gi, a)
                if b not in act:
                    act[b] = tuple(gp[x] for x in act[a])
                    nxt.append(b)
        frontier = nxt
    assert len(act) == G.order
    return act


def complex_from_dict(data: dict, group: fg.PermGroup) -> GSimplicialComplex:
    return GSimplicialComplex(group, int(data["vertices"]), data["simplices"],
                              data.get("action", [list(range(int(data["vertices"])))
                                                  for _ in group.generators]))


def load_complex(path, group: fg.PermGroup) -> GSimplicialComplex:
    import json

    with open(path) as fh:
        return complex_from_dict(json.load(fh), group)


def equivariant_subdivision(X: GSimplicialComplex) -> GSimplicialComplex:
    """Barycentric subdivision until the action is regular (at most twice)."""
    for _ in range(3):
        if X.is_regular():
            return X
        X = _barycentric(X)
    raise AssertionError("subdivision failed to become regular twice")


def _barycentric(X: GSimplicialComplex) -> GSimplicialComplex:
    all_simplices = [s for n in sorted(X.simplices) for s in X.simplices[n]]
    vid = {s: i for i, s in enumerate(all_simplices)}
    flags: list[tuple] = []

    def is_face(a, b):
        return a != b and set(a) <= set(b)

    chains: dict[tuple, list] = {}
    for s in all_simplices:
        chains[s] = [(s,)]
    for s in all_simplices:
        for t in all_simplices:
            if is_face(t, s):
                chains[s].extend(c + (s,) for c in chains[t])
    for s in all_simplices:
        flags.extend(chains[s])
    new_simplices = [tuple(sorted(vid[s] for s in flag)) for flag in flags]
    gen_images = []
    for g in X.group.generators:
        gid = X.group.id_of(g)
        gen_images.append(tuple(vid[X.act_simplex(gid, s)] for s in all_simplices))
    return GSimplicialComplex(X.group, len(all_simplices), new_simplices, gen_images)


def gamma_fixed_subcomplex(X: GSimplicialComplex, gamma: fg.ConjClass) -> GSimplicialComplex:
    """Union of the g-fixed full subcomplexes over g in gamma."""
    if not X.is_regular():
        raise NotRegular("gamma fixed points need a regular action")
    keep = []
    for n, simps in X.simplices.items():
        for s in simps:
            if any(all(X.action[g][v] == v for v in s) for g in gamma.members):
                keep.append(s)
    gen_images = [
        tuple(X.action[X.group.id_of(g)][v] for v in range(X.n_vertices))
        for g in X.group.generators
    ]
    return GSimplicialComplex(X.group, X.n_vertices, keep, gen_images)


# --- the fixed-point presheaf ---------------------------------------------------

class OrbitPresheaf:
    """Contravariant functor on the orbit category with simplicial-set values.

    kind "complex": values are full subcomplexes of one ambient complex,
    morphisms act by vertex translation.  kind "nerve": values are encoded
    simplicial sets and morphisms are strict relabelings.
    """

    def __init__(self, cat: oc.OrbitCategory, kind: str, values, vertex_maps=None,
                 strict_maps=None, truncated_at=None):
        self.cat = cat
        self.kind = kind
        self.values = values  # obj -> SimplicialSetFin
        self.vertex_maps = vertex_maps  # mor -> {vertex: vertex} (complex kind)
        self.strict_maps = strict_maps  # mor -> SimplicialMapFin (nerve kind)
        self.truncated_at = truncated_at
        self._complexes = {
            obj: {n: list(v.simplices.get(n, ())) for n in v.dims}
            for obj, v in values.items()
        } if kind == "complex" else None
        self._chains: dict = {}
        self._chain_maps: dict = {}
        self._check_functorial()

    def value(self, obj: int) -> ha.SimplicialSetFin:
        return self.values[obj]

    def is_empty(self, obj: int) -> bool:
        return self.values[obj].is_empty()

    def value_chains(self, obj: int, ring: str) -> ha.ChainComplex:
        key = (obj, ring)
        if key not in self._chains:
            self._chains[key] = ha.chains(self.values[obj], ring)
        return self._chains[key]

    def map_chain(self, mor: int, ring: str) -> ha.ChainMap:
        """Chain map value(dst) -> value(src) for an orbit morphism src -> dst."""
        key = (mor, ring)
        if key not in self._chain_maps:
            m = self.cat.morphisms[mor]
            if self.kind == "complex":
                vm = self.vertex_maps[mor]
                self._chain_maps[key] = ha.vertex_chain_map(
                    self._complexes[m.dst], self._complexes[m.src], vm, ring,
                    src_chains=self.value_chains(m.dst, ring),
                    dst_chains=self.value_chains(m.src, ring),
                )
            else:
                self._chain_maps[key] = ha.chain_map_of_simplicial(
                    self.strict_maps[mor], ring)
                # rebuild on shared chain objects
                sm = self._chain_maps[key]
                self._chain_maps[key] = ha.ChainMap(
                    self.value_chains(m.dst, ring), self.value_chains(m.src, ring),
                    sm.mats, check=False)
        return self._chain_maps[key]

    def _check_functorial(self):
        cat = self.cat
        if self.kind == "complex":
            for x in range(cat.n_objects):
                ident = self.vertex_maps[cat.identities[x]]
                assert all(ident[v] == v for v in ident)
            for g, f in cat.composable_pairs():
                comp = self.vertex_maps[cat.compose(g, f)]
                mf, mg = self.vertex_maps[f], self.vertex_maps[g]
                # contravariant: map(g.f) = map(f) . map(g)
                for v in comp:
                    assert comp[v] == mf[mg[v]], "presheaf functoriality fails"
        else:
            for g, f in cat.composable_pairs():
                comp = self.strict_maps[cat.compose(g, f)]
                a = self.strict_maps[f]
                b = self.strict_maps[g]
                for n in b.src.dims:
                    for k, key in enumerate(b.src.simplices[n]):
                        m1, k1, e1 = b.images[n][k]
                        lhs = a.image_formal(m1, k1, e1)
                        assert lhs == comp.images[n][k], "strict functoriality fails"


def tilde_Y(X: GSimplicialComplex) -> OrbitPresheaf:
    """S = G/H  |->  full subcomplex on H-fixed vertices (X must be regular)."""
    if not X.is_regular():
        raise NotRegular("tilde_Y requires a regular action")
    G = X.group
    C = oc.build_orbit_category(G)
    values = {}
    complexes = {}
    for obj in range(C.n_objects):
        H = C.reps[obj]
        sub = X.full_subcomplex(X.fixed_vertices(H))
        complexes[obj] = sub
        values[obj] = ha.from_simplicial_complex(sub)
    vertex_maps = {}
    for mi, m in enumerate(C.morphisms):
        g = C.coset_rep(mi)
        vm = {}
        for v in set(v for s in complexes[m.dst].get(0, ()) for v in s):
            vm[v] = X.action[g][v]
        vertex_maps[mi] = vm
    return OrbitPresheaf(C, "complex", values, vertex_maps=vertex_maps)


def tilde_Y_map(Xsrc: GSimplicialComplex, Xdst: GSimplicialComplex, vertex_map,
                ring: str = ha.RING_Z):
    """Objectwise chain maps of tilde_Y applied to an equivariant simplicial map,
    with naturality against the presheaf structure asserted."""
    G = Xsrc.group
    assert Xdst.group is G
    for g in range(G.order):
        for v in range(Xsrc.n_vertices):
            assert vertex_map[Xsrc.action[g][v]] == Xdst.action[g][vertex_map[v]], (
                "map is not equivariant")
    Ys, Yd = tilde_Y(Xsrc), tilde_Y(Xdst)
    C = Ys.cat
    comps = {}
    for obj in range(C.n_objects):
        comps[obj] = ha.vertex_chain_map(
            Ys._complexes[obj], Yd._complexes[obj],
            {v: vertex_map[v] for s in Ys._complexes[obj].get(0, ()) for v in s},
            ring,
            src_chains=Ys.value_chains(obj, ring),
            dst_chains=Yd.value_chains(obj, ring),
        )
    for mi, m in enumerate(C.morphisms):
        lhs = comps[m.src].compose(Ys.map_chain(mi, ring))
        rhs = Yd.map_chain(mi, ring).compose(comps[m.dst])
        assert lhs == rhs, "tilde_Y(f) is not a presheaf map"
    return comps


# --- homotopy Kan extension X^F -------------------------------------------------

@dataclass
class _GrothendieckData:
    cat: oc.FinCategory
    obj_payloads: list  # ((t_sub, f_morid), (q, simplex))
    mor_payloads: list  # (src_payload, dst_payload, g_subid, eps)


def _grothendieck_category(X: OrbitPresheaf, sub, incl, S: int) -> _GrothendieckData:
    """Category of simplices of the comma diagram over S (contravariant side).

    Objects ((t, f), sigma): f: S -> i(t) in GOrb, sigma a simplex of X(i(t)).
    A morphism ((t, f), sigma) -> ((t', f'), sigma') is a comma-opposite
    morphism g: i(t') -> i(t) with g f' = f whose transport carries sigma into
    a face of sigma' (as vertex sets); its nerve is the standard
    Grothendieck-construction model of the homotopy colimit, with each value
    appearing through its barycentric subdivision.
    """
    C = X.cat
    comma_objs = []
    for t in range(sub.n_objects):
        it = incl.obj_map[t]
        for f in C.hom(S, it):
            comma_objs.append((t, f))
    g_objs = []
    for (t, f) in comma_objs:
        it = incl.obj_map[t]
        val = X.values[it]
        for q in val.dims:
            for s in val.simplices[q]:
                g_objs.append(((t, f), (q, s)))
    obj_index = {o: i for i, o in enumerate(g_objs)}

    # J-morphisms (t,f) -> (t',f'): comma morphisms g: t' -> t with i(g) f' = f
    j_mors = []
    for a, (t, f) in enumerate(comma_objs):
        for b, (t2, f2) in enumerate(comma_objs):
            for g in sub.hom(t2, t):
                if C.compose(incl.mor_map[g], f2) == f:
                    j_mors.append((a, b, g))

    specs = []
    for (a, b, g) in j_mors:
        (t, f), (t2, f2) = comma_objs[a], comma_objs[b]
        it, it2 = incl.obj_map[t], incl.obj_map[t2]
        vm = X.vertex_maps[incl.mor_map[g]]  # X(i(t)) -> X(i(t2)) vertices
        val2 = X.values[it2]
        for q in X.values[it].dims:
            for s in X.values[it].simplices[q]:
                img = {vm[v] for v in s}
                assert len(img) == q + 1, "translation maps are injective"
                for q2 in val2.dims:
                    if q2 < q:
                        continue
                    for s2 in val2.simplices[q2]:
                        if img <= set(s2):
                            src = obj_index[((t, f), (q, s))]
                            dst = obj_index[((t2, f2), (q2, s2))]
                            specs.append((src, dst, ("gr", g)))

    def identity_payload(x):
        (t, f), _ = g_objs[x]
        return ("gr", sub.identities[t])

    def compose_payload(gspec, fspec):
        _, _, (_, g1) = fspec
        _, _, (_, g2) = gspec
        # J-composition flips the comma-category composition
        return ("gr", sub.compose(g1, g2))

    cat = oc.build_category(
        [("grobj", i) for i in range(len(g_objs))], specs, identity_payload,
        compose_payload)
    return _GrothendieckData(cat, g_objs, [m.payload for m in cat.morphisms])


def presheaf_XF(X: OrbitPresheaf, F: fg.Family, N: int) -> OrbitPresheaf:
    """Homotopy Ind_{F-perp} Res_{F-perp}: nerve of the category of simplices
    of the comma diagram at each orbit, truncated at N.  Emptiness is exact:
    the value at S is empty iff the comma diagram over S has no simplices."""
    C = X.cat
    G = C.group
    perp = sorted(set(range(C.n_objects)) - set(F.class_ids))
    sub, incl = oc.full_subcategory(C, perp)
    values = {}
    data = {}
    for S in range(C.n_objects):
        gd = _grothendieck_category(X, sub, incl, S)
        data[S] = gd
        values[S] = ha.nerve_of_category(gd.cat, N)

    # structure maps: relabel (t, f) to (t, f . u) along u: A -> B
    strict_maps = {}
    for mi, m in enumerate(C.morphisms):
        A, B = m.src, m.dst
        gdB, gdA = data[B], data[A]
        objB = {p: i for i, p in enumerate(gdB.obj_payloads)}
        objA = {p: i for i, p in enumerate(gdA.obj_payloads)}

        def relabel_obj(payload):
            (t, f), qs = payload
            return ((t, C.compose(f, mi)), qs)

        # morphism relabeling via payload identity
        morB_of = {}
        for fid in range(gdB.cat.n_morphisms):
            mor = gdB.cat.morphisms[fid]
            srcp = gdB.obj_payloads[mor.src]
            dstp = gdB.obj_payloads[mor.dst]
            morB_of[fid] = (relabel_obj(srcp), relabel_obj(dstp), mor.payload)
        morA_index = {}
        for fid in range(gdA.cat.n_morphisms):
            mor = gdA.cat.morphisms[fid]
            morA_index[(gdA.obj_payloads[mor.src], gdA.obj_payloads[mor.dst],
                        mor.payload)] = fid

        src_ss = values[B]
        images: dict[int, list] = {}
        for n in src_ss.dims:
            rows = []
            for key in src_ss.simplices[n]:
                if key[0] == "o":
                    x = gdB.obj_payloads[key[1]]
                    rows.append((0, ("o", objA[relabel_obj(x)]), (0,)))
                else:
                    ms = key[1]
                    new = tuple(morA_index[morB_of[f]] for f in ms)
                    rows.append((n, ("c", new), tuple(range(n + 1))))
            images[n] = rows
        strict_maps[mi] = ha.SimplicialMapFin(values[B], values[A], images)
    out = OrbitPresheaf(C, "nerve", values, strict_maps=strict_maps, truncated_at=N)
    out._gd = data
    return out


def counit_chain_maps(XF: OrbitPresheaf, X: OrbitPresheaf, ring: str) -> dict[int, ha.ChainMap]:
    """Last-vertex chain maps chains(X^F(S)) -> chains(X(S)).

    A p-chain of the simplex category maps to the simplex spanned by the
    images in X(S) of the top vertices of its stages, with the orientation
    sign of the sorting permutation; repeated vertices give zero.
    """
    C = X.cat
    out = {}
    for S in range(C.n_objects):
        src = XF.value_chains(S, ring)
        dst = X.value_chains(S, ring)
        ssf = XF.values[S]
        gd_objs = {}
        # recover the Grothendieck payload from the nerve keys
        mats = {}
        for n in ssf.dims:
            mat = SparseMatrix(dst.rank(n), src.rank(n))
            for k, key in enumerate(ssf.simplices[n]):
                verts = _counit_vertices(XF, X, S, key)
                if len(set(verts)) == len(verts):
                    t = tuple(sorted(verts))
                    idx = X.values[S].index[n][t] if t in X.values[S].index.get(n, {}) else None
                    assert idx is not None, "counit image is not a simplex"
                    mat.add_to(idx, k, ha._sort_sign(verts))
            mats[n] = mat
        out[S] = ha.ChainMap(src, dst, mats)
    return out


def _counit_vertices(XF: OrbitPresheaf, X: OrbitPresheaf, S: int, key):
    """Vertices (w_0 ... w_p) in X(S) of the last-vertex image of a nerve key."""
    C = X.cat
    gd = XF._gd[S]
    if key[0] == "o":
        payload = gd.obj_payloads[key[1]]
        return [_push_top_vertex(X, C, S, payload)]
    ms = key[1]
    first = gd.cat.morphisms[ms[0]].src
    objs = [first] + [gd.cat.morphisms[f].dst for f in ms]
    return [_push_top_vertex(X, C, S, gd.obj_payloads[x]) for x in objs]


def _push_top_vertex(X: OrbitPresheaf, C, S: int, payload) -> int:
    (t, f), (q, s) = payload
    vm = X.vertex_maps[f]  # X(i(t)) -> X(S)
    return vm[s[-1]]


# --- coefficient systems ---------------------------------------------------------

def constant_system(C: oc.OrbitCategory, ring: str, rank: int = 1) -> ha.ChainFunctor:
    V = ha.free_complex(ring, {0: rank})
    return ha.constant_functor(C, V)


def zero_on_family_system(C: oc.OrbitCategory, F: fg.Family, ring: str) -> ha.ChainFunctor:
    """Value ring[0] on orbits outside F, zero on F; functorial because no
    morphism leaves the family upward."""
    zero = ha.zero_complex(ring)
    one = ha.free_complex(ring, {0: 1})
    values = {x: (zero if x in F.class_ids else one) for x in range(C.n_objects)}
    maps = {}
    ident = SparseMatrix.identity(1)
    for mi, m in enumerate(C.morphisms):
        if m.src not in F.class_ids and m.dst not in F.class_ids:
            maps[mi] = ha.ChainMap(one, one, {0: ident}, check=False)
        else:
            maps[mi] = ha.ChainMap(values[m.src], values[m.dst], {}, check=False)
    return ha.ChainFunctor(C, values, maps)


@lru_cache(maxsize=None)
def repring_system(C: oc.OrbitCategory) -> ha.ChainFunctor:
    """S |-> R(G_s) with induction maps; the pi_0 shadow of equivariant K-homology."""
    G = C.group
    values = {}
    tables = {}
    for obj in range(C.n_objects):
        t = rr.character_table(rr.subgroup_group(G, C.reps[obj]))
        tables[obj] = t
        values[obj] = ha.free_complex(ha.RING_Z, {0: t.n_classes})
    maps = {}
    for mi, m in enumerate(C.morphisms):
        A = rr.orbit_morphism_matrix(G, C, mi)
        maps[mi] = ha.ChainMap(values[m.src], values[m.dst],
                               {0: SparseMatrix.from_dense(A)}, check=False)
    functor = ha.ChainFunctor(C, values, maps)
    functor.kind = "repring"
    functor.tables = tables
    return functor


def system_vanishes_on(E: ha.ChainFunctor, class_ids) -> bool:
    return all(not E.values[x].homology() for x in class_ids)


# --- coends ----------------------------------------------------------------------

def coend_EG(E: ha.ChainFunctor, X: OrbitPresheaf, N: int, ring: str | None = None,
             check: bool = True) -> ha.BarComplex:
    """Derived coend over Tw(GOrb)^op of (f: S -> T) |-> E(S) (x) chains(X(T))."""
    C = X.cat
    assert E.cat is C
    ring = ring or E.ring()
    D = _coend_diagram(E, X, N, ring, check)
    return ha.hocolim_trunc(D, N)


def _coend_diagram(E: ha.ChainFunctor, X: OrbitPresheaf, N: int, ring: str,
                   check: bool) -> ha.ChainFunctor:
    C = X.cat
    twop, src_of, dst_of = ha.twisted_op_category(C)
    values = {}
    for x in range(twop.n_objects):
        values[x] = ha.tensor(E.values[src_of[x]], X.value_chains(dst_of[x], ring))
    maps = {}
    for mi, m in enumerate(twop.morphisms):
        a, b = m.payload[1]
        fmap = E.maps[a]
        gmap = X.map_chain(b, ring)
        tm = ha.tensor_map(fmap, gmap)
        maps[mi] = ha.ChainMap(values[m.src], values[m.dst], tm.mats, check=False)
    return ha.ChainFunctor(twop, values, maps, check=check)


def coend_comparison(E: ha.ChainFunctor, XA: OrbitPresheaf, XB: OrbitPresheaf,
                     legs: dict[int, ha.ChainMap], N: int, ring: str,
                     check: bool = True):
    """Map of coends induced by objectwise chain maps legs[T]: XA(T) -> XB(T)
    (natural in T; naturality is asserted by the bar machinery)."""
    DA = _coend_diagram(E, XA, N, ring, check)
    DB = _coend_diagram(E, XB, N, ring, check)
    barA = ha.hocolim_trunc(DA, N)
    barB = ha.hocolim_trunc(DB, N)
    twop, src_of, dst_of = ha.twisted_op_category(XA.cat)
    eta = {}
    for x in range(twop.n_objects):
        tm = ha.tensor_map(ha.ChainMap.identity(E.values[src_of[x]]), legs[dst_of[x]])
        eta[x] = ha.ChainMap(DA.values[x], DB.values[x], tm.mats, check=False)
    f = ha.bar_map(barA, barB, eta)
    return barA, barB, f


# --- the cellular Bredon oracle ---------------------------------------------------

@dataclass(frozen=True)
class Cell:
    rep: tuple  # orbit representative simplex (minimal in its orbit)
    obj: int  # orbit-category object id of the stabilizer class
    rank: int  # rank of M(G/obj) in degree 0
    offset: int  # offset inside the degree block


@dataclass
class BredonComplex:
    complex: ha.ChainComplex
    cells: dict[int, list[Cell]]  # degree -> cells

    def summand_objects(self, n: int) -> list[int]:
        return [c.obj for c in self.cells.get(n, [])]


def bredon_cellular(X: GSimplicialComplex, M: ha.ChainFunctor) -> BredonComplex:
    """Equivariant cellular chains: C_n = sum over n-cell orbits of M(G/stab).

    Requires a regular action (so stabilizers fix cells pointwise and no
    orientation twisting occurs); differentials apply M to the orbit-category
    morphisms induced by faces, with global-vertex-order signs.
    """
    if not X.is_regular():
        raise NotRegular("bredon_cellular requires a regular action")
    G = X.group
    C = M.cat
    classes = fg.subgroup_classes(G)

    def class_of_subgroup(members: frozenset) -> int:
        return next(i for i, c in enumerate(classes) if members in c.members)

    cells: dict[int, list[Cell]] = {}
    conjugators: dict[tuple, int] = {}
    orbit_rep_of: dict[tuple, tuple] = {}
    mover: dict[tuple, int] = {}
    for n in sorted(X.simplices):
        seen = set()
        lst = []
        offset = 0
        for s in X.simplices[n]:
            if s in seen:
                continue
            orb = X.orbit(s)
            seen |= set(orb)
            rep = min(orb)
            for img in orb:
                orbit_rep_of[img] = rep
                mover[img] = next(g for g in range(G.order)
                                  if X.act_simplex(g, rep) == img)
            stab = X.stabilizer(rep)
            kc = class_of_subgroup(stab)
            R = classes[kc].representative
            # conjugator b with b^-1 R b = stab
            b = next(g for g in range(G.order)
                     if frozenset(G.conj(a, G.inv(g)) for a in R) == stab)
            conjugators[rep] = b
            rank = M.values[kc].rank(0)
            lst.append(Cell(rep, kc, rank, offset))
            offset += rank
        cells[n] = lst

    ring = M.ring()
    ranks = {n: sum(c.rank for c in lst) for n, lst in cells.items()}
    ranks = {n: r for n, r in ranks.items() if r}
    cell_index = {n: {c.rep: c for c in lst} for n, lst in cells.items()}

    diffs = {}
    for n in ranks:
        if n == 0 or (n - 1) not in cells:
            continue
        d = SparseMatrix(ranks.get(n - 1, 0), ranks[n])
        for cell in cells[n]:
            b_sigma = conjugators[cell.rep]
            for i in range(n + 1):
                face = cell.rep[:i] + cell.rep[i + 1:]
                tau = orbit_rep_of[face]
                a = mover[face]  # face = a . tau
                target = cell_index[n - 1][tau]
                b_tau = conjugators[tau]
                # morphism G/R_sigma -> G/R_tau, payload (b_sigma a b_tau^-1) R_tau
                gval = G.mul(b_sigma, G.mul(a, G.inv(b_tau)))
                R_tau_members = classes[target.obj].representative
                payload = frozenset(G.mul(gval, r) for r in R_tau_members)
                mor = next(
                    f for f in C.hom(cell.obj, target.obj)
                    if C.morphisms[f].payload == payload
                )
                perm_sign = ha._sort_sign([X.action[a][v] for v in tau])
                sign = (-1 if i % 2 else 1) * perm_sign
                for r, c, v in M.maps[mor].mat(0).entries():
                    d.add_to(target.offset + r, cell.offset + c, sign * v)
        diffs[n] = d
    return BredonComplex(ha.ChainComplex(ring, ranks, diffs), cells)


def bredon_inclusion(sub: BredonComplex, big: BredonComplex) -> ha.ChainMap:
    """Chain map of an inclusion of G-subcomplexes: orbits agree, so orbit
    representatives agree and the blocks are identities on shared cells."""
    big_index = {n: {c.rep: c for c in lst} for n, lst in big.cells.items()}
    mats = {}
    for n, lst in sub.cells.items():
        if not sub.complex.rank(n):
            continue
        m = SparseMatrix(big.complex.rank(n), sub.complex.rank(n))
        for cell in lst:
            target = big_index[n][cell.rep]
            assert target.obj == cell.obj, "stabilizer class must agree"
            for r in range(cell.rank):
                m.add_to(target.offset + r, cell.offset + r, 1)
        mats[n] = m
    return ha.ChainMap(sub.complex, big.complex, mats)


# --- assembly maps -----------------------------------------------------------------

@dataclass
class AssemblyReport:
    source_homology: dict
    target_homology: dict
    iso_range: tuple[int, int]
    quasi_iso: bool
    map: ha.ChainMap
    bar: ha.BarComplex


def assembly_map(E: ha.ChainFunctor, F: fg.Family, N: int) -> AssemblyReport:
    """Truncated homotopy colimit of E over the family subcategory, mapped to
    E(G/G) through the unique morphisms to the terminal orbit."""
    C = E.cat
    terminal = C.n_objects - 1
    sub, incl = oc.full_subcategory(C, sorted(F.class_ids))
    values = {t: E.values[incl.obj_map[t]] for t in range(sub.n_objects)}
    maps = {f: E.maps[incl.mor_map[f]] for f in range(sub.n_morphisms)}
    D = ha.ChainFunctor(sub, values, maps, check=False)
    bar = ha.hocolim_trunc(D, N)
    target = E.values[terminal]
    legs = {}
    for t in range(sub.n_objects):
        to_term = C.hom(incl.obj_map[t], terminal)
        assert len(to_term) == 1
        legs[t] = E.maps[to_term[0]]
    f = ha.bar_augmentation(bar, target, legs)
    lo, hi = 0, max(0, N - 2)
    return AssemblyReport(
        source_homology=bar.complex.homology(),
        target_homology=target.homology(),
        iso_range=(lo, hi),
        quasi_iso=ha.quasi_iso_in_range(f, lo, hi),
        map=f,
        bar=bar,
    )


# --- theorem verifiers ---------------------------------------------------------------

@dataclass
class TheoremOneReport:
    family_ok: bool
    vanishing_ok: bool
    verdict: bool
    range: tuple[int, int]
    lhs_homology: dict
    rhs_homology: dict

    @property
    def theorem_violation(self) -> bool:
        return self.family_ok and self.vanishing_ok and not self.verdict


def verify_theorem_one(E: ha.ChainFunctor, F: fg.Family, X: OrbitPresheaf,
                       N: int, ring: str | None = None) -> TheoremOneReport:
    """Compare the coends over X^F and X; the induced map must be a
    quasi-isomorphism in degrees [0, N-2] whenever E vanishes on the family."""
    G = X.cat.group
    if not fg.is_family(G, F.class_ids):
        raise NotAFamily("the given subgroup classes are not subgroup-closed")
    if not system_vanishes_on(E, F.class_ids):
        raise EDoesNotVanish("E must have zero homology on the family")
    ring = ring or E.ring()
    XF = presheaf_XF(X, F, N)
    legs = counit_chain_maps(XF, X, ring)
    barA, barB, f = coend_comparison(E, XF, X, legs, N, ring)
    lo, hi = 0, N - 2
    verdict = ha.quasi_iso_in_range(f, lo, hi)
    return TheoremOneReport(
        family_ok=True,
        vanishing_ok=True,
        verdict=verdict,
        range=(lo, hi),
        lhs_homology=barA.complex.homology(),
        rhs_homology=barB.complex.homology(),
    )


@dataclass
class GammaLocalizationReport:
    mode: str
    verdict: bool
    degreewise: dict
    unlocalized_quasi_iso: bool | None
    vanishing_checks: dict
    details: dict

    @property
    def theorem_violation(self) -> bool:
        return not self.verdict


def verify_gamma_localization(X: GSimplicialComplex, gamma: fg.ConjClass,
                              mode: str, N: int | None = None,
                              E: ha.ChainFunctor | None = None) -> GammaLocalizationReport:
    """Localization along the inclusion of the gamma-fixed subcomplex.

    mode "vanishing-coefficients": E (vanishing on F(gamma)) is paired through
    the coend with tilde_Y of both sides; the comparison must be a
    quasi-isomorphism.  mode "rational-R(G)": the cellular complexes with
    R(-) coefficients are localized degreewise at the rational class of gamma;
    cells whose stabilizers miss gamma must die (checked independently via
    annihilator witnesses), making the localized inclusion an isomorphism.
    """
    if not X.is_regular():
        raise NotRegular("verify_gamma_localization requires a regular complex")
    G = X.group
    if N is None:
        N = max(X.dim(), 0) + 2
    F = fg.family_of_gamma(G, gamma)
    Xg = gamma_fixed_subcomplex(X, gamma)
    if mode == "vanishing-coefficients":
        assert E is not None, "supply a coefficient system for this mode"
        if not system_vanishes_on(E, F.class_ids):
            raise EDoesNotVanish("E must have zero homology on F(gamma)")
        YA, YB = tilde_Y(Xg), tilde_Y(X)
        ring = E.ring()
        legs = {}
        for obj in range(YA.cat.n_objects):
            legs[obj] = ha.vertex_chain_map(
                YA._complexes[obj], YB._complexes[obj],
                {v: v for s in YA._complexes[obj].get(0, ()) for v in s},
                ring,
                src_chains=YA.value_chains(obj, ring),
                dst_chains=YB.value_chains(obj, ring),
            )
        barA, barB, f = coend_comparison(E, YA, YB, legs, N, ring)
        verdict = ha.quasi_iso_in_range(f, 0, N - 2)
        return GammaLocalizationReport(
            mode=mode, verdict=verdict, degreewise={},
            unlocalized_quasi_iso=None, vanishing_checks={},
            details={"lhs": barA.complex.homology(), "rhs": barB.complex.homology()},
        )
    assert mode == "rational-R(G)", f"unknown mode {mode}"
    C = oc.build_orbit_category(G)
    M = repring_system(C)
    BA = bredon_cellular(Xg, M)
    BB = bredon_cellular(X, M)
    inc = bredon_inclusion(BA, BB)
    classes = fg.subgroup_classes(G)
    degreewise = {}
    vanishing = {}
    all_ok = True
    degrees = sorted(set(BB.cells) | set(BA.cells))
    for n in degrees:
        src = [fg.Subgroup(G, classes[c.obj].representative) for c in BA.cells.get(n, [])]
        dst = [fg.Subgroup(G, classes[c.obj].representative) for c in BB.cells.get(n, [])]
        if not src and not dst:
            degreewise[n] = True
            continue
        dense = inc.mat(n).to_dense()
        phi = rr.module_map_from_subgroups(G, src, dst, dense)
        _, verdict_n = rr.rational_localize_map(phi, gamma)
        degreewise[n] = verdict_n
        all_ok = all_ok and verdict_n
    # independent annihilator-witness route: every cell with stabilizer in
    # F(gamma) must vanish after localization, every other cell must not
    for n in degrees:
        for cell in BB.cells.get(n, []):
            H = fg.Subgroup(G, classes[cell.obj].representative)
            vanishes, _ = rr.module_vanishes_localized(G, H, gamma)
            in_family = cell.obj in F.class_ids
            vanishing[(n, cell.rep)] = (vanishes, in_family)
            assert vanishes == in_family, (
                "annihilator route disagrees with the family membership")
    unloc = ha.quasi_iso_in_range(inc, 0, max(X.dim(), 0))
    return GammaLocalizationReport(
        mode=mode, verdict=all_ok, degreewise=degreewise,
        unlocalized_quasi_iso=unloc, vanishing_checks=vanishing,
        details={
            "lhs": BA.complex.homology(), "rhs": BB.complex.homology(),
        },
    )
